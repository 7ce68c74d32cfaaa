#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace sst {

// Per-level colors of a tree whose levels are constant. Throws
// NonConstantLevel at the first mixed level.
LineWord tm_project(const Patch& p);

// Color at ω of the ABBA fixed point with the given root: root plus the
// number of b's, mod 2.
Color abba_digit(Color root, const Address& w);

// 0A_{b a^n} = 1 for 1 <= n <= N, by the formula and on a generated prefix.
bool abba_nonminimal_witness(int n);

// Line 2k+1 is T1 applied digitwise to line 2k (0 -> 01, 1 -> 10); line 2k
// is T2 applied to the digit pairs of line 2k-1 (01 -> 0001, 10 -> 1110).
Patch nomeasure_tree(Color root, int depth);

struct OrbitGraph {
    std::vector<std::string> names;
    std::vector<Patch> states;  // empty for parsed graphs
    std::vector<int> a_edge;
    std::vector<int> b_edge;
    int depth_used = 0;
    std::vector<std::string> warnings;

    std::size_t size() const { return names.size(); }
    // Every state has an incoming edge.
    bool periodic() const;
    std::optional<int> find(std::string_view name) const;
    void rename(const std::vector<std::string>& names);
};

// Throws MalformedGraph on a missing, repeated or dangling edge.
void validate(const OrbitGraph& g);

// `state <name>` lines, then `edge <src> <a|b> <dst>` lines.
std::string format_orbit_graph(const OrbitGraph& g);
OrbitGraph parse_orbit_graph(std::string_view text);

struct OrbitOptions {
    int max_states = 256;
    // Extra identification depths tried after d.
    int sweep = 2;
};

// Closes {seed} under the two shifts, with depth-d truncation as state
// identity. States are named s0, s1, ... in discovery order.
OrbitGraph build_orbit_graph(const Patch& seed, int d, const OrbitOptions& opts = {});

// The orbit of 0A with states named 0A, 1A, B, C, D, E.
OrbitGraph nomeasure_orbit_graph(int d = 6);

}  // namespace sst
