#include "examples.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"
#include "substitution.hpp"

namespace sst {

LineWord tm_project(const Patch& p) {
    std::vector<Color> out;
    for (int l = 0; l <= p.depth(); ++l) {
        LineWord line = p.line(l);
        Color c = line[0];
        for (std::size_t i = 1; i < line.size(); ++i) {
            if (line[i] != c) {
                fail(ErrorCode::non_constant_level,
                     "level " + std::to_string(l) + " is not constant at index " + std::to_string(i));
            }
        }
        out.push_back(c);
    }
    return LineWord(std::move(out));
}

Color abba_digit(Color root, const Address& w) {
    int bs = 0;
    for (std::size_t i = 0; i < w.size(); ++i) bs += w[i] == 'b';
    return color_from_int((to_int(root) + bs) % 2);
}

bool abba_nonminimal_witness(int n) {
    if (n < 1) fail(ErrorCode::non_positive, "N must be at least 1");
    Patch p = fixed_point_prefix(builtin_abba(), Color::zero, n + 1);
    for (int k = 1; k <= n; ++k) {
        Address w = Address("b") + Address::repeat('a', k);
        if (abba_digit(Color::zero, w) != Color::one) return false;
        if (p.get(w) != Color::one) return false;
    }
    return true;
}

Patch nomeasure_tree(Color root, int depth) {
    if (depth < 0) fail(ErrorCode::invalid_argument, "depth must be non-negative");
    std::vector<LineWord> lines{LineWord({root})};
    for (int l = 1; l <= depth; ++l) {
        const auto& prev = lines.back().bits();
        std::vector<Color> next;
        next.reserve(prev.size() * 2);
        if (l % 2 == 1) {
            for (Color c : prev) {
                next.push_back(c);
                next.push_back(flip(c));
            }
        } else {
            for (std::size_t i = 0; i + 1 < prev.size(); i += 2) {
                // Odd lines are T1 images, so pairs are always 01 or 10.
                Color first = prev[i];
                next.insert(next.end(), {first, first, first, flip(first)});
            }
        }
        lines.emplace_back(std::move(next));
    }
    return Patch::from_levels(lines);
}

bool OrbitGraph::periodic() const {
    std::vector<bool> hit(size(), false);
    for (std::size_t i = 0; i < size(); ++i) {
        hit[a_edge[i]] = true;
        hit[b_edge[i]] = true;
    }
    for (bool h : hit) {
        if (!h) return false;
    }
    return true;
}

std::optional<int> OrbitGraph::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

void OrbitGraph::rename(const std::vector<std::string>& n) {
    if (n.size() != names.size()) fail(ErrorCode::invalid_argument, "rename needs one name per state");
    names = n;
}

void validate(const OrbitGraph& g) {
    std::set<std::string> seen;
    for (const auto& n : g.names) {
        if (n.empty()) fail(ErrorCode::malformed_graph, "empty state name");
        if (!seen.insert(n).second) fail(ErrorCode::malformed_graph, "duplicate state " + n);
    }
    if (g.a_edge.size() != g.size() || g.b_edge.size() != g.size()) {
        fail(ErrorCode::malformed_graph, "edge maps do not cover every state");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int t : {g.a_edge[i], g.b_edge[i]}) {
            if (t < 0 || t >= static_cast<int>(g.size())) {
                fail(ErrorCode::malformed_graph, "state " + g.names[i] + " is missing an edge");
            }
        }
    }
}

std::string format_orbit_graph(const OrbitGraph& g) {
    validate(g);
    std::ostringstream out;
    for (const auto& n : g.names) out << "state " << n << '\n';
    for (std::size_t i = 0; i < g.size(); ++i) {
        out << "edge " << g.names[i] << " a " << g.names[g.a_edge[i]] << '\n';
        out << "edge " << g.names[i] << " b " << g.names[g.b_edge[i]] << '\n';
    }
    return out.str();
}

OrbitGraph parse_orbit_graph(std::string_view text) {
    OrbitGraph g;
    struct PendingEdge {
        std::string src, letter, dst;
        int line;
    };
    std::vector<PendingEdge> edges;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::string kw;
        if (!(ls >> kw)) continue;
        std::vector<std::string> rest;
        for (std::string tok; ls >> tok;) rest.push_back(tok);
        if (kw == "state" && rest.size() == 1) {
            if (g.find(rest[0])) fail(ErrorCode::malformed_graph, "line " + std::to_string(lineno) + ": duplicate state");
            g.names.push_back(rest[0]);
        } else if (kw == "edge" && rest.size() == 3) {
            edges.push_back({rest[0], rest[1], rest[2], lineno});
        } else {
            fail(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": expected 'state <name>' or 'edge <src> <a|b> <dst>'");
        }
    }
    g.a_edge.assign(g.size(), -1);
    g.b_edge.assign(g.size(), -1);
    for (const auto& e : edges) {
        std::string where = "line " + std::to_string(e.line) + ": ";
        auto s = g.find(e.src);
        auto t = g.find(e.dst);
        if (!s || !t) fail(ErrorCode::malformed_graph, where + "edge refers to an undeclared state");
        if (e.letter != "a" && e.letter != "b") fail(ErrorCode::parse_error, where + "edge letter must be a or b");
        int& slot = e.letter == "a" ? g.a_edge[*s] : g.b_edge[*s];
        if (slot != -1) fail(ErrorCode::malformed_graph, where + "second " + e.letter + "-edge from " + e.src);
        slot = *t;
    }
    validate(g);
    return g;
}

namespace {

struct Closure {
    std::optional<OrbitGraph> graph;
    std::string failure;
};

// States are the depth-d subtrees seen at sites with d+1 levels below them.
// Every occurrence of a state must have the same pair of child states;
// otherwise depth d is too shallow to identify trees of this seed.
Closure close_at(const Patch& seed, int d, int max_states) {
    Closure out;
    if (seed.depth() < d + 1) {
        out.failure = "seed of depth " + std::to_string(seed.depth()) + " cannot close at depth " + std::to_string(d);
        return out;
    }
    SubtreeIndex idx(seed, d);
    int inner = seed.depth() - d - 1;
    std::map<NodeId, std::pair<NodeId, NodeId>> edges;
    std::map<NodeId, std::size_t> where;
    for (int l = 0; l <= inner; ++l) {
        std::size_t first = (std::size_t{1} << l) - 1;
        for (std::size_t pos = first; pos < 2 * first + 1; ++pos) {
            std::pair<NodeId, NodeId> kids{idx.id(2 * pos + 1, d), idx.id(2 * pos + 2, d)};
            NodeId s = idx.id(pos, d);
            auto [it, fresh] = edges.emplace(s, kids);
            if (fresh) {
                where.emplace(s, pos);
            } else if (it->second != kids) {
                out.failure = "depth-" + std::to_string(d) + " identification is not stable: sites " +
                              std::to_string(where[s]) + " and " + std::to_string(pos) +
                              " (heap order) agree to depth " + std::to_string(d) + " but not below";
                return out;
            }
        }
    }
    OrbitGraph g;
    g.depth_used = d;
    std::map<NodeId, int> number;
    std::vector<NodeId> order;
    auto add = [&](NodeId s) {
        auto [it, fresh] = number.emplace(s, static_cast<int>(order.size()));
        if (fresh) order.push_back(s);
        return it->second;
    };
    add(idx.id(0, d));
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order.size() > static_cast<std::size_t>(max_states)) {
            out.failure = "more than " + std::to_string(max_states) + " states at depth " + std::to_string(d);
            return out;
        }
        auto e = edges.find(order[i]);
        if (e == edges.end()) {
            out.failure = "a state first seen at the bottom of the seed has no successors at depth " + std::to_string(d);
            return out;
        }
        int a = add(e->second.first);
        int b = add(e->second.second);
        g.a_edge.push_back(a);
        g.b_edge.push_back(b);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t pos = where.at(order[i]);
        int level = heap_level(pos);
        g.states.push_back(seed.subtree_at(level, pos - ((std::size_t{1} << level) - 1)).truncate(d));
        g.names.push_back("s" + std::to_string(i));
    }
    out.graph = std::move(g);
    return out;
}

}  // namespace

OrbitGraph build_orbit_graph(const Patch& seed, int d, const OrbitOptions& opts) {
    if (d < 2) fail(ErrorCode::invalid_argument, "identification depth must be at least 2");
    if (seed.depth() < d) fail(ErrorCode::shallow, "seed is shallower than the identification depth");
    Closure base = close_at(seed, d, opts.max_states);
    if (!base.graph) fail(ErrorCode::not_closed, base.failure);
    OrbitGraph best = std::move(*base.graph);
    std::vector<std::string> warnings;
    for (int k = 1; k <= opts.sweep; ++k) {
        Closure deeper = close_at(seed, d + k, opts.max_states);
        if (!deeper.graph) {
            warnings.push_back("stability sweep stopped: " + deeper.failure);
            break;
        }
        if (deeper.graph->size() != best.size()) {
            warnings.push_back(std::to_string(best.size()) + " states at depth " + std::to_string(best.depth_used) +
                               " but " + std::to_string(deeper.graph->size()) + " at depth " +
                               std::to_string(d + k) + "; using the deeper count");
        }
        best = std::move(*deeper.graph);
    }
    best.warnings = std::move(warnings);
    return best;
}

OrbitGraph nomeasure_orbit_graph(int d) {
    OrbitGraph g = build_orbit_graph(nomeasure_tree(Color::zero, d + 8), d);
    if (g.size() != 6) {
        g.warnings.push_back("expected 6 states, found " + std::to_string(g.size()));
        return g;
    }
    int zero = 0;
    auto one = std::find(g.states.begin(), g.states.end(), nomeasure_tree(Color::one, g.depth_used));
    if (one == g.states.end()) {
        g.warnings.push_back("1A not found in the orbit");
        return g;
    }
    int onei = static_cast<int>(one - g.states.begin());
    std::vector<std::string> names(6);
    names[zero] = "0A";
    names[onei] = "1A";
    names[g.a_edge[zero]] = "B";
    names[g.b_edge[zero]] = "C";
    names[g.a_edge[onei]] = "D";
    names[g.b_edge[onei]] = "E";
    std::set<std::string> distinct(names.begin(), names.end());
    if (distinct.size() != 6 || distinct.count("")) {
        g.warnings.push_back("orbit does not have the expected shape");
        return g;
    }
    g.rename(names);
    return g;
}

}  // namespace sst
