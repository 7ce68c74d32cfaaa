#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "substitution.hpp"
#include "tree.hpp"

namespace sst {

// Stands for the 2^infinity type of J and J'.
constexpr int kInfiniteType = std::numeric_limits<int>::max();

std::string type_name(int u);

Patch jacaranda_prefix(int depth);
Patch jprime_prefix(int depth);

enum class Parity { odd, even, undetermined };

struct TypeReport {
    Parity parity = Parity::undetermined;
    std::vector<int> candidates;  // finite candidates, sorted
    std::optional<int> tail;      // every u >= tail is consistent as well
    bool inf_consistent = false;  // agrees with J or J' below the root
    std::optional<int> determined;
    int depth = 0;

    bool allows(int u) const;
    // Finite candidates, then a few tail representatives, then infinity when
    // the report leaves it open.
    std::vector<int> representatives(int extra) const;
    std::string str() const;
};

TypeReport detect_type(const Patch& p);
// Type of the unseen parent of p, where p is its child on the given side.
// Line L of the parent is read from line L-1 of p.
TypeReport detect_parent_type(const Patch& p, Side side);

// True when every even line from 2 on reads (10)^*.
bool odd_lines_test(const Patch& p);
// True when every odd line reads (10)^*.
bool even_lines_test(const Patch& p);

Patch unsub_pow(const Patch& p, int u);
// u-fold unsub_keep: keeps floor(d/2) levels per step and accepts depth 0.
Patch unsub_keep_pow(const Patch& p, int u);

// Sibling with root 1 of a root-0 tree of type 2^u, to the depth it is
// determined.
Patch brother_patch(const Patch& b, int u);

struct XDescriptor {
    enum class Kind { jac, jac_prime, concrete };
    Kind kind = Kind::concrete;
    std::optional<Patch> patch;
    std::optional<Address> provenance;

    static XDescriptor jac() { return {Kind::jac, std::nullopt, std::nullopt}; }
    static XDescriptor jac_prime() { return {Kind::jac_prime, std::nullopt, std::nullopt}; }
    static XDescriptor concrete(Patch p, std::optional<Address> where = std::nullopt) {
        return {Kind::concrete, std::move(p), std::move(where)};
    }

    Color root() const;
    // Prefix of the described tree; J and J' are generated to the given depth.
    Patch prefix(int depth) const;
    std::string ref() const;
};

XDescriptor brother(const XDescriptor& b);

enum class EvenCase { doubled_deep, doubled_two_root1, mixed_root0 };
std::string even_case_name(EvenCase c);

struct EvenClassification {
    EvenCase which;
    int v;
};

struct Branch {
    Side side;
    Patch patch;
};

EvenClassification classify_even(const XDescriptor& a, const std::optional<Branch>& branch = std::nullopt);

struct ZeroAtEvenReport {
    bool holds = false;
    std::optional<int> minimal;
};

ZeroAtEvenReport zero_at_even_within(const Patch& p, int n);

struct RecurrenceReport {
    int n = 0;
    int scanned_sites = 0;
};

RecurrenceReport recurrence_probe(const Patch& p, int m);

}  // namespace sst
