#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jacaranda.hpp"
#include "tree.hpp"

namespace sst {

// One parent of a tree A: root color, the side on which A hangs, and the
// other child.
struct PreimageDescriptor {
    Color root = Color::zero;
    Side side = Side::a;
    XDescriptor sibling;
    std::string tag;

    // The parent with `a` in place, to the depth both children allow.
    Patch parent(const Patch& a) const;
    std::string str() const;
};

enum class Completeness { exact, lower_bound };

struct PreimageSet {
    std::vector<PreimageDescriptor> members;
    Completeness completeness = Completeness::exact;
    std::string str() const;
};

// Answers the type questions the case analysis asks about a tree A. Each
// answer lists every value still possible; kInfiniteType stands for 2^inf.
class TypeOracle {
public:
    virtual ~TypeOracle() = default;
    virtual std::vector<int> own_type() const = 0;
    // Type of the subtree of A at a relative site.
    virtual std::vector<int> type_of(const Address& rel) const = 0;
    // Type of the parent of A, when A hangs on the given side.
    virtual std::vector<int> parent_type(Side side) const = 0;
    // Type of a child of the u-fold unsubstituted A.
    virtual std::vector<int> type_after_unsub(int u, Side side) const = 0;
};

// Types read off the level of A inside J: a tree at level 2^u(2n+1) has type 2^u.
class LevelTypes : public TypeOracle {
public:
    explicit LevelTypes(int level);
    std::vector<int> own_type() const override;
    std::vector<int> type_of(const Address& rel) const override;
    std::vector<int> parent_type(Side side) const override;
    std::vector<int> type_after_unsub(int u, Side side) const override;

private:
    int level_;
};

// Types detected from the patch alone.
class DetectedTypes : public TypeOracle {
public:
    explicit DetectedTypes(Patch a);
    std::vector<int> own_type() const override;
    std::vector<int> type_of(const Address& rel) const override;
    std::vector<int> parent_type(Side side) const override;
    std::vector<int> type_after_unsub(int u, Side side) const override;

private:
    Patch a_;
};

struct Hypothesis {
    std::string tag;
    std::vector<PreimageDescriptor> members;
};

// Every case of the analysis still consistent with the oracle's answers,
// with identical member sets merged.
std::vector<Hypothesis> preimage_hypotheses(const Patch& a, const TypeOracle& types);

PreimageSet preimages_classified(const XDescriptor& a);

PreimageSet preimages_bruteforce(const Patch& a, const Patch& jprefix);

struct ParentCount {
    Patch patch;
    std::size_t parents = 0;
};

// Number of distinct one-step parents of every depth-d patch seen in the
// prefix, ordered by patch.
std::vector<ParentCount> parent_census(const Patch& jprefix, int d);
// p_n of every depth-d patch occurring at level >= n in the prefix, ordered
// by patch.
std::vector<ParentCount> pn_census(const Patch& jprefix, int d, int n);

struct PnResult {
    std::uint64_t value = 0;
    std::uint64_t bound = 1;  // 3^n
    bool within_bound = true;
};

// Distinct depth-(d+n) patches B in the prefix with T_w(B) = A for some |w| = n.
PnResult p_n(const Patch& a, int n, const Patch& jprefix);

struct CrosscheckReport {
    std::size_t patches = 0;
    std::size_t sites = 0;
    std::size_t undetermined_sites = 0;
    std::vector<std::string> mismatches;
    std::vector<std::string> limit_only;
    bool ok() const { return mismatches.empty(); }
    std::string str() const;
};

// Checks every parent of A seen in the prefix against the classified parents
// of that occurrence; classified parents never seen are listed as limit-only.
CrosscheckReport crosscheck(const Patch& a, const Patch& jprefix);
CrosscheckReport crosscheck_sweep(const Patch& jprefix, int max_d, int threads = 1);

}  // namespace sst
