#include "preimages.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "error.hpp"
#include "substitution.hpp"
#include "words.hpp"

namespace sst {

namespace {

// Stand-in answer when the patch is too shallow to say anything.
std::vector<int> any_even_type() { return {1, 2, 3, 4, 5, 6, kInfiniteType}; }

bool at_least(int t, int k) { return t != 0 && (t == kInfiniteType || t >= k); }

const Substreetution& bbab() {
    static const Substreetution s = builtin_bbab();
    return s;
}

Patch fit(const Patch& p, int depth) { return p.depth() > depth ? p.truncate(depth) : p; }

std::size_t heap_pos(int level, std::uint64_t index) { return (std::size_t{1} << level) - 1 + index; }

PreimageDescriptor member(Color root, Side side, const Patch& sibling) {
    return {root, side, XDescriptor::concrete(sibling), ""};
}

class Collector {
public:
    explicit Collector(const Patch& a) : a_(a) {}

    void add(const std::string& tag, std::vector<PreimageDescriptor> members) {
        std::vector<PreimageDescriptor> kept;
        std::vector<std::string> key;
        for (auto& m : members) {
            m.tag = tag;
            std::string k = m.parent(a_).compact();
            if (std::find(key.begin(), key.end(), k) != key.end()) continue;
            key.push_back(k);
            kept.push_back(std::move(m));
        }
        std::sort(key.begin(), key.end());
        if (seen_.insert(key).second) out_.push_back({tag, std::move(kept)});
    }

    std::vector<Hypothesis> take() { return std::move(out_); }

private:
    const Patch& a_;
    std::set<std::vector<std::string>> seen_;
    std::vector<Hypothesis> out_;
};

// Odd tree 1(D,D): A is always the a-child; the siblings are B = 0(F,D) with F
// the brother of D, and B' = 0(D,D).
void odd_root1(const Patch& a, const TypeOracle& types, Collector& out) {
    const int d = a.depth();
    if (d >= 1 && (!(a.child(Side::a) == a.child(Side::b)) || a.at(1, 0) != Color::zero)) return;
    for (int kd : types.type_of(Address("a"))) {
        if (kd == 0) continue;
        Patch b = Patch::leaf(Color::zero);
        Patch b_twin = b;
        if (d >= 1) {
            Patch dd = a.child(Side::a);
            Patch f = Patch::leaf(Color::one);
            try {
                f = brother_patch(dd, kd);
            } catch (const Error&) {
                continue;
            }
            b = Patch::join(Color::zero, f, dd);
            b_twin = Patch::join(Color::zero, dd, dd);
        }
        for (int v : types.parent_type(Side::a)) {
            if (v == 0) continue;
            if (v == kInfiniteType) {
                out.add("odd1-vinf", {member(Color::zero, Side::a, b), member(Color::one, Side::a, b)});
                continue;
            }
            if (v == 1) {
                if (at_least(kd, 3)) {
                    out.add("odd1-v1-deep", {member(Color::zero, Side::a, b_twin), member(Color::one, Side::a, b_twin),
                                             member(Color::zero, Side::a, b)});
                } else if (kd == 2) {
                    out.add("odd1-v1-2", {member(Color::one, Side::a, b_twin), member(Color::zero, Side::a, b)});
                }
                continue;
            }
            int line = (1 << v) - 1;
            bool visible = line <= d;
            bool ones = visible && a.line(line).has_one();
            if (!visible || ones) out.add("odd1-vdeep-mixed", {member(Color::zero, Side::a, b)});
            if (visible && ones) continue;
            for (int t : types.type_of(Address::repeat('a', line))) {
                if (at_least(t, v + 2)) {
                    out.add("odd1-vdeep-zero-deep", {member(Color::zero, Side::a, b), member(Color::one, Side::a, b)});
                } else if (t == v + 1) {
                    out.add("odd1-vdeep-zero-2", {member(Color::one, Side::a, b)});
                }
            }
        }
    }
}

// Odd tree with root 0: always the b-child, next to its unique brother.
void odd_root0(const Patch& b, const TypeOracle& types, Collector& out) {
    const int d = b.depth();
    if (d >= 1 && b.at(1, 1) != Color::zero) return;
    Patch brother = brother_patch(b, 0);
    std::vector<bool> starts_with_one;
    if (d >= 1) {
        starts_with_one.push_back(b.at(1, 0) == Color::one);
    } else {
        starts_with_one = {false, true};
    }
    auto both = [&] { return std::vector{member(Color::zero, Side::b, brother), member(Color::one, Side::b, brother)}; };
    auto zero = [&] { return std::vector{member(Color::zero, Side::b, brother)}; };
    auto one = [&] { return std::vector{member(Color::one, Side::b, brother)}; };
    for (int k : types.type_of(Address("b"))) {
        if (k == 0) continue;
        for (bool ten : starts_with_one) {
            if (!ten) {
                if (at_least(k, 3)) out.add("odd0-00-deep", both());
                if (k == 2) out.add("odd0-00-2", one());
                continue;
            }
            if (at_least(k, 2)) {
                out.add("odd0-10-k2", zero());
                continue;
            }
            for (int v : types.parent_type(Side::b)) {
                if (v == kInfiniteType) {
                    out.add("odd0-10-vinf", both());
                    continue;
                }
                if (v < 2) continue;
                int line = (1 << v) - 1;
                bool visible = line <= d;
                bool ones = visible && b.line(line).has_one();
                if (!visible || ones) out.add("odd0-10-v2-mixed", zero());
                if (visible && ones) continue;
                for (int t : types.type_of(Address::repeat('a', line))) {
                    if (at_least(t, v + 2)) {
                        out.add("odd0-10-v2-zero-deep", both());
                    } else if (t == v + 1) {
                        out.add("odd0-10-v2-zero-2", one());
                    }
                }
            }
        }
    }
}

void even_root0(const Patch& a, int u, Collector& out) {
    if (u == kInfiniteType) {
        if (!(a == jacaranda_prefix(a.depth()))) return;
        out.add("jac", {member(Color::zero, Side::a, a), member(Color::one, Side::a, a),
                        member(Color::zero, Side::b, a.with_root(Color::one))});
        return;
    }
    Patch star = Patch::leaf(Color::one);
    try {
        star = brother_patch(a, u);
    } catch (const Error&) {
        return;
    }
    if (u >= 2) {
        out.add("even0-deep", {member(Color::zero, Side::a, a), member(Color::one, Side::a, a),
                               member(Color::zero, Side::b, star)});
    } else {
        out.add("even0-2", {member(Color::one, Side::a, a), member(Color::zero, Side::b, star)});
    }
}

// A = H^u(1(C,C)); its parents are 0(A,B) with B = H^u(0(D,C)), D the
// brother of C, and for deeper C also 0(A,B') with B' = A with root 0.
void even_root1(const Patch& a, int u, const TypeOracle& types, Collector& out) {
    const int d = a.depth();
    if (u == kInfiniteType) {
        if (!(a == jprime_prefix(d))) return;
        out.add("jprime", {member(Color::zero, Side::a, a.with_root(Color::zero))});
        return;
    }
    Patch q = Patch::leaf(Color::one);
    try {
        q = unsub_keep_pow(a, u);
    } catch (const Error&) {
        return;
    }
    if (q.depth() >= 1 && (!(q.child(Side::a) == q.child(Side::b)) || q.at(1, 0) != Color::zero)) return;
    Patch b_flip = a.with_root(Color::zero);
    for (int v : types.type_after_unsub(u, Side::a)) {
        if (v == 0) continue;
        Patch b = Patch::leaf(Color::zero);
        if (q.depth() >= 1) {
            Patch c = q.child(Side::a);
            Patch dd = Patch::leaf(Color::one);
            try {
                dd = brother_patch(c, v);
            } catch (const Error&) {
                continue;
            }
            b = fit(apply_pow(bbab(), Patch::join(Color::zero, dd, c), u, d), d);
        } else {
            b = fit(apply_pow(bbab(), Patch::leaf(Color::zero), u, d), d);
        }
        if (v == 1) {
            out.add("even1-v1", {member(Color::zero, Side::a, b)});
        } else {
            out.add("even1-vdeep", {member(Color::zero, Side::a, b), member(Color::zero, Side::a, b_flip)});
        }
    }
}

std::vector<int> reps_without_zero(const TypeReport& r) {
    std::vector<int> out;
    for (int u : r.representatives(2)) {
        if (u != 0) out.push_back(u);
    }
    return out;
}

// The classified parents of one occurrence, as depth-limited patches.
struct SiteClassification {
    std::vector<Patch> parents;
    bool undetermined = false;
};

SiteClassification classify_site(const Patch& deep, int level) {
    SiteClassification out;
    std::vector<Hypothesis> hyps;
    try {
        hyps = preimage_hypotheses(deep, LevelTypes(level));
    } catch (const Error&) {
        return out;
    }
    out.undetermined = hyps.size() > 1;
    for (const auto& h : hyps) {
        for (const auto& m : h.members) out.parents.push_back(m.parent(deep));
    }
    return out;
}

}  // namespace

Patch PreimageDescriptor::parent(const Patch& a) const {
    Patch sib = sibling.kind == XDescriptor::Kind::concrete ? *sibling.patch : sibling.prefix(a.depth());
    return side == Side::a ? Patch::join(root, a, sib) : Patch::join(root, sib, a);
}

std::string PreimageDescriptor::str() const {
    return "case=" + tag + " root=" + std::string(1, to_char(root)) + " side=" + std::string(1, to_char(side)) +
           " sibling=" + sibling.ref();
}

std::string PreimageSet::str() const {
    std::string out;
    for (const auto& m : members) out += m.str() + "\n";
    out += std::string("completeness=") + (completeness == Completeness::exact ? "exact" : "lower-bound") + "\n";
    return out;
}

LevelTypes::LevelTypes(int level) : level_(level) {
    if (level < 0) fail(ErrorCode::invalid_argument, "negative level");
}

std::vector<int> LevelTypes::own_type() const { return {level_ == 0 ? kInfiniteType : v2(level_)}; }

std::vector<int> LevelTypes::type_of(const Address& rel) const {
    int l = level_ + static_cast<int>(rel.size());
    return {l == 0 ? kInfiniteType : v2(l)};
}

std::vector<int> LevelTypes::parent_type(Side) const {
    if (level_ == 0) fail(ErrorCode::invalid_argument, "the root of J has no parent in J");
    return {level_ == 1 ? kInfiniteType : v2(level_ - 1)};
}

std::vector<int> LevelTypes::type_after_unsub(int u, Side) const {
    if (level_ == 0) return {kInfiniteType};
    return {v2((level_ >> u) + 1)};
}

DetectedTypes::DetectedTypes(Patch a) : a_(std::move(a)) {}

std::vector<int> DetectedTypes::own_type() const {
    if (a_.depth() < 2) {
        std::vector<int> all = any_even_type();
        all.insert(all.begin(), 0);
        return all;
    }
    return detect_type(a_).representatives(2);
}

std::vector<int> DetectedTypes::type_of(const Address& rel) const {
    if (static_cast<int>(rel.size()) + 2 > a_.depth()) return any_even_type();
    try {
        return reps_without_zero(detect_type(a_.subtree(rel)));
    } catch (const Error&) {
        return {};
    }
}

std::vector<int> DetectedTypes::parent_type(Side side) const {
    try {
        return reps_without_zero(detect_parent_type(a_, side));
    } catch (const Error&) {
        return {};
    }
}

std::vector<int> DetectedTypes::type_after_unsub(int u, Side side) const {
    try {
        Patch q = unsub_keep_pow(a_, u);
        if (q.depth() < 3) return any_even_type();
        return reps_without_zero(detect_type(q.child(side)));
    } catch (const Error&) {
        return {};
    }
}

std::vector<Hypothesis> preimage_hypotheses(const Patch& a, const TypeOracle& types) {
    Collector out(a);
    std::vector<int> us = types.own_type();
    // 2^inf first, so that a J-like tree keeps the jac or jprime tag when its
    // parents coincide with those of a large finite type.
    std::stable_partition(us.begin(), us.end(), [](int u) { return u == kInfiniteType; });
    for (int u : us) {
        if (u == 0) {
            if (a.root() == Color::one) {
                odd_root1(a, types, out);
            } else {
                odd_root0(a, types, out);
            }
        } else if (a.root() == Color::zero) {
            even_root0(a, u, out);
        } else {
            even_root1(a, u, types, out);
        }
    }
    return out.take();
}

PreimageSet preimages_classified(const XDescriptor& a) {
    PreimageSet out;
    if (a.kind == XDescriptor::Kind::jac) {
        out.members = {{Color::zero, Side::a, XDescriptor::jac(), "jac"},
                       {Color::one, Side::a, XDescriptor::jac(), "jac"},
                       {Color::zero, Side::b, XDescriptor::jac_prime(), "jac"}};
        return out;
    }
    if (a.kind == XDescriptor::Kind::jac_prime) {
        out.members = {{Color::zero, Side::a, XDescriptor::jac(), "jprime"}};
        return out;
    }
    std::vector<Hypothesis> hyps;
    if (a.provenance) {
        hyps = preimage_hypotheses(*a.patch, LevelTypes(static_cast<int>(a.provenance->size())));
    } else {
        hyps = preimage_hypotheses(*a.patch, DetectedTypes(*a.patch));
    }
    if (hyps.empty()) fail(ErrorCode::inconsistent, "no case of the analysis fits the tree");
    if (hyps.size() > 1) {
        std::string msg = "cases still consistent:";
        for (const auto& h : hyps) msg += " " + h.tag;
        fail(ErrorCode::undetermined, msg);
    }
    out.members = std::move(hyps[0].members);
    return out;
}

PreimageSet preimages_bruteforce(const Patch& a, const Patch& jprefix) {
    const int d = a.depth();
    const int big = jprefix.depth();
    if (d + 1 > big) fail(ErrorCode::shallow, "prefix too shallow for parents of this patch");
    SubtreeIndex index(jprefix, d + 1);
    NodeId target = a.id();
    std::map<Patch, Side> parents;
    for (int level = 0; level + d + 1 <= big; ++level) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
            std::size_t pos = heap_pos(level, i);
            bool in_a = index.id(2 * pos + 1, d) == target;
            bool in_b = index.id(2 * pos + 2, d) == target;
            if (!in_a && !in_b) continue;
            parents.emplace(jprefix.subtree_at(level, i).truncate(d + 1), in_a ? Side::a : Side::b);
        }
    }
    PreimageSet out;
    out.completeness = Completeness::lower_bound;
    for (const auto& [p, side] : parents) {
        Side other = side == Side::a ? Side::b : Side::a;
        out.members.push_back({p.root(), side, XDescriptor::concrete(p.child(other)), "seen"});
    }
    return out;
}

std::vector<ParentCount> pn_census(const Patch& jprefix, int d, int n) {
    const int big = jprefix.depth();
    if (d < 0 || n < 0) fail(ErrorCode::invalid_argument, "negative depth");
    if (d + n > big) fail(ErrorCode::shallow, "prefix too shallow for the census");
    SubtreeIndex index(jprefix, d + n);
    std::map<NodeId, std::set<NodeId>> ancestors;
    std::map<NodeId, std::pair<int, std::uint64_t>> where;
    for (int level = 0; level + d + n <= big; ++level) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
            NodeId bid = index.id(heap_pos(level, i), d + n);
            for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
                std::uint64_t j = (i << n) + k;
                NodeId aid = index.id(heap_pos(level + n, j), d);
                ancestors[aid].insert(bid);
                where.emplace(aid, std::pair{level + n, j});
            }
        }
    }
    std::vector<ParentCount> out;
    for (const auto& [aid, bs] : ancestors) {
        auto [level, idx] = where.at(aid);
        out.push_back({jprefix.subtree_at(level, idx).truncate(d), bs.size()});
    }
    std::sort(out.begin(), out.end(), [](const ParentCount& x, const ParentCount& y) { return x.patch < y.patch; });
    return out;
}

std::vector<ParentCount> parent_census(const Patch& jprefix, int d) {
    if (d < 0) fail(ErrorCode::invalid_argument, "negative depth");
    return pn_census(jprefix, d, 1);
}

PnResult p_n(const Patch& a, int n, const Patch& jprefix) {
    const int d = a.depth();
    const int big = jprefix.depth();
    if (n < 0) fail(ErrorCode::invalid_argument, "n must be nonnegative");
    if (d + n > big) fail(ErrorCode::shallow, "prefix too shallow for p_n");
    SubtreeIndex index(jprefix, d + n);
    NodeId target = a.id();
    std::set<NodeId> found;
    for (int level = 0; level + d + n <= big; ++level) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
            std::size_t pos = heap_pos(level, i);
            NodeId pid = index.id(pos, d + n);
            if (found.count(pid)) continue;
            for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
                if (index.id(heap_pos(level + n, (i << n) + k), d) == target) {
                    found.insert(pid);
                    break;
                }
            }
        }
    }
    PnResult r;
    r.value = found.size();
    for (int k = 0; k < n; ++k) r.bound *= 3;
    r.within_bound = r.value <= r.bound;
    return r;
}

std::string CrosscheckReport::str() const {
    std::string out = "patches=" + std::to_string(patches) + " sites=" + std::to_string(sites) +
                      " undetermined_sites=" + std::to_string(undetermined_sites) +
                      " mismatches=" + std::to_string(mismatches.size()) +
                      " limit_only=" + std::to_string(limit_only.size()) + "\n";
    for (const auto& m : mismatches) out += "mismatch " + m + "\n";
    for (const auto& m : limit_only) out += "limit-only " + m + "\n";
    return out;
}

namespace {

struct Sweep {
    const Patch& jprefix;
    std::vector<SiteClassification> sites;  // by heap position

    Sweep(const Patch& j, int threads) : jprefix(j), sites(j.size()) {
        const std::size_t count = j.size();
        threads = std::max(1, threads);
        std::vector<std::future<void>> jobs;
        for (int t = 0; t < threads; ++t) {
            jobs.push_back(std::async(std::launch::async, [this, t, threads, count] {
                for (std::size_t pos = static_cast<std::size_t>(t); pos < count;
                     pos += static_cast<std::size_t>(threads)) {
                    int level = heap_level(pos);
                    std::uint64_t idx = pos + 1 - (std::size_t{1} << level);
                    sites[pos] = classify_site(jprefix.subtree_at(level, idx), level);
                }
            }));
        }
        for (auto& f : jobs) f.get();
    }

    // Checks all occurrences of the depth-d patches with the given id.
    void check(int d, const SubtreeIndex& index, NodeId target, const Patch& a, CrosscheckReport& report) const {
        const int big = jprefix.depth();
        std::set<Patch> seen;
        std::set<Patch> classified;
        // The root has no parent in the prefix; its classified parents can
        // only be confirmed by deeper occurrences.
        if (index.id(0, d) == target) {
            for (const auto& p : sites[0].parents) classified.insert(p.truncate(d + 1));
        }
        for (int level = 1; level + d <= big; ++level) {
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
                std::size_t pos = heap_pos(level, i);
                if (index.id(pos, d) != target) continue;
                ++report.sites;
                const SiteClassification& sc = sites[pos];
                if (sc.undetermined) ++report.undetermined_sites;
                Patch actual = jprefix.subtree_at(level - 1, i / 2);
                bool matched = false;
                for (const auto& p : sc.parents) {
                    int common = std::min(p.depth(), actual.depth());
                    if (p.truncate(common) == actual.truncate(common)) matched = true;
                    if (p.depth() >= d + 1) classified.insert(p.truncate(d + 1));
                }
                if (!matched) {
                    report.mismatches.push_back("A=" + a.compact() + " at " + Address::from_index(level, i).str() +
                                                " parent " + actual.truncate(d + 1).compact());
                }
                seen.insert(actual.truncate(d + 1));
            }
        }
        for (const auto& p : classified) {
            if (!seen.count(p)) report.limit_only.push_back("A=" + a.compact() + " parent " + p.compact());
        }
    }
};

}  // namespace

CrosscheckReport crosscheck(const Patch& a, const Patch& jprefix) {
    if (a.depth() + 1 > jprefix.depth()) fail(ErrorCode::shallow, "prefix too shallow for parents of this patch");
    Sweep sweep(jprefix, 1);
    SubtreeIndex index(jprefix, a.depth());
    CrosscheckReport report;
    report.patches = 1;
    sweep.check(a.depth(), index, a.id(), a, report);
    return report;
}

CrosscheckReport crosscheck_sweep(const Patch& jprefix, int max_d, int threads) {
    if (max_d < 0) fail(ErrorCode::invalid_argument, "negative depth");
    if (max_d + 1 > jprefix.depth()) fail(ErrorCode::shallow, "prefix too shallow for the sweep");
    Sweep sweep(jprefix, threads);
    CrosscheckReport report;
    for (int d = 0; d <= max_d; ++d) {
        SubtreeIndex index(jprefix, d);
        for (const auto& a : distinct_subpatches(jprefix, d).patches) {
            ++report.patches;
            sweep.check(d, index, a.id(), a, report);
        }
    }
    return report;
}

}  // namespace sst
