#include "jacaranda.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "error.hpp"
#include "words.hpp"

namespace sst {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 2;

const Substreetution& bbab() {
    static const Substreetution s = builtin_bbab();
    return s;
}

bool line_is_ten(const Patch& p, int l) {
    std::uint64_t width = std::uint64_t{1} << l;
    for (std::uint64_t i = 0; i < width; ++i) {
        if (p.at(l, i) != ((i % 2 == 0) ? Color::one : Color::zero)) return false;
    }
    return true;
}

// chi^u(10); only ever needed while 2^{u+1} <= 27.
const LineWord& block(int u) {
    static std::mutex mu;
    static std::map<int, LineWord> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, chi_pow(bbab(), LineWord::parse("10"), u)).first;
    return it->second;
}

// Line l of p, offset by the given number of aligned positions, is a
// repetition of the block.
bool line_is_blocks(const Patch& p, int l, const LineWord& b) {
    std::uint64_t width = std::uint64_t{1} << l;
    if (width % b.size() != 0) return false;
    for (std::uint64_t i = 0; i < width; ++i) {
        if (p.at(l, i) != b[i % b.size()]) return false;
    }
    return true;
}

// First line >= first where p and ref differ.
std::optional<int> first_deviation(const Patch& p, const Patch& ref, int first) {
    for (int l = first; l <= p.depth(); ++l) {
        std::uint64_t width = std::uint64_t{1} << l;
        for (std::uint64_t i = 0; i < width; ++i) {
            if (p.at(l, i) != ref.at(l, i)) return l;
        }
    }
    return std::nullopt;
}

int bit_width(int d) { return static_cast<int>(std::bit_width(static_cast<unsigned>(d))); }

// Collapses a per-u pass table into finite candidates plus an unbounded tail.
void fill_candidates(TypeReport& r, const std::vector<bool>& pass, bool open_ended) {
    int top = static_cast<int>(pass.size()) - 1;
    int tail_start = top + 1;
    if (open_ended) {
        while (tail_start > 1 && pass[static_cast<std::size_t>(tail_start - 1)]) --tail_start;
        if (tail_start <= top) r.tail = tail_start;
    }
    for (int u = 1; u < std::min(tail_start, top + 1); ++u) {
        if (pass[static_cast<std::size_t>(u)]) r.candidates.push_back(u);
    }
}

}  // namespace

std::string type_name(int u) { return u == kInfiniteType ? std::string("inf") : std::to_string(u); }

Patch jacaranda_prefix(int depth) {
    if (depth < 0) fail(ErrorCode::invalid_argument, "negative depth");
    static std::mutex mu;
    static std::optional<Patch> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache || cache->depth() < depth) cache = fixed_point_prefix(bbab(), Color::zero, std::max(depth, 12));
    return cache->depth() == depth ? *cache : cache->truncate(depth);
}

Patch jprime_prefix(int depth) { return jacaranda_prefix(depth).with_root(Color::one); }

bool odd_lines_test(const Patch& p) {
    for (int l = 2; l <= p.depth(); l += 2) {
        if (!line_is_ten(p, l)) return false;
    }
    return true;
}

bool even_lines_test(const Patch& p) {
    for (int l = 1; l <= p.depth(); l += 2) {
        if (!line_is_ten(p, l)) return false;
    }
    return true;
}

bool TypeReport::allows(int u) const {
    if (u == kInfiniteType) return inf_consistent;
    if (tail && u >= *tail) return true;
    return std::find(candidates.begin(), candidates.end(), u) != candidates.end();
}

std::vector<int> TypeReport::representatives(int extra) const {
    std::vector<int> out = candidates;
    if (tail) {
        for (int u = *tail; u <= *tail + extra; ++u) out.push_back(u);
    }
    if (inf_consistent) out.push_back(kInfiniteType);
    return out;
}

std::string TypeReport::str() const {
    std::string out = "parity=";
    out += parity == Parity::odd ? "odd" : parity == Parity::even ? "even" : "undetermined";
    out += " u={";
    bool first = true;
    for (int u : candidates) {
        if (!first) out += ",";
        out += std::to_string(u);
        first = false;
    }
    if (tail) {
        if (!first) out += ",";
        out += std::to_string(*tail) + "..";
    }
    out += "} determined=";
    if (inf_consistent) {
        out += "inf-consistent";
    } else if (determined) {
        out += std::to_string(*determined);
    } else {
        out += "none";
    }
    out += " depth=" + std::to_string(depth);
    return out;
}

TypeReport detect_type(const Patch& p) {
    const int d = p.depth();
    if (d < 2) fail(ErrorCode::shallow, "type detection needs depth at least 2");
    bool odd_ok = odd_lines_test(p);
    bool even_ok = even_lines_test(p);
    if (!odd_ok && !even_ok) fail(ErrorCode::inconsistent, "neither parity fits the lines of the patch");

    TypeReport r;
    r.depth = d;
    if (odd_ok) r.candidates.push_back(0);
    if (even_ok) {
        auto deviation = first_deviation(p, jacaranda_prefix(d), 1);
        int top = bit_width(d) + 1;
        std::vector<bool> pass(static_cast<std::size_t>(top) + 1, false);
        Patch cur = p;
        for (int u = 1; u <= top; ++u) {
            try {
                cur = unsub_keep(bbab(), cur);
            } catch (const Error&) {
                break;
            }
            bool ok = !deviation || (std::int64_t{1} << u) <= *deviation;
            for (int l = 1 << (u + 1); ok && l <= d; l += 1 << (u + 1)) ok = line_is_blocks(p, l, block(u));
            if (ok && cur.depth() >= 2) ok = odd_lines_test(cur);
            pass[static_cast<std::size_t>(u)] = ok;
        }
        TypeReport even;
        fill_candidates(even, pass, !deviation);
        r.candidates.insert(r.candidates.end(), even.candidates.begin(), even.candidates.end());
        r.tail = even.tail;
        r.inf_consistent = !deviation;
    }
    if (odd_ok && even_ok) {
        r.parity = Parity::undetermined;
    } else if (odd_ok) {
        r.parity = Parity::odd;
        r.determined = 0;
    } else {
        r.parity = Parity::even;
        if (r.candidates.empty() && !r.tail && !r.inf_consistent) {
            fail(ErrorCode::inconsistent, "no type 2^u fits the patch");
        }
        if (r.candidates.size() == 1 && !r.tail && !r.inf_consistent) r.determined = r.candidates[0];
    }
    return r;
}

TypeReport detect_parent_type(const Patch& p, Side side) {
    const int d = p.depth();
    const int pd = d + 1;
    Color expected_root = side == Side::a ? Color::one : Color::zero;
    bool even_ok = p.root() == expected_root && odd_lines_test(p);
    bool odd_ok = even_lines_test(p);
    if (!odd_ok && !even_ok) fail(ErrorCode::inconsistent, "no parent parity fits the patch");

    TypeReport r;
    r.depth = pd;
    if (odd_ok) r.candidates.push_back(0);
    if (even_ok) {
        Patch jside = jacaranda_prefix(pd).subtree(Address(std::string(1, to_char(side))));
        auto dev = first_deviation(p, jside, 0);
        std::optional<int> deviation;
        if (dev) deviation = *dev + 1;
        int top = bit_width(pd) + 1;
        std::vector<bool> pass(static_cast<std::size_t>(top) + 1, false);
        for (int v = 1; v <= top; ++v) {
            bool ok = !deviation || (std::int64_t{1} << v) <= *deviation;
            for (int l = 1 << (v + 1); ok && l <= pd; l += 1 << (v + 1)) ok = line_is_blocks(p, l - 1, block(v));
            pass[static_cast<std::size_t>(v)] = ok;
        }
        TypeReport even;
        fill_candidates(even, pass, !deviation);
        r.candidates.insert(r.candidates.end(), even.candidates.begin(), even.candidates.end());
        r.tail = even.tail;
        r.inf_consistent = !deviation;
    }
    if (odd_ok && even_ok) {
        r.parity = Parity::undetermined;
    } else if (odd_ok) {
        r.parity = Parity::odd;
        r.determined = 0;
    } else {
        r.parity = Parity::even;
        if (r.candidates.size() == 1 && !r.tail && !r.inf_consistent) r.determined = r.candidates[0];
    }
    return r;
}

Patch unsub_pow(const Patch& p, int u) {
    if (u < 0) fail(ErrorCode::invalid_argument, "unsubstitution count must be nonnegative");
    Patch cur = p;
    for (int i = 0; i < u; ++i) cur = unsub(bbab(), cur);
    return cur;
}

Patch unsub_keep_pow(const Patch& p, int u) {
    if (u < 0) fail(ErrorCode::invalid_argument, "unsubstitution count must be nonnegative");
    Patch cur = p;
    for (int i = 0; i < u && !(cur.depth() == 0 && i > 0); ++i) cur = unsub_keep(bbab(), cur);
    return cur;
}

Patch brother_patch(const Patch& b, int u) {
    if (b.root() != Color::zero) fail(ErrorCode::invalid_argument, "brother needs a tree with root 0");
    const int d = b.depth();
    if (u == 0) {
        if (d == 0) return Patch::leaf(Color::one);
        Patch right = b.child(Side::b);
        return Patch::join(Color::one, right, right);
    }
    if (u == kInfiniteType) {
        if (!(b == jacaranda_prefix(d))) fail(ErrorCode::inconsistent, "type 2^inf with root 0 must agree with J");
        return jprime_prefix(d);
    }
    Patch q = unsub_keep_pow(b, u);
    Patch seed = Patch::leaf(Color::one);
    if (q.depth() > 0) {
        Patch right = q.child(Side::b);
        seed = Patch::join(Color::one, right, right);
    }
    // Everything up to depth d is determined; deeper levels are not needed.
    Patch out = apply_pow(bbab(), seed, u, d);
    return out.depth() > d ? out.truncate(d) : out;
}

Color XDescriptor::root() const {
    switch (kind) {
        case Kind::jac:
            return Color::zero;
        case Kind::jac_prime:
            return Color::one;
        default:
            return patch->root();
    }
}

Patch XDescriptor::prefix(int depth) const {
    switch (kind) {
        case Kind::jac:
            return jacaranda_prefix(depth);
        case Kind::jac_prime:
            return jprime_prefix(depth);
        default:
            return patch->depth() > depth ? patch->truncate(depth) : *patch;
    }
}

std::string XDescriptor::ref() const {
    switch (kind) {
        case Kind::jac:
            return "J";
        case Kind::jac_prime:
            return "J'";
        default:
            return patch->compact();
    }
}

XDescriptor brother(const XDescriptor& b) {
    if (b.kind == XDescriptor::Kind::jac) return XDescriptor::jac_prime();
    if (b.root() != Color::zero) fail(ErrorCode::invalid_argument, "brother needs a tree with root 0");
    const Patch& p = *b.patch;
    if (b.provenance) {
        int level = static_cast<int>(b.provenance->size());
        return XDescriptor::concrete(brother_patch(p, level == 0 ? kInfiniteType : v2(level)));
    }
    TypeReport r = detect_type(p);
    if (r.determined) return XDescriptor::concrete(brother_patch(p, *r.determined));
    std::optional<Patch> agreed;
    for (int u : r.representatives(3)) {
        Patch cand = Patch::leaf(Color::one);
        try {
            cand = brother_patch(p, u);
        } catch (const Error&) {
            continue;
        }
        if (!agreed) {
            agreed = cand;
            continue;
        }
        int common = std::min(agreed->depth(), cand.depth());
        if (!(agreed->truncate(common) == cand.truncate(common))) {
            fail(ErrorCode::type_undetermined, "candidate types " + r.str() + " give different brothers");
        }
        if (cand.depth() < agreed->depth()) agreed = cand;
    }
    if (!agreed) fail(ErrorCode::type_undetermined, "no candidate type yields a brother: " + r.str());
    return XDescriptor::concrete(*agreed);
}

std::string even_case_name(EvenCase c) {
    switch (c) {
        case EvenCase::doubled_deep:
            return "doubled-u>=2";
        case EvenCase::doubled_two_root1:
            return "doubled-u=1-root1";
        default:
            return "mixed-root0";
    }
}

EvenClassification classify_even(const XDescriptor& a, const std::optional<Branch>& branch) {
    if (a.kind == XDescriptor::Kind::jac) return {EvenCase::mixed_root0, kInfiniteType};
    if (a.kind == XDescriptor::Kind::jac_prime) {
        fail(ErrorCode::undetermined, "J' is a limit of both doubled cases: {doubled-u>=2, doubled-u=1-root1}");
    }
    const Patch& p = *a.patch;
    const Color root = p.root();
    std::optional<int> level;
    if (a.provenance) level = static_cast<int>(a.provenance->size());

    std::vector<int> vs;
    if (level) {
        if (*level == 0) {
            vs.push_back(kInfiniteType);
        } else {
            if (v2(*level) == 0) fail(ErrorCode::invalid_argument, "tree at an odd level is not even");
            vs.push_back(v2(*level));
        }
    } else if (p.depth() >= 2) {
        TypeReport r = detect_type(p);
        if (r.parity == Parity::odd) fail(ErrorCode::invalid_argument, "tree is of odd type");
        for (int v : r.representatives(2)) {
            if (v != 0) vs.push_back(v);
        }
    } else if (!branch) {
        fail(ErrorCode::shallow, "depth too small to detect the type");
    }
    if (branch) {
        TypeReport pr = detect_parent_type(branch->patch, branch->side);
        if (vs.empty() && p.depth() < 2) {
            for (int v : pr.representatives(2)) {
                if (v != 0) vs.push_back(v);
            }
        } else {
            std::erase_if(vs, [&](int v) { return !pr.allows(v); });
        }
    }

    std::set<std::pair<int, int>> found;  // (case, v)
    auto add = [&](EvenCase c, int v) { found.insert({static_cast<int>(c), v}); };
    for (int v : vs) {
        if (v == kInfiniteType) {
            if (root == Color::zero) {
                add(EvenCase::mixed_root0, v);
            } else {
                add(EvenCase::doubled_deep, v);
                add(EvenCase::doubled_two_root1, v);
            }
            continue;
        }
        Patch q = Patch::leaf(root);
        try {
            q = unsub_keep_pow(p, v);
        } catch (const Error&) {
            continue;
        }
        if (q.depth() == 0) {
            add(EvenCase::doubled_deep, v);
            add(root == Color::zero ? EvenCase::mixed_root0 : EvenCase::doubled_two_root1, v);
            continue;
        }
        Color e = q.at(1, 0);
        Color dcol = q.at(1, 1);
        if (e == Color::one && dcol == Color::zero) {
            if (root == Color::zero) add(EvenCase::mixed_root0, v);
            continue;
        }
        if (e != Color::zero || dcol != Color::zero) continue;
        std::vector<int> us;
        if (level && *level > 0) {
            us.push_back(v2((*level >> v) + 1));
        } else if (q.depth() - 1 >= 2) {
            try {
                for (int u : detect_type(q.child(Side::b)).representatives(2)) us.push_back(u);
            } catch (const Error&) {
            }
        } else {
            us = {1, 2};
        }
        for (int u : us) {
            if (u >= 2) add(EvenCase::doubled_deep, v);
            if (u == 1 && root == Color::one) add(EvenCase::doubled_two_root1, v);
        }
    }
    if (found.size() == 1) {
        auto [c, v] = *found.begin();
        return {static_cast<EvenCase>(c), v};
    }
    if (found.empty()) fail(ErrorCode::inconsistent, "no even case fits the tree");
    std::string msg = "still consistent:";
    for (auto [c, v] : found) msg += " (" + even_case_name(static_cast<EvenCase>(c)) + ", v=" + type_name(v) + ")";
    fail(ErrorCode::undetermined, msg);
}

ZeroAtEvenReport zero_at_even_within(const Patch& p, int n) {
    const int d = p.depth();
    if (n < 0) fail(ErrorCode::invalid_argument, "N must be nonnegative");
    if (n > d) fail(ErrorCode::shallow, "N exceeds the patch depth");
    // need[i]: length of the longest path from site i before a 0 at an even
    // level is certain to appear.
    std::vector<int> need(p.size(), kUnreachable);
    for (std::size_t i = p.size(); i-- > 0;) {
        int l = heap_level(i);
        if (l % 2 == 0 && p.nodes()[i] == Color::zero) {
            need[i] = 0;
        } else if (l < d) {
            need[i] = std::min(kUnreachable, 1 + std::max(need[2 * i + 1], need[2 * i + 2]));
        }
    }
    // worst[l]: the largest need among sites at levels <= l.
    std::vector<int> worst(static_cast<std::size_t>(d) + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto l = static_cast<std::size_t>(heap_level(i));
        worst[l] = std::max(worst[l], need[i]);
    }
    for (std::size_t l = 1; l < worst.size(); ++l) worst[l] = std::max(worst[l], worst[l - 1]);
    ZeroAtEvenReport r;
    r.holds = worst[static_cast<std::size_t>(d - n)] <= n;
    for (int k = 0; k <= d; ++k) {
        if (worst[static_cast<std::size_t>(d - k)] <= k) {
            r.minimal = k;
            break;
        }
    }
    return r;
}

RecurrenceReport recurrence_probe(const Patch& p, int m) {
    const int d = p.depth();
    if (m < 0) fail(ErrorCode::invalid_argument, "m must be nonnegative");
    if (d < m + 2) fail(ErrorCode::shallow, "patch too shallow for the probe");
    SubtreeIndex index(p, m);
    NodeId ref = p.truncate(m).id();
    std::vector<int> need(p.size(), kUnreachable);
    for (std::size_t i = p.size(); i-- > 0;) {
        int l = heap_level(i);
        if (l + m > d) continue;
        if (index.id(i, m) == ref) {
            need[i] = 0;
        } else if (l + m < d) {
            need[i] = std::min(kUnreachable, 1 + std::max(need[2 * i + 1], need[2 * i + 2]));
        }
    }
    std::vector<int> worst(static_cast<std::size_t>(d - m) + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        int l = heap_level(i);
        if (l + m <= d) worst[static_cast<std::size_t>(l)] = std::max(worst[static_cast<std::size_t>(l)], need[i]);
    }
    for (std::size_t l = 1; l < worst.size(); ++l) worst[l] = std::max(worst[l], worst[l - 1]);
    // Windows longer than half the scannable depth would only test a few
    // sites near the root.
    for (int n = 0; n <= (d - m) / 2; ++n) {
        int top = d - m - n;
        if (worst[static_cast<std::size_t>(top)] <= n) {
            return {n, static_cast<int>((std::size_t{1} << (top + 1)) - 1)};
        }
    }
    fail(ErrorCode::not_found, "no window length up to " + std::to_string((d - m) / 2) + " works on this prefix");
}

}  // namespace sst
