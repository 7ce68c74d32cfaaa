#include <random>

#include "doctest.h"
#include "error.hpp"
#include "jacaranda.hpp"
#include "oracle.hpp"
#include "substitution.hpp"
#include "test_util.hpp"
#include "words.hpp"

using namespace sst;
using namespace testutil;

TEST_CASE("J and J' prefixes") {
    CHECK(jacaranda_prefix(1) == levels({"0", "10"}));
    CHECK(jprime_prefix(1) == levels({"1", "10"}));
    CHECK(jacaranda_prefix(2) == levels({"0", "10", "0010"}));
    CHECK(jprime_prefix(2) == levels({"1", "10", "0010"}));
    CHECK(jacaranda_prefix(0) == Patch::leaf(Color::zero));
    CHECK(jprime_prefix(0) == Patch::leaf(Color::one));
    for (int d = 0; d <= 16; ++d) {
        Distance dist = distance(jacaranda_prefix(d), jprime_prefix(d));
        CHECK(dist.mismatch_level == 0);
        CHECK(jacaranda_prefix(d).nodes().size() == jprime_prefix(d).nodes().size());
        auto a = jacaranda_prefix(d).nodes();
        auto b = jprime_prefix(d).nodes();
        a[0] = b[0];
        CHECK(a == b);
    }
}

TEST_CASE("line laws of J") {
    Patch j = jacaranda_prefix(16);
    for (int l = 1; l <= 16; ++l) {
        std::string s = j.line(l).str();
        if (l % 2 == 1) {
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == (i % 2 == 0 ? '1' : '0'));
        } else if (l % 4 == 2) {
            for (std::size_t i = 0; i < s.size(); i += 4) CHECK(s.substr(i, 4) == "0010");
        } else {
            for (std::size_t i = 0; i < s.size(); i += 4) {
                std::string b = s.substr(i, 4);
                CHECK((b == "0000" || b == "0010"));
            }
            for (std::size_t i = 0; i < s.size(); i += 16) {
                std::string w = s.substr(i, 16);
                CHECK((w == std::string(16, '0') || w == "0010001000000010"));
            }
        }
    }
}

TEST_CASE("type detection examples") {
    Patch j = jacaranda_prefix(14);
    TypeReport a = detect_type(j.subtree(Address("a")));
    CHECK(a.parity == Parity::odd);
    CHECK(a.candidates == std::vector<int>{0});
    CHECK(a.determined == 0);

    TypeReport ba = detect_type(j.subtree(Address("ba")));
    CHECK(ba.parity == Parity::even);
    CHECK(ba.determined == 1);

    TypeReport whole = detect_type(j);
    CHECK(whole.inf_consistent);
    CHECK(whole.str().find("determined=inf-consistent") != std::string::npos);
    CHECK(detect_type(jprime_prefix(9)).inf_consistent);

    CHECK(code_of([] { detect_type(levels({"0", "10"})); }) == ErrorCode::shallow);
    CHECK(code_of([] { detect_type(levels({"0", "11", "1111"})); }) == ErrorCode::inconsistent);
}

TEST_CASE("type detection on subtrees of J matches the 2-adic valuation of the level") {
    Patch j = jacaranda_prefix(20);
    for (int level = 1; level <= 8; ++level) {
        int expected = v2(level);
        for (const auto& w : oracle::all_words(level)) {
            Patch sub = j.subtree(Address(w));
            TypeReport r = detect_type(sub);
            INFO("site " << w << " report " << r.str());
            CHECK(r.allows(expected));
            if (expected == 0) {
                CHECK(r.parity == Parity::odd);
            } else {
                CHECK(r.parity == Parity::even);
                if (r.determined) CHECK(*r.determined == expected);
            }
        }
    }
}

TEST_CASE("parent type detection agrees with the parent level") {
    Patch j = jacaranda_prefix(18);
    for (int level = 2; level <= 8; level += 2) {
        for (const auto& w : oracle::all_words(level)) {
            for (Side side : {Side::a, Side::b}) {
                Patch child = j.subtree(Address(w).child(side));
                if (child.root() != (side == Side::a ? Color::one : Color::zero)) continue;
                TypeReport r = detect_parent_type(child, side);
                INFO("site " << w << to_char(side) << " report " << r.str());
                CHECK(r.allows(v2(level)));
            }
        }
    }
    CHECK(detect_parent_type(j.subtree(Address("a")), Side::a).inf_consistent);
    CHECK(detect_parent_type(j.subtree(Address("b")), Side::b).inf_consistent);
}

TEST_CASE("iterated unsubstitution") {
    CHECK(unsub_pow(jacaranda_prefix(7), 1) == jacaranda_prefix(3));
    std::mt19937_64 rng(5);
    Substreetution h = builtin_bbab();
    for (int t = 0; t < 20; ++t) {
        Patch q = oracle::random_patch(rng, 2);
        CHECK(unsub_pow(apply_pow(h, q, 2), 2) == q);
    }
    Patch odd = jacaranda_prefix(10).subtree(Address("a"));
    CHECK(code_of([&] { unsub_pow(odd, 1); }) == ErrorCode::not_in_image);
}

TEST_CASE("brother examples") {
    Patch b = levels({"0", "10", "0010"});
    Patch brother_of_odd = brother_patch(b, 0);
    CHECK(brother_of_odd == Patch::join(Color::one, b.child(Side::b), b.child(Side::b)));

    XDescriptor from_j = brother(XDescriptor::jac());
    CHECK(from_j.kind == XDescriptor::Kind::jac_prime);
    for (int d : {4, 8, 12}) {
        CHECK(brother_patch(jacaranda_prefix(d), kInfiniteType) == jprime_prefix(d));
    }
    // Deep prefixes of J behave like type 2^u with u large; their brothers
    // approach J'.
    for (int u = 3; u <= 4; ++u) {
        Patch a = brother_patch(jacaranda_prefix(7), u);
        CHECK(a == jprime_prefix(7));
    }
    CHECK(code_of([] { brother_patch(jprime_prefix(3), 0); }) == ErrorCode::invalid_argument);
}

// The brother of a root-0 subtree must equal its actual sibling in J wherever
// that sibling has root 1.
TEST_CASE("brother reproduces 1-rooted siblings found in J") {
    const int depth = 18;
    Patch j = jacaranda_prefix(depth);
    int compared = 0;
    for (int level = 1; level <= 8; ++level) {
        for (const auto& w : oracle::all_words(level)) {
            Address site(w);
            Patch b = j.subtree(site);
            if (b.root() != Color::zero) continue;
            std::string sib = w;
            sib.back() = sib.back() == 'a' ? 'b' : 'a';
            Patch s = j.subtree(Address(sib));
            if (s.root() != Color::one) continue;
            Patch with_provenance = *brother(XDescriptor::concrete(b, site)).patch;
            int common = std::min(with_provenance.depth(), s.depth());
            INFO("site " << w);
            CHECK(with_provenance.truncate(common) == s.truncate(common));
            // Without provenance, deep agreement with J can leave the type open.
            try {
                Patch detected = *brother(XDescriptor::concrete(b)).patch;
                int dc = std::min(detected.depth(), s.depth());
                CHECK(detected.truncate(dc) == s.truncate(dc));
            } catch (const Error& err) {
                CHECK(err.code() == ErrorCode::type_undetermined);
                CHECK(detect_type(b).inf_consistent);
            }
            ++compared;
        }
    }
    CHECK(compared > 50);
}

// The site ba carries a 1 in J, so the root-0 site aa stands in for it.
TEST_CASE("brother of a type 2^1 tree re-occurs with root 1 in J") {
    Patch j = jacaranda_prefix(16);
    CHECK(j.get(Address("ba")) == Color::one);
    Patch b = j.subtree(Address("aa"));
    Patch a = *brother(XDescriptor::concrete(b, Address("aa"))).patch;
    bool found = false;
    for (std::uint64_t i = 0; i < 4 && !found; i += 2) {
        if (j.subtree_at(2, i).truncate(a.depth() - 1) == b.truncate(a.depth() - 1) &&
            j.subtree_at(2, i + 1).truncate(a.depth() - 1) == a.truncate(a.depth() - 1)) {
            found = true;
        }
    }
    for (int level = 2; level <= 8 && !found; level += 2) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << level) && !found; ++i) {
            Patch s = j.subtree_at(level, i);
            int common = std::min(s.depth(), a.depth());
            if (s.root() == Color::one && s.truncate(common) == a.truncate(common)) found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("classify_even examples") {
    auto jc = classify_even(XDescriptor::jac());
    CHECK(jc.which == EvenCase::mixed_root0);
    CHECK(jc.v == kInfiniteType);
    CHECK(code_of([] { classify_even(XDescriptor::jac_prime()); }) == ErrorCode::undetermined);

    Patch j = jacaranda_prefix(18);
    for (const auto& w : oracle::all_words(2)) {
        Patch a = j.subtree(Address(w));
        if (a.root() != Color::zero || a.line(1).str() != "10") continue;
        auto c = classify_even(XDescriptor::concrete(a, Address(w)));
        CHECK(c.which == EvenCase::mixed_root0);
        CHECK(c.v == 1);
    }
}

// Oracle: follow the source map v times from the site, read the children E
// and D of the subtree there, and take the type of D from its level.
TEST_CASE("classify_even agrees with the source-site oracle in J") {
    Patch j = jacaranda_prefix(22);
    Substreetution h = builtin_bbab();
    int counts[3] = {0, 0, 0};
    for (int level = 2; level <= 8; level += 2) {
        for (const auto& w : oracle::all_words(level)) {
            Address site(w);
            Patch a = j.subtree(site);
            int v = v2(level);
            Address src = site;
            for (int k = 0; k < v; ++k) src = source(h, src);
            REQUIRE(static_cast<int>(src.size()) == (level >> v));
            Patch x = j.subtree(src);
            Patch e = x.child(Side::a);
            Patch d = x.child(Side::b);
            int u = v2(static_cast<int>(src.size()) + 1);
            EvenCase expected = e.root() == Color::one ? EvenCase::mixed_root0
                                : u >= 2               ? EvenCase::doubled_deep
                                                       : EvenCase::doubled_two_root1;
            INFO("site " << w);
            CHECK(d.root() == Color::zero);
            if (e.root() == d.root()) CHECK(e == d);
            if (expected == EvenCase::mixed_root0) CHECK(a.root() == Color::zero);
            if (expected == EvenCase::doubled_two_root1) CHECK(a.root() == Color::one);

            auto c = classify_even(XDescriptor::concrete(a, site));
            CHECK(c.v == v);
            CHECK(c.which == expected);
            ++counts[static_cast<int>(c.which)];
            // Detection without provenance must not contradict it.
            try {
                auto dt = classify_even(XDescriptor::concrete(a));
                CHECK(dt.which == expected);
                CHECK(dt.v == v);
            } catch (const Error& err) {
                CHECK(err.code() == ErrorCode::undetermined);
            }
        }
    }
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
    CHECK(counts[2] > 0);
}

TEST_CASE("zero at even level within N steps") {
    Patch j = jacaranda_prefix(14);
    auto r10 = zero_at_even_within(j, 10);
    CHECK(r10.holds);
    REQUIRE(r10.minimal.has_value());
    CHECK(*r10.minimal <= 10);
    CHECK(*r10.minimal >= 2);
    CHECK_FALSE(zero_at_even_within(j, 1).holds);
    Patch ones = Patch::uniform(8, Color::one);
    for (int n = 0; n <= 8; ++n) CHECK_FALSE(zero_at_even_within(ones, n).holds);
    CHECK_FALSE(zero_at_even_within(ones, 3).minimal.has_value());
    CHECK(code_of([&] { zero_at_even_within(j, 15); }) == ErrorCode::shallow);
}

// Brute force over explicit paths, from each site down every path of length N.
TEST_CASE("zero at even level agrees with a path enumeration") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
        int d = 4 + static_cast<int>(rng() % 4);
        Patch p = oracle::random_patch(rng, d);
        if (t % 4 == 0) p = jacaranda_prefix(d);
        for (int n = 0; n <= d; ++n) {
            bool expect = true;
            for (int l = 0; l + n <= d && expect; ++l) {
                for (std::uint64_t i = 0; i < (std::uint64_t{1} << l) && expect; ++i) {
                    for (std::uint64_t path = 0; path < (std::uint64_t{1} << n) && expect; ++path) {
                        bool hit = false;
                        std::uint64_t idx = i;
                        for (int k = 0; k <= n; ++k) {
                            if (k > 0) idx = 2 * idx + ((path >> (k - 1)) & 1);
                            if ((l + k) % 2 == 0 && p.at(l + k, idx) == Color::zero) hit = true;
                        }
                        if (!hit) expect = false;
                    }
                }
            }
            CHECK(zero_at_even_within(p, n).holds == expect);
        }
    }
}

TEST_CASE("recurrence probe") {
    Patch j = jacaranda_prefix(14);
    auto r0 = recurrence_probe(j, 0);
    CHECK(r0.n <= 10);
    auto r1 = recurrence_probe(j, 1);
    CHECK(r1.n <= 6);
    CHECK(r1.scanned_sites > 0);
    Patch abba = fixed_point_prefix(builtin_abba(), Color::zero, 14);
    CHECK(code_of([&] { recurrence_probe(abba, 1); }) == ErrorCode::not_found);
    CHECK(code_of([&] { recurrence_probe(j, 13); }) == ErrorCode::shallow);
}
