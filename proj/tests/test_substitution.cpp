#include <random>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "substitution.hpp"
#include "test_util.hpp"

using namespace sst;
using namespace testutil;

namespace {

std::set<std::string> theta_strings(const Substreetution& s, const std::string& w) {
    std::set<std::string> out;
    for (const auto& a : theta(s, Address(w)).members) out.insert(a.str());
    return out;
}

}  // namespace

TEST_CASE("apply examples") {
    auto bbab = builtin_bbab();
    CHECK(apply(bbab, levels({"0"})) == levels({"0", "10"}));
    CHECK(apply(bbab, levels({"0", "10"})).compact() == "0/10/0010/10101010");
    CHECK(apply(builtin_abba(), levels({"0"})) == levels({"0", "01"}));
}

TEST_CASE("apply agrees with the recursive tree oracle") {
    std::mt19937_64 rng(5);
    for (const auto& s : {builtin_bbab(), builtin_abba(), builtin_thue_morse()}) {
        for (int trial = 0; trial < 40; ++trial) {
            Patch p = oracle::random_patch(rng, static_cast<int>(rng() % 5));
            CHECK(apply(s, p) == oracle::to_patch(oracle::substitute(s, oracle::from_patch(p))));
        }
    }
}

TEST_CASE("fixed point prefixes") {
    auto bbab = builtin_bbab();
    CHECK(fixed_point_prefix(bbab, Color::zero, 2).compact() == "0/10/0010");
    CHECK(fixed_point_prefix(bbab, Color::one, 2).compact() == "1/10/0010");
    // Level l is constant with value t(l) of the Thue-Morse sequence 0110...
    CHECK(fixed_point_prefix(builtin_thue_morse(), Color::zero, 3).compact() == "0/11/1111/00000000");
    CHECK(fixed_point_prefix(bbab, Color::zero, 0) == Patch::leaf(Color::zero));
    Substreetution swap({Color::one, Color::zero, Color::zero}, {Color::zero, Color::one, Color::one},
                        {Letter::A, Letter::B, Letter::A, Letter::B});
    CHECK(code_of([&] { fixed_point_prefix(swap, Color::zero, 2); }) == ErrorCode::not_fixable);

    Patch deep = fixed_point_prefix(bbab, Color::zero, 12);
    for (int d = 0; d <= 12; ++d) CHECK(fixed_point_prefix(bbab, Color::zero, d) == deep.truncate(d));
    CHECK(apply(bbab, deep, 12) == deep);
}

TEST_CASE("source examples and properties") {
    auto bbab = builtin_bbab();
    CHECK(source(bbab, Address("ba")).str() == "a");
    CHECK(source(bbab, Address("aa")).str() == "b");
    CHECK(source(bbab, Address("ab")).str() == "b");
    CHECK(source(bbab, Address("bb")).str() == "b");
    CHECK(source(bbab, Address("baab")).str() == "ab");
    CHECK(code_of([&] { source(bbab, Address("a")); }) == ErrorCode::odd_length);

    for (const auto& s : {builtin_bbab(), builtin_abba(), builtin_thue_morse()}) {
        for (int l1 = 0; l1 <= 4; l1 += 2) {
            for (const auto& p : oracle::all_words(l1)) {
                for (int l2 = 0; l2 <= 4; l2 += 2) {
                    for (const auto& q : oracle::all_words(l2)) {
                        CHECK(source(s, Address(p + q)) == source(s, Address(p)) + source(s, Address(q)));
                    }
                }
                CHECK(source(s, Address(p)).index() == source_index(s, Address(p).index(), l1 / 2));
            }
        }
    }
}

TEST_CASE("theta examples and properties") {
    auto bbab = builtin_bbab();
    CHECK(theta_strings(bbab, "a") == std::set<std::string>{"ba"});
    CHECK(theta_strings(bbab, "b") == std::set<std::string>{"aa", "ab", "bb"});
    CHECK(theta_strings(bbab, "ab") == std::set<std::string>{"baaa", "baab", "babb"});
    CHECK(theta_strings(bbab, "") == std::set<std::string>{""});
    CHECK_FALSE(theta(bbab, Address("a")).warning.has_value());

    for (int len = 0; len <= 4; ++len) {
        for (const auto& w : oracle::all_words(len)) {
            auto t = theta(bbab, Address(w));
            for (const auto& m : t.members) {
                CHECK(m.size() == 2 * w.size());
                CHECK(source(bbab, m).str() == w);
            }
            // theta(w) is exactly the fibre of the source map over w.
            std::size_t fibre = 0;
            for (const auto& x : oracle::all_words(2 * len)) fibre += source(bbab, Address(x)).str() == w;
            CHECK(t.members.size() == fibre);
        }
    }

    Substreetution one_letter({Color::zero, Color::one, Color::zero}, {Color::one, Color::one, Color::zero},
                              {Letter::B, Letter::B, Letter::B, Letter::B});
    auto t = theta(one_letter, Address("a"));
    CHECK(t.members.empty());
    CHECK(t.warning.has_value());
}

TEST_CASE("renormalization holds") {
    auto bbab = builtin_bbab();
    CHECK(verify_renormalization(bbab, jac(9), 4).passed);
    auto abba = builtin_abba();
    CHECK(verify_renormalization(abba, fixed_point_prefix(abba, Color::zero, 9), 4).passed);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i) {
        CHECK(verify_renormalization(bbab, oracle::random_patch(rng, 4), 2).passed);
        CHECK(verify_renormalization(builtin_thue_morse(), oracle::random_patch(rng, 4), 4).passed);
    }
    CHECK(code_of([&] { verify_renormalization(bbab, jac(4), 3); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { verify_renormalization(bbab, jac(3), 4); }) == ErrorCode::invalid_argument);
}

TEST_CASE("apply contracts distances") {
    std::mt19937_64 rng(21);
    auto bbab = builtin_bbab();
    for (int trial = 0; trial < 200; ++trial) {
        Patch p = oracle::random_patch(rng, 4);
        auto nodes = p.nodes();
        int n = 1 + static_cast<int>(rng() % 4);
        // Agree to depth n - 1, differ somewhere at level n.
        std::size_t first = (std::size_t{1} << n) - 1;
        nodes[first + rng() % (std::size_t{1} << n)] = flip(nodes[first]);
        for (std::size_t i = first; i < nodes.size(); ++i) {
            if (rng() % 3 == 0) nodes[i] = flip(nodes[i]);
        }
        Patch q(4, nodes);
        auto d = distance(p, q);
        if (d.equal_to_depth() || *d.mismatch_level < 1) continue;
        auto dh = distance(apply(bbab, p), apply(bbab, q));
        REQUIRE(!dh.equal_to_depth());
        CHECK(*dh.mismatch_level >= 2 * *d.mismatch_level);
    }
}

TEST_CASE("unsub examples and round trip") {
    auto bbab = builtin_bbab();
    CHECK(unsub(bbab, apply(bbab, levels({"0", "10"}))) == levels({"0", "10"}));
    for (int k = 0; k <= 6; ++k) CHECK(unsub(bbab, jac(2 * k + 1)) == jac(k));
    CHECK(code_of([&] { unsub(bbab, levels({"1", "10", "0011"})); }) == ErrorCode::not_in_image);
    CHECK(code_of([&] { unsub(bbab, levels({"0"})); }) == ErrorCode::shallow);
    Substreetution unmarked({Color::zero, Color::one, Color::zero}, {Color::zero, Color::zero, Color::zero},
                            {Letter::B, Letter::B, Letter::A, Letter::B});
    CHECK(code_of([&] { unsub(unmarked, levels({"0", "10"})); }) == ErrorCode::not_marked);

    std::mt19937_64 rng(13);
    for (const auto& s : {builtin_bbab(), builtin_abba()}) {
        for (int i = 0; i < 100; ++i) {
            Patch p = oracle::random_patch(rng, static_cast<int>(rng() % 5));
            CHECK(unsub(s, apply(s, p)) == p);
            CHECK(unsub_keep(s, apply(s, p, 2 * p.depth())) == p);
        }
    }
    CHECK(unsub_keep(bbab, levels({"1"})) == levels({"1"}));
}

TEST_CASE("substreetution text format") {
    auto s = parse_substreetution("0 -> 0(1,0)\n1 -> 1(1,0)\ngrammar BBAB\n");
    CHECK(s == builtin_bbab());
    CHECK(parse_substreetution(format_substreetution(builtin_abba())) == builtin_abba());
    CHECK(parse_substreetution("builtin:tm") == builtin_thue_morse());
    CHECK(parse_substreetution("builtin:abba") == builtin_abba());
    CHECK(code_of([] { parse_substreetution("builtin:nope"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_substreetution("0 -> 0(1,0)\ngrammar BBAB"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_substreetution("0 -> 0(1,0)\n1 -> 1(1,0)\ngrammar BBA"); }) == ErrorCode::parse_error);
}
