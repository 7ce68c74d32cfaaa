#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "error.hpp"
#include "examples.hpp"
#include "oracle.hpp"
#include "substitution.hpp"
#include "test_util.hpp"

using namespace sst;
using namespace testutil;

namespace {

// cA = c(c(cA, cA), c'(cA, c'A)) with c' = 1 - c, unfolded to the given depth.
oracle::Tree nomeasure_by_recursion(int c, int depth) {
    if (depth == 0) return oracle::make(c);
    if (depth == 1) return oracle::make(c, oracle::make(c), oracle::make(1 - c));
    auto same = [&] { return nomeasure_by_recursion(c, depth - 2); };
    return oracle::make(c, oracle::make(c, same(), same()),
                        oracle::make(1 - c, same(), nomeasure_by_recursion(1 - c, depth - 2)));
}

oracle::Tree abba_iterated(int depth) {
    oracle::Tree t = oracle::make(0);
    while (oracle::depth_of(t) < depth) t = oracle::substitute(builtin_abba(), t);
    return t;
}

}  // namespace

TEST_CASE("tm_project examples") {
    Patch tm3 = fixed_point_prefix(builtin_thue_morse(), Color::zero, 3);
    CHECK(tm_project(tm3).str() == "0110");
    CHECK(tm_project(Patch::leaf(Color::zero)).str() == "0");
    CHECK(code_of([] { tm_project(jac(3)); }) == ErrorCode::non_constant_level);
}

TEST_CASE("tm_project follows the Thue-Morse recurrence") {
    Patch tm = fixed_point_prefix(builtin_thue_morse(), Color::zero, 15);
    LineWord w = tm_project(tm);
    REQUIRE(w.size() == 16);
    CHECK(w.str() == "0110100110010110");
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(to_int(w[i]) == oracle::thue_morse(i));
}

TEST_CASE("abba_digit examples") {
    CHECK(abba_digit(Color::zero, Address("ba")) == Color::one);
    CHECK(abba_digit(Color::zero, Address()) == Color::zero);
    CHECK(abba_digit(Color::one, Address("bb")) == Color::one);
}

TEST_CASE("abba_digit matches the iterated substreetution on every site to depth 12") {
    Patch it = oracle::to_patch(abba_iterated(12)).truncate(12);
    for (int l = 0; l <= 12; ++l) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
            CHECK(abba_digit(Color::zero, Address::from_index(l, i)) == it.at(l, i));
        }
    }
    CHECK(fixed_point_prefix(builtin_abba(), Color::zero, 12) == it);
}

TEST_CASE("abba witness and shift relations") {
    CHECK(abba_nonminimal_witness(10));
    CHECK(abba_nonminimal_witness(1));
    CHECK(code_of([] { abba_nonminimal_witness(0); }) == ErrorCode::non_positive);
    Patch zero = fixed_point_prefix(builtin_abba(), Color::zero, 11);
    Patch one = fixed_point_prefix(builtin_abba(), Color::one, 11);
    CHECK(zero.child(Side::a) == zero.truncate(10));
    CHECK(zero.child(Side::b) == one.truncate(10));
    CHECK(one.child(Side::b) == zero.truncate(10));
    CHECK(one.child(Side::a) == one.truncate(10));
}

TEST_CASE("nomeasure_tree examples") {
    Patch p = nomeasure_tree(Color::zero, 3);
    CHECK(p.compact() == "0/01/0001/01010110");
    CHECK(nomeasure_tree(Color::one, 1).compact() == "1/10");
    CHECK(nomeasure_tree(Color::zero, 0).compact() == "0");
    CHECK(code_of([] { nomeasure_tree(Color::zero, -1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("nomeasure_tree matches the seven-node recursion") {
    for (int c = 0; c <= 1; ++c) {
        for (int d = 0; d <= 11; ++d) {
            CHECK(nomeasure_tree(color_from_int(c), d) == oracle::to_patch(nomeasure_by_recursion(c, d)));
        }
    }
}

TEST_CASE("nomeasure orbit graph") {
    OrbitGraph g = nomeasure_orbit_graph(6);
    REQUIRE(g.size() == 6);
    CHECK(g.warnings.empty());
    CHECK(g.periodic());
    auto at = [&](const char* n) { return *g.find(n); };
    CHECK(g.a_edge[at("0A")] == at("B"));
    CHECK(g.b_edge[at("0A")] == at("C"));
    CHECK(g.a_edge[at("B")] == at("0A"));
    CHECK(g.b_edge[at("B")] == at("0A"));
    CHECK(g.a_edge[at("C")] == at("0A"));
    CHECK(g.b_edge[at("C")] == at("1A"));
    CHECK(g.a_edge[at("1A")] == at("D"));
    CHECK(g.b_edge[at("1A")] == at("E"));
    CHECK(g.a_edge[at("D")] == at("1A"));
    CHECK(g.b_edge[at("D")] == at("1A"));
    CHECK(g.a_edge[at("E")] == at("1A"));
    CHECK(g.b_edge[at("E")] == at("0A"));
    CHECK(g.states[at("B")] == Patch::join(Color::zero, nomeasure_tree(Color::zero, 7), nomeasure_tree(Color::zero, 7)));

    Patch seed = nomeasure_tree(Color::zero, 12);
    OrbitGraph s = build_orbit_graph(seed, 6);
    CHECK(s.size() == 6);
    for (int d = 4; d <= 8; ++d) {
        OrbitGraph gd = build_orbit_graph(nomeasure_tree(Color::zero, d + 8), d, {256, 0});
        CHECK(gd.size() == 6);
        CHECK(gd.periodic());
        // Discovery order is reachability order, so every state is reached from 0A.
        std::set<int> reach{0};
        std::function<void(int)> go = [&](int i) {
            for (int t : {gd.a_edge[i], gd.b_edge[i]}) {
                if (reach.insert(t).second) go(t);
            }
        };
        go(0);
        CHECK(reach.size() == 6);
    }
}

TEST_CASE("orbit graph of constant and non-periodic seeds") {
    OrbitGraph z = build_orbit_graph(Patch::uniform(8, Color::zero), 3);
    REQUIRE(z.size() == 1);
    CHECK(z.a_edge[0] == 0);
    CHECK(z.b_edge[0] == 0);
    CHECK(z.periodic());
    CHECK(code_of([] { build_orbit_graph(jac(12), 4); }) == ErrorCode::not_closed);
    CHECK(code_of([] { build_orbit_graph(jac(14), 4, {20, 2}); }) == ErrorCode::not_closed);
    CHECK(code_of([] { build_orbit_graph(Patch::uniform(8, Color::zero), 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("stability sweep") {
    // D and E first appear at level 3, so depth d needs a seed of depth d+4.
    OrbitGraph g = build_orbit_graph(nomeasure_tree(Color::zero, 9), 4, {256, 2});
    CHECK(g.size() == 6);
    CHECK(g.depth_used == 5);
    REQUIRE(g.warnings.size() == 1);
    CHECK(g.warnings[0].find("sweep stopped") != std::string::npos);
    OrbitGraph full = build_orbit_graph(nomeasure_tree(Color::zero, 12), 4, {256, 2});
    CHECK(full.depth_used == 6);
    CHECK(full.warnings.empty());
}

TEST_CASE("orbit graph text format round trip") {
    OrbitGraph g = nomeasure_orbit_graph(6);
    std::string text = format_orbit_graph(g);
    CHECK(text.rfind("state 0A\n", 0) == 0);
    CHECK(text.find("edge 0A a B\n") != std::string::npos);
    OrbitGraph back = parse_orbit_graph(text);
    CHECK(back.names == g.names);
    CHECK(back.a_edge == g.a_edge);
    CHECK(back.b_edge == g.b_edge);
    CHECK(back.states.empty());
    CHECK(format_orbit_graph(back) == text);

    CHECK(parse_orbit_graph("# comment\nstate x\nedge x a x\n\nedge x b x  # loop\n").size() == 1);
    CHECK(code_of([] { parse_orbit_graph("state x\nedge x a x\n"); }) == ErrorCode::malformed_graph);
    CHECK(code_of([] { parse_orbit_graph("state x\nedge x a x\nedge x b y\n"); }) == ErrorCode::malformed_graph);
    CHECK(code_of([] { parse_orbit_graph("state x\nedge x a x\nedge x a x\nedge x b x\n"); }) ==
          ErrorCode::malformed_graph);
    CHECK(code_of([] { parse_orbit_graph("state x\nstate x\n"); }) == ErrorCode::malformed_graph);
    CHECK(code_of([] { parse_orbit_graph("state x\nedge x c x\n"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { parse_orbit_graph("node x\n"); }) == ErrorCode::parse_error);
}
