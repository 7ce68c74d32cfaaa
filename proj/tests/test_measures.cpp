#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "examples.hpp"
#include "measures.hpp"
#include "test_util.hpp"

using namespace sst;
using namespace testutil;

namespace {

OrbitGraph graph(std::vector<int> a, std::vector<int> b) {
    OrbitGraph g;
    for (std::size_t i = 0; i < a.size(); ++i) g.names.push_back("s" + std::to_string(i));
    g.a_edge = std::move(a);
    g.b_edge = std::move(b);
    return g;
}

OrbitGraph random_graph(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = pick(rng);
        b[i] = pick(rng);
    }
    return graph(a, b);
}

std::vector<bool> periodic_points(const std::vector<int>& f) {
    std::size_t n = f.size();
    std::vector<bool> on(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        int y = static_cast<int>(x);
        for (std::size_t k = 0; k < n; ++k) y = f[y];
        // After n steps y is on a cycle; mark that cycle.
        int z = y;
        do {
            on[z] = true;
            z = f[z];
        } while (z != y);
    }
    return on;
}

// Invariant measures of a single map are the mixtures of uniform measures
// on its cycles. A common one exists iff some class of the "same a-cycle or
// same b-cycle" equivalence consists of points periodic for both maps.
bool feasible_by_cycles(const OrbitGraph& g) {
    std::size_t n = g.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
    auto pa = periodic_points(g.a_edge);
    auto pb = periodic_points(g.b_edge);
    for (std::size_t x = 0; x < n; ++x) {
        if (pa[x]) parent[root(x)] = root(g.a_edge[x]);
        if (pb[x]) parent[root(x)] = root(g.b_edge[x]);
    }
    std::vector<bool> bad(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        if (!pa[x] || !pb[x]) bad[root(x)] = true;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (root(x) == static_cast<int>(x) && !bad[x]) return true;
    }
    return false;
}

OrbitGraph relabel(const OrbitGraph& g, const std::vector<int>& perm) {
    OrbitGraph h = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        h.names[perm[i]] = g.names[i];
        h.a_edge[perm[i]] = perm[g.a_edge[i]];
        h.b_edge[perm[i]] = perm[g.b_edge[i]];
    }
    return h;
}

}  // namespace

TEST_CASE("no invariant probability on the nomeasure orbit") {
    OrbitGraph g = nomeasure_orbit_graph(6);
    MeasureResult r = invariant_measure(g);
    CHECK_FALSE(r.feasible);
    CHECK(r.str(g) == "infeasible\n");
    CHECK(verify_farkas(r.system, r.farkas));
    CHECK(r.certificate(g).find("row a-balance C: + mu(C) = 0") != std::string::npos);
    CHECK(r.certificate(g).find("multiplier total") != std::string::npos);

    auto zero = forced_zero(g);
    CHECK(zero.size() == 6);
    // The first pass already kills the states with an empty preimage.
    for (const char* n : {"B", "C", "D", "E"}) {
        int x = *g.find(n);
        bool no_a = std::none_of(g.a_edge.begin(), g.a_edge.end(), [&](int t) { return t == x; });
        bool no_b = std::none_of(g.b_edge.begin(), g.b_edge.end(), [&](int t) { return t == x; });
        CHECK((no_a || no_b));
    }
}

TEST_CASE("feasible examples") {
    OrbitGraph one = graph({0}, {0});
    MeasureResult r1 = invariant_measure(one);
    REQUIRE(r1.feasible);
    CHECK(r1.mu == std::vector<Rational>{1});
    CHECK(r1.str(one) == "feasible\nmu s0 1\n");

    OrbitGraph two = graph({1, 0}, {1, 0});
    MeasureResult r2 = invariant_measure(two);
    REQUIRE(r2.feasible);
    CHECK(r2.mu == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(r2.str(two) == "feasible\nmu s0 1/2\nmu s1 1/2\n");
    CHECK(forced_zero(two).empty());
}

TEST_CASE("malformed graphs are rejected") {
    CHECK(code_of([] { invariant_measure(OrbitGraph{}); }) == ErrorCode::malformed_graph);
    CHECK(code_of([] { invariant_measure(graph({0, 5}, {0, 0})); }) == ErrorCode::malformed_graph);
    CHECK(code_of([] { invariant_measure(graph({0, 1}, {0})); }) == ErrorCode::malformed_graph);
}

TEST_CASE("simplex agrees with the cycle characterisation on random graphs") {
    std::mt19937_64 rng(7);
    int feasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        OrbitGraph g = random_graph(rng, 1 + trial % 9);
        MeasureResult r = invariant_measure(g);
        INFO(format_orbit_graph(g));
        CHECK(r.feasible == feasible_by_cycles(g));
        if (r.feasible) {
            CHECK(verify_measure(g, r.mu));
            ++feasible;
        } else {
            CHECK(verify_farkas(r.system, r.farkas));
        }
    }
    CHECK(feasible > 20);
    CHECK(feasible < 380);
}

TEST_CASE("feasibility is stable under relabeling and swapping a and b") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + trial % 8;
        OrbitGraph g = random_graph(rng, n);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        bool base = invariant_measure(g).feasible;
        CHECK(invariant_measure(relabel(g, perm)).feasible == base);
        OrbitGraph swapped = g;
        std::swap(swapped.a_edge, swapped.b_edge);
        CHECK(invariant_measure(swapped).feasible == base);
    }
    OrbitGraph nm = nomeasure_orbit_graph(5);
    std::swap(nm.a_edge, nm.b_edge);
    CHECK_FALSE(invariant_measure(nm).feasible);
}

TEST_CASE("forced zeros never contradict a feasible measure") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        OrbitGraph g = random_graph(rng, 1 + trial % 7);
        MeasureResult r = invariant_measure(g);
        if (!r.feasible) continue;
        for (int x : forced_zero(g)) CHECK(r.mu[x] == 0);
    }
}
