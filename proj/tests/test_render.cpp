#include <array>
#include <cmath>
#include <random>
#include <regex>

#include "doctest.h"
#include "error.hpp"
#include "oracle.hpp"
#include "render.hpp"
#include "substitution.hpp"
#include "test_util.hpp"

using namespace sst;
using namespace testutil;

namespace {

const Complex I{0, 1};

bool near(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) < tol; }

// Fills of the glyphs in document order, read back from the SVG text.
std::vector<std::pair<std::string, std::string>> glyphs(const std::string& svg) {
    std::vector<std::pair<std::string, std::string>> out;
    std::regex re(R"re(class="node" data-site="([ab]*)" data-color="([01])")re");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.emplace_back((*it)[1], (*it)[2]);
    }
    return out;
}

DiskIsometry word_map(const Generators& g, const std::string& w) {
    DiskIsometry m;
    for (char c : w) m = m * (c == 'a' ? g.h1 : g.h2);
    return m;
}

}  // namespace

TEST_CASE("generators") {
    Generators g = make_generators();
    CHECK(near(g.h1(-0.5), 0.5));
    CHECK(near(g.h1(1), 1));
    CHECK(near(g.h1(-1), -1));
    CHECK(near(g.h1(0), 0.8));
    CHECK(near(g.h2(-0.5 * I), 0.5 * I));
    CHECK(near(g.h2(I), I));
    CHECK(near(g.h2(-I), -I));
    for (const auto& h : {g.h1, g.h2}) {
        CHECK(std::abs(std::norm(h.alpha) - std::norm(h.beta) - 1) < 1e-12);
    }
    // Same maps as the rational forms.
    for (Complex z : {Complex(0.3, -0.2), Complex(-0.7, 0.1), Complex(0, 0.9)}) {
        CHECK(near(g.h1(z), (5.0 * z + 4.0) / (4.0 * z + 5.0)));
        CHECK(near(g.h2(z), (5.0 * z + 4.0 * I) / (5.0 - 4.0 * I * z)));
        CHECK(near(g.h1.inverse()(g.h1(z)), z));
        CHECK(near((g.h1 * g.h2)(z), g.h1(g.h2(z))));
    }
}

TEST_CASE("generators preserve the disk") {
    Generators g = make_generators();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 2000; ++i) {
        Complex z(u(rng), u(rng));
        if (std::abs(z) >= 1) continue;
        for (const auto& h : {g.h1, g.h2, g.h1.inverse(), g.h2.inverse()}) CHECK(std::abs(h(z)) < 1);
        // Isometries: distances to 0 and to another point are preserved.
        Complex w(0.1, 0.2);
        CHECK(std::abs(disk_distance(g.h1(z), g.h1(w)) - disk_distance(z, w)) < 1e-9);
    }
}

TEST_CASE("pixel classification") {
    Generators g = make_generators();
    CHECK(tiling_cell(0, 0)->str().empty());
    CHECK(tiling_cell(0, 5)->str().empty());
    CHECK(tiling_cell(g.h1(0), 1)->str() == "a");
    CHECK(tiling_cell(g.h2(0), 1)->str() == "b");
    CHECK_FALSE(tiling_cell(g.h1(0), 0));
    CHECK_FALSE(tiling_cell(g.h1.inverse()(0), 3));
    CHECK_FALSE(tiling_cell(1.0, 3));
    for (const auto& w : oracle::all_words(3)) {
        auto cell = tiling_cell(word_map(g, w)(0), 3);
        REQUIRE(cell);
        CHECK(cell->str() == w);
    }
}

TEST_CASE("positive cells are disjoint on a 512 grid") {
    Generators g = make_generators();
    std::vector<std::string> words;
    std::vector<DiskIsometry> pullback;
    for (int k = 0; k <= 3; ++k) {
        for (const auto& w : oracle::all_words(k)) {
            words.push_back(w);
            pullback.push_back(word_map(g, w).inverse());
        }
    }
    int r = 512;
    std::size_t covered = 0;
    for (int y = 0; y < r; ++y) {
        for (int x = 0; x < r; ++x) {
            Complex z = pixel_center(x, y, r);
            if (std::abs(z) >= 1) continue;
            int hits = 0;
            std::string which;
            for (std::size_t k = 0; k < words.size(); ++k) {
                if (in_fundamental_domain(pullback[k](z))) {
                    ++hits;
                    which = words[k];
                }
            }
            CHECK(hits <= 1);
            auto cell = tiling_cell(z, 3);
            CHECK(static_cast<bool>(cell) == (hits == 1));
            if (cell && hits == 1) CHECK(cell->str() == which);
            covered += hits;
        }
    }
    CHECK(covered > 1000);
}

TEST_CASE("tiling colors") {
    Patch j = jac(4);
    RenderConfig cfg;
    cfg.resolution = 64;
    cfg.depth_limit = 0;
    auto g0 = tiling_grid(j, cfg);
    for (int v : g0) CHECK((v == -1 || v == 0));
    CHECK(g0[32 * 64 + 32] == 0);

    cfg.depth_limit = 1;
    auto g1 = tiling_grid(j, cfg);
    Generators g = make_generators();
    auto at = [&](Complex z) {
        int x = static_cast<int>((z.real() + 1) / 2 * 64);
        int y = static_cast<int>((1 - z.imag()) / 2 * 64);
        return g1[static_cast<std::size_t>(y) * 64 + x];
    };
    CHECK(at(0) == 0);
    CHECK(at(g.h1(0)) == 1);
    CHECK(at(g.h2(0)) == 0);
    CHECK(at(g.h1.inverse()(0)) == -1);

    cfg.depth_limit = 5;
    CHECK(code_of([&] { tiling_grid(j, cfg); }) == ErrorCode::shallow);
    cfg.depth_limit = 2;
    cfg.resolution = 0;
    CHECK(code_of([&] { tiling_grid(j, cfg); }) == ErrorCode::invalid_argument);
}

TEST_CASE("tiling svg is deterministic across runs and thread counts") {
    Patch j = jac(6);
    RenderConfig cfg;
    cfg.resolution = 96;
    cfg.depth_limit = 4;
    std::string one = tiling_svg(j, cfg);
    cfg.threads = 4;
    CHECK(tiling_svg(j, cfg) == one);
    CHECK(tiling_svg(j, cfg) == one);
    CHECK(one.rfind("<?xml", 0) == 0);
    CHECK(one.find("fill=\"#000000\"") != std::string::npos);
}

TEST_CASE("tree svg") {
    std::string svg = tree_svg(jac(4));
    auto gs = glyphs(svg);
    REQUIRE(gs.size() == 31);
    std::string level2;
    for (const auto& [site, color] : gs) {
        if (site.size() == 2) level2 += color;
    }
    CHECK(level2 == "0010");
    CHECK(svg.find("<polygon class=\"node\" data-site=\"\" data-color=\"0\" fill=\"#9e9e9e\" stroke=\"#ffd700\"") !=
          std::string::npos);
    CHECK(svg.find("<rect class=\"node\" data-site=\"a\"") != std::string::npos);
    CHECK(svg.find("<circle class=\"node\" data-site=\"b\"") != std::string::npos);
    CHECK(tree_svg(jac(4)) == svg);

    auto single = glyphs(tree_svg(Patch::leaf(Color::one)));
    REQUIRE(single.size() == 1);
    CHECK(single[0].second == "1");

    auto tm = glyphs(tree_svg(fixed_point_prefix(builtin_thue_morse(), Color::zero, 3)));
    std::array<std::string, 4> per_level;
    for (const auto& [site, color] : tm) per_level[site.size()] += color;
    CHECK(per_level[0] == "0");
    CHECK(per_level[1] == "11");
    CHECK(per_level[2] == "1111");
    CHECK(per_level[3] == "00000000");

    CHECK(code_of([] { tree_svg(jac(13)); }) == ErrorCode::too_deep);
}
