#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tree.hpp"

namespace sst {

using Complex = std::complex<double>;

// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)), normalised so that
// |alpha|^2 - |beta|^2 = 1.
struct DiskIsometry {
    Complex alpha{1, 0};
    Complex beta{0, 0};

    static DiskIsometry normalized(Complex alpha, Complex beta);
    Complex operator()(Complex z) const;
    DiskIsometry inverse() const;
    // (f * g)(z) = f(g(z))
    DiskIsometry operator*(const DiskIsometry& g) const;
};

struct Generators {
    DiskIsometry h1;  // a
    DiskIsometry h2;  // b
};

// h1(z) = (5z+4)/(4z+5) fixes +-1 and maps -1/2 to 1/2;
// h2(z) = (5z+4i)/(5-4iz) fixes +-i and maps -i/2 to i/2.
Generators make_generators();

// |z-w| / |1 - conj(w) z|, the tanh of the hyperbolic distance.
double disk_pseudo_distance(Complex z, Complex w);
double disk_distance(Complex z, Complex w);

struct Palette {
    std::string zero = "#9e9e9e";
    std::string one = "#000000";
    std::string background = "#ffffff";
    std::string root = "#ffd700";
};

struct RenderConfig {
    int resolution = 512;
    int depth_limit = 3;  // L, the longest word colored in a tiling
    int max_tree_depth = 12;
    int threads = 1;
    Palette palette;
};

// One glyph per site: a-followers are squares, b-followers disks, the root
// a diamond ringed in the root color. Fill is the site's color.
std::string tree_svg(const Patch& p, const RenderConfig& cfg = {});

// Whether z lies in the Dirichlet domain P0 of the four generators' orbits
// of 0, up to a 1e-9 tolerance that favours P0.
bool in_fundamental_domain(Complex z);

// The positive word w with z in w.P0, |w| <= L, found by pulling z back one
// generator at a time. Empty when z is outside the disk, in an inverse
// cell, or deeper than L.
std::optional<Address> tiling_cell(Complex z, int depth_limit);

// Center of pixel (col, row) of an R x R grid over [-1, 1]^2, rows top-down.
Complex pixel_center(int col, int row, int resolution);

// Per-pixel colors, row-major: 0 or 1 for a colored cell, -1 for background.
std::vector<int> tiling_grid(const Patch& p, const RenderConfig& cfg);
std::string tiling_svg(const Patch& p, const RenderConfig& cfg);

}  // namespace sst
