#include "render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace sst {

DiskIsometry DiskIsometry::normalized(Complex alpha, Complex beta) {
    double det = std::norm(alpha) - std::norm(beta);
    if (!(det > 0)) fail(ErrorCode::invalid_argument, "coefficients do not preserve the disk");
    double s = std::sqrt(det);
    return {alpha / s, beta / s};
}

Complex DiskIsometry::operator()(Complex z) const { return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha)); }

DiskIsometry DiskIsometry::inverse() const { return {std::conj(alpha), -beta}; }

DiskIsometry DiskIsometry::operator*(const DiskIsometry& g) const {
    // [[a, b], [conj b, conj a]] matrices multiply within the same family.
    return {alpha * g.alpha + beta * std::conj(g.beta), alpha * g.beta + beta * std::conj(g.alpha)};
}

Generators make_generators() {
    return {DiskIsometry::normalized({5, 0}, {4, 0}), DiskIsometry::normalized({5, 0}, {0, 4})};
}

double disk_pseudo_distance(Complex z, Complex w) { return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z); }

double disk_distance(Complex z, Complex w) { return std::atanh(disk_pseudo_distance(z, w)); }

namespace {

constexpr double kTolerance = 1e-9;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const std::string& fill_of(const Palette& pal, Color c) { return c == Color::one ? pal.one : pal.zero; }

struct Centers {
    Generators g = make_generators();
    // Orbit points of 0 under h1, h2, h1^-1, h2^-1, in that order.
    std::array<Complex, 4> pts{g.h1(0), g.h2(0), g.h1.inverse()(0), g.h2.inverse()(0)};
};

const Centers& centers() {
    static const Centers c;
    return c;
}

// Index into Centers::pts of the half-plane containing z, or -1 for P0.
int nearest_outside(Complex z) {
    const auto& c = centers();
    double home = disk_pseudo_distance(z, 0);
    int best = -1;
    double best_d = home - kTolerance;
    for (int k = 0; k < 4; ++k) {
        double d = disk_pseudo_distance(z, c.pts[k]);
        if (d < best_d) {
            best = k;
            best_d = d;
        }
    }
    return best;
}

}  // namespace

bool in_fundamental_domain(Complex z) { return std::abs(z) < 1 && nearest_outside(z) == -1; }

std::optional<Address> tiling_cell(Complex z, int depth_limit) {
    if (std::abs(z) >= 1) return std::nullopt;
    const auto& c = centers();
    std::string word;
    for (int k = 0;; ++k) {
        int side = nearest_outside(z);
        if (side == -1) return Address(word);
        if (side >= 2 || k == depth_limit) return std::nullopt;
        word.push_back(side == 0 ? 'a' : 'b');
        z = (side == 0 ? c.g.h1 : c.g.h2).inverse()(z);
    }
}

Complex pixel_center(int col, int row, int resolution) {
    double step = 2.0 / resolution;
    return {-1 + (col + 0.5) * step, 1 - (row + 0.5) * step};
}

std::vector<int> tiling_grid(const Patch& p, const RenderConfig& cfg) {
    if (cfg.resolution <= 0) fail(ErrorCode::invalid_argument, "resolution must be positive");
    if (cfg.depth_limit < 0) fail(ErrorCode::invalid_argument, "depth limit must be non-negative");
    if (p.depth() < cfg.depth_limit) {
        fail(ErrorCode::shallow, "patch depth " + std::to_string(p.depth()) + " is below the depth limit " +
                                     std::to_string(cfg.depth_limit));
    }
    int r = cfg.resolution;
    std::vector<int> grid(static_cast<std::size_t>(r) * r, -1);
    auto rows = [&](int first, int stride) {
        for (int y = first; y < r; y += stride) {
            for (int x = 0; x < r; ++x) {
                auto w = tiling_cell(pixel_center(x, y, r), cfg.depth_limit);
                if (w) grid[static_cast<std::size_t>(y) * r + x] = to_int(p.get(*w));
            }
        }
    };
    int threads = std::clamp(cfg.threads, 1, r);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(rows, t, threads);
    rows(0, threads);
    for (auto& t : pool) t.join();
    return grid;
}

std::string tiling_svg(const Patch& p, const RenderConfig& cfg) {
    std::vector<int> grid = tiling_grid(p, cfg);
    int r = cfg.resolution;
    const Palette& pal = cfg.palette;
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << r << "\" height=\"" << r
      << "\" viewBox=\"0 0 " << r << ' ' << r << "\" shape-rendering=\"crispEdges\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << r << "\" height=\"" << r << "\" fill=\"" << pal.background << "\"/>\n";
    // One rectangle per run of equally colored pixels in a row.
    for (int y = 0; y < r; ++y) {
        const int* row = grid.data() + static_cast<std::size_t>(y) * r;
        for (int x = 0; x < r;) {
            int v = row[x];
            int end = x;
            while (end < r && row[end] == v) ++end;
            if (v >= 0) {
                o << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << end - x << "\" height=\"1\" fill=\""
                  << fill_of(pal, color_from_int(v)) << "\"/>\n";
            }
            x = end;
        }
    }
    o << "<circle cx=\"" << num(r / 2.0) << "\" cy=\"" << num(r / 2.0) << "\" r=\"" << num(r / 2.0)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n"
      << "</svg>\n";
    return o.str();
}

std::string tree_svg(const Patch& p, const RenderConfig& cfg) {
    if (p.depth() > cfg.max_tree_depth) {
        fail(ErrorCode::too_deep, "depth " + std::to_string(p.depth()) + " exceeds the readable limit " +
                                      std::to_string(cfg.max_tree_depth));
    }
    const Palette& pal = cfg.palette;
    const double slot = 16;
    const double row_h = 60;
    double width = slot * static_cast<double>(std::uint64_t{1} << p.depth());
    double height = row_h * (p.depth() + 1);
    auto pos = [&](int l, std::uint64_t i) {
        double w = width / static_cast<double>(std::uint64_t{1} << l);
        return std::pair<double, double>{(static_cast<double>(i) + 0.5) * w, row_h * (l + 0.5)};
    };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cfg.resolution << "\" height=\""
      << num(cfg.resolution * height / width) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<g stroke=\"#bdbdbd\" stroke-width=\"1\">\n";
    for (int l = 0; l < p.depth(); ++l) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
            auto [x, y] = pos(l, i);
            for (std::uint64_t c : {2 * i, 2 * i + 1}) {
                auto [cx, cy] = pos(l + 1, c);
                o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(cx) << "\" y2=\"" << num(cy)
                  << "\"/>\n";
            }
        }
    }
    o << "</g>\n";
    for (int l = 0; l <= p.depth(); ++l) {
        double size = std::min(12.0, 0.35 * width / static_cast<double>(std::uint64_t{1} << l));
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
            auto [x, y] = pos(l, i);
            Color c = p.at(l, i);
            std::string attrs = "class=\"node\" data-site=\"" + Address::from_index(l, i).str() + "\" data-color=\"" +
                                to_char(c) + "\" fill=\"" + fill_of(pal, c) + "\"";
            if (l == 0) {
                o << "<polygon " << attrs << " stroke=\"" << pal.root << "\" stroke-width=\"4\" points=\""
                  << num(x) << ',' << num(y - size) << ' ' << num(x + size) << ',' << num(y) << ' ' << num(x) << ','
                  << num(y + size) << ' ' << num(x - size) << ',' << num(y) << "\"/>\n";
            } else if (i % 2 == 0) {
                o << "<rect " << attrs << " x=\"" << num(x - size) << "\" y=\"" << num(y - size) << "\" width=\""
                  << num(2 * size) << "\" height=\"" << num(2 * size) << "\"/>\n";
            } else {
                o << "<circle " << attrs << " cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(size)
                  << "\"/>\n";
            }
        }
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace sst
