#include "measures.hpp"

#include <sstream>

#include "error.hpp"

namespace sst {

std::vector<BalanceRow> balance_system(const OrbitGraph& g) {
    validate(g);
    std::size_t n = g.size();
    std::vector<BalanceRow> rows;
    for (char letter : {'a', 'b'}) {
        const auto& edge = letter == 'a' ? g.a_edge : g.b_edge;
        for (std::size_t x = 0; x < n; ++x) {
            BalanceRow r{std::string(1, letter) + "-balance " + g.names[x], std::vector<Rational>(n), 0};
            r.coef[x] += 1;
            for (std::size_t y = 0; y < n; ++y) {
                if (edge[y] == static_cast<int>(x)) r.coef[y] -= 1;
            }
            rows.push_back(std::move(r));
        }
    }
    rows.push_back({"total", std::vector<Rational>(n, Rational(1)), 1});
    return rows;
}

bool verify_measure(const OrbitGraph& g, const std::vector<Rational>& mu) {
    if (mu.size() != g.size()) return false;
    for (const auto& m : mu) {
        if (m < 0) return false;
    }
    for (const auto& r : balance_system(g)) {
        Rational lhs = 0;
        for (std::size_t i = 0; i < mu.size(); ++i) lhs += r.coef[i] * mu[i];
        if (lhs != r.rhs) return false;
    }
    return true;
}

bool verify_farkas(const std::vector<BalanceRow>& rows, const std::vector<Rational>& y) {
    if (rows.empty() || y.size() != rows.size()) return false;
    Rational rhs = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) rhs += y[i] * rows[i].rhs;
    if (rhs >= 0) return false;
    for (std::size_t j = 0; j < rows[0].coef.size(); ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) col += y[i] * rows[i].coef[j];
        if (col < 0) return false;
    }
    return true;
}

namespace {

// Phase one for {A x = b, x >= 0} with b >= 0: minimise the sum of one
// artificial variable per row. Tableau columns are the n structural
// variables, then the m artificials, then the right-hand side.
struct PhaseOne {
    std::size_t m, n;
    std::vector<std::vector<Rational>> t;
    std::vector<std::size_t> basis;
    std::vector<Rational> cost;  // reduced costs

    explicit PhaseOne(const std::vector<BalanceRow>& rows) : m(rows.size()), n(rows[0].coef.size()) {
        t.assign(m, std::vector<Rational>(n + m + 1));
        basis.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            Rational sign = rows[i].rhs < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n; ++j) t[i][j] = sign * rows[i].coef[j];
            t[i][n + i] = 1;
            t[i][n + m] = sign * rows[i].rhs;
            basis[i] = n + i;
        }
        cost.assign(n + m + 1, 0);
        for (std::size_t j = 0; j < n + m + 1; ++j) {
            if (j >= n && j < n + m) continue;
            for (std::size_t i = 0; i < m; ++i) cost[j] -= t[i][j];
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = t[r][c];
        for (auto& v : t[r]) v /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || t[i][c] == 0) continue;
            Rational f = t[i][c];
            for (std::size_t j = 0; j < t[i].size(); ++j) t[i][j] -= f * t[r][j];
        }
        if (cost[c] != 0) {
            Rational f = cost[c];
            for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    void run() {
        for (;;) {
            // Bland: smallest entering index with negative reduced cost,
            // ties in the ratio test broken by the smallest basic index.
            std::size_t enter = n + m;
            for (std::size_t j = 0; j < n + m; ++j) {
                if (cost[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == n + m) return;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][n + m] / t[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            // The phase-one objective is bounded below by zero.
            if (leave == m) fail(ErrorCode::inconsistent, "phase one reported an unbounded ray");
            pivot(leave, enter);
        }
    }

    Rational objective() const { return -cost[n + m]; }

    // Optimal duals of the phase-one problem in terms of the original rows.
    std::vector<Rational> duals(const std::vector<BalanceRow>& rows) const {
        std::vector<Rational> y(m);
        for (std::size_t k = 0; k < m; ++k) {
            // Reduced cost of artificial k is 1 - y_k (sign-adjusted row).
            Rational yk = 1 - cost[n + k];
            y[k] = rows[k].rhs < 0 ? -yk : yk;
        }
        return y;
    }
};

}  // namespace

MeasureResult invariant_measure(const OrbitGraph& g) {
    if (g.size() == 0) fail(ErrorCode::malformed_graph, "graph has no states");
    MeasureResult out;
    out.system = balance_system(g);
    PhaseOne lp(out.system);
    lp.run();
    if (lp.objective() == 0) {
        out.feasible = true;
        out.mu.assign(g.size(), 0);
        for (std::size_t i = 0; i < lp.m; ++i) {
            if (lp.basis[i] < lp.n) out.mu[lp.basis[i]] = lp.t[i][lp.n + lp.m];
        }
        if (!verify_measure(g, out.mu)) fail(ErrorCode::inconsistent, "simplex solution does not re-verify");
    } else {
        // Phase-one duals y satisfy y.A <= 0 and y.b = objective > 0.
        for (auto& v : lp.duals(out.system)) out.farkas.push_back(-v);
        if (!verify_farkas(out.system, out.farkas)) {
            fail(ErrorCode::inconsistent, "infeasibility certificate does not re-verify");
        }
    }
    return out;
}

std::string MeasureResult::str(const OrbitGraph& g) const {
    std::ostringstream o;
    if (!feasible) {
        o << "infeasible\n";
        return o.str();
    }
    o << "feasible\n";
    for (std::size_t i = 0; i < mu.size(); ++i) o << "mu " << g.names[i] << ' ' << to_string(mu[i]) << '\n';
    return o.str();
}

std::string MeasureResult::certificate(const OrbitGraph& g) const {
    std::ostringstream o;
    for (const auto& r : system) {
        o << "row " << r.label << ':';
        bool any = false;
        for (std::size_t j = 0; j < r.coef.size(); ++j) {
            if (r.coef[j] == 0) continue;
            o << ' ' << (r.coef[j] < 0 ? '-' : '+') << ' ';
            Rational mag = abs(r.coef[j]);
            if (mag != 1) o << to_string(mag) << ' ';
            o << "mu(" << g.names[j] << ')';
            any = true;
        }
        if (!any) o << " 0";
        o << " = " << to_string(r.rhs) << '\n';
    }
    if (!feasible) {
        for (std::size_t i = 0; i < farkas.size(); ++i) {
            if (farkas[i] != 0) o << "multiplier " << system[i].label << ' ' << to_string(farkas[i]) << '\n';
        }
    }
    return o.str();
}

std::vector<int> forced_zero(const OrbitGraph& g) {
    validate(g);
    std::size_t n = g.size();
    std::vector<bool> zero(n, false);
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            if (zero[x]) continue;
            for (const auto* edge : {&g.a_edge, &g.b_edge}) {
                bool all_zero = true;
                for (std::size_t y = 0; y < n; ++y) {
                    if ((*edge)[y] == static_cast<int>(x) && !zero[y]) all_zero = false;
                }
                if (all_zero) {
                    zero[x] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<int> out;
    for (std::size_t x = 0; x < n; ++x) {
        if (zero[x]) out.push_back(static_cast<int>(x));
    }
    return out;
}

}  // namespace sst
