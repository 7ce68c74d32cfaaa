#pragma once

#include <string>
#include <vector>

#include "examples.hpp"
#include "words.hpp"

namespace sst {

// One row of the balance system: sum of coef * mu(state) = rhs.
struct BalanceRow {
    std::string label;
    std::vector<Rational> coef;
    Rational rhs;
};

// mu(x) = mu(a^{-1}(x)) and mu(x) = mu(b^{-1}(x)) for every state, then
// sum mu = 1.
std::vector<BalanceRow> balance_system(const OrbitGraph& g);

struct MeasureResult {
    bool feasible = false;
    std::vector<Rational> mu;  // per state when feasible
    // Multipliers y, one per row, with y.A >= 0 and y.rhs < 0 when infeasible.
    std::vector<Rational> farkas;
    std::vector<BalanceRow> system;

    // `feasible` and `mu <state> <p/q>` lines, or `infeasible`.
    std::string str(const OrbitGraph& g) const;
    // The rows, then the multipliers of an infeasibility proof.
    std::string certificate(const OrbitGraph& g) const;
};

// Exact phase-one simplex with Bland's rule; both outcomes are re-checked
// against the system before returning.
MeasureResult invariant_measure(const OrbitGraph& g);

bool verify_measure(const OrbitGraph& g, const std::vector<Rational>& mu);
bool verify_farkas(const std::vector<BalanceRow>& rows, const std::vector<Rational>& y);

// States whose measure is zero by the preimage argument: no a- or b-preimage,
// or every a- or b-preimage already forced to zero. Sorted indices.
std::vector<int> forced_zero(const OrbitGraph& g);

}  // namespace sst
