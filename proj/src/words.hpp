#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "substitution.hpp"
#include "tree.hpp"

namespace sst {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);

struct AddressSet {
    int level = 0;
    std::vector<Address> members;  // sorted
};

AddressSet ones_addresses(const LineWord& w);
LineWord word_from_addresses(const AddressSet& set);

// Word of length 2^{2l} whose 1-addresses are theta of the 1-addresses of w.
LineWord chi(const Substreetution& s, const LineWord& w);
LineWord chi_via_theta(const Substreetution& s, const LineWord& w);
// chi(W1 W2) = chi(W2) chi(W2) chi(W1) chi(W2), with chi fixing 0 and 1.
LineWord chi_bbab_recursive(const LineWord& w);
LineWord chi_pow(const Substreetution& s, const LineWord& w, int u);

// 2-adic valuation; kInfiniteValuation for 0 is not accepted here.
int v2(std::int64_t k);
int v2(const BigInt& k);

struct ValuationCaseReport {
    bool passed = true;
    std::size_t checked = 0;
    std::string first_failure;
};

// Checks v2(2^k(2m+1) + 2^{k'+1}) against the three cases k' >= k,
// k' = k-1 and k' <= k-2 over the given ranges.
ValuationCaseReport verify_valuation_cases(int k_max, int m_max);

Rational f_iter(int n);
BigInt ones_count_line_2n(int n);
// Same count from P_{n+1} = P_n Q_n, Q_{n+1} = (P_n + Q_n)^2 - P_n Q_n.
BigInt ones_count_recurrence(int n);

LineWord line_formula(int m);
bool proportion_check(const LineWord& w, int u);
Rational density(const LineWord& w);

}  // namespace sst
