#include "words.hpp"

#include <algorithm>

#include "error.hpp"

namespace sst {

namespace {

constexpr int kMaxWordLevel = 26;

void require_level_limit(int level) {
    if (level > kMaxWordLevel) {
        fail(ErrorCode::resource_limit, "word of length 2^" + std::to_string(level) + " is too long");
    }
}

bool is_bbab_grammar(const Substreetution& s) {
    return s.grammar() == std::array<Letter, 4>{Letter::B, Letter::B, Letter::A, Letter::B};
}

}  // namespace

std::string to_string(const Rational& r) { return r.str(); }
std::string to_string(const BigInt& n) { return n.str(); }

AddressSet ones_addresses(const LineWord& w) {
    AddressSet out;
    out.level = w.level();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == Color::one) out.members.push_back(Address::from_index(out.level, i));
    }
    return out;
}

LineWord word_from_addresses(const AddressSet& set) {
    require_level_limit(set.level);
    std::vector<Color> bits(std::size_t{1} << set.level, Color::zero);
    for (const auto& a : set.members) {
        if (static_cast<int>(a.size()) != set.level) fail(ErrorCode::invalid_argument, "address length differs from level");
        bits[a.index()] = Color::one;
    }
    return LineWord(std::move(bits));
}

LineWord chi_via_theta(const Substreetution& s, const LineWord& w) {
    AddressSet ones = ones_addresses(w);
    require_level_limit(2 * ones.level);
    AddressSet image;
    image.level = 2 * ones.level;
    for (const auto& a : ones.members) {
        auto t = theta(s, a);
        image.members.insert(image.members.end(), t.members.begin(), t.members.end());
    }
    std::sort(image.members.begin(), image.members.end());
    image.members.erase(std::unique(image.members.begin(), image.members.end()), image.members.end());
    return word_from_addresses(image);
}

LineWord chi_bbab_recursive(const LineWord& w) {
    int level = w.level();
    require_level_limit(2 * level);
    if (level == 0) return w;
    std::size_t half = w.size() / 2;
    LineWord left = chi_bbab_recursive(w.slice(0, half));
    LineWord right = chi_bbab_recursive(w.slice(half, half));
    return right + right + left + right;
}

LineWord chi(const Substreetution& s, const LineWord& w) {
    if (is_bbab_grammar(s)) return chi_bbab_recursive(w);
    return chi_via_theta(s, w);
}

LineWord chi_pow(const Substreetution& s, const LineWord& w, int u) {
    if (u < 0) fail(ErrorCode::invalid_argument, "chi power must be nonnegative");
    int level = w.level();
    LineWord cur = w;
    for (int i = 0; i < u; ++i) {
        level *= 2;
        require_level_limit(level);
        cur = chi(s, cur);
    }
    return cur;
}

int v2(std::int64_t k) {
    if (k <= 0) fail(ErrorCode::non_positive, "valuation needs a positive integer, got " + std::to_string(k));
    int n = 0;
    while ((k & 1) == 0) {
        k >>= 1;
        ++n;
    }
    return n;
}

int v2(const BigInt& k) {
    if (k <= 0) fail(ErrorCode::non_positive, "valuation needs a positive integer");
    return static_cast<int>(boost::multiprecision::lsb(k));
}

ValuationCaseReport verify_valuation_cases(int k_max, int m_max) {
    ValuationCaseReport report;
    for (int k = 1; k <= k_max; ++k) {
        for (int kp = 1; kp <= k_max; ++kp) {
            for (int m = 0; m <= m_max; ++m) {
                BigInt value = (BigInt(1) << k) * (2 * m + 1) + (BigInt(1) << (kp + 1));
                int got = v2(value);
                bool ok;
                if (kp >= k) {
                    ok = got == k;
                } else if (kp == k - 1) {
                    ok = got >= k + 1;
                } else {
                    ok = got == kp + 1;
                }
                ++report.checked;
                if (!ok && report.passed) {
                    report.passed = false;
                    report.first_failure = "k=" + std::to_string(k) + " k'=" + std::to_string(kp) +
                                           " m=" + std::to_string(m);
                }
            }
        }
    }
    return report;
}

Rational f_iter(int n) {
    if (n < 0) fail(ErrorCode::invalid_argument, "iteration count must be nonnegative");
    if (n > 20) fail(ErrorCode::resource_limit, "iteration count too large");
    Rational x = 1;
    for (int i = 0; i < n; ++i) x = x + 1 / x + 1;
    return x;
}

BigInt ones_count_line_2n(int n) {
    if (n < 0) fail(ErrorCode::invalid_argument, "n must be nonnegative");
    if (n > 16) fail(ErrorCode::resource_limit, "n too large");
    Rational value = Rational(BigInt(1) << (std::size_t{1} << n)) / (1 + f_iter(n));
    if (boost::multiprecision::denominator(value) != 1) {
        fail(ErrorCode::non_integer_result, "ones count for n=" + std::to_string(n) + " is " + to_string(value));
    }
    return boost::multiprecision::numerator(value);
}

BigInt ones_count_recurrence(int n) {
    if (n < 0) fail(ErrorCode::invalid_argument, "n must be nonnegative");
    BigInt p = 1;
    BigInt q = 1;
    for (int i = 0; i < n; ++i) {
        BigInt np = p * q;
        BigInt nq = (p + q) * (p + q) - p * q;
        p = np;
        q = nq;
    }
    return p;
}

LineWord line_formula(int m) {
    if (m < 1) fail(ErrorCode::non_positive, "line index must be at least 1");
    require_level_limit(m);
    int u = v2(m);
    LineWord block = chi_pow(builtin_bbab(), LineWord::parse("10"), u);
    return LineWord::repeat(block, (std::size_t{1} << m) / block.size());
}

Rational density(const LineWord& w) {
    if (w.size() == 0) fail(ErrorCode::invalid_argument, "empty word has no density");
    return Rational(BigInt(w.ones()), BigInt(w.size()));
}

bool proportion_check(const LineWord& w, int u) { return density(w) == 1 / (1 + f_iter(u)); }

}  // namespace sst
