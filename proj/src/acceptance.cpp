#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "error.hpp"
#include "examples.hpp"
#include "jacaranda.hpp"
#include "measures.hpp"
#include "preimages.hpp"
#include "render.hpp"
#include "substitution.hpp"
#include "words.hpp"

namespace sst {

namespace {

// Collects the outcome of one check; the first failure is kept as detail.
class Outcome {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && passed_) {
            passed_ = false;
            failure_ = what;
        }
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    bool passed() const { return passed_; }
    std::string detail() const {
        if (passed_) return notes_;
        return notes_.empty() ? failure_ : failure_ + " (" + notes_ + ")";
    }

private:
    bool passed_ = true;
    std::string failure_;
    std::string notes_;
};

using Check = std::function<void(Outcome&, const AcceptanceOptions&)>;

struct Entry {
    int id;
    std::string title;
    Check run;
};

Patch random_patch(std::mt19937_64& rng, int depth) {
    std::vector<Color> nodes((std::size_t{1} << (depth + 1)) - 1);
    for (auto& c : nodes) c = (rng() & 1) ? Color::one : Color::zero;
    return Patch(depth, std::move(nodes));
}

std::string repeat(const std::string& block, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += block;
    return out;
}

void fixed_point_lines(Outcome& o, const AcceptanceOptions&) {
    Patch j = fixed_point_prefix(builtin_bbab(), Color::zero, 16);
    o.expect(j.line(1).str() == "10", "line 1 is " + j.line(1).str());
    o.expect(j.line(2).str() == "0010", "line 2 is " + j.line(2).str());
    o.expect(j.line(4).str() == "0010001000000010", "line 4 is " + j.line(4).str());
    for (int l = 1; l <= 16; ++l) {
        std::string s = j.line(l).str();
        if (l % 2 == 1) o.expect(s == repeat("10", std::size_t{1} << (l - 1)), "odd line " + std::to_string(l));
        if (l % 4 == 2) o.expect(s == repeat("0010", std::size_t{1} << (l - 2)), "line " + std::to_string(l));
    }
    o.note("16 lines checked");
}

void root_only_difference(Outcome& o, const AcceptanceOptions&) {
    Patch j = jacaranda_prefix(16);
    Patch jp = jprime_prefix(16);
    o.expect(j.root() != jp.root(), "roots agree");
    auto a = j.nodes();
    auto b = jp.nodes();
    std::size_t diffs = 0;
    for (std::size_t i = 1; i < a.size(); ++i) diffs += a[i] != b[i];
    o.expect(diffs == 0, std::to_string(diffs) + " non-root differences");
    o.note(std::to_string(a.size()) + " sites");
}

void renormalization(Outcome& o, const AcceptanceOptions&) {
    auto bbab = builtin_bbab();
    auto abba = builtin_abba();
    RenormReport rj = verify_renormalization(bbab, jacaranda_prefix(8), 6);
    o.expect(rj.passed, "J prefix: " + rj.str());
    std::mt19937_64 rng(20240601);
    std::size_t checked = rj.checked;
    for (int i = 0; i < 20; ++i) {
        RenormReport r = verify_renormalization(bbab, random_patch(rng, 6), 6);
        o.expect(r.passed, "random patch " + std::to_string(i) + ": " + r.str());
        checked += r.checked;
    }
    RenormReport ra = verify_renormalization(abba, fixed_point_prefix(abba, Color::zero, 8), 6);
    o.expect(ra.passed, "ABBA fixed point: " + ra.str());
    o.note(std::to_string(checked + ra.checked) + " sites");
}

void line_formula_check(Outcome& o, const AcceptanceOptions&) {
    Patch j = jacaranda_prefix(16);
    for (int m = 1; m <= 16; ++m) o.expect(line_formula(m) == j.line(m), "line " + std::to_string(m));
    o.note("m = 1..16");
}

void ones_counts(Outcome& o, const AcceptanceOptions&) {
    Patch j = jacaranda_prefix(16);
    const std::uint64_t expected[] = {1, 3, 39, 8463};
    std::string seen;
    for (int n = 1; n <= 4; ++n) {
        std::size_t direct = j.line(1 << n).ones();
        Rational formula = Rational(BigInt(1) << (1 << n)) / (1 + f_iter(n));
        o.expect(direct == expected[n - 1], "direct count at n=" + std::to_string(n));
        o.expect(formula == Rational(BigInt(direct)), "formula at n=" + std::to_string(n) + " gives " + to_string(formula));
        seen += (seen.empty() ? "" : ",") + std::to_string(direct);
    }
    o.note("ones = " + seen);
}

void parent_bounds(Outcome& o, const AcceptanceOptions&) {
    Patch j = jacaranda_prefix(14);
    std::string worst_parents;
    std::string worst_pn;
    for (int d = 0; d <= 8; ++d) {
        std::size_t worst = 0;
        for (const auto& c : parent_census(j, d)) worst = std::max(worst, c.parents);
        o.expect(worst <= 3, "depth " + std::to_string(d) + " has a patch with " + std::to_string(worst) + " parents");
        worst_parents += (d ? "," : "") + std::to_string(worst);
        std::uint64_t bound = 1;
        for (int n = 1; n <= 3; ++n) {
            bound *= 3;
            std::size_t w = 0;
            for (const auto& c : pn_census(j, d, n)) w = std::max(w, c.parents);
            o.expect(w <= bound, "p_" + std::to_string(n) + " reaches " + std::to_string(w) + " at depth " +
                                     std::to_string(d));
            if (n == 1) worst_pn += (d ? "," : "") + std::to_string(w);
        }
    }
    o.note("max parents by depth 0..8: " + worst_parents + "; max p_1: " + worst_pn);
}

void classified_vs_oracle(Outcome& o, const AcceptanceOptions& opts) {
    CrosscheckReport r = crosscheck_sweep(jacaranda_prefix(14), 6, opts.threads);
    o.expect(r.ok(), std::to_string(r.mismatches.size()) + " mismatches" +
                         (r.mismatches.empty() ? "" : ", first: " + r.mismatches.front()));
    std::size_t nj = preimages_classified(XDescriptor::jac()).members.size();
    std::size_t njp = preimages_classified(XDescriptor::jac_prime()).members.size();
    o.expect(nj == 3, "T^-1(J) has " + std::to_string(nj) + " members");
    o.expect(njp == 1, "T^-1(J') has " + std::to_string(njp) + " members");
    o.note(std::to_string(r.patches) + " patches, " + std::to_string(r.sites) + " sites, " +
           std::to_string(r.limit_only.size()) + " limit-only");
}

void rigidity(Outcome& o, const AcceptanceOptions&) {
    auto bbab = builtin_bbab();
    std::mt19937_64 rng(77);
    for (int i = 0; i < 100; ++i) {
        Patch p = random_patch(rng, static_cast<int>(rng() % 5));
        o.expect(unsub(bbab, apply(bbab, p)) == p, "round trip failed on " + p.compact());
    }
    Patch j = jacaranda_prefix(18);
    int compared = 0;
    for (int level = 1; level <= 8; ++level) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
            Address site = Address::from_index(level, i);
            Patch b = j.subtree_at(level, i);
            Patch s = j.subtree_at(level, i ^ 1);
            if (b.root() != Color::zero || s.root() != Color::one) continue;
            Patch bro = *brother(XDescriptor::concrete(b, site)).patch;
            int common = std::min(bro.depth(), s.depth());
            o.expect(bro.truncate(common) == s.truncate(common), "brother differs from the sibling of " + site.str());
            ++compared;
        }
    }
    o.expect(compared > 0, "no 1-rooted siblings found");
    o.note("100 round trips, " + std::to_string(compared) + " siblings");
}

void thue_morse(Outcome& o, const AcceptanceOptions&) {
    std::string w = tm_project(fixed_point_prefix(builtin_thue_morse(), Color::zero, 15)).str();
    o.expect(w == "0110100110010110", "projection is " + w);
    o.note(w);
}

void abba(Outcome& o, const AcceptanceOptions&) {
    Patch p = fixed_point_prefix(builtin_abba(), Color::zero, 12);
    std::size_t sites = 0;
    for (int l = 0; l <= 12; ++l) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << l); ++i) {
            ++sites;
            Address w = Address::from_index(l, i);
            o.expect(abba_digit(Color::zero, w) == p.at(l, i), "digit differs at " + w.str());
        }
    }
    o.expect(abba_nonminimal_witness(10), "0A at b a^n is not 1 for some n <= 10");
    o.note(std::to_string(sites) + " sites, witness n <= 10");
}

void no_measure(Outcome& o, const AcceptanceOptions&) {
    OrbitGraph g = nomeasure_orbit_graph(6);
    o.expect(g.size() == 6, std::to_string(g.size()) + " states");
    if (g.size() == 6 && g.find("0A")) {
        const char* figure[][3] = {{"0A", "B", "C"}, {"1A", "D", "E"}, {"B", "0A", "0A"},
                                   {"C", "0A", "1A"}, {"D", "1A", "1A"}, {"E", "1A", "0A"}};
        for (const auto& row : figure) {
            int s = *g.find(row[0]);
            o.expect(g.names[g.a_edge[s]] == row[1] && g.names[g.b_edge[s]] == row[2],
                     std::string("edges of ") + row[0] + " differ from the figure");
        }
    }
    MeasureResult r = invariant_measure(g);
    o.expect(!r.feasible, "the orbit has an invariant probability");
    OrbitGraph loop;
    loop.names = {"x"};
    loop.a_edge = {0};
    loop.b_edge = {0};
    MeasureResult l = invariant_measure(loop);
    o.expect(l.feasible && l.mu == std::vector<Rational>{1}, "one-state loop is not mu = 1");
    o.note("6 states, infeasible; loop feasible with mu = 1");
}

void property_suites(Outcome& o, const AcceptanceOptions&) {
    auto bbab = builtin_bbab();
    std::size_t words = 0;
    for (int l = 0; l <= 4; ++l) {
        std::size_t len = std::size_t{1} << l;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
            std::vector<Color> v(len);
            for (std::size_t k = 0; k < len; ++k) v[k] = color_from_int(static_cast<int>((bits >> (len - 1 - k)) & 1));
            LineWord w(std::move(v));
            o.expect(chi_bbab_recursive(w) == chi_via_theta(bbab, w), "chi differs on " + w.str());
            ++words;
        }
    }
    LineWord ten = LineWord::parse("10");
    for (int u = 2; u <= 4; ++u) {
        LineWord c = chi_pow(bbab, ten, u);
        std::size_t h = c.size() / 2;
        o.expect(c.slice(0, h).has_one() && c.slice(h, h).has_one(), "a half of chi^" + std::to_string(u) + "(10) has no 1");
    }
    std::vector<Rational> dens;
    for (int u = 0; u <= 4; ++u) dens.push_back(density(chi_pow(bbab, ten, u)));
    for (std::size_t a = 0; a < dens.size(); ++a) {
        for (std::size_t b = a + 1; b < dens.size(); ++b) {
            o.expect(dens[a] != dens[b], "densities at u=" + std::to_string(a) + "," + std::to_string(b) + " agree");
        }
    }
    o.note(std::to_string(words) + " words");
}

void render_determinism(Outcome& o, const AcceptanceOptions& opts) {
    Generators g = make_generators();
    const Complex i{0, 1};
    auto near = [](Complex a, Complex b) { return std::abs(a - b) < 1e-12; };
    o.expect(near(g.h1(-0.5), 0.5), "h1(-1/2) != 1/2");
    o.expect(near(g.h1(1), 1) && near(g.h1(-1), -1), "h1 moves +-1");
    o.expect(near(g.h1(0), 0.8), "h1(0) != 4/5");
    o.expect(near(g.h2(-0.5 * i), 0.5 * i), "h2(-i/2) != i/2");
    o.expect(near(g.h2(i), i) && near(g.h2(-i), -i), "h2 moves +-i");
    Patch j = jacaranda_prefix(8);
    RenderConfig cfg;
    o.expect(tree_svg(j, cfg) == tree_svg(j, cfg), "tree_svg differs between runs");
    cfg.resolution = 128;
    cfg.depth_limit = 5;
    cfg.threads = 1;
    std::string one = tiling_svg(j, cfg);
    cfg.threads = std::max(2, opts.threads);
    o.expect(tiling_svg(j, cfg) == one, "tiling_svg depends on the thread count");
    o.expect(tiling_svg(j, cfg) == one, "tiling_svg differs between runs");
    o.note("1 and " + std::to_string(cfg.threads) + " threads");
}

void probe_zero_at_even(Outcome& o, const AcceptanceOptions&) {
    auto r = zero_at_even_within(jacaranda_prefix(14), 10);
    o.expect(r.holds, "some path of length 10 avoids 0 at even levels");
    if (r.minimal) o.note("minimal N on the prefix = " + std::to_string(*r.minimal));
}

void probe_recurrence(Outcome& o, const AcceptanceOptions&) {
    Patch j = jacaranda_prefix(14);
    auto r0 = recurrence_probe(j, 0);
    auto r1 = recurrence_probe(j, 1);
    o.expect(r0.n <= 10, "N_0 = " + std::to_string(r0.n));
    o.note("N_0 = " + std::to_string(r0.n) + ", N_1 = " + std::to_string(r1.n));
    try {
        recurrence_probe(fixed_point_prefix(builtin_abba(), Color::zero, 14), 1);
        o.expect(false, "ABBA prefix looks recurrent");
    } catch (const Error& e) {
        o.expect(e.code() == ErrorCode::not_found, std::string("ABBA probe: ") + e.what());
    }
}

void probe_not_closed(Outcome& o, const AcceptanceOptions&) {
    try {
        build_orbit_graph(jacaranda_prefix(12), 4);
        o.expect(false, "J prefix closed at depth 4");
    } catch (const Error& e) {
        o.expect(e.code() == ErrorCode::not_closed, e.what());
        o.note("J prefix: NotClosed at depth 4");
    }
}

CheckResult run_one(const std::string& id, const std::string& title, const Check& check, const AcceptanceOptions& opts) {
    CheckResult r{id, title, false, "", 0};
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        check(o, opts);
        r.passed = o.passed();
        r.detail = o.detail();
    } catch (const std::exception& e) {
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

bool AcceptanceReport::all_passed() const { return failed_ids().empty(); }

std::vector<std::string> AcceptanceReport::failed_ids() const {
    std::vector<std::string> out;
    for (const auto* list : {&criteria, &probes}) {
        for (const auto& c : *list) {
            if (!c.passed) out.push_back(c.id);
        }
    }
    return out;
}

std::string AcceptanceReport::table() const {
    std::ostringstream o;
    for (const auto& c : criteria) {
        o << "criterion " << c.id << ' ' << (c.passed ? "PASS" : "FAIL") << ' ' << c.title;
        if (!c.detail.empty()) o << ": " << c.detail;
        o << '\n';
    }
    for (const auto& c : probes) {
        o << "probe " << c.id << ' ' << (c.passed ? "PASS" : "FAIL") << ' ' << c.title;
        if (!c.detail.empty()) o << ": " << c.detail;
        o << '\n';
    }
    return o.str();
}

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    static const std::vector<Entry> criteria{
        {1, "fixed-point lines of J", fixed_point_lines},
        {2, "J and J' differ only at the root", root_only_difference},
        {3, "renormalization equation", renormalization},
        {4, "closed line formula", line_formula_check},
        {5, "ones counts on lines 2^n", ones_counts},
        {6, "at most 3 parents and p_n <= 3^n", parent_bounds},
        {7, "classified preimages vs brute force", classified_vs_oracle},
        {8, "unsubstitution and brother round trips", rigidity},
        {9, "Thue-Morse projection", thue_morse},
        {10, "ABBA digit law and witness", abba},
        {11, "periodic orbit without invariant measure", no_measure},
        {12, "chi and density property suites", property_suites},
        {13, "render determinism and generators", render_determinism},
    };
    static const std::vector<std::pair<std::string, std::pair<std::string, Check>>> probes{
        {"zero-at-even", {"0 at an even level within 10 steps", probe_zero_at_even}},
        {"recurrence", {"recurrence windows of J, none for ABBA", probe_recurrence}},
        {"not-closed", {"J does not close into a finite orbit", probe_not_closed}},
    };
    AcceptanceReport report;
    for (const auto& e : criteria) {
        if (!opts.only.empty() && !opts.only.count(e.id)) continue;
        report.criteria.push_back(run_one(std::to_string(e.id), e.title, e.run, opts));
        if (opts.fail_fast && !report.criteria.back().passed) return report;
    }
    if (!opts.only.empty()) return report;
    for (const auto& [id, p] : probes) {
        report.probes.push_back(run_one(id, p.first, p.second, opts));
        if (opts.fail_fast && !report.probes.back().passed) return report;
    }
    return report;
}

}  // namespace sst
