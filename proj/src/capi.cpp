#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "acceptance.hpp"
#include "error.hpp"
#include "examples.hpp"
#include "jacaranda.hpp"
#include "measures.hpp"
#include "preimages.hpp"
#include "render.hpp"
#include "substitution.hpp"
#include "substreet/substreet.h"
#include "tree.hpp"
#include "words.hpp"

struct sst_patch {
    sst::Patch value;
};

struct sst_sub {
    sst::Substreetution value;
};

struct sst_graph {
    sst::OrbitGraph value;
};

namespace {

thread_local std::string last_error;

template <class F>
sst_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return SST_OK;
    } catch (const sst::Error& e) {
        last_error = e.what();
        return static_cast<sst_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "ResourceLimit: out of memory";
        return SST_RESOURCE_LIMIT;
    } catch (const std::exception& e) {
        last_error = std::string("Internal: ") + e.what();
        return SST_INTERNAL;
    }
}

template <class T>
const T& need(const T* p, const char* what) {
    if (!p) sst::fail(sst::ErrorCode::invalid_argument, std::string(what) + " is NULL");
    return *p;
}

void need_out(const void* out) {
    if (!out) sst::fail(sst::ErrorCode::invalid_argument, "output pointer is NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const char* text(const char* s, const char* what) {
    if (!s) sst::fail(sst::ErrorCode::invalid_argument, std::string(what) + " is NULL");
    return s;
}

sst::Address address(const char* s) {
    std::string w = text(s, "address");
    return w == "e" ? sst::Address() : sst::Address(w);
}

std::string address_str(const sst::Address& a) { return a.empty() ? "e" : a.str(); }

sst::Substreetution sub_or_default(const sst_sub* s) { return s ? s->value : sst::builtin_bbab(); }

}  // namespace

extern "C" {

const char* sst_version(void) { return "1.0.0"; }

const char* sst_last_error(void) { return last_error.c_str(); }

const char* sst_status_name(sst_status status) {
    if (status == SST_OK) return "Ok";
    if (status == SST_INTERNAL) return "Internal";
    if (status < SST_ADDRESS_TOO_DEEP || status > SST_RESOURCE_LIMIT) return "Unknown";
    return sst::error_name(static_cast<sst::ErrorCode>(status));
}

void sst_string_free(char* s) { std::free(s); }

sst_status sst_sub_parse(const char* t, sst_sub** out) {
    return guarded([&] {
        need_out(out);
        *out = new sst_sub{sst::parse_substreetution(text(t, "text"))};
    });
}

sst_status sst_sub_format(const sst_sub* sub, char** out) {
    return guarded([&] {
        need_out(out);
        *out = dup(sst::format_substreetution(need(sub, "sub").value));
    });
}

void sst_sub_free(sst_sub* sub) { delete sub; }

sst_status sst_patch_parse(const char* t, sst_patch** out) {
    return guarded([&] {
        need_out(out);
        *out = new sst_patch{sst::parse_patch(text(t, "text"))};
    });
}

sst_status sst_patch_format(const sst_patch* p, char** out) {
    return guarded([&] {
        need_out(out);
        *out = dup(sst::format_patch(need(p, "patch").value));
    });
}

sst_status sst_patch_depth(const sst_patch* p, int* out) {
    return guarded([&] {
        need_out(out);
        *out = need(p, "patch").value.depth();
    });
}

sst_status sst_patch_line(const sst_patch* p, int level, char** out) {
    return guarded([&] {
        need_out(out);
        const auto& patch = need(p, "patch").value;
        if (level < 0 || level > patch.depth()) {
            sst::fail(sst::ErrorCode::address_too_deep,
                      "level " + std::to_string(level) + " outside 0.." + std::to_string(patch.depth()));
        }
        *out = dup(patch.line(level).str());
    });
}

void sst_patch_free(sst_patch* p) { delete p; }

sst_status sst_fixpoint(const sst_sub* sub, int root, int depth, sst_patch** out) {
    return guarded([&] {
        need_out(out);
        if (root != 0 && root != 1) sst::fail(sst::ErrorCode::invalid_argument, "root must be 0 or 1");
        *out = new sst_patch{sst::fixed_point_prefix(need(sub, "sub").value, sst::color_from_int(root), depth)};
    });
}

sst_status sst_chi(const sst_sub* sub, const char* word, int times, char** out) {
    return guarded([&] {
        need_out(out);
        *out = dup(sst::chi_pow(sub_or_default(sub), sst::LineWord::parse(text(word, "word")), times).str());
    });
}

sst_status sst_theta(const sst_sub* sub, const char* addr, char** out) {
    return guarded([&] {
        need_out(out);
        sst::ThetaResult r = sst::theta(need(sub, "sub").value, address(addr));
        std::string s;
        for (const auto& m : r.members) s += address_str(m) + "\n";
        if (r.warning) s += "# " + *r.warning + "\n";
        *out = dup(s);
    });
}

sst_status sst_source(const sst_sub* sub, const char* addr, char** out) {
    return guarded([&] {
        need_out(out);
        *out = dup(address_str(sst::source(need(sub, "sub").value, address(addr))));
    });
}

sst_status sst_proportion(int n, char** out) {
    return guarded([&] {
        need_out(out);
        if (n < 0) sst::fail(sst::ErrorCode::invalid_argument, "n must be nonnegative");
        sst::Rational r(sst::ones_count_line_2n(n), sst::BigInt(1) << (std::size_t{1} << n));
        *out = dup(sst::to_string(r));
    });
}

sst_status sst_verify_renorm(const sst_sub* sub, int depth, int maxlen, char** report, int* passed) {
    return guarded([&] {
        need_out(report);
        need_out(passed);
        const auto& s = need(sub, "sub").value;
        sst::Color root = s.fixable(sst::Color::zero) ? sst::Color::zero : sst::Color::one;
        sst::RenormReport r = sst::verify_renormalization(s, sst::fixed_point_prefix(s, root, depth), maxlen);
        *report = dup(r.str());
        *passed = r.passed ? 1 : 0;
    });
}

sst_status sst_type(const sst_patch* p, char** out) {
    return guarded([&] {
        need_out(out);
        *out = dup(sst::detect_type(need(p, "patch").value).str());
    });
}

sst_status sst_unsub(const sst_sub* sub, const sst_patch* p, int times, sst_patch** out) {
    return guarded([&] {
        need_out(out);
        if (times < 0) sst::fail(sst::ErrorCode::invalid_argument, "times must be nonnegative");
        sst::Substreetution s = sub_or_default(sub);
        sst::Patch cur = need(p, "patch").value;
        for (int i = 0; i < times; ++i) cur = sst::unsub(s, cur);
        *out = new sst_patch{std::move(cur)};
    });
}

sst_status sst_brother(const sst_patch* p, const char* site, sst_patch** out) {
    return guarded([&] {
        need_out(out);
        std::optional<sst::Address> where;
        if (site) where = address(site);
        sst::XDescriptor b = sst::brother(sst::XDescriptor::concrete(need(p, "patch").value, where));
        *out = new sst_patch{*b.patch};
    });
}

sst_status sst_complexity(const sst_patch* p, int max_n, char** out) {
    return guarded([&] {
        need_out(out);
        const auto& patch = need(p, "patch").value;
        if (max_n < 0 || max_n > patch.depth()) {
            sst::fail(sst::ErrorCode::address_too_deep, "max-n must lie in 0.." + std::to_string(patch.depth()));
        }
        std::string s;
        for (int n = 0; n <= max_n; ++n) {
            s += std::to_string(n) + " " + std::to_string(sst::distinct_subpatches(patch, n).count()) + "\n";
        }
        *out = dup(s);
    });
}

sst_status sst_preimages(const sst_patch* a, const sst_patch* jprefix, int classified, const char* site, char** out) {
    return guarded([&] {
        need_out(out);
        const auto& patch = need(a, "patch").value;
        if (classified) {
            std::optional<sst::Address> where;
            if (site) where = address(site);
            *out = dup(sst::preimages_classified(sst::XDescriptor::concrete(patch, where)).str());
        } else {
            *out = dup(sst::preimages_bruteforce(patch, need(jprefix, "jprefix").value).str());
        }
    });
}

sst_status sst_p_n(const sst_patch* a, int n, const sst_patch* jprefix, char** out) {
    return guarded([&] {
        need_out(out);
        sst::PnResult r = sst::p_n(need(a, "patch").value, n, need(jprefix, "jprefix").value);
        *out = dup("p_n=" + std::to_string(r.value) + " bound=" + std::to_string(r.bound) +
                   " within_bound=" + (r.within_bound ? "yes" : "no"));
    });
}

sst_status sst_graph_nomeasure(int depth, sst_graph** out) {
    return guarded([&] {
        need_out(out);
        *out = new sst_graph{sst::nomeasure_orbit_graph(depth)};
    });
}

sst_status sst_graph_from_patch(const sst_patch* seed, int depth, sst_graph** out) {
    return guarded([&] {
        need_out(out);
        *out = new sst_graph{sst::build_orbit_graph(need(seed, "seed").value, depth)};
    });
}

sst_status sst_graph_parse(const char* t, sst_graph** out) {
    return guarded([&] {
        need_out(out);
        *out = new sst_graph{sst::parse_orbit_graph(text(t, "text"))};
    });
}

sst_status sst_graph_format(const sst_graph* g, char** out) {
    return guarded([&] {
        need_out(out);
        const auto& graph = need(g, "graph").value;
        std::string s;
        if (graph.depth_used > 0) {
            s += "# identification depth " + std::to_string(graph.depth_used) + "\n";
            s += std::string("# periodic ") + (graph.periodic() ? "yes" : "no") + "\n";
        }
        for (const auto& w : graph.warnings) s += "# warning: " + w + "\n";
        *out = dup(s + sst::format_orbit_graph(graph));
    });
}

sst_status sst_graph_size(const sst_graph* g, int* out) {
    return guarded([&] {
        need_out(out);
        *out = static_cast<int>(need(g, "graph").value.size());
    });
}

void sst_graph_free(sst_graph* g) { delete g; }

sst_status sst_measure_check(const sst_graph* g, int certificate, char** out, int* feasible) {
    return guarded([&] {
        need_out(out);
        const auto& graph = need(g, "graph").value;
        sst::MeasureResult r = sst::invariant_measure(graph);
        std::string s = r.str(graph);
        if (certificate) {
            std::istringstream lines(r.certificate(graph));
            for (std::string line; std::getline(lines, line);) s += "# " + line + "\n";
        }
        *out = dup(s);
        if (feasible) *feasible = r.feasible ? 1 : 0;
    });
}

sst_status sst_render_tree(const sst_patch* p, int resolution, char** out) {
    return guarded([&] {
        need_out(out);
        sst::RenderConfig cfg;
        if (resolution <= 0) sst::fail(sst::ErrorCode::invalid_argument, "resolution must be positive");
        cfg.resolution = resolution;
        *out = dup(sst::tree_svg(need(p, "patch").value, cfg));
    });
}

sst_status sst_render_tiling(const sst_patch* p, int depth_limit, int resolution, int threads, char** out) {
    return guarded([&] {
        need_out(out);
        sst::RenderConfig cfg;
        cfg.depth_limit = depth_limit;
        cfg.resolution = resolution;
        cfg.threads = threads;
        *out = dup(sst::tiling_svg(need(p, "patch").value, cfg));
    });
}

sst_status sst_run_acceptance(int threads, int fail_fast, char** table, int* all_passed, char** failed) {
    return guarded([&] {
        need_out(table);
        need_out(all_passed);
        sst::AcceptanceOptions opts;
        opts.threads = threads > 0 ? threads : 1;
        opts.fail_fast = fail_fast != 0;
        sst::AcceptanceReport r = sst::run_acceptance(opts);
        std::string ids;
        for (const auto& id : r.failed_ids()) ids += (ids.empty() ? "" : " ") + id;
        *table = dup(r.table());
        *all_passed = r.all_passed() ? 1 : 0;
        if (failed) *failed = dup(ids);
    });
}

}  // extern "C"
