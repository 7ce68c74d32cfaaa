// substreet: command-line front end over the C interface in substreet/substreet.h.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "substreet/substreet.h"

namespace {

enum Exit { ok = 0, usage = 1, operation = 2, check_failed = 3 };

struct OpFailure {
    std::string message;
};

void check(sst_status s) {
    if (s != SST_OK) throw OpFailure{sst_last_error()};
}

struct StrFree {
    void operator()(char* s) const { sst_string_free(s); }
};
struct PatchFree {
    void operator()(sst_patch* p) const { sst_patch_free(p); }
};
struct SubFree {
    void operator()(sst_sub* p) const { sst_sub_free(p); }
};
struct GraphFree {
    void operator()(sst_graph* p) const { sst_graph_free(p); }
};
using Str = std::unique_ptr<char, StrFree>;
using Patch = std::unique_ptr<sst_patch, PatchFree>;
using Sub = std::unique_ptr<sst_sub, SubFree>;
using Graph = std::unique_ptr<sst_graph, GraphFree>;

// Calls f(char**) and takes ownership of the string it fills in.
template <class F>
std::string take(F&& f) {
    char* raw = nullptr;
    check(f(&raw));
    Str owned(raw);
    return owned ? std::string(owned.get()) : std::string();
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OpFailure{"NotFound: cannot read '" + path + "'"};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text)) throw OpFailure{"InvalidArgument: cannot write '" + out + "'"};
}

std::string with_newline(std::string s) {
    if (s.empty() || s.back() != '\n') s += '\n';
    return s;
}

Patch load_patch(const std::string& path) {
    sst_patch* p = nullptr;
    check(sst_patch_parse(slurp(path).c_str(), &p));
    return Patch(p);
}

// builtin:NAME, a bare builtin name, a file holding the text format, or the
// text itself.
Sub load_sub(const std::string& spec) {
    std::string text = spec;
    std::error_code ec;
    if (spec.rfind("builtin:", 0) != 0 && std::filesystem::is_regular_file(spec, ec)) text = slurp(spec);
    sst_sub* s = nullptr;
    check(sst_sub_parse(text.c_str(), &s));
    return Sub(s);
}

std::string patch_text(const sst_patch* p) {
    return take([&](char** o) { return sst_patch_format(p, o); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Substitutions on 2-colored binary trees: fixed points, preimages, orbit graphs and figures."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(sst_version()));
    int threads = 1;
    app.add_option("--threads", threads, "Worker threads for rendering and verification")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();

    std::string sub_spec = "builtin:bbab";
    std::string patch_path;
    std::string out_path;
    std::string addr;
    std::string word;
    std::string site;
    int root = 0;
    int depth = 0;
    int level = 0;
    int pow = 1;
    int times = 1;
    int maxlen = 6;
    int n = 0;
    int max_n = 0;
    int resolution = 512;
    std::string jprefix_path;
    bool classified = false;
    std::string example;
    std::string graph_path;
    bool certificate = false;
    bool fail_fast = false;

    auto sub_option = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--sub", sub_spec, "builtin:bbab|builtin:tm|builtin:abba, a file, or inline text");
        if (required) o->required();
        else o->capture_default_str();
    };
    auto patch_option = [&](CLI::App* c) {
        c->add_option("--patch", patch_path, "Patch file in the depth/lines text format ('-' for stdin)")->required();
    };
    auto out_option = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("--out", out_path, required ? "Output file" : "Output file (stdout when omitted)");
        if (required) o->required();
    };

    auto* fixpoint = app.add_subcommand("fixpoint", "Prefix of the fixed point of a substreetution");
    sub_option(fixpoint, true);
    fixpoint->add_option("--root", root, "Root color")->check(CLI::IsMember({0, 1}))->capture_default_str();
    fixpoint->add_option("--depth", depth, "Prefix depth")->required()->check(CLI::NonNegativeNumber);
    out_option(fixpoint, false);

    auto* line = app.add_subcommand("line", "One level of a patch as a 0/1 word");
    patch_option(line);
    line->add_option("--level", level, "Level m")->required();

    auto* chi = app.add_subcommand("chi", "Apply the chi word map u times");
    chi->add_option("--word", word, "Word over {0,1} of length a power of two")->required();
    chi->add_option("--pow", pow, "Number of applications")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub_option(chi, false);

    auto* theta = app.add_subcommand("theta", "Addresses whose source is the given address ('e' is empty)");
    theta->add_option("--addr", addr, "Address over {a,b}")->required();
    sub_option(theta, false);

    auto* source = app.add_subcommand("source", "Source of an even-length address");
    source->add_option("--addr", addr, "Address over {a,b}")->required();
    sub_option(source, false);

    auto* renorm = app.add_subcommand("verify-renorm", "Check the renormalization equation on a fixed point");
    sub_option(renorm, false);
    renorm->add_option("--depth", depth, "Fixed-point depth")->required()->check(CLI::NonNegativeNumber);
    renorm->add_option("--maxlen", maxlen, "Longest address checked")->check(CLI::NonNegativeNumber)->capture_default_str();

    auto* type = app.add_subcommand("type", "Parity and form of a patch");
    patch_option(type);

    auto* unsub = app.add_subcommand("unsub", "Undo the substreetution u times");
    patch_option(unsub);
    unsub->add_option("--times", times, "Number of steps")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub_option(unsub, false);
    out_option(unsub, false);

    auto* brother = app.add_subcommand("brother", "The 1-rooted brother of a 0-rooted patch");
    patch_option(brother);
    brother->add_option("--site", site, "Site of the patch, fixing its type by length");
    out_option(brother, false);

    auto* preimages = app.add_subcommand("preimages", "Parents of a patch, or p_n with --n");
    patch_option(preimages);
    preimages->add_option("--jprefix", jprefix_path, "Prefix searched for parents");
    preimages->add_option("--n", n, "Count n-step preimages")->check(CLI::PositiveNumber);
    preimages->add_flag("--classified", classified, "Use the case analysis instead of brute force");
    preimages->add_option("--site", site, "Site of the patch for the case analysis");

    auto* complexity = app.add_subcommand("complexity", "Distinct depth-n subpatches for n = 0..N");
    patch_option(complexity);
    complexity->add_option("--max-n", max_n, "Largest n")->required();

    auto* proportion = app.add_subcommand("proportion", "Proportion of ones on line 2^n of J as p/q");
    proportion->add_option("--n", n, "Exponent n")->required();

    auto* orbit = app.add_subcommand("orbit-graph", "Orbit graph of a periodic tree");
    orbit->add_option("--example", example, "Built-in example")->check(CLI::IsMember({"nomeasure"}));
    orbit->add_option("--patch", patch_path, "Seed patch file");
    orbit->add_option("--depth", depth, "Identification depth")->required();
    out_option(orbit, false);

    auto* measure = app.add_subcommand("measure-check", "Look for an invariant probability on an orbit graph");
    measure->add_option("--graph", graph_path, "Graph file ('-' for stdin)")->required();
    measure->add_flag("--certificate", certificate, "Append the balance rows and multipliers as comments");

    auto* render_tree = app.add_subcommand("render-tree", "Draw a patch as an SVG tree");
    patch_option(render_tree);
    render_tree->add_option("--res", resolution, "Canvas size in pixels")->capture_default_str();
    out_option(render_tree, true);

    auto* render_tiling = app.add_subcommand("render-tiling", "Color the Poincare-disk tiling by a patch");
    patch_option(render_tiling);
    render_tiling->add_option("--depth", depth, "Word length L")->required();
    render_tiling->add_option("--res", resolution, "Canvas size in pixels")->capture_default_str();
    out_option(render_tiling, true);

    auto* verify = app.add_subcommand("verify-paper", "Run every acceptance check and print a pass/fail table");
    verify->add_flag("--fail-fast", fail_fast, "Stop at the first failing check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    try {
        if (*fixpoint) {
            Sub s = load_sub(sub_spec);
            sst_patch* p = nullptr;
            check(sst_fixpoint(s.get(), root, depth, &p));
            Patch owned(p);
            emit(patch_text(p), out_path);
        } else if (*line) {
            Patch p = load_patch(patch_path);
            emit(with_newline(take([&](char** o) { return sst_patch_line(p.get(), level, o); })), "");
        } else if (*chi) {
            Sub s = load_sub(sub_spec);
            emit(with_newline(take([&](char** o) { return sst_chi(s.get(), word.c_str(), pow, o); })), "");
        } else if (*theta) {
            Sub s = load_sub(sub_spec);
            emit(take([&](char** o) { return sst_theta(s.get(), addr.c_str(), o); }), "");
        } else if (*source) {
            Sub s = load_sub(sub_spec);
            emit(with_newline(take([&](char** o) { return sst_source(s.get(), addr.c_str(), o); })), "");
        } else if (*renorm) {
            Sub s = load_sub(sub_spec);
            int passed = 0;
            emit(with_newline(take([&](char** o) { return sst_verify_renorm(s.get(), depth, maxlen, o, &passed); })), "");
            if (!passed) return Exit::check_failed;
        } else if (*type) {
            Patch p = load_patch(patch_path);
            emit(with_newline(take([&](char** o) { return sst_type(p.get(), o); })), "");
        } else if (*unsub) {
            Sub s = load_sub(sub_spec);
            Patch p = load_patch(patch_path);
            sst_patch* r = nullptr;
            check(sst_unsub(s.get(), p.get(), times, &r));
            Patch owned(r);
            emit(patch_text(r), out_path);
        } else if (*brother) {
            Patch p = load_patch(patch_path);
            sst_patch* r = nullptr;
            check(sst_brother(p.get(), site.empty() ? nullptr : site.c_str(), &r));
            Patch owned(r);
            emit(patch_text(r), out_path);
        } else if (*preimages) {
            Patch p = load_patch(patch_path);
            Patch j;
            if (!jprefix_path.empty()) j = load_patch(jprefix_path);
            if (!j && (preimages->count("--n") || !classified)) {
                throw CLI::RequiredError("--jprefix");
            }
            std::string text;
            if (preimages->count("--n")) {
                text = take([&](char** o) { return sst_p_n(p.get(), n, j.get(), o); });
            } else {
                const char* where = site.empty() ? nullptr : site.c_str();
                text = take([&](char** o) { return sst_preimages(p.get(), j.get(), classified ? 1 : 0, where, o); });
            }
            emit(with_newline(text), "");
        } else if (*complexity) {
            Patch p = load_patch(patch_path);
            emit(take([&](char** o) { return sst_complexity(p.get(), max_n, o); }), "");
        } else if (*proportion) {
            emit(with_newline(take([&](char** o) { return sst_proportion(n, o); })), "");
        } else if (*orbit) {
            if (example.empty() == patch_path.empty()) throw CLI::ValidationError("give exactly one of --example and --patch");
            sst_graph* g = nullptr;
            if (!example.empty()) {
                check(sst_graph_nomeasure(depth, &g));
            } else {
                Patch p = load_patch(patch_path);
                check(sst_graph_from_patch(p.get(), depth, &g));
            }
            Graph owned(g);
            emit(take([&](char** o) { return sst_graph_format(g, o); }), out_path);
        } else if (*measure) {
            sst_graph* g = nullptr;
            check(sst_graph_parse(slurp(graph_path).c_str(), &g));
            Graph owned(g);
            emit(take([&](char** o) { return sst_measure_check(g, certificate ? 1 : 0, o, nullptr); }), "");
        } else if (*render_tree) {
            Patch p = load_patch(patch_path);
            emit(take([&](char** o) { return sst_render_tree(p.get(), resolution, o); }), out_path);
        } else if (*render_tiling) {
            Patch p = load_patch(patch_path);
            emit(take([&](char** o) { return sst_render_tiling(p.get(), depth, resolution, threads, o); }), out_path);
        } else if (*verify) {
            int all = 0;
            char* failed_raw = nullptr;
            std::string table = take([&](char** o) {
                return sst_run_acceptance(threads, fail_fast ? 1 : 0, o, &all, &failed_raw);
            });
            Str failed(failed_raw);
            std::cout << table;
            if (all) {
                std::cout << "all checks passed\n";
                return Exit::ok;
            }
            std::cout << "failed: " << failed.get() << '\n';
            return Exit::check_failed;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Exit::ok : Exit::usage;
    } catch (const OpFailure& f) {
        std::cerr << "error: " << f.message << '\n';
        return Exit::operation;
    }
    return Exit::ok;
}
