#include "substitution.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "error.hpp"

namespace sst {

namespace {

constexpr std::size_t kMaxThetaMembers = std::size_t{1} << 22;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const char* kSlotNames[4] = {"aa", "ab", "ba", "bb"};

}  // namespace

Substreetution::Substreetution(Image zero, Image one, std::array<Letter, 4> grammar)
    : images_{zero, one}, grammar_(grammar) {}

std::string Substreetution::grammar_string() const {
    std::string s;
    for (Letter l : grammar_) s.push_back(l == Letter::A ? 'A' : 'B');
    return s;
}

bool Substreetution::uses_letter(Letter l) const {
    return std::find(grammar_.begin(), grammar_.end(), l) != grammar_.end();
}

std::optional<int> Substreetution::first_slot(Letter l) const {
    for (int s = 0; s < 4; ++s) {
        if (grammar_[static_cast<std::size_t>(s)] == l) return s;
    }
    return std::nullopt;
}

std::optional<Color> Substreetution::preimage_of_root(Color c) const {
    if (images_[0].root == c && images_[1].root != c) return Color::zero;
    if (images_[1].root == c && images_[0].root != c) return Color::one;
    return std::nullopt;
}

Substreetution builtin_bbab() {
    return Substreetution({Color::zero, Color::one, Color::zero}, {Color::one, Color::one, Color::zero},
                          {Letter::B, Letter::B, Letter::A, Letter::B});
}

Substreetution builtin_thue_morse() {
    return Substreetution({Color::zero, Color::one, Color::one}, {Color::one, Color::zero, Color::zero},
                          {Letter::A, Letter::B, Letter::A, Letter::B});
}

Substreetution builtin_abba() {
    return Substreetution({Color::zero, Color::zero, Color::one}, {Color::one, Color::one, Color::zero},
                          {Letter::A, Letter::B, Letter::B, Letter::A});
}

Substreetution parse_substreetution(std::string_view text) {
    std::string t = trim(std::string(text));
    std::string name = t;
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    if (name == "bbab" || name == "jacaranda" || name == "bbab-jacaranda") return builtin_bbab();
    if (name == "tm" || name == "thue-morse") return builtin_thue_morse();
    if (name == "abba") return builtin_abba();
    if (t.rfind("builtin:", 0) == 0) fail(ErrorCode::parse_error, "unknown builtin '" + name + "'");

    static const std::regex image_re(R"(^([01])\s*->\s*([01])\s*\(\s*([01])\s*,\s*([01])\s*\)$)");
    static const std::regex grammar_re(R"(^grammar\s+([AB]{4})$)");
    std::optional<Image> images[2];
    std::optional<std::array<Letter, 4>> grammar;
    std::istringstream in(t);
    std::string raw;
    while (std::getline(in, raw)) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        std::smatch m;
        if (std::regex_match(line, m, image_re)) {
            int c = m[1].str()[0] - '0';
            if (images[c]) fail(ErrorCode::parse_error, "image of " + m[1].str() + " given twice");
            images[c] = Image{color_from_char(m[2].str()[0]), color_from_char(m[3].str()[0]),
                              color_from_char(m[4].str()[0])};
        } else if (std::regex_match(line, m, grammar_re)) {
            if (grammar) fail(ErrorCode::parse_error, "grammar given twice");
            std::array<Letter, 4> g{};
            for (std::size_t i = 0; i < 4; ++i) g[i] = m[1].str()[i] == 'A' ? Letter::A : Letter::B;
            grammar = g;
        } else {
            fail(ErrorCode::parse_error, "unrecognized substreetution line: '" + line + "'");
        }
    }
    if (!images[0] || !images[1] || !grammar) {
        fail(ErrorCode::parse_error, "substreetution needs images of 0 and 1 and a grammar line");
    }
    return Substreetution(*images[0], *images[1], *grammar);
}

std::string format_substreetution(const Substreetution& s) {
    std::string out;
    for (int c = 0; c < 2; ++c) {
        const Image& im = s.image(color_from_int(c));
        out += std::to_string(c) + " -> " + to_char(im.root) + "(" + to_char(im.a) + "," + to_char(im.b) + ")\n";
    }
    out += "grammar " + s.grammar_string() + "\n";
    return out;
}

std::uint64_t source_index(const Substreetution& s, std::uint64_t index, int half_length) {
    std::uint64_t r = 0;
    for (int j = half_length - 1; j >= 0; --j) {
        auto slot = static_cast<std::size_t>((index >> (2 * j)) & 3u);
        r = (r << 1) | static_cast<std::uint64_t>(s.grammar()[slot]);
    }
    return r;
}

Patch apply(const Substreetution& s, const Patch& p, std::optional<int> max_depth) {
    int out_depth = 2 * p.depth() + 1;
    if (max_depth) out_depth = std::min(out_depth, *max_depth);
    if (out_depth < 0) fail(ErrorCode::invalid_argument, "negative truncation depth");
    std::vector<Color> nodes;
    nodes.reserve((std::size_t{1} << (out_depth + 1)) - 1);
    for (int m = 0; m <= out_depth; ++m) {
        int k = m / 2;
        std::uint64_t width = std::uint64_t{1} << m;
        if (m % 2 == 0) {
            for (std::uint64_t i = 0; i < width; ++i) nodes.push_back(s.image(p.at(k, source_index(s, i, k))).root);
        } else {
            for (std::uint64_t i = 0; i < width; ++i) {
                const Image& im = s.image(p.at(k, source_index(s, i >> 1, k)));
                nodes.push_back((i & 1) ? im.b : im.a);
            }
        }
    }
    return Patch(out_depth, std::move(nodes));
}

Patch apply_pow(const Substreetution& s, const Patch& p, int times, std::optional<int> max_depth) {
    Patch cur = p;
    for (int i = 0; i < times; ++i) cur = apply(s, cur, max_depth);
    if (times == 0 && max_depth && *max_depth < cur.depth()) cur = cur.truncate(*max_depth);
    return cur;
}

Patch fixed_point_prefix(const Substreetution& s, Color root, int depth) {
    if (!s.fixable(root)) {
        fail(ErrorCode::not_fixable, std::string("image of ") + to_char(root) + " does not keep its root");
    }
    if (depth < 0) fail(ErrorCode::invalid_argument, "negative depth");
    Patch p = Patch::leaf(root);
    while (p.depth() < depth) p = apply(s, p, depth);
    return p;
}

Address source(const Substreetution& s, const Address& w) {
    if (w.size() % 2 != 0) fail(ErrorCode::odd_length, "source needs an even-length address, got '" + w.str() + "'");
    std::string out;
    for (std::size_t i = 0; i < w.size(); i += 2) {
        int slot = (w[i] == 'b' ? 2 : 0) + (w[i + 1] == 'b' ? 1 : 0);
        out.push_back(s.slot(slot) == Letter::A ? 'a' : 'b');
    }
    return Address(out);
}

ThetaResult theta(const Substreetution& s, const Address& w) {
    ThetaResult result;
    std::vector<std::string> by_letter[2];
    for (int slot = 0; slot < 4; ++slot) by_letter[static_cast<int>(s.slot(slot))].push_back(kSlotNames[slot]);
    if (by_letter[0].empty() || by_letter[1].empty()) {
        result.warning = "grammar " + s.grammar_string() + " misses a letter; the source map is not onto";
    }
    std::vector<std::string> cur{""};
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& options = by_letter[w[i] == 'a' ? 0 : 1];
        if (cur.size() * options.size() > kMaxThetaMembers) fail(ErrorCode::resource_limit, "theta set too large");
        std::vector<std::string> next;
        next.reserve(cur.size() * options.size());
        for (const auto& prefix : cur) {
            for (const auto& slot : options) next.push_back(prefix + slot);
        }
        cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    for (auto& m : cur) result.members.emplace_back(m);
    return result;
}

std::string RenormReport::str() const {
    std::string out = passed ? "pass" : "fail";
    out += " checked=" + std::to_string(checked);
    if (counterexample) out += " counterexample=" + (counterexample->empty() ? std::string("e") : counterexample->str());
    return out;
}

RenormReport verify_renormalization(const Substreetution& s, const Patch& p, int maxlen) {
    if (maxlen < 0 || maxlen % 2 != 0) fail(ErrorCode::invalid_argument, "maxlen must be a nonnegative even integer");
    if (maxlen > p.depth()) fail(ErrorCode::invalid_argument, "maxlen exceeds patch depth");
    RenormReport report;
    Patch image = apply(s, p);
    for (int len = 0; len <= maxlen; len += 2) {
        std::uint64_t count = std::uint64_t{1} << len;
        for (std::uint64_t i = 0; i < count; ++i) {
            ++report.checked;
            Patch lhs = image.subtree_at(len, i);
            Patch rhs = apply(s, p.subtree_at(len / 2, source_index(s, i, len / 2)));
            if (!(lhs == rhs)) {
                report.passed = false;
                report.counterexample = Address::from_index(len, i);
                return report;
            }
        }
    }
    return report;
}

Patch unsub_keep(const Substreetution& s, const Patch& p) {
    if (!s.marked()) fail(ErrorCode::not_marked, "unsubstitution needs distinct image roots");
    auto first_a = s.first_slot(Letter::A);
    auto first_b = s.first_slot(Letter::B);
    if (!first_a || !first_b) fail(ErrorCode::invalid_argument, "grammar must use both letters to invert");
    const int d = p.depth();
    const int keep = d / 2;
    const std::uint64_t slot_of[2] = {static_cast<std::uint64_t>(*first_a), static_cast<std::uint64_t>(*first_b)};

    std::vector<Color> q;
    q.reserve((std::size_t{1} << (keep + 1)) - 1);
    for (int t = 0; t <= keep; ++t) {
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << t); ++j) {
            std::uint64_t site = 0;
            for (int bit = t - 1; bit >= 0; --bit) site = (site << 2) | slot_of[(j >> bit) & 1];
            auto c = s.preimage_of_root(p.at(2 * t, site));
            if (!c) fail(ErrorCode::not_in_image, "no image has root " + std::string(1, to_char(p.at(2 * t, site))));
            q.push_back(*c);
        }
    }
    Patch pre(keep, std::move(q));
    for (int m = 0; m <= d; ++m) {
        int k = m / 2;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
            Color expected;
            if (m % 2 == 0) {
                expected = s.image(pre.at(k, source_index(s, i, k))).root;
            } else {
                const Image& im = s.image(pre.at(k, source_index(s, i >> 1, k)));
                expected = (i & 1) ? im.b : im.a;
            }
            if (p.at(m, i) != expected) {
                std::string site = m == 0 ? "e" : Address::from_index(m, i).str();
                fail(ErrorCode::not_in_image, "site " + site + " disagrees with every preimage");
            }
        }
    }
    return pre;
}

Patch unsub(const Substreetution& s, const Patch& p) {
    if (p.depth() < 1) fail(ErrorCode::shallow, "unsubstitution needs depth at least 1");
    Patch pre = unsub_keep(s, p);
    return pre.truncate((p.depth() - 1) / 2);
}

}  // namespace sst
