#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace sst {

enum class Letter : std::uint8_t { A = 0, B = 1 };

struct Image {
    Color root;
    Color a;
    Color b;
    bool operator==(const Image&) const = default;
};

// Grammar slots in order aa, ab, ba, bb. Letter A at a slot places the image
// of the a-subtree there, B the image of the b-subtree.
class Substreetution {
public:
    Substreetution(Image zero, Image one, std::array<Letter, 4> grammar);

    const Image& image(Color c) const { return images_[static_cast<std::size_t>(c)]; }
    Letter slot(int s) const { return grammar_[static_cast<std::size_t>(s)]; }
    const std::array<Letter, 4>& grammar() const { return grammar_; }
    std::string grammar_string() const;
    bool marked() const { return images_[0].root != images_[1].root; }
    bool fixable(Color c) const { return image(c).root == c; }
    bool uses_letter(Letter l) const;
    // First slot (in aa, ab, ba, bb order) carrying the letter.
    std::optional<int> first_slot(Letter l) const;
    // Color whose image root equals c, for marked substreetutions.
    std::optional<Color> preimage_of_root(Color c) const;

    bool operator==(const Substreetution&) const = default;

private:
    std::array<Image, 2> images_;
    std::array<Letter, 4> grammar_;
};

Substreetution builtin_bbab();
Substreetution builtin_thue_morse();
Substreetution builtin_abba();

// Accepts "builtin:<name>", a path-free three-line definition, or a bare
// builtin name.
Substreetution parse_substreetution(std::string_view text);
std::string format_substreetution(const Substreetution& s);

// H(p), of depth 2*depth+1, optionally truncated to max_depth.
Patch apply(const Substreetution& s, const Patch& p, std::optional<int> max_depth = std::nullopt);
Patch apply_pow(const Substreetution& s, const Patch& p, int times, std::optional<int> max_depth = std::nullopt);
Patch fixed_point_prefix(const Substreetution& s, Color root, int depth);

Address source(const Substreetution& s, const Address& w);
// Source of the site with the given even level and index, as an index.
std::uint64_t source_index(const Substreetution& s, std::uint64_t index, int half_length);

struct ThetaResult {
    std::vector<Address> members;  // sorted, distinct
    std::optional<std::string> warning;
};

ThetaResult theta(const Substreetution& s, const Address& w);

struct RenormReport {
    bool passed = true;
    std::size_t checked = 0;
    std::optional<Address> counterexample;
    std::string str() const;
};

RenormReport verify_renormalization(const Substreetution& s, const Patch& p, int maxlen);

// Inverse of apply on its image; output depth floor((depth-1)/2).
Patch unsub(const Substreetution& s, const Patch& p);
// Same, but also accepts depth 0 (returning the root's preimage color) and
// keeps floor(depth/2) levels; the extra level is fully validated.
Patch unsub_keep(const Substreetution& s, const Patch& p);

}  // namespace sst
