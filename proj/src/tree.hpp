#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sst {

enum class Color : std::uint8_t { zero = 0, one = 1 };

inline int to_int(Color c) { return static_cast<int>(c); }
inline char to_char(Color c) { return c == Color::one ? '1' : '0'; }
inline Color flip(Color c) { return c == Color::one ? Color::zero : Color::one; }
Color color_from_int(int v);
Color color_from_char(char c);

enum class Side : std::uint8_t { a = 0, b = 1 };

inline char to_char(Side s) { return s == Side::a ? 'a' : 'b'; }

// A site of the free monoid on {a,b}. Within a level, the site index is the
// binary number spelled by the letters with a=0, b=1, most significant first.
class Address {
public:
    Address() = default;
    explicit Address(std::string_view letters);

    static Address from_index(int length, std::uint64_t index);
    static Address repeat(char letter, int count);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    char operator[](std::size_t i) const { return letters_[i]; }
    const std::string& str() const { return letters_; }
    std::uint64_t index() const;

    Address child(Side s) const;
    Address prefix(std::size_t n) const { return Address(letters_.substr(0, n), trusted{}); }
    Address operator+(const Address& other) const { return Address(letters_ + other.letters_, trusted{}); }

    auto operator<=>(const Address&) const = default;

private:
    struct trusted {};
    Address(std::string letters, trusted) : letters_(std::move(letters)) {}
    std::string letters_;
};

class LineWord {
public:
    LineWord() = default;
    explicit LineWord(std::vector<Color> bits) : bits_(std::move(bits)) {}

    static LineWord parse(std::string_view text);
    static LineWord repeat(const LineWord& block, std::size_t copies);

    std::size_t size() const { return bits_.size(); }
    Color operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<Color>& bits() const { return bits_; }
    std::size_t ones() const;
    bool has_one() const { return ones() > 0; }
    // Exponent l with size() == 2^l; throws NotPowerOfTwo otherwise.
    int level() const;
    LineWord slice(std::size_t begin, std::size_t length) const;
    LineWord operator+(const LineWord& other) const;
    std::string str() const;

    bool operator==(const LineWord&) const = default;

private:
    std::vector<Color> bits_;
};

using NodeId = std::uint32_t;

// Complete colored binary tree of finite depth, stored breadth-first in heap
// order: level l occupies [2^l - 1, 2^{l+1} - 1), children of node i are
// 2i+1 (a) and 2i+2 (b).
class Patch {
public:
    Patch(int depth, std::vector<Color> nodes);
    Patch(const Patch& other);
    Patch& operator=(const Patch& other);
    Patch(Patch&&) noexcept;
    Patch& operator=(Patch&&) noexcept;

    static Patch leaf(Color c);
    static Patch uniform(int depth, Color c);
    static Patch from_levels(const std::vector<LineWord>& levels);
    // Tree c(a_sub, b_sub), truncated to the shallower child.
    static Patch join(Color root, const Patch& a_sub, const Patch& b_sub);

    int depth() const { return depth_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<Color>& nodes() const { return nodes_; }
    Color root() const { return nodes_[0]; }
    Color at(int level, std::uint64_t index) const { return nodes_[(std::size_t{1} << level) - 1 + index]; }
    Color get(const Address& w) const;
    LineWord line(int level) const;
    std::vector<LineWord> levels() const;
    Patch subtree(const Address& w) const;
    Patch subtree_at(int level, std::uint64_t index) const;
    Patch child(Side s) const;
    Patch truncate(int depth) const;
    Patch with_root(Color c) const;

    // Canonical id from the process-wide interning table; equal ids exactly
    // when the patches are structurally equal.
    NodeId id() const;

    bool operator==(const Patch& other) const { return depth_ == other.depth_ && nodes_ == other.nodes_; }
    bool operator<(const Patch& other) const;

    // Compact one-line form: levels joined by '/'.
    std::string compact() const;

private:
    int depth_;
    std::vector<Color> nodes_;
    mutable std::atomic<NodeId> id_{0};
};

// Interns (color, a-child id, b-child id) triples; leaves use child id 0.
NodeId intern_node(Color c, NodeId a, NodeId b);
std::size_t interned_node_count();

// Canonical ids of the depth-n subtrees rooted at every site, for all
// n <= max_n with room below the site.
class SubtreeIndex {
public:
    SubtreeIndex(const Patch& p, int max_n);

    const Patch& patch() const { return patch_; }
    int max_n() const { return max_n_; }
    // Heap position of the site; requires level(site) + n <= depth.
    NodeId id(std::size_t heap_pos, int n) const { return ids_[n][heap_pos]; }
    NodeId id(int level, std::uint64_t index, int n) const {
        return ids_[n][(std::size_t{1} << level) - 1 + index];
    }

private:
    Patch patch_;
    int max_n_;
    std::vector<std::vector<NodeId>> ids_;
};

struct Distance {
    // Minimal level with a mismatch; empty when equal to the available depth.
    std::optional<int> mismatch_level;
    bool equal_to_depth() const { return !mismatch_level.has_value(); }
    std::string str() const;
};

Distance distance(const Patch& p, const Patch& q);

struct DistinctSubpatches {
    std::vector<Patch> patches;  // sorted by content
    std::size_t count() const { return patches.size(); }
};

DistinctSubpatches distinct_subpatches(const Patch& p, int n);

Patch parse_patch(std::string_view text);
std::string format_patch(const Patch& p);
Patch read_patch_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

int heap_level(std::size_t heap_pos);

}  // namespace sst
