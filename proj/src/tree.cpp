#include "tree.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "error.hpp"

namespace sst {

namespace {

constexpr int kMaxPatchDepth = 27;

std::size_t node_count(int depth) { return (std::size_t{1} << (depth + 1)) - 1; }

struct NodeKey {
    NodeId a;
    NodeId b;
    Color c;
    bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        std::uint64_t h = (static_cast<std::uint64_t>(k.a) << 32) ^ k.b;
        h ^= static_cast<std::uint64_t>(k.c) * 0x9e3779b97f4a7c15ULL;
        h ^= h >> 31;
        h *= 0xbf58476d1ce4e5b9ULL;
        h ^= h >> 29;
        return static_cast<std::size_t>(h);
    }
};

class Interner {
public:
    std::unique_lock<std::mutex> lock() { return std::unique_lock<std::mutex>(mutex_); }

    NodeId intern_locked(Color c, NodeId a, NodeId b) {
        auto [it, inserted] = table_.try_emplace(NodeKey{a, b, c}, 0);
        if (inserted) {
            if (table_.size() >= 0xffffffffULL) fail(ErrorCode::resource_limit, "canonical id space exhausted");
            it->second = static_cast<NodeId>(table_.size());
        }
        return it->second;
    }

    std::size_t size() {
        auto guard = lock();
        return table_.size();
    }

private:
    std::mutex mutex_;
    std::unordered_map<NodeKey, NodeId, NodeKeyHash> table_;
};

Interner& interner() {
    static Interner instance;
    return instance;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

Color color_from_int(int v) {
    if (v == 0) return Color::zero;
    if (v == 1) return Color::one;
    fail(ErrorCode::invalid_argument, "color must be 0 or 1, got " + std::to_string(v));
}

Color color_from_char(char c) {
    if (c == '0') return Color::zero;
    if (c == '1') return Color::one;
    fail(ErrorCode::parse_error, std::string("color must be '0' or '1', got '") + c + "'");
}

int heap_level(std::size_t heap_pos) {
    int l = 0;
    std::size_t v = heap_pos + 1;
    while (v > 1) {
        v >>= 1;
        ++l;
    }
    return l;
}

// ---------------------------------------------------------------- Address

Address::Address(std::string_view letters) : letters_(letters) {
    for (char ch : letters_) {
        if (ch != 'a' && ch != 'b') fail(ErrorCode::parse_error, "address letters must be 'a' or 'b': " + letters_);
    }
}

Address Address::from_index(int length, std::uint64_t index) {
    std::string s(static_cast<std::size_t>(length), 'a');
    for (int i = length - 1; i >= 0; --i) {
        if (index & 1) s[static_cast<std::size_t>(i)] = 'b';
        index >>= 1;
    }
    return Address(std::move(s), trusted{});
}

Address Address::repeat(char letter, int count) { return Address(std::string(static_cast<std::size_t>(count), letter)); }

std::uint64_t Address::index() const {
    if (letters_.size() > 63) fail(ErrorCode::address_too_deep, "address too long for indexing");
    std::uint64_t v = 0;
    for (char ch : letters_) v = (v << 1) | (ch == 'b' ? 1u : 0u);
    return v;
}

Address Address::child(Side s) const { return Address(letters_ + to_char(s), trusted{}); }

// ---------------------------------------------------------------- LineWord

LineWord LineWord::parse(std::string_view text) {
    std::vector<Color> bits;
    bits.reserve(text.size());
    for (char ch : text) bits.push_back(color_from_char(ch));
    return LineWord(std::move(bits));
}

LineWord LineWord::repeat(const LineWord& block, std::size_t copies) {
    std::vector<Color> bits;
    bits.reserve(block.size() * copies);
    for (std::size_t i = 0; i < copies; ++i) bits.insert(bits.end(), block.bits_.begin(), block.bits_.end());
    return LineWord(std::move(bits));
}

std::size_t LineWord::ones() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Color::one));
}

int LineWord::level() const {
    std::size_t n = bits_.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        fail(ErrorCode::not_power_of_two, "word length " + std::to_string(n) + " is not a power of two");
    }
    int l = 0;
    while ((std::size_t{1} << l) < n) ++l;
    return l;
}

LineWord LineWord::slice(std::size_t begin, std::size_t length) const {
    return LineWord(std::vector<Color>(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                                       bits_.begin() + static_cast<std::ptrdiff_t>(begin + length)));
}

LineWord LineWord::operator+(const LineWord& other) const {
    std::vector<Color> bits = bits_;
    bits.insert(bits.end(), other.bits_.begin(), other.bits_.end());
    return LineWord(std::move(bits));
}

std::string LineWord::str() const {
    std::string s;
    s.reserve(bits_.size());
    for (Color c : bits_) s.push_back(to_char(c));
    return s;
}

// ---------------------------------------------------------------- Patch

Patch::Patch(int depth, std::vector<Color> nodes) : depth_(depth), nodes_(std::move(nodes)) {
    if (depth < 0) fail(ErrorCode::invalid_argument, "negative patch depth");
    if (depth > kMaxPatchDepth) fail(ErrorCode::resource_limit, "patch depth " + std::to_string(depth) + " too large");
    if (nodes_.size() != node_count(depth)) {
        fail(ErrorCode::invalid_argument, "node count does not match depth " + std::to_string(depth));
    }
}

Patch::Patch(const Patch& other)
    : depth_(other.depth_), nodes_(other.nodes_), id_(other.id_.load(std::memory_order_relaxed)) {}

Patch& Patch::operator=(const Patch& other) {
    if (this != &other) {
        depth_ = other.depth_;
        nodes_ = other.nodes_;
        id_.store(other.id_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    }
    return *this;
}

Patch::Patch(Patch&& other) noexcept
    : depth_(other.depth_), nodes_(std::move(other.nodes_)), id_(other.id_.load(std::memory_order_relaxed)) {}

Patch& Patch::operator=(Patch&& other) noexcept {
    depth_ = other.depth_;
    nodes_ = std::move(other.nodes_);
    id_.store(other.id_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    return *this;
}

Patch Patch::leaf(Color c) { return Patch(0, {c}); }

Patch Patch::uniform(int depth, Color c) {
    if (depth < 0 || depth > kMaxPatchDepth) fail(ErrorCode::invalid_argument, "bad depth");
    return Patch(depth, std::vector<Color>(node_count(depth), c));
}

Patch Patch::from_levels(const std::vector<LineWord>& levels) {
    if (levels.empty()) fail(ErrorCode::invalid_argument, "patch needs at least one level");
    int depth = static_cast<int>(levels.size()) - 1;
    if (depth > kMaxPatchDepth) fail(ErrorCode::resource_limit, "patch too deep");
    std::vector<Color> nodes;
    nodes.reserve(node_count(depth));
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (levels[l].size() != (std::size_t{1} << l)) {
            fail(ErrorCode::invalid_argument, "level " + std::to_string(l) + " must have " +
                                                  std::to_string(std::size_t{1} << l) + " colors");
        }
        nodes.insert(nodes.end(), levels[l].bits().begin(), levels[l].bits().end());
    }
    return Patch(depth, std::move(nodes));
}

Patch Patch::join(Color root, const Patch& a_sub, const Patch& b_sub) {
    int d = std::min(a_sub.depth(), b_sub.depth());
    std::vector<Color> nodes;
    nodes.reserve(node_count(d + 1));
    nodes.push_back(root);
    for (int l = 0; l <= d; ++l) {
        std::size_t off = (std::size_t{1} << l) - 1;
        std::size_t len = std::size_t{1} << l;
        nodes.insert(nodes.end(), a_sub.nodes_.begin() + static_cast<std::ptrdiff_t>(off),
                     a_sub.nodes_.begin() + static_cast<std::ptrdiff_t>(off + len));
        nodes.insert(nodes.end(), b_sub.nodes_.begin() + static_cast<std::ptrdiff_t>(off),
                     b_sub.nodes_.begin() + static_cast<std::ptrdiff_t>(off + len));
    }
    return Patch(d + 1, std::move(nodes));
}

Color Patch::get(const Address& w) const {
    if (static_cast<int>(w.size()) > depth_) {
        fail(ErrorCode::address_too_deep,
             "address of length " + std::to_string(w.size()) + " exceeds depth " + std::to_string(depth_));
    }
    return at(static_cast<int>(w.size()), w.index());
}

LineWord Patch::line(int level) const {
    if (level < 0 || level > depth_) {
        fail(ErrorCode::address_too_deep, "level " + std::to_string(level) + " outside depth " + std::to_string(depth_));
    }
    std::size_t off = (std::size_t{1} << level) - 1;
    return LineWord(std::vector<Color>(nodes_.begin() + static_cast<std::ptrdiff_t>(off),
                                       nodes_.begin() + static_cast<std::ptrdiff_t>(2 * off + 1)));
}

std::vector<LineWord> Patch::levels() const {
    std::vector<LineWord> out;
    for (int l = 0; l <= depth_; ++l) out.push_back(line(l));
    return out;
}

Patch Patch::subtree_at(int level, std::uint64_t index) const {
    if (level < 0 || level > depth_) fail(ErrorCode::address_too_deep, "site below patch depth");
    int d = depth_ - level;
    std::vector<Color> nodes;
    nodes.reserve(node_count(d));
    for (int k = 0; k <= d; ++k) {
        std::size_t off = (std::size_t{1} << (level + k)) - 1 + (static_cast<std::size_t>(index) << k);
        std::size_t len = std::size_t{1} << k;
        nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(off),
                     nodes_.begin() + static_cast<std::ptrdiff_t>(off + len));
    }
    return Patch(d, std::move(nodes));
}

Patch Patch::subtree(const Address& w) const {
    if (static_cast<int>(w.size()) > depth_) {
        fail(ErrorCode::address_too_deep,
             "address of length " + std::to_string(w.size()) + " exceeds depth " + std::to_string(depth_));
    }
    return subtree_at(static_cast<int>(w.size()), w.index());
}

Patch Patch::child(Side s) const { return subtree_at(1, s == Side::a ? 0 : 1); }

Patch Patch::truncate(int depth) const {
    if (depth < 0 || depth > depth_) fail(ErrorCode::address_too_deep, "cannot truncate to depth " + std::to_string(depth));
    if (depth == depth_) return *this;
    return Patch(depth, std::vector<Color>(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(node_count(depth))));
}

Patch Patch::with_root(Color c) const {
    std::vector<Color> nodes = nodes_;
    nodes[0] = c;
    return Patch(depth_, std::move(nodes));
}

NodeId Patch::id() const {
    NodeId cached = id_.load(std::memory_order_acquire);
    if (cached != 0) return cached;
    std::vector<NodeId> ids(nodes_.size(), 0);
    std::size_t first_leaf = node_count(depth_) - (std::size_t{1} << depth_);
    {
        auto guard = interner().lock();
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            ids[i] = i >= first_leaf ? interner().intern_locked(nodes_[i], 0, 0)
                                     : interner().intern_locked(nodes_[i], ids[2 * i + 1], ids[2 * i + 2]);
        }
    }
    id_.store(ids[0], std::memory_order_release);
    return ids[0];
}

bool Patch::operator<(const Patch& other) const {
    if (depth_ != other.depth_) return depth_ < other.depth_;
    return nodes_ < other.nodes_;
}

std::string Patch::compact() const {
    std::string s;
    for (int l = 0; l <= depth_; ++l) {
        if (l > 0) s.push_back('/');
        s += line(l).str();
    }
    return s;
}

NodeId intern_node(Color c, NodeId a, NodeId b) {
    auto guard = interner().lock();
    return interner().intern_locked(c, a, b);
}

std::size_t interned_node_count() { return interner().size(); }

// ---------------------------------------------------------------- SubtreeIndex

SubtreeIndex::SubtreeIndex(const Patch& p, int max_n) : patch_(p), max_n_(std::min(max_n, p.depth())) {
    if (max_n < 0) fail(ErrorCode::invalid_argument, "negative subtree depth");
    ids_.resize(static_cast<std::size_t>(max_n_) + 1);
    const auto& nodes = patch_.nodes();
    auto guard = interner().lock();
    ids_[0].resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) ids_[0][i] = interner().intern_locked(nodes[i], 0, 0);
    for (int n = 1; n <= max_n_; ++n) {
        std::size_t count = node_count(patch_.depth() - n);
        auto& cur = ids_[static_cast<std::size_t>(n)];
        const auto& prev = ids_[static_cast<std::size_t>(n) - 1];
        cur.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            cur[i] = interner().intern_locked(nodes[i], prev[2 * i + 1], prev[2 * i + 2]);
        }
    }
}

// ---------------------------------------------------------------- metric and scans

std::string Distance::str() const {
    if (!mismatch_level) return "EQUAL_TO_DEPTH";
    if (*mismatch_level == 0) return "1";
    if (*mismatch_level < 63) return "1/" + std::to_string(std::uint64_t{1} << *mismatch_level);
    return "2^-" + std::to_string(*mismatch_level);
}

Distance distance(const Patch& p, const Patch& q) {
    if (p.depth() != q.depth()) {
        fail(ErrorCode::depth_mismatch,
             "depths " + std::to_string(p.depth()) + " and " + std::to_string(q.depth()) + " differ");
    }
    const auto& a = p.nodes();
    const auto& b = q.nodes();
    auto it = std::mismatch(a.begin(), a.end(), b.begin());
    if (it.first == a.end()) return Distance{};
    return Distance{heap_level(static_cast<std::size_t>(it.first - a.begin()))};
}

DistinctSubpatches distinct_subpatches(const Patch& p, int n) {
    if (n < 0 || n > p.depth()) {
        fail(ErrorCode::address_too_deep, "subpatch depth " + std::to_string(n) + " exceeds " + std::to_string(p.depth()));
    }
    SubtreeIndex index(p, n);
    std::unordered_map<NodeId, std::size_t> first;
    std::size_t sites = node_count(p.depth() - n);
    for (std::size_t i = 0; i < sites; ++i) first.try_emplace(index.id(i, n), i);
    DistinctSubpatches out;
    for (const auto& [id, pos] : first) {
        int level = heap_level(pos);
        out.patches.push_back(p.subtree_at(level, pos + 1 - (std::size_t{1} << level)).truncate(n));
    }
    std::sort(out.patches.begin(), out.patches.end());
    return out;
}

// ---------------------------------------------------------------- text format

Patch parse_patch(std::string_view text) {
    std::vector<std::string> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string t = trim(raw);
        if (!t.empty()) lines.push_back(t);
    }
    if (lines.empty()) fail(ErrorCode::parse_error, "empty patch text");
    std::istringstream header(lines[0]);
    std::string keyword;
    long long depth = -1;
    header >> keyword >> depth;
    std::string rest;
    if (keyword != "depth" || depth < 0 || (header >> rest)) fail(ErrorCode::parse_error, "expected 'depth <D>' header");
    if (depth > kMaxPatchDepth) fail(ErrorCode::resource_limit, "patch depth too large");
    if (lines.size() != static_cast<std::size_t>(depth) + 2) {
        fail(ErrorCode::parse_error, "expected " + std::to_string(depth + 1) + " level lines, got " +
                                         std::to_string(lines.size() - 1));
    }
    std::vector<LineWord> levels;
    for (std::size_t l = 0; l <= static_cast<std::size_t>(depth); ++l) {
        const std::string& s = lines[l + 1];
        if (s.size() != (std::size_t{1} << l)) {
            fail(ErrorCode::parse_error, "level " + std::to_string(l) + " must have " +
                                             std::to_string(std::size_t{1} << l) + " characters");
        }
        levels.push_back(LineWord::parse(s));
    }
    return Patch::from_levels(levels);
}

std::string format_patch(const Patch& p) {
    std::string out = "depth " + std::to_string(p.depth()) + "\n";
    for (int l = 0; l <= p.depth(); ++l) out += p.line(l).str() + "\n";
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::invalid_argument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::invalid_argument, "cannot write " + path);
    out << text;
}

Patch read_patch_file(const std::string& path) { return parse_patch(read_text_file(path)); }

}  // namespace sst
