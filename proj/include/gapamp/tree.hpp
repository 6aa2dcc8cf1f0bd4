#pragma once

// Full k-ary rooted trees T_{k,d}.
//
// A node is addressed by its digit path from the root (digits in 1..k, empty
// for the root). Leaves are numbered 1..k^d in lexicographic address order, so
// the leaves below a node at depth h with layer offset o (0-based, also
// lexicographic) are exactly o*k^(d-h)+1 .. (o+1)*k^(d-h).

#include <boost/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gapamp {

using Fraction = boost::rational<std::int64_t>;
using LeafNumber = std::uint64_t;

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw std::overflow_error("tree too large: " + std::to_string(base) + "^" +
                                std::to_string(exp) + " overflows");
    }
    r *= base;
  }
  return r;
}

}  // namespace detail

class NodeAddress {
 public:
  NodeAddress() = default;
  explicit NodeAddress(std::vector<int> digits) : digits_(std::move(digits)) {}

  static NodeAddress root() { return NodeAddress(); }

  const std::vector<int>& digits() const { return digits_; }
  int depth() const { return static_cast<int>(digits_.size()); }
  bool is_root() const { return digits_.empty(); }

  // i-th child, 1-based.
  NodeAddress child(int i) const {
    NodeAddress c = *this;
    c.digits_.push_back(i);
    return c;
  }

  NodeAddress parent() const {
    if (is_root()) throw std::logic_error("root has no parent");
    NodeAddress p = *this;
    p.digits_.pop_back();
    return p;
  }

  bool is_ancestor_of(const NodeAddress& other) const {
    return other.digits_.size() >= digits_.size() &&
           std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
  }

  // "root" or dot-separated digits, e.g. "1.2.3".
  std::string to_string() const {
    if (is_root()) return "root";
    std::string s;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(digits_[i]);
    }
    return s;
  }

  static NodeAddress parse(std::string_view text) {
    if (text == "root") return root();
    std::vector<int> digits;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto dot = text.find('.', pos);
      const auto part = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
      if (part.empty() || part.size() > 9 ||
          !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument("bad node address '" + std::string(text) + "'");
      }
      digits.push_back(std::stoi(std::string(part)));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
    return NodeAddress(std::move(digits));
  }

  friend auto operator<=>(const NodeAddress&, const NodeAddress&) = default;

 private:
  std::vector<int> digits_;
};

// (depth, 0-based offset within the layer). Cheap internal handle.
struct NodeRef {
  int depth = 0;
  std::uint64_t offset = 0;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

class TreeShape {
 public:
  TreeShape(int k, int d) : k_(k), d_(d) {
    if (k < 1) throw std::invalid_argument("tree arity must be >= 1");
    if (d < 1) throw std::invalid_argument("tree depth must be >= 1");
    leaf_count_ = detail::checked_pow(static_cast<std::uint64_t>(k), d);
    layer_start_.resize(static_cast<std::size_t>(d) + 2, 0);
    std::uint64_t width = 1;
    for (int h = 0; h <= d; ++h) {
      layer_start_[static_cast<std::size_t>(h) + 1] = layer_start_[static_cast<std::size_t>(h)] + width;
      if (h < d) width *= static_cast<std::uint64_t>(k);
    }
  }

  int k() const { return k_; }
  int d() const { return d_; }
  std::uint64_t leaf_count() const { return leaf_count_; }
  std::uint64_t node_count() const { return layer_start_.back(); }

  std::uint64_t layer_size(int depth) const {
    return detail::checked_pow(static_cast<std::uint64_t>(k_), depth);
  }
  // Leaves(v) for a node of the given depth.
  std::uint64_t leaves_below(int depth) const {
    return detail::checked_pow(static_cast<std::uint64_t>(k_), d_ - depth);
  }

  bool contains(const NodeAddress& a) const {
    if (a.depth() > d_) return false;
    return std::all_of(a.digits().begin(), a.digits().end(),
                       [&](int x) { return x >= 1 && x <= k_; });
  }
  bool is_leaf(const NodeAddress& a) const { return a.depth() == d_; }

  NodeRef locate(const NodeAddress& a) const {
    require(a);
    std::uint64_t off = 0;
    for (int x : a.digits()) off = off * static_cast<std::uint64_t>(k_) + static_cast<std::uint64_t>(x - 1);
    return {a.depth(), off};
  }

  NodeAddress address(NodeRef r) const {
    std::vector<int> digits(static_cast<std::size_t>(r.depth));
    std::uint64_t off = r.offset;
    for (int i = r.depth - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(off % static_cast<std::uint64_t>(k_)) + 1;
      off /= static_cast<std::uint64_t>(k_);
    }
    return NodeAddress(std::move(digits));
  }

  // Breadth-first index of a node: layers top-down, lexicographic within.
  std::uint64_t bfs_index(NodeRef r) const {
    return layer_start_[static_cast<std::size_t>(r.depth)] + r.offset;
  }
  std::uint64_t bfs_index(const NodeAddress& a) const { return bfs_index(locate(a)); }
  NodeRef bfs_node(std::uint64_t index) const {
    int h = 0;
    while (layer_start_[static_cast<std::size_t>(h) + 1] <= index) ++h;
    return {h, index - layer_start_[static_cast<std::size_t>(h)]};
  }

  // Canonical number of the first leaf below r; the block has leaves_below(depth) leaves.
  LeafNumber first_leaf(NodeRef r) const { return r.offset * leaves_below(r.depth) + 1; }

  NodeRef leaf_ref(LeafNumber leaf) const {
    if (leaf < 1 || leaf > leaf_count_) {
      throw std::out_of_range("leaf " + std::to_string(leaf) + " outside 1.." +
                              std::to_string(leaf_count_));
    }
    return {d_, leaf - 1};
  }
  NodeAddress leaf_address(LeafNumber leaf) const { return address(leaf_ref(leaf)); }
  LeafNumber leaf_number(const NodeAddress& a) const {
    if (!is_leaf(a)) throw std::invalid_argument("not a leaf: " + a.to_string());
    return locate(a).offset + 1;
  }

  bool leaf_is_below(LeafNumber leaf, NodeRef r) const {
    const LeafNumber first = first_leaf(r);
    return leaf >= first && leaf < first + leaves_below(r.depth);
  }

  void require(const NodeAddress& a) const {
    if (!contains(a)) {
      throw std::invalid_argument("node " + a.to_string() + " not in T(" +
                                  std::to_string(k_) + "," + std::to_string(d_) + ")");
    }
  }

  friend bool operator==(const TreeShape& a, const TreeShape& b) {
    return a.k_ == b.k_ && a.d_ == b.d_;
  }

 private:
  int k_;
  int d_;
  std::uint64_t leaf_count_ = 0;
  std::vector<std::uint64_t> layer_start_;
};

// All k^d leaves in lexicographic order; position + 1 is the leaf number.
inline std::vector<NodeAddress> leaf_addresses(const TreeShape& shape) {
  std::vector<NodeAddress> out;
  out.reserve(static_cast<std::size_t>(shape.leaf_count()));
  for (LeafNumber leaf = 1; leaf <= shape.leaf_count(); ++leaf) {
    out.push_back(shape.leaf_address(leaf));
  }
  return out;
}

// Visits internal nodes (depth < d) in lexicographic address order, i.e.
// preorder. fn returns false to stop early.
template <typename Fn>
bool for_each_internal_preorder(const TreeShape& shape, NodeRef at, Fn&& fn) {
  if (at.depth >= shape.d()) return true;
  if (!fn(at)) return false;
  for (int c = 0; c < shape.k(); ++c) {
    const NodeRef child{at.depth + 1, at.offset * static_cast<std::uint64_t>(shape.k()) +
                                          static_cast<std::uint64_t>(c)};
    if (!for_each_internal_preorder(shape, child, fn)) return false;
  }
  return true;
}

template <typename Fn>
void for_each_internal_preorder(const TreeShape& shape, Fn&& fn) {
  for_each_internal_preorder(shape, NodeRef{0, 0}, fn);
}

inline NodeRef child_ref(const TreeShape& shape, NodeRef r, int i /* 1-based */) {
  return {r.depth + 1, r.offset * static_cast<std::uint64_t>(shape.k()) +
                           static_cast<std::uint64_t>(i - 1)};
}

// Subset of the leaves of a shape, with O(1) subtree counts.
class LeafSet {
 public:
  LeafSet(TreeShape shape, const std::vector<LeafNumber>& members)
      : shape_(shape), present_(static_cast<std::size_t>(shape.leaf_count()), 0) {
    for (LeafNumber leaf : members) {
      if (leaf < 1 || leaf > shape_.leaf_count()) {
        throw std::out_of_range("leaf " + std::to_string(leaf) + " outside 1.." +
                                std::to_string(shape_.leaf_count()));
      }
      present_[static_cast<std::size_t>(leaf - 1)] = 1;
    }
    build_prefix();
  }

  LeafSet(TreeShape shape, std::vector<char> present)
      : shape_(shape), present_(std::move(present)) {
    if (present_.size() != shape_.leaf_count()) {
      throw std::invalid_argument("LeafSet: membership vector has wrong length");
    }
    for (char& c : present_) c = c ? 1 : 0;
    build_prefix();
  }

  static LeafSet all(const TreeShape& shape) {
    return LeafSet(shape, std::vector<char>(static_cast<std::size_t>(shape.leaf_count()), 1));
  }
  static LeafSet none(const TreeShape& shape) {
    return LeafSet(shape, std::vector<char>(static_cast<std::size_t>(shape.leaf_count()), 0));
  }

  const TreeShape& shape() const { return shape_; }
  std::uint64_t size() const { return prefix_.back(); }
  bool contains(LeafNumber leaf) const {
    return leaf >= 1 && leaf <= shape_.leaf_count() && present_[static_cast<std::size_t>(leaf - 1)];
  }

  std::vector<LeafNumber> members() const {
    std::vector<LeafNumber> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::size_t i = 0; i < present_.size(); ++i) {
      if (present_[i]) out.push_back(static_cast<LeafNumber>(i) + 1);
    }
    return out;
  }

  // |A ∩ L(T^v)|
  std::uint64_t count_below(NodeRef v) const {
    const LeafNumber first = shape_.first_leaf(v);
    const std::uint64_t span = shape_.leaves_below(v.depth);
    return prefix_[static_cast<std::size_t>(first - 1 + span)] -
           prefix_[static_cast<std::size_t>(first - 1)];
  }

  // |A| >= k^d / q
  bool is_q_subset(std::uint64_t q) const { return size() * q >= shape_.leaf_count(); }

  friend bool operator==(const LeafSet& a, const LeafSet& b) {
    return a.shape_ == b.shape_ && a.present_ == b.present_;
  }

 private:
  void build_prefix() {
    prefix_.assign(present_.size() + 1, 0);
    for (std::size_t i = 0; i < present_.size(); ++i) prefix_[i + 1] = prefix_[i] + present_[i];
  }

  TreeShape shape_;
  std::vector<char> present_;
  std::vector<std::uint64_t> prefix_;
};

inline Fraction frac(const LeafSet& a, NodeRef v) {
  return Fraction(static_cast<std::int64_t>(a.count_below(v)),
                  static_cast<std::int64_t>(a.shape().leaves_below(v.depth)));
}

// Frac_A(v) = |A ∩ L(T^v)| / Leaves(v), exact.
inline Fraction frac(const LeafSet& a, const NodeAddress& v) {
  return frac(a, a.shape().locate(v));
}

}  // namespace gapamp
