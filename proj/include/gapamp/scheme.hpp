#pragma once

// Schemes: one bijection f_v : L(T^v) -> [Leaves(v)] per node v of T_{k,d}.
// Each bijection is stored as a sequence p_v with p_v[j] = f_v(j-th leaf
// below v in lexicographic order). Nodes are stored in breadth-first order.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gapamp/instance_io.hpp"
#include "gapamp/random.hpp"
#include "gapamp/tree.hpp"

namespace gapamp {

using Permutation = std::vector<std::uint32_t>;

class Scheme {
 public:
  Scheme(TreeShape shape, std::vector<Permutation> perms)
      : shape_(shape), perms_(std::move(perms)) {
    if (perms_.size() != shape_.node_count()) {
      throw std::invalid_argument("scheme has " + std::to_string(perms_.size()) +
                                  " bijections, tree has " +
                                  std::to_string(shape_.node_count()) + " nodes");
    }
    std::vector<char> seen;
    for (std::uint64_t i = 0; i < perms_.size(); ++i) {
      const NodeRef r = shape_.bfs_node(i);
      const Permutation& p = perms_[static_cast<std::size_t>(i)];
      const std::uint64_t m = shape_.leaves_below(r.depth);
      const std::string where = shape_.address(r).to_string();
      if (p.size() != m) {
        throw std::invalid_argument("bijection at " + where + " has length " +
                                    std::to_string(p.size()) + ", expected " +
                                    std::to_string(m));
      }
      seen.assign(static_cast<std::size_t>(m) + 1, 0);
      for (std::uint32_t x : p) {
        if (x < 1 || x > m || seen[x]) {
          throw std::invalid_argument("map at " + where + " is not a bijection onto 1.." +
                                      std::to_string(m));
        }
        seen[x] = 1;
      }
    }
  }

  static Scheme identity(const TreeShape& shape) {
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(shape.node_count()));
    for (std::uint64_t i = 0; i < shape.node_count(); ++i) {
      Permutation p(static_cast<std::size_t>(shape.leaves_below(shape.bfs_node(i).depth)));
      std::iota(p.begin(), p.end(), 1u);
      perms.push_back(std::move(p));
    }
    return Scheme(shape, std::move(perms));
  }

  const TreeShape& shape() const { return shape_; }
  const std::vector<Permutation>& permutations() const { return perms_; }

  const Permutation& permutation(NodeRef v) const {
    return perms_[static_cast<std::size_t>(shape_.bfs_index(v))];
  }
  const Permutation& permutation(const NodeAddress& v) const {
    return permutation(shape_.locate(v));
  }

  // f_v(leaf); leaf must lie below v.
  std::uint32_t image(NodeRef v, LeafNumber leaf) const {
    if (!shape_.leaf_is_below(leaf, v)) {
      throw std::invalid_argument("leaf " + std::to_string(leaf) + " not below " +
                                  shape_.address(v).to_string());
    }
    return permutation(v)[static_cast<std::size_t>(leaf - shape_.first_leaf(v))];
  }

  // Leaf below v that f_v sends to x, for every x: out[x-1].
  void preimages(NodeRef v, std::vector<LeafNumber>& out) const {
    const Permutation& p = permutation(v);
    out.resize(p.size());
    const LeafNumber first = shape_.first_leaf(v);
    for (std::size_t j = 0; j < p.size(); ++j) out[p[j] - 1] = first + j;
  }

  // Truncation to the subtree rooted at v, re-rooted as T_{k, d - depth(v)}.
  Scheme subtree(const NodeAddress& v) const {
    const NodeRef top = shape_.locate(v);
    if (top.depth >= shape_.d()) throw std::invalid_argument("subtree at a leaf");
    const TreeShape sub(shape_.k(), shape_.d() - top.depth);
    std::vector<Permutation> perms;
    perms.reserve(static_cast<std::size_t>(sub.node_count()));
    for (std::uint64_t i = 0; i < sub.node_count(); ++i) {
      const NodeRef r = sub.bfs_node(i);
      const NodeRef global{top.depth + r.depth,
                           top.offset * sub.layer_size(r.depth) + r.offset};
      perms.push_back(permutation(global));
    }
    return Scheme(sub, std::move(perms));
  }

  friend bool operator==(const Scheme& a, const Scheme& b) {
    return a.shape_ == b.shape_ && a.perms_ == b.perms_;
  }

 private:
  TreeShape shape_;
  std::vector<Permutation> perms_;
};

// Every bijection drawn uniformly and independently, nodes in breadth-first
// order from one generator seeded with `seed`.
inline Scheme random_scheme(const TreeShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(shape.node_count()));
  for (std::uint64_t i = 0; i < shape.node_count(); ++i) {
    perms.push_back(random_permutation(
        rng, static_cast<std::size_t>(shape.leaves_below(shape.bfs_node(i).depth))));
  }
  return Scheme(shape, std::move(perms));
}

// scheme <k> <d>
// <address-or-root>: p1 ... pm      (breadth-first)
inline std::string serialize_scheme(const Scheme& s) {
  std::ostringstream os;
  os << "scheme " << s.shape().k() << ' ' << s.shape().d() << '\n';
  for (std::uint64_t i = 0; i < s.shape().node_count(); ++i) {
    const NodeRef r = s.shape().bfs_node(i);
    os << s.shape().address(r).to_string() << ':';
    for (std::uint32_t x : s.permutation(r)) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

namespace detail {

inline TreeShape parse_shape_header(const std::string& line, const char* keyword, int line_no) {
  const auto tok = split_ws(line);
  if (tok.size() != 3 || tok[0] != keyword) {
    throw ParseError(line_no, std::string("expected header '") + keyword + " <k> <d>'");
  }
  const int k = parse_int_field(tok[1], line_no, "arity");
  const int d = parse_int_field(tok[2], line_no, "depth");
  try {
    return TreeShape(k, d);
  } catch (const std::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

}  // namespace detail

inline Scheme parse_scheme(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  std::optional<TreeShape> shape;
  std::vector<Permutation> perms;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    if (!shape) {
      shape = detail::parse_shape_header(line, "scheme", line_no);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected '<node>: p1 ... pm'");
    const std::uint64_t expect_index = perms.size();
    if (expect_index >= shape->node_count()) throw ParseError(line_no, "too many node lines");
    NodeAddress addr;
    try {
      addr = NodeAddress::parse(detail::strip_comment(line.substr(0, colon)));
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (!shape->contains(addr) || shape->bfs_index(addr) != expect_index) {
      throw ParseError(line_no, "node " + addr.to_string() + " out of breadth-first order");
    }
    Permutation p;
    for (const auto& tok : detail::split_ws(line.substr(colon + 1))) {
      p.push_back(static_cast<std::uint32_t>(detail::parse_int_field(tok, line_no, "image")));
    }
    perms.push_back(std::move(p));
  }
  if (!shape) throw ParseError(line_no, "missing header");
  try {
    return Scheme(*shape, std::move(perms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

// leafset <k> <d>
// <leaf numbers, ascending, whitespace separated>
inline std::string serialize_leafset(const LeafSet& a) {
  std::ostringstream os;
  os << "leafset " << a.shape().k() << ' ' << a.shape().d() << '\n';
  for (LeafNumber x : a.members()) os << x << '\n';
  return os.str();
}

inline LeafSet parse_leafset(std::string_view text) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  std::optional<TreeShape> shape;
  std::vector<LeafNumber> members;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    if (!shape) {
      shape = detail::parse_shape_header(line, "leafset", line_no);
      continue;
    }
    for (const auto& tok : detail::split_ws(line)) {
      std::uint64_t v = 0;
      if (!detail::parse_uint(tok, v) || v < 1 || v > shape->leaf_count()) {
        throw ParseError(line_no, "bad leaf number '" + tok + "'");
      }
      if (!members.empty() && v <= members.back()) {
        throw ParseError(line_no, "leaf numbers must be strictly ascending");
      }
      members.push_back(v);
    }
  }
  if (!shape) throw ParseError(line_no, "missing header");
  return LeafSet(*shape, members);
}

}  // namespace gapamp
