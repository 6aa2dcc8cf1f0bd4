#pragma once

// Collisions. An internal node u with children u_1..u_k collides with respect
// to (A, beta) at index x when, for every i, the leaf f_{u_i}^{-1}(x) below
// u_i is in A. The witnesses a_1..a_k are those leaves.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapamp/scheme.hpp"
#include "gapamp/tree.hpp"

namespace gapamp {

struct CollisionCertificate {
  NodeAddress node;
  std::uint64_t common_index = 0;
  std::vector<LeafNumber> witnesses;  // a_i below the i-th child of node

  friend bool operator==(const CollisionCertificate&, const CollisionCertificate&) = default;
};

namespace detail {

inline void require_same_shape(const LeafSet& a, const Scheme& beta) {
  if (!(a.shape() == beta.shape())) {
    throw std::invalid_argument("leaf set and scheme are over different trees");
  }
}

}  // namespace detail

// First collision in (node lexicographic, index ascending) order. O(d k^d).
inline std::optional<CollisionCertificate> find_collision(const LeafSet& a, const Scheme& beta) {
  detail::require_same_shape(a, beta);
  const TreeShape& shape = beta.shape();
  const int k = shape.k();
  std::optional<CollisionCertificate> found;
  std::vector<std::vector<LeafNumber>> pre(static_cast<std::size_t>(k));
  for_each_internal_preorder(shape, [&](NodeRef u) {
    for (int i = 1; i <= k; ++i) {
      if (a.count_below(child_ref(shape, u, i)) == 0) return true;  // no tuple possible
    }
    for (int i = 1; i <= k; ++i) {
      beta.preimages(child_ref(shape, u, i), pre[static_cast<std::size_t>(i - 1)]);
    }
    const std::size_t span = pre[0].size();
    for (std::size_t x = 0; x < span; ++x) {
      bool all = true;
      for (int i = 0; i < k && all; ++i) all = a.contains(pre[static_cast<std::size_t>(i)][x]);
      if (!all) continue;
      CollisionCertificate c;
      c.node = shape.address(u);
      c.common_index = x + 1;
      for (int i = 0; i < k; ++i) c.witnesses.push_back(pre[static_cast<std::size_t>(i)][x]);
      found = std::move(c);
      return false;
    }
    return true;
  });
  return found;
}

inline bool verify_certificate(const LeafSet& a, const Scheme& beta, const CollisionCertificate& c) {
  if (!(a.shape() == beta.shape())) return false;
  const TreeShape& shape = beta.shape();
  if (!shape.contains(c.node) || shape.is_leaf(c.node)) return false;
  if (c.witnesses.size() != static_cast<std::size_t>(shape.k())) return false;
  const NodeRef u = shape.locate(c.node);
  for (int i = 1; i <= shape.k(); ++i) {
    const LeafNumber leaf = c.witnesses[static_cast<std::size_t>(i - 1)];
    if (leaf < 1 || leaf > shape.leaf_count() || !a.contains(leaf)) return false;
    const NodeRef child = child_ref(shape, u, i);
    if (!shape.leaf_is_below(leaf, child)) return false;
    if (beta.image(child, leaf) != c.common_index) return false;
  }
  return true;
}

// Every collision, straight from the definition: per internal node, every
// k-tuple of A-leaves taken one below each child, kept when all images agree.
// Intended for k^d <= 64.
inline std::vector<CollisionCertificate> brute_force_collisions(const LeafSet& a, const Scheme& beta) {
  detail::require_same_shape(a, beta);
  const TreeShape& shape = beta.shape();
  if (shape.leaf_count() > 64) {
    throw std::invalid_argument("brute_force_collisions: k^d = " +
                                std::to_string(shape.leaf_count()) + " exceeds 64");
  }
  const int k = shape.k();
  std::vector<CollisionCertificate> out;
  for_each_internal_preorder(shape, [&](NodeRef u) {
    std::vector<std::vector<LeafNumber>> choices(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
      const NodeRef child = child_ref(shape, u, i);
      const LeafNumber first = shape.first_leaf(child);
      for (LeafNumber leaf = first; leaf < first + shape.leaves_below(child.depth); ++leaf) {
        if (a.contains(leaf)) choices[static_cast<std::size_t>(i - 1)].push_back(leaf);
      }
    }
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    for (const auto& c : choices) {
      if (c.empty()) return true;
    }
    std::vector<CollisionCertificate> here;
    while (true) {
      const std::uint32_t x0 = beta.image(child_ref(shape, u, 1), choices[0][pick[0]]);
      bool equal = true;
      for (int i = 2; i <= k && equal; ++i) {
        const auto idx = static_cast<std::size_t>(i - 1);
        equal = beta.image(child_ref(shape, u, i), choices[idx][pick[idx]]) == x0;
      }
      if (equal) {
        CollisionCertificate c;
        c.node = shape.address(u);
        c.common_index = x0;
        for (std::size_t i = 0; i < pick.size(); ++i) c.witnesses.push_back(choices[i][pick[i]]);
        here.push_back(std::move(c));
      }
      bool exhausted = true;
      for (std::size_t pos = pick.size(); pos-- > 0;) {
        if (++pick[pos] < choices[pos].size()) {
          exhausted = false;
          break;
        }
        pick[pos] = 0;
      }
      if (exhausted) break;
    }
    std::sort(here.begin(), here.end(), [](const auto& l, const auto& r) {
      return l.common_index < r.common_index;
    });
    out.insert(out.end(), here.begin(), here.end());
    return true;
  });
  return out;
}

inline std::string format_certificate(const CollisionCertificate& c) {
  std::ostringstream os;
  os << "collision at " << c.node.to_string() << " index " << c.common_index << " witnesses";
  for (LeafNumber w : c.witnesses) os << ' ' << w;
  return os.str();
}

}  // namespace gapamp
