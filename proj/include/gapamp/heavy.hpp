#pragma once

// Density arguments on T_{k,d}: greedy descent to a node whose children are
// all dense, the heavy node set F built from spaced layers, and the depth
// bound beyond which a random scheme is universal with positive probability.
// All logarithms are base 2; real exponents are rounded up.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapamp/tree.hpp"

namespace gapamp {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline BigInt big_pow(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

// Smallest e with 2^e >= x, for x >= 1.
inline unsigned ceil_log2(const BigInt& x) {
  if (x < 1) throw std::invalid_argument("ceil_log2 of non-positive value");
  const unsigned msb = boost::multiprecision::msb(x);
  return (x == (BigInt(1) << msb)) ? msb : msb + 1;
}

// ceil(2k * log2(2q)): smallest tau with 2^tau >= (2q)^(2k).
inline int heavy_set_spacing(int k, std::uint64_t q) {
  return static_cast<int>(ceil_log2(big_pow(BigInt(2 * q), static_cast<unsigned>(2 * k))));
}

// k * (4q)^(4 k log2 k), exponent rounded up when k is not a power of two.
inline BigInt required_depth(int k, std::uint64_t q) {
  if (k < 2) throw PreconditionError("required_depth: k must be >= 2");
  if (q < 1) throw PreconditionError("required_depth: q must be >= 1");
  const unsigned exponent = ceil_log2(big_pow(BigInt(k), static_cast<unsigned>(4 * k)));
  return BigInt(k) * big_pow(BigInt(4 * q), exponent);
}

// d * k^d * (4q)^(-3 k log2 k), exponent rounded up when k is not a power of two.
inline BigRational heavy_set_bound(int k, int d, std::uint64_t q) {
  const unsigned exponent = ceil_log2(big_pow(BigInt(k), static_cast<unsigned>(3 * k)));
  return BigRational(BigInt(d) * big_pow(BigInt(k), static_cast<unsigned>(d)),
                     big_pow(BigInt(4 * q), exponent));
}

struct DescendStep {
  NodeAddress node;
  Fraction frac;
};

struct DescendResult {
  NodeAddress node;                // where the walk stopped
  std::vector<DescendStep> trail;  // start node first, stopping node last
  int steps = 0;
  bool children_dense = false;     // every child of node has Frac >= 1/(2q)
  std::vector<std::string> precondition_violations;

  bool preconditions_met() const { return precondition_violations.empty(); }
};

// From v, repeatedly step to the child of largest Frac (smallest index on
// ties) until every child of the current node has Frac >= 1/(2q). With
// k, q >= 2, tau >= 2k log2 q, depth(v) <= d - tau and Frac(v) >= 1/q, the
// walk stops within tau - 1 steps. Violated preconditions are reported, and
// the walk still runs.
inline DescendResult greedy_descend(const LeafSet& a, const NodeAddress& v, std::uint64_t q, int tau) {
  const TreeShape& shape = a.shape();
  shape.require(v);
  DescendResult out;
  auto violated = [&](std::string msg) { out.precondition_violations.push_back(std::move(msg)); };
  if (shape.k() < 2) violated("k must be >= 2");
  if (q < 2) violated("q must be >= 2");
  if (tau < 0 || big_pow(BigInt(2), static_cast<unsigned>(std::max(tau, 0))) <
                     big_pow(BigInt(q), static_cast<unsigned>(2 * shape.k()))) {
    violated("tau = " + std::to_string(tau) + " is below 2k*log2(q)");
  }
  if (v.depth() > shape.d() - tau) violated("depth(v) exceeds d - tau");
  const Fraction start_frac = frac(a, v);
  if (start_frac < Fraction(1, static_cast<std::int64_t>(q))) violated("Frac(v) below 1/q");

  const Fraction threshold(1, static_cast<std::int64_t>(2 * q));
  NodeRef cur = shape.locate(v);
  out.trail.push_back({v, start_frac});
  while (true) {
    if (cur.depth == shape.d()) {
      out.children_dense = true;  // a leaf has no children
      break;
    }
    int best = 1;
    Fraction best_frac = frac(a, child_ref(shape, cur, 1));
    bool dense = best_frac >= threshold;
    for (int i = 2; i <= shape.k(); ++i) {
      const Fraction f = frac(a, child_ref(shape, cur, i));
      if (f < threshold) dense = false;
      if (f > best_frac) {
        best = i;
        best_frac = f;
      }
    }
    if (dense) {
      out.children_dense = true;
      break;
    }
    cur = child_ref(shape, cur, best);
    ++out.steps;
    out.trail.push_back({shape.address(cur), best_frac});
  }
  out.node = shape.address(cur);
  return out;
}

struct HeavyMember {
  NodeAddress anchor;  // node of F+ on a spaced layer
  NodeAddress node;    // where greedy descent from the anchor stopped
  int steps = 0;
};

struct HeavySet {
  int tau = 0;     // layer spacing ceil(2k log2(2q))
  int layers = 0;  // floor(d / tau)
  // |F+| on layer j*tau, and the floor k^(j tau) / (2q) it must reach.
  std::vector<std::uint64_t> dense_per_layer;
  std::vector<BigRational> dense_floor_per_layer;
  std::vector<HeavyMember> members;
  std::uint64_t leaves_sum = 0;  // sum of Leaves(u) over members
  BigRational bound;             // d * k^d * (4q)^(-3k log2 k)
};

// On every layer j*tau (j < floor(d/tau)) take the nodes with
// Frac >= 1/(2q), then descend from each with threshold parameter 2q.
inline HeavySet build_heavy_set_F(const LeafSet& a, std::uint64_t q) {
  const TreeShape& shape = a.shape();
  const int k = shape.k();
  const int d = shape.d();
  if (k < 2) throw PreconditionError("heavy set: k must be >= 2");
  if (q < 2) throw PreconditionError("heavy set: q must be >= 2");
  if (static_cast<std::uint64_t>(d) < 4 * static_cast<std::uint64_t>(k) * q) {
    throw PreconditionError("heavy set: need d >= 4kq (d = " + std::to_string(d) + ", 4kq = " +
                            std::to_string(4 * static_cast<std::uint64_t>(k) * q) + ")");
  }
  if (!a.is_q_subset(q)) {
    throw PreconditionError("heavy set: |A| = " + std::to_string(a.size()) +
                            " is below k^d/q");
  }
  HeavySet out;
  out.tau = heavy_set_spacing(k, q);
  out.layers = d / out.tau;
  out.bound = heavy_set_bound(k, d, q);
  const Fraction anchor_threshold(1, static_cast<std::int64_t>(2 * q));
  for (int j = 0; j < out.layers; ++j) {
    const int depth = j * out.tau;
    std::uint64_t dense = 0;
    for (std::uint64_t off = 0; off < shape.layer_size(depth); ++off) {
      const NodeRef v{depth, off};
      if (frac(a, v) < anchor_threshold) continue;
      ++dense;
      const NodeAddress anchor = shape.address(v);
      const DescendResult r = greedy_descend(a, anchor, 2 * q, out.tau);
      if (!r.preconditions_met()) {
        throw std::logic_error("heavy set: descent preconditions failed at " + anchor.to_string() +
                               ": " + r.precondition_violations.front());
      }
      out.members.push_back({anchor, r.node, r.steps});
      out.leaves_sum += shape.leaves_below(r.node.depth());
    }
    out.dense_per_layer.push_back(dense);
    out.dense_floor_per_layer.push_back(
        BigRational(BigInt(shape.layer_size(depth)), BigInt(2 * q)));
  }
  return out;
}

}  // namespace gapamp
