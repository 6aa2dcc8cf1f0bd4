#pragma once

// Shared test fixtures: the k = d = 3 example scheme and seeded random DAGs.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gapamp/gapamp.hpp"

namespace gapamp::testing {

// The k = d = 3 example. Layer-3 copies are lettered J..R and numbered
// alphabetically (J = 1, ..., R = 9); the top row gives, for leaves 1..27,
// the layer-3 copy reached, i.e. f_(1), f_(2), f_(3) block by block. The
// bottom row letters A..I name layer-2 copies, three per depth-1 subtree
// (A,B,C / D,E,F / G,H,I), numbered alphabetically within the subtree; each
// block of three is f at one depth-2 node, read left to right. The root
// bijection is not used by the construction and is the identity here.
inline Scheme figure_one_scheme() {
  const std::string top = "JKLNOMPRQ" "MQLNOJPRK" "PKLNMOJRQ";
  const std::string bottom = "ACBBACCAB" "EFDDEFEFD" "HGIHGIGHI";
  const TreeShape shape(3, 3);
  std::vector<Permutation> perms;
  Permutation root(27);
  for (std::uint32_t i = 0; i < 27; ++i) root[i] = i + 1;
  perms.push_back(root);
  for (int block = 0; block < 3; ++block) {
    Permutation p;
    for (int j = 0; j < 9; ++j) p.push_back(static_cast<std::uint32_t>(top[block * 9 + j] - 'J' + 1));
    perms.push_back(p);
  }
  for (int block = 0; block < 9; ++block) {
    const char base = static_cast<char>('A' + 3 * (block / 3));
    Permutation p;
    for (int j = 0; j < 3; ++j) p.push_back(static_cast<std::uint32_t>(bottom[block * 3 + j] - base + 1));
    perms.push_back(p);
  }
  for (int leaf = 0; leaf < 27; ++leaf) perms.push_back({1});
  return Scheme(shape, std::move(perms));
}

// Acyclic digraph on n vertices: a random hidden order, each forward pair an
// arc with probability arc_prob; k requests with random distinct endpoints.
inline DagInstance random_dag(Rng& rng, int n, double arc_prob, int k) {
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i + 1;
  fisher_yates(rng, label);
  std::vector<Arc> arcs;
  const auto threshold = static_cast<std::uint64_t>(arc_prob * 1'000'000.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform_below(rng, 1'000'000) < threshold) {
        arcs.push_back({label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(j)]});
      }
    }
  }
  std::vector<Request> requests;
  for (int r = 0; r < k; ++r) {
    const auto s = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)) + 1);
    auto t = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)) + 1);
    if (t >= s) ++t;
    requests.push_back({s, t});
  }
  return DagInstance(Digraph(n, std::move(arcs)), std::move(requests));
}

// Like random_dag, but k vertex-disjoint request paths are planted first, so
// every request set is servable. Needs n >= 2k.
inline DagInstance planted_yes_dag(Rng& rng, int n, double arc_prob, int k) {
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i + 1;
  fisher_yates(rng, label);
  // chain[i] = request owning hidden position i, or -1
  std::vector<int> chain(static_cast<std::size_t>(n), -1);
  std::vector<int> slots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = i;
  fisher_yates(rng, slots);
  for (int i = 0; i < n; ++i) {
    const int owner = i < 2 * k ? i % k : static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(k) + 1)) - 1;
    chain[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])] = owner;
  }
  std::vector<Arc> arcs;
  std::vector<int> last(static_cast<std::size_t>(k), -1), first(static_cast<std::size_t>(k), -1);
  for (int i = 0; i < n; ++i) {
    const int c = chain[static_cast<std::size_t>(i)];
    if (c < 0) continue;
    auto& prev = last[static_cast<std::size_t>(c)];
    if (prev >= 0) arcs.push_back({label[static_cast<std::size_t>(prev)], label[static_cast<std::size_t>(i)]});
    if (first[static_cast<std::size_t>(c)] < 0) first[static_cast<std::size_t>(c)] = i;
    prev = i;
  }
  const auto threshold = static_cast<std::uint64_t>(arc_prob * 1'000'000.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Arc a{label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(j)]};
      if (uniform_below(rng, 1'000'000) < threshold && std::find(arcs.begin(), arcs.end(), a) == arcs.end()) {
        arcs.push_back(a);
      }
    }
  }
  std::vector<Request> requests;
  for (int c = 0; c < k; ++c) {
    requests.push_back({label[static_cast<std::size_t>(first[static_cast<std::size_t>(c)])],
                        label[static_cast<std::size_t>(last[static_cast<std::size_t>(c)])]});
  }
  return DagInstance(Digraph(n, std::move(arcs)), std::move(requests));
}

inline LeafSet random_leafset(Rng& rng, const TreeShape& shape, std::uint64_t per_million) {
  std::vector<char> present(static_cast<std::size_t>(shape.leaf_count()));
  for (auto& c : present) c = uniform_below(rng, 1'000'000) < per_million ? 1 : 0;
  return LeafSet(shape, std::move(present));
}

// Uniformly random subset of exactly `size` leaves.
inline LeafSet random_leafset_of_size(Rng& rng, const TreeShape& shape, std::uint64_t size) {
  std::vector<LeafNumber> all(static_cast<std::size_t>(shape.leaf_count()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i + 1;
  fisher_yates(rng, all);
  all.resize(static_cast<std::size_t>(size));
  return LeafSet(shape, all);
}

}  // namespace gapamp::testing
