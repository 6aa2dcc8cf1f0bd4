#pragma once

// Exact vertex-disjoint paths on DAGs.
//
// decide_disjoint_paths runs the pebble game: one pebble per selected
// request, starting on its source. Only the pebble sitting on the vertex that
// is earliest in a fixed topological order may move, either along one arc or,
// when it sits on its sink, to DONE. A pebble that leaves vertex w was the
// minimum at that moment, so every other pebble is already past w in the
// order and can never reach it; recording current positions is therefore
// enough to keep whole paths disjoint. States are memoized, so at most
// (n+1)^|subset| of them are expanded.
//
// brute_force_decide is the independent check: plain backtracking over
// simple paths, request by request, with no ordering rule and no memo.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "gapamp/instance.hpp"
#include "gapamp/instance_io.hpp"

namespace gapamp {

struct ServedPath {
  int request = 0;  // 1-based request index
  std::vector<Vertex> vertices;

  friend bool operator==(const ServedPath&, const ServedPath&) = default;
};

struct PathSolution {
  std::vector<ServedPath> paths;

  friend bool operator==(const PathSolution&, const PathSolution&) = default;
};

// Ascending, duplicate-free, 1-based request indices.
using RequestSubset = std::vector<int>;

inline RequestSubset all_requests(const DagInstance& inst) {
  RequestSubset s(static_cast<std::size_t>(inst.k()));
  for (int i = 0; i < inst.k(); ++i) s[static_cast<std::size_t>(i)] = i + 1;
  return s;
}

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t requested, std::size_t budget)
      : std::runtime_error("subset of " + std::to_string(requested) +
                           " requests exceeds solver budget " +
                           std::to_string(budget)),
        budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

struct SolverOptions {
  std::size_t subset_budget = 8;
  bool want_witness = true;
};

struct Decision {
  bool feasible = false;
  std::optional<PathSolution> witness;
  std::size_t states_expanded = 0;
};

namespace detail {

inline RequestSubset normalize_subset(const DagInstance& inst, RequestSubset subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (int i : subset) {
    if (i < 1 || i > inst.k()) {
      throw std::out_of_range("request index " + std::to_string(i) +
                              " outside 1.." + std::to_string(inst.k()));
    }
  }
  return subset;
}

struct StateHash {
  std::size_t operator()(const std::vector<int>& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : s) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

class PebbleSearch {
 public:
  PebbleSearch(const DagInstance& inst, const RequestSubset& subset)
      : inst_(inst), subset_(subset), succ_(inst.graph().successors()) {
    const int n = inst.graph().vertex_count();
    const TopologicalSort topo = topological_order(inst.graph());
    if (!topo.acyclic()) {
      throw std::invalid_argument("decide_disjoint_paths: graph has a cycle");
    }
    rank_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < topo.order.size(); ++i) {
      rank_[topo.order[i]] = static_cast<int>(i) + 1;
    }
    // reaches_sink_[p][v]: v can still reach the sink of pebble p.
    const auto pred = inst.graph().predecessors();
    reaches_sink_.resize(subset.size());
    for (std::size_t p = 0; p < subset.size(); ++p) {
      auto& mark = reaches_sink_[p];
      mark.assign(static_cast<std::size_t>(n) + 1, 0);
      std::vector<Vertex> stack{inst.request(subset[p]).sink};
      mark[stack.back()] = 1;
      while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex u : pred[v]) {
          if (!mark[u]) {
            mark[u] = 1;
            stack.push_back(u);
          }
        }
      }
    }
  }

  bool run() {
    std::vector<int> state(subset_.size());
    for (std::size_t p = 0; p < subset_.size(); ++p) {
      state[p] = inst_.request(subset_[p]).source;
      if (!reaches_sink_[p][state[p]]) return false;
    }
    std::vector<int> sorted = state;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return false;  // two paths would share a source vertex
    }
    return expand(state);
  }

  std::size_t states_expanded() const { return visited_.size(); }

  PathSolution witness() const {
    PathSolution sol;
    for (std::size_t p = 0; p < subset_.size(); ++p) {
      sol.paths.push_back({subset_[p], {inst_.request(subset_[p]).source}});
    }
    for (const Move& mv : moves_) {
      if (mv.to != kDone) sol.paths[mv.pebble].vertices.push_back(mv.to);
    }
    return sol;
  }

 private:
  static constexpr int kDone = 0;

  struct Move {
    std::size_t pebble;
    int to;
  };

  bool expand(std::vector<int>& state) {
    if (!visited_.insert(state).second) return false;
    std::size_t mover = state.size();
    for (std::size_t p = 0; p < state.size(); ++p) {
      if (state[p] == kDone) continue;
      if (mover == state.size() || rank_[state[p]] < rank_[state[mover]]) mover = p;
    }
    if (mover == state.size()) return true;  // every pebble DONE

    const Vertex at = state[mover];
    if (at == inst_.request(subset_[mover]).sink) {
      state[mover] = kDone;
      moves_.push_back({mover, kDone});
      if (expand(state)) return true;
      moves_.pop_back();
      state[mover] = at;
      return false;
    }
    for (Vertex next : succ_[at]) {
      if (!reaches_sink_[mover][next]) continue;
      if (std::find(state.begin(), state.end(), next) != state.end()) continue;
      state[mover] = next;
      moves_.push_back({mover, next});
      if (expand(state)) return true;
      moves_.pop_back();
      state[mover] = at;
    }
    return false;
  }

  const DagInstance& inst_;
  const RequestSubset& subset_;
  std::vector<std::vector<Vertex>> succ_;
  std::vector<int> rank_;
  std::vector<std::vector<char>> reaches_sink_;
  std::unordered_set<std::vector<int>, StateHash> visited_;
  std::vector<Move> moves_;
};

}  // namespace detail

inline Decision decide_disjoint_paths(const DagInstance& inst, RequestSubset subset,
                                      const SolverOptions& options = {}) {
  subset = detail::normalize_subset(inst, std::move(subset));
  if (subset.size() > options.subset_budget) {
    throw BudgetExceeded(subset.size(), options.subset_budget);
  }
  detail::PebbleSearch search(inst, subset);
  Decision d;
  d.feasible = search.run();
  d.states_expanded = search.states_expanded();
  if (d.feasible && options.want_witness) d.witness = search.witness();
  return d;
}

namespace detail {

inline bool brute_force_route(const DagInstance& inst, const RequestSubset& subset,
                              std::size_t next, std::vector<char>& used,
                              const std::vector<std::vector<Vertex>>& succ);

inline bool brute_force_extend(const DagInstance& inst, const RequestSubset& subset,
                               std::size_t next, Vertex at, Vertex sink,
                               std::vector<char>& used,
                               const std::vector<std::vector<Vertex>>& succ) {
  if (at == sink) return brute_force_route(inst, subset, next + 1, used, succ);
  for (Vertex w : succ[at]) {
    if (used[w]) continue;
    used[w] = 1;
    if (brute_force_extend(inst, subset, next, w, sink, used, succ)) return true;
    used[w] = 0;
  }
  return false;
}

inline bool brute_force_route(const DagInstance& inst, const RequestSubset& subset,
                              std::size_t next, std::vector<char>& used,
                              const std::vector<std::vector<Vertex>>& succ) {
  if (next == subset.size()) return true;
  const Request& r = inst.request(subset[next]);
  if (used[r.source]) return false;
  used[r.source] = 1;
  if (brute_force_extend(inst, subset, next, r.source, r.sink, used, succ)) {
    return true;
  }
  used[r.source] = 0;
  return false;
}

}  // namespace detail

inline bool brute_force_decide(const DagInstance& inst, RequestSubset subset) {
  subset = detail::normalize_subset(inst, std::move(subset));
  std::vector<char> used(static_cast<std::size_t>(inst.graph().vertex_count()) + 1, 0);
  const auto succ = inst.graph().successors();
  return detail::brute_force_route(inst, subset, 0, used, succ);
}

struct SolutionCheck {
  bool ok = false;
  std::vector<std::string> violations;
};

inline SolutionCheck verify_solution(const DagInstance& inst, const PathSolution& sol,
                                     const RequestSubset& required) {
  SolutionCheck check;
  auto fail = [&](std::string msg) { check.violations.push_back(std::move(msg)); };
  const Digraph& g = inst.graph();
  std::unordered_set<std::uint64_t> arcs;
  for (const Arc& a : g.arcs()) {
    arcs.insert((static_cast<std::uint64_t>(a.from) << 32) |
                static_cast<std::uint32_t>(a.to));
  }
  std::vector<int> owner(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
  std::vector<char> served(static_cast<std::size_t>(inst.k()) + 1, 0);
  for (const ServedPath& p : sol.paths) {
    const std::string tag = "path for request " + std::to_string(p.request);
    if (p.request < 1 || p.request > inst.k()) {
      fail(tag + ": no such request");
      continue;
    }
    if (served[p.request]) fail(tag + ": request served twice");
    served[p.request] = 1;
    if (p.vertices.empty()) {
      fail(tag + ": empty");
      continue;
    }
    const Request& r = inst.request(p.request);
    if (p.vertices.front() != r.source) {
      fail(tag + ": starts at " + std::to_string(p.vertices.front()) +
           ", source is " + std::to_string(r.source));
    }
    if (p.vertices.back() != r.sink) {
      fail(tag + ": ends at " + std::to_string(p.vertices.back()) +
           ", sink is " + std::to_string(r.sink));
    }
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      const Vertex v = p.vertices[i];
      if (!g.contains(v)) {
        fail(tag + ": vertex " + std::to_string(v) + " out of range");
        continue;
      }
      if (i + 1 < p.vertices.size()) {
        const Vertex w = p.vertices[i + 1];
        const std::uint64_t key =
            (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(w);
        if (!arcs.contains(key)) {
          fail(tag + ": connectivity violation, no arc " + std::to_string(v) +
               " -> " + std::to_string(w));
        }
      }
      if (owner[v] == p.request) {
        fail(tag + ": revisits vertex " + std::to_string(v));
      } else if (owner[v] != 0) {
        fail(tag + ": disjointness violation, shares vertex " + std::to_string(v) +
             " with request " + std::to_string(owner[v]));
      } else {
        owner[v] = p.request;
      }
    }
  }
  for (int i : required) {
    if (i < 1 || i > inst.k() || !served[i]) {
      fail("required request " + std::to_string(i) + " not served");
    }
  }
  check.ok = check.violations.empty();
  return check;
}

struct MaxServedOptions {
  std::size_t request_budget = 12;
  unsigned jobs = 1;
};

struct MaxServed {
  int count = 0;
  RequestSubset subset;
  PathSolution witness;
};

namespace detail {

// Size-c subsets of 1..k in lexicographic order.
inline std::vector<RequestSubset> combinations(int k, int c) {
  std::vector<RequestSubset> out;
  RequestSubset cur(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = c - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - c + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < c; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j) - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

// Largest servable subset; ties go to the lexicographically smallest subset.
inline MaxServed max_served(const DagInstance& inst, const MaxServedOptions& options = {}) {
  if (static_cast<std::size_t>(inst.k()) > options.request_budget) {
    throw BudgetExceeded(static_cast<std::size_t>(inst.k()), options.request_budget);
  }
  SolverOptions decide_opts;
  decide_opts.subset_budget = options.request_budget;
  decide_opts.want_witness = false;
  for (int c = inst.k(); c >= 1; --c) {
    const auto candidates = detail::combinations(inst.k(), c);
    // Workers skip candidates after the earliest hit so far; the earliest
    // feasible index is the same for any schedule.
    std::atomic<std::size_t> best{candidates.size()};
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      while (true) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= candidates.size() || i > best.load()) return;
        if (decide_disjoint_paths(inst, candidates[i], decide_opts).feasible) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    };
    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (best.load() < candidates.size()) {
      MaxServed out;
      out.count = c;
      out.subset = candidates[best.load()];
      decide_opts.want_witness = true;
      out.witness = *decide_disjoint_paths(inst, out.subset, decide_opts).witness;
      return out;
    }
  }
  return MaxServed{};
}

// "path <request-index>: v1 v2 ... vm", one line per path.
inline std::string serialize_solution(const PathSolution& sol) {
  std::ostringstream os;
  for (const ServedPath& p : sol.paths) {
    os << "path " << p.request << ':';
    for (Vertex v : p.vertices) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

inline PathSolution parse_solution(std::string_view text) {
  std::istringstream in{std::string(text)};
  PathSolution sol;
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos || line.compare(0, 5, "path ") != 0) {
      throw ParseError(line_no, "expected 'path <request>: v1 ... vm'");
    }
    ServedPath p;
    const std::string head = detail::strip_comment(line.substr(5, colon - 5));
    p.request = detail::parse_int_field(head, line_no, "request index");
    for (const auto& tok : detail::split_ws(line.substr(colon + 1))) {
      p.vertices.push_back(detail::parse_int_field(tok, line_no, "vertex"));
    }
    sol.paths.push_back(std::move(p));
  }
  return sol;
}

}  // namespace gapamp
