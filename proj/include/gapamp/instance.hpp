#pragma once

// Directed acyclic disjoint-paths instances: graph, requests, validation,
// topological ordering, and the yes/no generators used throughout the tests.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gapamp {

// Vertices are dense 1-based ids.
using Vertex = int;

struct Arc {
  Vertex from = 0;
  Vertex to = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Plain digraph on vertices 1..n. Construction does not validate; run
// validate_instance() (or validate_graph()) to collect invariant violations.
class Digraph {
 public:
  Digraph() = default;
  Digraph(int vertex_count, std::vector<Arc> arcs)
      : n_(vertex_count), arcs_(std::move(arcs)) {
    if (n_ < 0) throw std::invalid_argument("Digraph: negative vertex count");
  }

  int vertex_count() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t arc_count() const { return arcs_.size(); }
  bool contains(Vertex v) const { return v >= 1 && v <= n_; }
  bool has_arc(const Arc& a) const { return std::find(arcs_.begin(), arcs_.end(), a) != arcs_.end(); }

  // Out-neighbours, ascending. Index 0 unused. Arcs with out-of-range
  // endpoints are skipped.
  std::vector<std::vector<Vertex>> successors() const {
    std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(n_) + 1);
    for (const Arc& a : arcs_) {
      if (contains(a.from) && contains(a.to)) out[a.from].push_back(a.to);
    }
    for (auto& s : out) std::sort(s.begin(), s.end());
    return out;
  }

  std::vector<std::vector<Vertex>> predecessors() const {
    std::vector<std::vector<Vertex>> in(static_cast<std::size_t>(n_) + 1);
    for (const Arc& a : arcs_) {
      if (contains(a.from) && contains(a.to)) in[a.to].push_back(a.from);
    }
    for (auto& p : in) std::sort(p.begin(), p.end());
    return in;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
};

struct Request {
  Vertex source = 0;
  Vertex sink = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

// A digraph with an ordered request list. Request i (1-based) is
// requests()[i - 1].
class DagInstance {
 public:
  DagInstance() = default;
  DagInstance(Digraph graph, std::vector<Request> requests)
      : graph_(std::move(graph)), requests_(std::move(requests)) {}

  const Digraph& graph() const { return graph_; }
  const std::vector<Request>& requests() const { return requests_; }
  int k() const { return static_cast<int>(requests_.size()); }
  const Request& request(int index) const {
    if (index < 1 || index > k()) {
      throw std::out_of_range("request index " + std::to_string(index) +
                              " outside 1.." + std::to_string(k()));
    }
    return requests_[static_cast<std::size_t>(index) - 1];
  }

  friend bool operator==(const DagInstance&, const DagInstance&) = default;

 private:
  Digraph graph_;
  std::vector<Request> requests_;
};

enum class ViolationKind {
  SelfLoop,
  DuplicateArc,
  ArcEndpointOutOfRange,
  Cycle,
  RequestEndpointOutOfRange,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SelfLoop: return "self-loop";
    case ViolationKind::DuplicateArc: return "duplicate-arc";
    case ViolationKind::ArcEndpointOutOfRange: return "arc-endpoint-out-of-range";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::RequestEndpointOutOfRange: return "request-endpoint-out-of-range";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string location;
};

struct TopologicalSort {
  std::vector<Vertex> order;
  // Closed walk v1 -> ... -> v1 when the graph has a cycle; order is then
  // the partial order of the acyclic part.
  std::optional<std::vector<Vertex>> cycle;

  bool acyclic() const { return !cycle.has_value(); }
};

// Kahn's algorithm with a min-heap, so ties go to the smallest vertex id.
inline TopologicalSort topological_order(const Digraph& g) {
  const int n = g.vertex_count();
  const auto succ = g.successors();
  std::vector<int> indegree(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex v = 1; v <= n; ++v) {
    for (Vertex w : succ[v]) ++indegree[w];
  }
  std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
  for (Vertex v = 1; v <= n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  TopologicalSort result;
  result.order.reserve(static_cast<std::size_t>(n));
  while (!ready.empty()) {
    const Vertex v = ready.top();
    ready.pop();
    result.order.push_back(v);
    for (Vertex w : succ[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (static_cast<int>(result.order.size()) == n) return result;

  // Every leftover vertex has a leftover predecessor, so walking backwards
  // from the smallest leftover vertex must revisit something.
  const auto pred = g.predecessors();
  Vertex start = 0;
  for (Vertex v = 1; v <= n; ++v) {
    if (indegree[v] > 0) {
      start = v;
      break;
    }
  }
  std::vector<Vertex> walk;
  std::vector<int> seen_at(static_cast<std::size_t>(n) + 1, -1);
  Vertex cur = start;
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<int>(walk.size());
    walk.push_back(cur);
    Vertex next = 0;
    for (Vertex p : pred[cur]) {
      if (indegree[p] > 0) {
        next = p;
        break;
      }
    }
    cur = next;
  }
  std::vector<Vertex> cycle(walk.begin() + seen_at[cur], walk.end());
  cycle.push_back(cur);
  std::reverse(cycle.begin(), cycle.end());
  result.cycle = std::move(cycle);
  return result;
}

inline std::vector<Violation> validate_graph(const Digraph& g) {
  std::vector<Violation> out;
  std::set<Arc> seen;
  for (std::size_t i = 0; i < g.arcs().size(); ++i) {
    const Arc& a = g.arcs()[i];
    const std::string where = "arc #" + std::to_string(i + 1) + " (" +
                              std::to_string(a.from) + " -> " +
                              std::to_string(a.to) + ")";
    if (!g.contains(a.from) || !g.contains(a.to)) {
      out.push_back({ViolationKind::ArcEndpointOutOfRange,
                     where + ": endpoint outside 1.." +
                         std::to_string(g.vertex_count())});
      continue;
    }
    if (a.from == a.to) {
      out.push_back({ViolationKind::SelfLoop, where});
      continue;
    }
    if (!seen.insert(a).second) {
      out.push_back({ViolationKind::DuplicateArc, where});
    }
  }
  const TopologicalSort topo = topological_order(g);
  if (!topo.acyclic()) {
    std::ostringstream os;
    os << "cycle";
    for (Vertex v : *topo.cycle) os << ' ' << v;
    out.push_back({ViolationKind::Cycle, os.str()});
  }
  return out;
}

inline std::vector<Violation> validate_instance(const DagInstance& inst) {
  std::vector<Violation> out = validate_graph(inst.graph());
  for (int i = 1; i <= inst.k(); ++i) {
    const Request& r = inst.request(i);
    if (!inst.graph().contains(r.source) || !inst.graph().contains(r.sink)) {
      out.push_back({ViolationKind::RequestEndpointOutOfRange,
                     "request #" + std::to_string(i) + " (" +
                         std::to_string(r.source) + ", " +
                         std::to_string(r.sink) + "): endpoint outside 1.." +
                         std::to_string(inst.graph().vertex_count())});
    }
  }
  return out;
}

// k vertex-disjoint directed paths with pad interior vertices each; request i
// runs from the first to the last vertex of path i.
inline DagInstance gen_yes_instance(int k, int pad) {
  if (k < 1) throw std::invalid_argument("gen_yes_instance: k must be >= 1");
  if (pad < 0) throw std::invalid_argument("gen_yes_instance: pad must be >= 0");
  const int len = pad + 2;
  std::vector<Arc> arcs;
  std::vector<Request> requests;
  for (int i = 0; i < k; ++i) {
    const Vertex first = i * len + 1;
    for (int j = 0; j + 1 < len; ++j) arcs.push_back({first + j, first + j + 1});
    requests.push_back({first, first + len - 1});
  }
  return DagInstance(Digraph(k * len, std::move(arcs)), std::move(requests));
}

// Sources 1..k, bottleneck k+1, sinks k+2..2k+1; arcs s_i -> b -> t_i.
inline DagInstance gen_no_instance(int k) {
  if (k < 2) throw std::invalid_argument("gen_no_instance: k must be >= 2");
  const Vertex bottleneck = k + 1;
  std::vector<Arc> arcs;
  std::vector<Request> requests;
  for (int i = 1; i <= k; ++i) arcs.push_back({i, bottleneck});
  for (int i = 1; i <= k; ++i) arcs.push_back({bottleneck, bottleneck + i});
  for (int i = 1; i <= k; ++i) requests.push_back({i, bottleneck + i});
  return DagInstance(Digraph(2 * k + 1, std::move(arcs)), std::move(requests));
}

}  // namespace gapamp
