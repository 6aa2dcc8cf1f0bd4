#pragma once

// The amplified instance J_{k,d}(I, beta).
//
// For a node u whose subtree has depth h: if h = 1, J(u) is one copy of I
// whose k requests are indexed by the k leaves below u in order. Otherwise,
// J(u) is J(u_1), ..., J(u_k) followed by k^(h-1) fresh copies I_1.. of I
// (layer h). For each child u_i and each leaf v below it, with x = f_{u_i}(v),
// the arc J(u_i)[t_v] -> I_x[s_i] is added and request v becomes
// (J(u_i)[s_v], I_x[t_i]).
//
// Vertex ids are allocated depth-first in exactly that order: each copy is a
// contiguous block of |V(I)| ids, copy vertex w getting id offset + w.
// Composed request indices are leaf numbers.

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapamp/heavy.hpp"
#include "gapamp/instance.hpp"
#include "gapamp/scheme.hpp"
#include "gapamp/solver.hpp"
#include "gapamp/tree.hpp"

namespace gapamp {

struct CopyRecord {
  int layer = 0;           // 1 = first layer of every request route, d = last
  NodeAddress host;        // tree node at depth d - layer whose sub-instance adds this copy
  std::uint64_t slot = 0;  // x in I_x among the host's layer copies, 1-based
  Vertex offset = 0;       // copy vertex w has id offset + w
};

// A request route crosses one copy per layer, entering at s_i and leaving at
// t_i of that copy, where i = request.
struct RouteSegment {
  std::size_t copy = 0;  // index into ComposedInstance::copies
  int request = 0;       // request index of I used inside that copy
};

struct ComposedInstance {
  DagInstance instance;
  TreeShape shape{1, 1};
  std::vector<std::uint64_t> leaf_request_map;  // [leaf - 1] -> request index
  std::vector<CopyRecord> copies;
  std::vector<std::vector<RouteSegment>> routes;  // [leaf - 1], layer 1 first
  std::size_t connector_arcs = 0;
};

namespace detail {

class Composer {
 public:
  Composer(const DagInstance& base, const Scheme& beta)
      : base_(base), beta_(beta), shape_(beta.shape()), n_(base.graph().vertex_count()) {}

  ComposedInstance run() {
    const std::uint64_t leaves = shape_.leaf_count();
    routes_.assign(static_cast<std::size_t>(leaves), {});
    build(NodeRef{0, 0});

    std::vector<Request> requests;
    requests.reserve(static_cast<std::size_t>(leaves));
    for (const auto& route : routes_) {
      const auto& first = route.front();
      const auto& last = route.back();
      requests.push_back({copies_[first.copy].offset + base_.request(first.request).source,
                          copies_[last.copy].offset + base_.request(last.request).sink});
    }
    ComposedInstance out;
    const auto total = static_cast<std::uint64_t>(copies_.size()) * static_cast<std::uint64_t>(n_);
    if (total > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      throw std::overflow_error("composed instance has too many vertices");
    }
    out.instance = DagInstance(Digraph(static_cast<int>(total), std::move(arcs_)), std::move(requests));
    out.shape = shape_;
    out.leaf_request_map.resize(static_cast<std::size_t>(leaves));
    for (std::uint64_t leaf = 1; leaf <= leaves; ++leaf) out.leaf_request_map[leaf - 1] = leaf;
    out.copies = std::move(copies_);
    out.routes = std::move(routes_);
    out.connector_arcs = connectors_;
    return out;
  }

 private:
  std::size_t add_copy(int layer, NodeRef host, std::uint64_t slot) {
    const auto offset = static_cast<Vertex>(copies_.size() * static_cast<std::size_t>(n_));
    copies_.push_back({layer, shape_.address(host), slot, offset});
    for (const Arc& a : base_.graph().arcs()) arcs_.push_back({offset + a.from, offset + a.to});
    return copies_.size() - 1;
  }

  void build(NodeRef u) {
    const int k = shape_.k();
    const int h = shape_.d() - u.depth;
    if (h == 1) {
      const std::size_t c = add_copy(1, u, 1);
      const LeafNumber first = shape_.first_leaf(u);
      for (int j = 1; j <= k; ++j) routes_[first - 1 + static_cast<std::size_t>(j - 1)].push_back({c, j});
      return;
    }
    for (int i = 1; i <= k; ++i) build(child_ref(shape_, u, i));
    const std::uint64_t width = shape_.leaves_below(u.depth + 1);
    const std::size_t first_copy = copies_.size();
    for (std::uint64_t x = 1; x <= width; ++x) add_copy(h, u, x);
    for (int i = 1; i <= k; ++i) {
      const NodeRef child = child_ref(shape_, u, i);
      const Permutation& f = beta_.permutation(child);
      const LeafNumber first = shape_.first_leaf(child);
      for (std::uint64_t j = 0; j < width; ++j) {
        auto& route = routes_[static_cast<std::size_t>(first - 1 + j)];
        const RouteSegment& last = route.back();
        const std::size_t target = first_copy + f[static_cast<std::size_t>(j)] - 1;
        arcs_.push_back({copies_[last.copy].offset + base_.request(last.request).sink,
                         copies_[target].offset + base_.request(i).source});
        ++connectors_;
        route.push_back({target, i});
      }
    }
  }

  const DagInstance& base_;
  const Scheme& beta_;
  const TreeShape& shape_;
  const int n_;
  std::vector<Arc> arcs_;
  std::vector<CopyRecord> copies_;
  std::vector<std::vector<RouteSegment>> routes_;
  std::size_t connectors_ = 0;
};

}  // namespace detail

inline ComposedInstance compose(const DagInstance& base, const Scheme& beta) {
  if (base.k() != beta.shape().k()) {
    throw std::invalid_argument("compose: instance has " + std::to_string(base.k()) +
                                " requests but scheme arity is " +
                                std::to_string(beta.shape().k()));
  }
  return detail::Composer(base, beta).run();
}

// Turns a solution serving every request of I into one serving every request
// of J: the path of leaf v walks the copy-local path of each route segment,
// joined by the connector arcs.
inline PathSolution lift_solution(const DagInstance& base, const PathSolution& full_solution,
                                  const Scheme& beta, const ComposedInstance& composed) {
  if (!(composed.shape == beta.shape()) || base.k() != beta.shape().k()) {
    throw std::invalid_argument("lift_solution: scheme does not match the composed instance");
  }
  if (static_cast<std::uint64_t>(composed.instance.graph().vertex_count()) !=
      composed.copies.size() * static_cast<std::uint64_t>(base.graph().vertex_count())) {
    throw std::invalid_argument("lift_solution: composed instance was not built from this base");
  }
  const SolutionCheck check = verify_solution(base, full_solution, all_requests(base));
  if (!check.ok) {
    throw PreconditionError("lift_solution: base solution does not serve every request: " +
                            check.violations.front());
  }
  std::vector<const std::vector<Vertex>*> local(static_cast<std::size_t>(base.k()) + 1, nullptr);
  for (const ServedPath& p : full_solution.paths) local[static_cast<std::size_t>(p.request)] = &p.vertices;

  PathSolution out;
  out.paths.reserve(composed.routes.size());
  for (std::size_t leaf = 0; leaf < composed.routes.size(); ++leaf) {
    ServedPath p;
    p.request = static_cast<int>(composed.leaf_request_map[leaf]);
    for (const RouteSegment& seg : composed.routes[leaf]) {
      const Vertex offset = composed.copies[seg.copy].offset;
      for (Vertex v : *local[static_cast<std::size_t>(seg.request)]) p.vertices.push_back(offset + v);
    }
    out.paths.push_back(std::move(p));
  }
  return out;
}

// Graphviz rendering: layer 1 at the top, one cluster per copy, composed
// terminals drawn as hollow circles.
inline std::string to_dot(const ComposedInstance& j, int base_vertex_count) {
  std::ostringstream os;
  const auto& inst = j.instance;
  std::vector<char> terminal(static_cast<std::size_t>(inst.graph().vertex_count()) + 1, 0);
  for (const Request& r : inst.requests()) {
    terminal[static_cast<std::size_t>(r.source)] = 1;
    terminal[static_cast<std::size_t>(r.sink)] = 1;
  }
  os << "digraph J {\n  rankdir=TB;\n  newrank=true;\n  node [shape=point];\n";
  for (int layer = 1; layer <= j.shape.d(); ++layer) {
    os << "  subgraph layer_" << layer << " {\n";
    for (std::size_t c = 0; c < j.copies.size(); ++c) {
      const CopyRecord& rec = j.copies[c];
      if (rec.layer != layer) continue;
      os << "    subgraph cluster_" << c << " {\n      label=\"L" << rec.layer << " "
         << rec.host.to_string() << " #" << rec.slot << "\";\n";
      for (Vertex w = 1; w <= base_vertex_count; ++w) {
        const Vertex v = rec.offset + w;
        os << "      " << v;
        if (terminal[static_cast<std::size_t>(v)]) os << " [shape=circle, label=\"\", width=0.15]";
        os << ";\n";
      }
      os << "    }\n";
    }
    os << "  }\n";
  }
  for (const Arc& a : inst.graph().arcs()) os << "  " << a.from << " -> " << a.to << ";\n";
  os << "}\n";
  return os.str();
}

// Sidecar: leaf-to-request map and copy records.
inline std::string serialize_composition_map(const ComposedInstance& j) {
  std::ostringstream os;
  os << "composed " << j.shape.k() << ' ' << j.shape.d() << '\n';
  for (std::size_t leaf = 0; leaf < j.leaf_request_map.size(); ++leaf) {
    os << "leaf " << leaf + 1 << " request " << j.leaf_request_map[leaf] << '\n';
  }
  for (std::size_t c = 0; c < j.copies.size(); ++c) {
    const CopyRecord& r = j.copies[c];
    os << "copy " << c + 1 << " layer " << r.layer << " host " << r.host.to_string() << " slot "
       << r.slot << " offset " << r.offset << '\n';
  }
  return os.str();
}

}  // namespace gapamp
