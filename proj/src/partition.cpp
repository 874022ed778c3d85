#include "cpsparse/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cpsparse/errors.hpp"

namespace cpsparse {

Partition Partition::from_labels(const std::vector<Index>& labels) {
  Partition part;
  const Index n = static_cast<Index>(labels.size());
  part.assignment_.resize(labels.size());
  std::map<Index, Index> ids;
  for (Index u = 0; u < n; ++u) {
    auto [it, inserted] = ids.try_emplace(labels[u], static_cast<Index>(ids.size()));
    if (inserted) part.subsets_.emplace_back();
    part.assignment_[u] = it->second;
    part.subsets_[it->second].push_back(u);
  }
  return part;
}

Partition Partition::whole(Index n_vertices) {
  return from_labels(std::vector<Index>(static_cast<std::size_t>(n_vertices), 0));
}

Partition Partition::discrete(Index n_vertices) {
  std::vector<Index> labels(static_cast<std::size_t>(n_vertices));
  for (Index u = 0; u < n_vertices; ++u) labels[u] = u;
  return from_labels(labels);
}

Partition split_by_labels(const Graph& graph, const Partition& part, const std::vector<Index>& labels) {
  const Index n = graph.num_vertices();
  if (part.num_vertices() != n || static_cast<Index>(labels.size()) != n)
    throw ConformanceError("split_by_labels: partition / label size does not match the graph");
  std::vector<Index> comp(static_cast<std::size_t>(n), -1);
  std::vector<Index> stack;
  Index next = 0;
  for (Index root = 0; root < n; ++root) {
    if (comp[root] >= 0) continue;
    comp[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index e = graph.first_edge(u); e < graph.end_edge(u); ++e) {
        const Index v = graph.target(e);
        if (comp[v] < 0 && part.subset_of(v) == part.subset_of(u) && labels[v] == labels[u]) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return Partition::from_labels(comp);
}

Partition split_by_cut(const Graph& graph, const Partition& part, const std::vector<char>& in_b) {
  if (static_cast<Index>(in_b.size()) < graph.num_vertices())
    throw ConformanceError("split_by_cut: indicator shorter than the vertex set");
  std::vector<Index> labels(static_cast<std::size_t>(graph.num_vertices()));
  for (Index u = 0; u < graph.num_vertices(); ++u) labels[u] = in_b[u] ? 1 : 0;
  return split_by_labels(graph, part, labels);
}

Graph ReducedGraph::operator_graph(double p) const {
  std::vector<WeightedEdge> edges;
  for (Index e = 0; e < graph.num_edges(); ++e) {
    const Index u = graph.source(e), v = graph.target(e);
    if (u > v) continue;
    const double w = p == 1.0 ? coupling[e] * coupling[e] : graph.weight(e);
    edges.push_back({u, v, w});
  }
  return Graph(graph.num_vertices(), edges);
}

ReducedGraph reduce_graph(const Graph& graph, const Partition& part) {
  if (part.num_vertices() != graph.num_vertices())
    throw ConformanceError("reduce_graph: partition does not match the graph");
  std::map<std::pair<Index, Index>, std::pair<double, double>> sums;
  for (Index e = 0; e < graph.num_edges(); ++e) {
    const Index a = part.subset_of(graph.source(e)), b = part.subset_of(graph.target(e));
    if (a >= b) continue;  // each crossing undirected edge is seen once with a < b
    auto& s = sums[{a, b}];
    s.first += graph.weight(e);
    s.second += graph.sqrt_weight(e);
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(sums.size());
  for (const auto& [key, s] : sums) edges.push_back({key.first, key.second, s.first});

  ReducedGraph rg;
  rg.graph = Graph(part.size(), edges);
  rg.coupling.assign(static_cast<std::size_t>(rg.graph.num_edges()), 0.0);
  for (const auto& [key, s] : sums) {
    const Index e = rg.graph.find_edge(key.first, key.second);
    rg.coupling[e] = s.second;
    rg.coupling[rg.graph.reverse(e)] = s.second;
  }
  return rg;
}

VertexField expand(const Partition& part, const ReducedField& c) {
  if (c.rows() != part.size()) throw ConformanceError("expand: one row per subset required");
  VertexField f(part.num_vertices(), c.cols());
  for (Index u = 0; u < part.num_vertices(); ++u) f.row(u) = c.row(part.subset_of(u));
  return f;
}

ReducedField reduce_field(const Partition& part, const VertexField& v) {
  if (v.rows() != part.num_vertices()) throw ConformanceError("reduce_field: one row per vertex required");
  ReducedField c = ReducedField::Zero(part.size(), v.cols());
  for (Index u = 0; u < part.num_vertices(); ++u) c.row(part.subset_of(u)) += v.row(u);
  return c;
}

std::vector<double> reduce_squared_norms(const Partition& part, const VertexField& v) {
  if (v.rows() != part.num_vertices())
    throw ConformanceError("reduce_squared_norms: one row per vertex required");
  std::vector<double> out(static_cast<std::size_t>(part.size()), 0.0);
  for (Index u = 0; u < part.num_vertices(); ++u) out[part.subset_of(u)] += v.row(u).squaredNorm();
  return out;
}

}  // namespace cpsparse
