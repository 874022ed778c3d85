#pragma once

#include <vector>

#include "cpsparse/graph.hpp"
#include "cpsparse/types.hpp"

namespace cpsparse {

/* Disjoint cover of the vertex set. Subset ids are 0..size()-1 and each
 * subset lists its vertices in increasing order. */
class Partition {
 public:
  Partition() = default;

  /* from per-vertex labels; ids are renumbered by lowest member */
  static Partition from_labels(const std::vector<Index>& labels);
  /* one subset holding every vertex */
  static Partition whole(Index n_vertices);
  /* every vertex alone */
  static Partition discrete(Index n_vertices);

  Index num_vertices() const { return static_cast<Index>(assignment_.size()); }
  Index size() const { return static_cast<Index>(subsets_.size()); }
  Index subset_of(Index u) const { return assignment_[u]; }
  const std::vector<Index>& subset(Index a) const { return subsets_[a]; }
  Index subset_size(Index a) const { return static_cast<Index>(subsets_[a].size()); }
  const std::vector<Index>& assignment() const { return assignment_; }

  bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

 private:
  std::vector<Index> assignment_;
  std::vector<std::vector<Index>> subsets_;
};

/* Splits each subset into the connected components (through edges internal
 * to the subset) of its vertices sharing the same label. New ids follow
 * discovery from the lowest vertex id. */
Partition split_by_labels(const Graph& graph, const Partition& part, const std::vector<Index>& labels);

/* split_by_labels with the indicator of B as label */
Partition split_by_cut(const Graph& graph, const Partition& part, const std::vector<char>& in_b);

/* Graph whose vertices are the subsets of a partition (reduced vertex a is
 * subset a). graph carries w_r(A,B) = sum of crossing original weights;
 * coupling(e) is the matching sum of sqrt(w), aligned with graph's directed
 * edge order. */
struct ReducedGraph {
  Graph graph;
  std::vector<double> coupling;

  /* Weights for which ||grad_{w'} c||_{p;q}^p on the reduced graph equals
   * ||grad_w (P c)||_{p;q}^p on the original graph: coupling^2 for p = 1 and
   * w_r for p = 2. */
  Graph operator_graph(double p) const;
};

ReducedGraph reduce_graph(const Graph& graph, const Partition& part);

/* (P c)(u) = c_{A(u)} */
VertexField expand(const Partition& part, const ReducedField& c);

/* (P* v)_A = sum over u in A of v(u) */
ReducedField reduce_field(const Partition& part, const VertexField& v);

/* per-subset sums of squared norms of the rows of v */
std::vector<double> reduce_squared_norms(const Partition& part, const VertexField& v);

}  // namespace cpsparse
