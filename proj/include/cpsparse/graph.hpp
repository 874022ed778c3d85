#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "cpsparse/types.hpp"

namespace cpsparse {

/* Undirected edge as handed to the Graph constructor. */
struct WeightedEdge {
  Index u;
  Index v;
  double w;
};

/* Immutable weighted undirected graph.
 *
 * Every undirected edge {u, v} is stored as the two directed edges (u, v)
 * and (v, u) with equal weight. Directed edges are sorted by (source,
 * target), so the outgoing edges of u form the contiguous range
 * [first_edge(u), first_edge(u + 1)). reverse(e) is the index of the paired
 * edge. Dual variables of the primal-dual solvers live on these directed
 * edges. */
class Graph {
 public:
  Graph() = default;

  /* Builds a graph on n vertices. Edges with w <= 0 are dropped; self-loops,
   * out-of-range endpoints, non-finite weights and repeated pairs raise
   * DomainError. */
  Graph(Index n_vertices, std::span<const WeightedEdge> edges);

  Index num_vertices() const { return n_vertices_; }
  /* number of stored directed edges (twice the undirected count) */
  Index num_edges() const { return static_cast<Index>(target_.size()); }

  Index source(Index e) const { return source_[e]; }
  Index target(Index e) const { return target_[e]; }
  double weight(Index e) const { return weight_[e]; }
  double sqrt_weight(Index e) const { return sqrt_weight_[e]; }
  Index reverse(Index e) const { return reverse_[e]; }

  Index first_edge(Index u) const { return offset_[u]; }
  Index end_edge(Index u) const { return offset_[u + 1]; }
  Index degree(Index u) const { return offset_[u + 1] - offset_[u]; }

  /* directed edge index of (u, v), or -1 */
  Index find_edge(Index u, Index v) const;

  /* connected component id of each vertex, ids in order of lowest vertex */
  std::vector<Index> connected_components(Index* count = nullptr) const;

  /* the undirected edge list (u < v) in storage order */
  std::vector<WeightedEdge> undirected_edges() const;

 private:
  Index n_vertices_ = 0;
  std::vector<Index> offset_{0};
  std::vector<Index> source_;
  std::vector<Index> target_;
  std::vector<double> weight_;
  std::vector<double> sqrt_weight_;
  std::vector<Index> reverse_;
};

/* Which energy is being minimized.
 *
 * kind = kPq: J(f) = 1/2 ||f - g||^2 + beta R(f) with
 *   R(f) = 1/(2p) ||grad_w f||_{p;q}^p, the sum running over directed edges;
 *   alpha weights the same R in the partition (cut) problem.
 * kind = kL0: J0(f) = 1/2 ||f - g||^2 + alpha sum_{(u,v), f(u) != f(v)} sqrt(w);
 *   p, q are ignored. */
struct RegularizerSpec {
  enum class Kind { kPq, kL0 };

  Kind kind = Kind::kPq;
  double p = 1.0;
  double q = 1.0;
  double alpha = 0.0;
  double beta = 0.0;

  /* throws DomainError on p, q < 1 or negative / non-finite weights */
  void validate() const;

  static RegularizerSpec pq(double p, double q, double alpha, double beta) {
    return {Kind::kPq, p, q, alpha, beta};
  }
  static RegularizerSpec l0(double alpha) { return {Kind::kL0, 1.0, 1.0, alpha, 0.0}; }
};

}  // namespace cpsparse
