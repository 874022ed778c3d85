#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsparse/graph.hpp"
#include "cpsparse/maxflow.hpp"
#include "cpsparse/partition.hpp"
#include "cpsparse/solver.hpp"
#include "cpsparse/types.hpp"

namespace cpsparse {

enum class CutMode { kAniso, kIso, kThreshold };
enum class DirectionMode { kKmeans2, kPca, kRandom };

struct CutPursuitConfig {
  RegularizerSpec spec;
  CutMode cut_mode = CutMode::kAniso;
  DirectionMode direction_mode = DirectionMode::kKmeans2;
  double stop_tol = -1.0;  // < 0: 1e-9 (1 + J at the initial means)
  int max_outer_iters = 100;
  // values closer than this (relative to the domain diameter) count as equal when building cuts
  double cut_tol = 1e-6;
  std::optional<int> octree_iters;
  bool debias = false;
  bool l0_aniso = false;  // coordinatewise cut for the l0 path
  PDConfig pd = default_pd();
  unsigned threads = 1;
  std::uint64_t seed = 0;

  static PDConfig default_pd() {
    PDConfig pd;
    pd.precondition = true;
    pd.rel_tol = 1e-8;
    return pd;
  }

  /* checks the pairing of cut mode and regularizer */
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  Index subsets = 0;
  double derivative = 0.0;  // min J'(f; 1_B) of the cut computed at this iteration
  double cut_value = 0.0;
  int solver_iterations = 0;
  double ms_directions = 0.0;
  double ms_cut = 0.0;
  double ms_partition = 0.0;
  double ms_solve = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  std::string stop_reason;
};

struct RunResult {
  Partition partition;
  ReducedField c;
  VertexField f;
  RunTrace trace;
};

/* Unit direction gamma_A per subset; degenerate subsets (a single point, no
 * spread, or coinciding 2-means centres) are flagged and get no terminal
 * arcs. */
struct DirectionSet {
  Field gamma;
  std::vector<char> degenerate;
};

/* Directions from the rows of g in each subset. kmeans2: Lloyd's method
 * seeded with the point farthest from the subset mean and the point farthest
 * from that one; pca: top covariance eigenvector; random: seeded Gaussian. */
DirectionSet choose_directions(const VertexField& g, const Partition& part, DirectionMode mode,
                               std::uint64_t seed = 0, unsigned threads = 1);

/* gradient of the differentiable part of J at f: (f - g) + alpha grad R_S(f)
 * for pq, f - g for l0 */
VertexField cut_gradient(const Graph& graph, const VertexField& f, const VertexField& g,
                         const RegularizerSpec& spec, double tol);

/* d*N inner nodes (node j*N + u is coordinate j of vertex u). Terminal arcs
 * from the sign of grad, arcs alpha sqrt(w) both ways where f(u)_j and
 * f(v)_j agree within tol. */
FlowNetwork build_flow_aniso(const Graph& graph, const VertexField& f, const VertexField& grad, double alpha,
                             double tol);

/* N inner nodes with a_u = <grad(u), gamma_{A(u)}>, arcs alpha sqrt(w) both
 * ways where f(u) and f(v) agree within tol. */
FlowNetwork build_flow_iso(const Graph& graph, const VertexField& f, const VertexField& grad, double alpha,
                           const Partition& part, const DirectionSet& dirs, double tol);

/* B = {u : <grad(u), gamma_{A(u)}> < 0} */
std::vector<char> threshold_cut(const Partition& part, const VertexField& grad, const DirectionSet& dirs);

RunResult run(const Graph& graph, const VertexField& g, const CutPursuitConfig& cfg);
RunResult run_l0(const Graph& graph, const VertexField& g, const CutPursuitConfig& cfg);

/* alpha = beta = 0 with coordinatewise cuts for exactly `iters` outer
 * iterations (fewer if nothing splits any more) */
RunResult run_octree(const Graph& graph, const VertexField& g, int iters, unsigned threads = 1);

/* f(u) = mean of g over the subset of u */
VertexField debias(const Partition& part, const VertexField& g);

}  // namespace cpsparse
