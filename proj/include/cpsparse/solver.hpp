#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cpsparse/graph.hpp"
#include "cpsparse/partition.hpp"
#include "cpsparse/types.hpp"

namespace cpsparse {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/* Primal-dual (Chambolle-Pock) settings. tau = sigma = 0 selects
 * 0.99 / ||grad|| from a power iteration when no preconditioner is given. */
struct PDConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double theta = 1.0;
  int max_iters = 10000;
  int min_iters = 10;
  double rel_tol = 1e-5;
  bool accelerate = false;
  bool precondition = false;
  double precond_exponent = 1.0;
  int norm_iters = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/* Diagonal step sizes: T per (reduced) vertex, Sigma per directed edge. */
struct Preconditioner {
  std::vector<double> T;
  std::vector<double> Sigma;
  double exponent = 1.0;
};

struct PDResult {
  Field f;
  double initial_energy = 0.0;
  EdgeField dual;               // final dual variable, one row per directed edge of the operator graph
  std::vector<double> energy;  // objective after every iteration
  int iterations = 0;
  bool converged = false;
};

/* Projection onto {y : ||y||_{p*;q*} <= radius} for (p*, q*) in
 * {(inf, inf), (inf, 2), (2, 2)}; other pairs raise CapabilityError. */
EdgeField project_ball(const EdgeField& z, double p_star, double q_star, double radius);

/* tau_u = |A_u| / sum_{v~u} w(u,v)^{(2-a)/2}, sigma_e = 1 / (2 w_e^{a/2}), with
 * |A_u| = 1 unless sizes are given (one entry per vertex of graph). Vertices
 * without edges get tau = |A_u|. */
Preconditioner build_preconditioner(const Graph& graph, double exponent, const std::vector<double>* sizes = nullptr);

/* Reduced variant on the operator graph of rg for exponent p. */
Preconditioner build_preconditioner(const ReducedGraph& rg, const Partition& part, double p, double exponent);

/* 1/2 ||f-g||^2 + beta/2 ||grad_w f||_{p;q}; agrees with energy() when p = 1. */
double pd_objective(const Graph& graph, const VertexField& f, const VertexField& g, const RegularizerSpec& spec);

/* min_f 1/2 ||f-g||^2 + beta/2 ||grad_w f||_{p;q} for p, q in {1, 2}
 * ((p, q) = (2, 1) is not supported). Starts from init or g. */
PDResult primal_dual_full(const Graph& graph, const VertexField& g, const RegularizerSpec& spec,
                          const PDConfig& cfg, const Preconditioner* precond = nullptr,
                          const VertexField* init = nullptr);

/* Same problem restricted to fields constant on the subsets of part:
 * min_c 1/2 ||P c - g||^2 + beta/2 ||grad_w (P c)||_{p;q}, computed on the
 * reduced graph. g_sums = reduce_field(part, g), g_sq = reduce_squared_norms
 * (only used for the reported objective). Starts from init or the subset
 * means. */
PDResult primal_dual_reduced(const ReducedGraph& rg, const Partition& part, const ReducedField& g_sums,
                             const std::vector<double>& g_sq, const RegularizerSpec& spec, const PDConfig& cfg,
                             const Preconditioner* precond = nullptr, const ReducedField* init = nullptr);

/* subset means of g */
ReducedField solve_l0_reduced(const Partition& part, const VertexField& g);

}  // namespace cpsparse
