#pragma once

#include <cstdint>

#include "cpsparse/graph.hpp"
#include "cpsparse/types.hpp"

namespace cpsparse {

/* Relative tolerance deciding f(u)_j == f(v)_j: |difference| <= kEqualityRelTol * diameter. */
inline constexpr double kEqualityRelTol = 1e-12;

/* Length of the axis-aligned bounding-box diagonal of the rows of f. */
double domain_diameter(const Field& f);

/* kEqualityRelTol * domain_diameter(data) */
double equality_tolerance(const Field& data);

/* (grad_w f)(u,v) = sqrt(w(u,v)) (f(v) - f(u)) for every directed edge. */
EdgeField gradient(const Graph& graph, const VertexField& f);

/* (grad_w^* G)(u) = sum_{v~u} sqrt(w(u,v)) (G(v,u) - G(u,v)); div_w = -adjoint. */
VertexField adjoint(const Graph& graph, const EdgeField& G);

/* ( sum over directed edges of ||grad_w f(u,v)||_q^p )^(1/p) */
double pq_norm(const Graph& graph, const VertexField& f, double p, double q);

/* Anisotropic (p = q) / isotropic (q = 2) graph p-Laplacian,
 *   sum_{v~u} w^{p/2} ||f(v)-f(u)||_q^{p-q} (f(v)-f(u)) |f(v)-f(u)|^{q-2}.
 * A difference with |.| <= tol raised to a negative power throws
 * SingularEdgeError. */
VertexField p_laplacian(const Graph& graph, const VertexField& f, double p, double q, double tol = 0.0);

/* Gradient of R(f) = 1/(2p) ||grad_w f||_{p;q}^p restricted to the set where
 * R is differentiable: per (edge, coordinate) when q = 1, per edge when q > 1.
 * Terms on degenerate edges (difference <= tol) are exactly zero. Equals
 * -p_laplacian on that set. spec.kind must be kPq. */
VertexField regularizer_gradient(const Graph& graph, const VertexField& f, const RegularizerSpec& spec,
                                 double tol = 0.0);

/* kPq: 1/2 ||f-g||^2 + beta/(2p) ||grad_w f||_{p;q}^p
 * kL0: 1/2 ||f-g||^2 + alpha sum over directed edges with f(u) != f(v) of sqrt(w)
 * (inequality decided with tolerance tol). */
double energy(const Graph& graph, const VertexField& f, const VertexField& g, const RegularizerSpec& spec,
              double tol = 0.0);

/* Power-iteration estimate of the spectral norm of grad_w (seeded). */
double operator_norm_estimate(const Graph& graph, int iters = 50, std::uint64_t seed = 0);

/* throws ConformanceError unless f has one row per vertex */
void check_vertex_field(const Graph& graph, const Field& f, const char* what);
void check_edge_field(const Graph& graph, const Field& G, const char* what);

}  // namespace cpsparse
