#include "cpsparse/operators.hpp"

#include <cmath>
#include <random>
#include <string>

#include "cpsparse/errors.hpp"

namespace cpsparse {

void check_vertex_field(const Graph& graph, const Field& f, const char* what) {
  if (f.rows() != graph.num_vertices())
    throw ConformanceError(std::string(what) + ": expected " + std::to_string(graph.num_vertices()) +
                           " rows, got " + std::to_string(f.rows()));
}

void check_edge_field(const Graph& graph, const Field& G, const char* what) {
  if (G.rows() != graph.num_edges())
    throw ConformanceError(std::string(what) + ": expected " + std::to_string(graph.num_edges()) +
                           " rows, got " + std::to_string(G.rows()));
}

double domain_diameter(const Field& f) {
  if (f.rows() == 0) return 0.0;
  return (f.colwise().maxCoeff() - f.colwise().minCoeff()).norm();
}

double equality_tolerance(const Field& data) { return kEqualityRelTol * domain_diameter(data); }

EdgeField gradient(const Graph& graph, const VertexField& f) {
  check_vertex_field(graph, f, "gradient");
  EdgeField out(graph.num_edges(), f.cols());
  for (Index e = 0; e < graph.num_edges(); ++e)
    out.row(e) = graph.sqrt_weight(e) * (f.row(graph.target(e)) - f.row(graph.source(e)));
  return out;
}

VertexField adjoint(const Graph& graph, const EdgeField& G) {
  check_edge_field(graph, G, "adjoint");
  VertexField out = VertexField::Zero(graph.num_vertices(), G.cols());
  for (Index u = 0; u < graph.num_vertices(); ++u) {
    auto row = out.row(u);
    for (Index e = graph.first_edge(u); e < graph.end_edge(u); ++e)
      row += graph.sqrt_weight(e) * (G.row(graph.reverse(e)) - G.row(e));
  }
  return out;
}

namespace {

void check_exponents(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("p and q must be >= 1");
}

double q_norm(const Eigen::Ref<const Eigen::RowVectorXd>& x, double q) {
  if (q == 1.0) return x.cwiseAbs().sum();
  if (q == 2.0) return x.norm();
  return std::pow(x.cwiseAbs().array().pow(q).sum(), 1.0 / q);
}

}  // namespace

double pq_norm(const Graph& graph, const VertexField& f, double p, double q) {
  check_exponents(p, q);
  check_vertex_field(graph, f, "pq_norm");
  double sum = 0.0;
  Eigen::RowVectorXd diff(f.cols());
  for (Index e = 0; e < graph.num_edges(); ++e) {
    diff = f.row(graph.target(e)) - f.row(graph.source(e));
    const double n = q_norm(diff, q);
    sum += (p == 1.0 ? graph.sqrt_weight(e) * n : std::pow(graph.weight(e), p / 2.0) * std::pow(n, p));
  }
  return p == 1.0 ? sum : std::pow(sum, 1.0 / p);
}

namespace {

/* Accumulates sum_{v~u} coef_e * (f(v)-f(u))_j |.|^{q-2} ||.||_q^{p-q} into out.
 * skip_degenerate selects between skipping (restriction to the differentiable
 * set) and throwing on singular terms. */
VertexField laplacian_impl(const Graph& graph, const VertexField& f, double p, double q, double tol,
                           bool skip_degenerate) {
  const Index d = f.cols();
  VertexField out = VertexField::Zero(graph.num_vertices(), d);
  Eigen::RowVectorXd diff(d);
  for (Index u = 0; u < graph.num_vertices(); ++u) {
    for (Index e = graph.first_edge(u); e < graph.end_edge(u); ++e) {
      diff = f.row(graph.target(e)) - f.row(u);
      const double n = q_norm(diff, q);
      const double wp = (p == 1.0) ? graph.sqrt_weight(e) : std::pow(graph.weight(e), p / 2.0);
      // Norm factor ||d||^{p-q}: singular only when p < q and the edge is flat.
      double norm_factor = 1.0;
      if (p != q) {
        if (n <= tol) {
          if (p < q) {
            if (skip_degenerate) continue;
            throw SingularEdgeError("p-Laplacian: zero difference on edge (" + std::to_string(u) + ", " +
                                    std::to_string(graph.target(e)) + ")");
          }
          continue;  // p > q: the whole term vanishes with the difference
        }
        norm_factor = std::pow(n, p - q);
      }
      for (Index j = 0; j < d; ++j) {
        const double dj = diff[j];
        double term;
        if (q == 2.0) {
          term = dj;
        } else if (std::abs(dj) <= tol) {
          if (q > 1.0) continue;  // dj |dj|^{q-2} -> 0
          if (skip_degenerate) continue;
          throw SingularEdgeError("p-Laplacian: zero coordinate difference on edge (" + std::to_string(u) +
                                  ", " + std::to_string(graph.target(e)) + ")");
        } else if (q == 1.0) {
          term = dj > 0.0 ? 1.0 : -1.0;
        } else {
          term = dj * std::pow(std::abs(dj), q - 2.0);
        }
        out(u, j) += wp * norm_factor * term;
      }
    }
  }
  return out;
}

}  // namespace

VertexField p_laplacian(const Graph& graph, const VertexField& f, double p, double q, double tol) {
  check_exponents(p, q);
  check_vertex_field(graph, f, "p_laplacian");
  return laplacian_impl(graph, f, p, q, tol, false);
}

VertexField regularizer_gradient(const Graph& graph, const VertexField& f, const RegularizerSpec& spec,
                                 double tol) {
  if (spec.kind != RegularizerSpec::Kind::kPq) throw DomainError("regularizer_gradient: kL0 has no gradient");
  check_exponents(spec.p, spec.q);
  check_vertex_field(graph, f, "regularizer_gradient");
  return -laplacian_impl(graph, f, spec.p, spec.q, tol, true);
}

double energy(const Graph& graph, const VertexField& f, const VertexField& g, const RegularizerSpec& spec,
              double tol) {
  check_vertex_field(graph, f, "energy");
  check_vertex_field(graph, g, "energy");
  if (f.cols() != g.cols()) throw ConformanceError("energy: f and g differ in dimension");
  const double data = 0.5 * (f - g).squaredNorm();
  if (spec.kind == RegularizerSpec::Kind::kPq) {
    if (spec.beta == 0.0) return data;
    const double norm = pq_norm(graph, f, spec.p, spec.q);
    return data + spec.beta / (2.0 * spec.p) * std::pow(norm, spec.p);
  }
  double jumps = 0.0;
  for (Index e = 0; e < graph.num_edges(); ++e) {
    const double diff = (f.row(graph.target(e)) - f.row(graph.source(e))).cwiseAbs().maxCoeff();
    if (diff > tol) jumps += graph.sqrt_weight(e);
  }
  return data + spec.alpha * jumps;
}

double operator_norm_estimate(const Graph& graph, int iters, std::uint64_t seed) {
  if (iters < 1) throw DomainError("operator_norm_estimate: iters must be >= 1");
  if (graph.num_edges() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  VertexField x(graph.num_vertices(), 1);
  for (Index i = 0; i < x.rows(); ++i) x(i, 0) = normal(rng);
  x /= x.norm();
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    // x <- grad^* grad x, the Rayleigh quotient ||grad x||^2 never decreases
    const EdgeField gx = gradient(graph, x);
    estimate = gx.norm();
    VertexField y = adjoint(graph, gx);
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
  }
  return std::max(estimate, gradient(graph, x).norm());
}

}  // namespace cpsparse
