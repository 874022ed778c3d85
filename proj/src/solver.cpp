#include "cpsparse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpsparse/errors.hpp"
#include "cpsparse/operators.hpp"

namespace cpsparse {

void PDConfig::validate() const {
  if (tau < 0.0 || sigma < 0.0 || !std::isfinite(tau) || !std::isfinite(sigma))
    throw DomainError("PDConfig: tau and sigma must be finite and >= 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("PDConfig: theta must lie in [0, 1]");
  if (!(rel_tol > 0.0)) throw DomainError("PDConfig: rel_tol must be > 0");
  if (max_iters < 1) throw DomainError("PDConfig: max_iters must be >= 1");
  if (!(precond_exponent >= 0.0 && precond_exponent <= 2.0))
    throw DomainError("PDConfig: preconditioner exponent must lie in [0, 2]");
}

EdgeField project_ball(const EdgeField& z, double p_star, double q_star, double radius) {
  if (!(radius > 0.0)) throw DomainError("project_ball: radius must be > 0");
  EdgeField out = z;
  if (p_star == kInf && q_star == kInf) {
    out = z.cwiseMax(-radius).cwiseMin(radius);
  } else if (p_star == kInf && q_star == 2.0) {
    for (Index e = 0; e < z.rows(); ++e) {
      const double n = z.row(e).norm();
      if (n > radius) out.row(e) *= radius / n;
    }
  } else if (p_star == 2.0 && q_star == 2.0) {
    const double n = z.norm();
    if (n > radius) out *= radius / n;
  } else {
    throw CapabilityError("project_ball: unsupported dual ball (" + std::to_string(p_star) + ", " +
                          std::to_string(q_star) + ")");
  }
  return out;
}

namespace {

void check_exponent(double exponent) {
  if (!(exponent >= 0.0 && exponent <= 2.0)) throw DomainError("preconditioner exponent must lie in [0, 2]");
}

double dual_exponent(double p) { return p == 1.0 ? kInf : p / (p - 1.0); }

void check_supported(const RegularizerSpec& spec) {
  if (spec.kind != RegularizerSpec::Kind::kPq) throw DomainError("primal-dual solver needs a pq regularizer");
  spec.validate();
  const bool ok = (spec.p == 1.0 && (spec.q == 1.0 || spec.q == 2.0)) || (spec.p == 2.0 && spec.q == 2.0);
  if (!ok)
    throw CapabilityError("primal-dual solver supports (p, q) in {(1, 1), (1, 2), (2, 2)}, got (" +
                          std::to_string(spec.p) + ", " + std::to_string(spec.q) + ")");
}

/* Common loop for min_c sum_A (|A|/2 ||c_A||^2 - <c_A, S_A>) + constant
 * + beta/2 ||K c||_{p;q} with K the gradient of op. */
PDResult run_pd(const Graph& op, const std::vector<double>& size, const Field& sums, double constant,
                const RegularizerSpec& spec, const PDConfig& cfg, const Preconditioner* precond,
                const Field* init) {
  check_supported(spec);
  cfg.validate();
  const Index m = op.num_vertices();
  const Index d = sums.cols();

  Field means(m, d);
  for (Index a = 0; a < m; ++a) means.row(a) = sums.row(a) / size[a];

  auto objective = [&](const Field& c) {
    double data = constant;
    for (Index a = 0; a < m; ++a) data += 0.5 * size[a] * c.row(a).squaredNorm() - c.row(a).dot(sums.row(a));
    if (spec.beta == 0.0 || op.num_edges() == 0) return data;
    return data + 0.5 * spec.beta * pq_norm(op, c, spec.p, spec.q);
  };

  PDResult result;
  if (spec.beta == 0.0 || op.num_edges() == 0) {
    result.f = means;
    result.dual = EdgeField::Zero(op.num_edges(), d);
    result.initial_energy = objective(init ? *init : means);
    result.energy.push_back(objective(means));
    result.converged = true;
    return result;
  }

  const double p_star = dual_exponent(spec.p);
  const double q_star = dual_exponent(spec.q);
  const double radius = 0.5 * spec.beta;

  // step sizes: explicit, preconditioned, or scalar from the operator norm
  std::vector<double> T(static_cast<std::size_t>(m));
  std::vector<double> Sigma(static_cast<std::size_t>(op.num_edges()));
  Preconditioner built;
  if (!precond && cfg.precondition && cfg.tau == 0.0) {
    built = build_preconditioner(op, cfg.precond_exponent, &size);
    precond = &built;
  }
  if (precond) {
    if (static_cast<Index>(precond->T.size()) != m || static_cast<Index>(precond->Sigma.size()) != op.num_edges())
      throw ConformanceError("preconditioner does not match the graph");
    T = precond->T;
    Sigma = precond->Sigma;
    if (precond == &built) {
      // the documented steps overshoot: each edge is stored twice and |A| is already in the prox
      for (Index a = 0; a < m; ++a) T[a] *= 0.5 / size[a];
    }
    if (p_star == 2.0) {
      // the global ball is not separable: use one dual step
      const double s = *std::min_element(Sigma.begin(), Sigma.end());
      std::fill(Sigma.begin(), Sigma.end(), s);
    }
  } else {
    double tau = cfg.tau, sigma = cfg.sigma;
    if (tau == 0.0 || sigma == 0.0) {
      const double L = operator_norm_estimate(op, cfg.norm_iters, cfg.seed);
      if (tau == 0.0) tau = 0.99 / L;
      if (sigma == 0.0) sigma = 0.99 / L;
    }
    std::fill(T.begin(), T.end(), tau);
    std::fill(Sigma.begin(), Sigma.end(), sigma);
  }

  Field c = init ? *init : means;
  if (c.rows() != m || c.cols() != d) throw ConformanceError("primal-dual: initial field has the wrong shape");
  EdgeField y = EdgeField::Zero(op.num_edges(), d);
  const double e0 = objective(c);
  result.initial_energy = e0;
  double prev = e0;
  double theta = cfg.theta;
  double scale = 1.0;  // acceleration rescaling of T (Sigma is divided by it)

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const VertexField ky = adjoint(op, y);
    Field next(m, d);
    for (Index a = 0; a < m; ++a) {
      const double t = scale * T[a];
      next.row(a) = (c.row(a) - t * ky.row(a) + t * sums.row(a)) / (1.0 + t * size[a]);
    }
    if (cfg.accelerate) {
      // strong convexity modulus of the data term is min |A| >= 1
      theta = 1.0 / std::sqrt(1.0 + 2.0 * scale * *std::min_element(T.begin(), T.end()));
    }
    const Field bar = next + theta * (next - c);
    const EdgeField kb = gradient(op, bar);
    const double sigma_scale = cfg.accelerate ? 1.0 / (scale * theta) : 1.0;
    for (Index e = 0; e < op.num_edges(); ++e) y.row(e) += sigma_scale * Sigma[e] * kb.row(e);
    y = project_ball(y, p_star, q_star, radius);
    if (cfg.accelerate) scale *= theta;
    c = std::move(next);

    const double value = objective(c);
    result.energy.push_back(value);
    result.iterations = it;
    if (!std::isfinite(value)) throw NumericalError("primal-dual: non-finite objective");
    if (e0 > 0.0 && value > 10.0 * e0)
      throw StepSizeError("primal-dual diverged: objective " + std::to_string(value) + " exceeds 10x the initial " +
                          std::to_string(e0));
    const double floor = std::numeric_limits<double>::min();
    if (it >= cfg.min_iters && std::abs(value - prev) <= cfg.rel_tol * std::max(std::abs(prev), floor)) {
      result.converged = true;
      break;
    }
    prev = value;
  }
  result.f = std::move(c);
  result.dual = std::move(y);
  return result;
}

}  // namespace

Preconditioner build_preconditioner(const Graph& graph, double exponent, const std::vector<double>* sizes) {
  check_exponent(exponent);
  if (sizes && static_cast<Index>(sizes->size()) != graph.num_vertices())
    throw ConformanceError("build_preconditioner: one size per vertex required");
  Preconditioner pc;
  pc.exponent = exponent;
  pc.T.resize(static_cast<std::size_t>(graph.num_vertices()));
  pc.Sigma.resize(static_cast<std::size_t>(graph.num_edges()));
  for (Index u = 0; u < graph.num_vertices(); ++u) {
    double sum = 0.0;
    for (Index e = graph.first_edge(u); e < graph.end_edge(u); ++e)
      sum += std::pow(graph.sqrt_weight(e), 2.0 - exponent);
    const double numerator = sizes ? (*sizes)[u] : 1.0;
    pc.T[u] = sum > 0.0 ? numerator / sum : numerator;
  }
  for (Index e = 0; e < graph.num_edges(); ++e) pc.Sigma[e] = 1.0 / (2.0 * std::pow(graph.sqrt_weight(e), exponent));
  return pc;
}

Preconditioner build_preconditioner(const ReducedGraph& rg, const Partition& part, double p, double exponent) {
  if (part.size() != rg.graph.num_vertices()) throw ConformanceError("build_preconditioner: partition mismatch");
  std::vector<double> sizes(static_cast<std::size_t>(part.size()));
  for (Index a = 0; a < part.size(); ++a) sizes[a] = static_cast<double>(part.subset_size(a));
  return build_preconditioner(rg.operator_graph(p), exponent, &sizes);
}

double pd_objective(const Graph& graph, const VertexField& f, const VertexField& g, const RegularizerSpec& spec) {
  check_vertex_field(graph, f, "pd_objective");
  check_vertex_field(graph, g, "pd_objective");
  const double data = 0.5 * (f - g).squaredNorm();
  if (spec.beta == 0.0) return data;
  return data + 0.5 * spec.beta * pq_norm(graph, f, spec.p, spec.q);
}

PDResult primal_dual_full(const Graph& graph, const VertexField& g, const RegularizerSpec& spec,
                          const PDConfig& cfg, const Preconditioner* precond, const VertexField* init) {
  check_vertex_field(graph, g, "primal_dual_full");
  std::vector<double> ones(static_cast<std::size_t>(graph.num_vertices()), 1.0);
  const Field start = init ? *init : g;
  return run_pd(graph, ones, g, 0.5 * g.squaredNorm(), spec, cfg, precond, &start);
}

PDResult primal_dual_reduced(const ReducedGraph& rg, const Partition& part, const ReducedField& g_sums,
                             const std::vector<double>& g_sq, const RegularizerSpec& spec, const PDConfig& cfg,
                             const Preconditioner* precond, const ReducedField* init) {
  const Index m = part.size();
  if (rg.graph.num_vertices() != m || g_sums.rows() != m || static_cast<Index>(g_sq.size()) != m)
    throw ConformanceError("primal_dual_reduced: reduced graph, sums and partition disagree");
  check_supported(spec);
  std::vector<double> sizes(static_cast<std::size_t>(m));
  double constant = 0.0;
  for (Index a = 0; a < m; ++a) {
    sizes[a] = static_cast<double>(part.subset_size(a));
    constant += 0.5 * g_sq[a];
  }
  const Graph op = rg.operator_graph(spec.p);
  return run_pd(op, sizes, g_sums, constant, spec, cfg, precond, init);
}

ReducedField solve_l0_reduced(const Partition& part, const VertexField& g) {
  ReducedField c = reduce_field(part, g);
  for (Index a = 0; a < part.size(); ++a) c.row(a) /= static_cast<double>(part.subset_size(a));
  return c;
}

}  // namespace cpsparse
