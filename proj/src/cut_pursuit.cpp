#include "cpsparse/cut_pursuit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "cpsparse/errors.hpp"
#include "cpsparse/operators.hpp"
#include "cpsparse/parallel.hpp"

namespace cpsparse {

void CutPursuitConfig::validate() const {
  spec.validate();
  if (stop_tol != -1.0 && !(stop_tol >= 0.0)) throw DomainError("CutPursuitConfig: stop_tol must be >= 0");
  if (!(cut_tol >= 0.0)) throw DomainError("CutPursuitConfig: cut_tol must be >= 0");
  if (max_outer_iters < 1) throw DomainError("CutPursuitConfig: max_outer_iters must be >= 1");
  if (octree_iters && *octree_iters < 1) throw DomainError("CutPursuitConfig: octree_iters must be >= 1");
  pd.validate();
  const bool pq = spec.kind == RegularizerSpec::Kind::kPq;
  switch (cut_mode) {
    case CutMode::kAniso:
      if (pq ? !(spec.p == 1.0 && spec.q == 1.0) : !l0_aniso)
        throw DomainError("anisotropic cuts need p = q = 1 (or the anisotropic l0 variant)");
      break;
    case CutMode::kIso:
      if (pq && !(spec.p == 1.0 && spec.q == 2.0)) throw DomainError("isotropic cuts need p = 1, q = 2 or l0");
      break;
    case CutMode::kThreshold:
      if (!pq || !(spec.p > 1.0 && spec.q > 1.0)) throw DomainError("threshold cuts need p, q > 1");
      break;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Field subset_rows(const VertexField& g, const std::vector<Index>& rows) {
  Field out(static_cast<Index>(rows.size()), g.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = g.row(rows[i]);
  return out;
}

Index farthest_from(const Field& x, const Eigen::RowVectorXd& p) {
  Index best = 0;
  double best_d = -1.0;
  for (Index i = 0; i < x.rows(); ++i) {
    const double d = (x.row(i) - p).squaredNorm();
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/* returns false when the centres coincide */
bool kmeans2(const Field& x, double tol, Eigen::RowVectorXd& gamma) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Index i1 = farthest_from(x, mean);
  const Index i2 = farthest_from(x, x.row(i1));
  Eigen::RowVectorXd m1 = x.row(i1), m2 = x.row(i2);
  if ((m1 - m2).norm() <= tol) return false;
  std::vector<char> label(static_cast<std::size_t>(x.rows()), -1);
  for (int it = 0; it < 50; ++it) {
    bool changed = false;
    Eigen::RowVectorXd s1 = Eigen::RowVectorXd::Zero(x.cols()), s2 = s1;
    Index n1 = 0, n2 = 0;
    for (Index i = 0; i < x.rows(); ++i) {
      const char l = (x.row(i) - m2).squaredNorm() < (x.row(i) - m1).squaredNorm() ? 1 : 0;
      if (l != label[i]) changed = true;
      label[i] = l;
      if (l) {
        s2 += x.row(i);
        ++n2;
      } else {
        s1 += x.row(i);
        ++n1;
      }
    }
    if (n1 > 0) m1 = s1 / static_cast<double>(n1);
    if (n2 > 0) m2 = s2 / static_cast<double>(n2);
    if (!changed) break;
  }
  const Eigen::RowVectorXd diff = m2 - m1;
  const double n = diff.norm();
  if (n <= tol) return false;
  gamma = diff / n;
  return true;
}

bool principal_axis(const Field& x, double tol, Eigen::RowVectorXd& gamma) {
  const Field centred = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Index top = cov.rows() - 1;
  if (eig.eigenvalues()(top) <= tol * tol) return false;
  gamma = eig.eigenvectors().col(top).transpose();
  Index big = 0;
  for (Index j = 1; j < gamma.size(); ++j)
    if (std::abs(gamma[j]) > std::abs(gamma[big]) + 1e-12) big = j;
  if (gamma[big] < 0.0) gamma = -gamma;
  return true;
}

}  // namespace

DirectionSet choose_directions(const VertexField& g, const Partition& part, DirectionMode mode, std::uint64_t seed,
                               unsigned threads) {
  if (g.rows() != part.num_vertices()) throw ConformanceError("choose_directions: one row of g per vertex");
  const Index m = part.size(), d = g.cols();
  const double tol = equality_tolerance(g);
  DirectionSet dirs;
  dirs.gamma = Field::Zero(m, d);
  dirs.degenerate.assign(static_cast<std::size_t>(m), 1);
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t ai) {
    const Index a = static_cast<Index>(ai);
    const auto& rows = part.subset(a);
    if (rows.size() < 2) return;
    const Field x = subset_rows(g, rows);
    const Eigen::RowVectorXd spread = x.colwise().maxCoeff() - x.colwise().minCoeff();
    if (spread.norm() <= tol) return;
    Eigen::RowVectorXd gamma(d);
    bool ok = false;
    switch (mode) {
      case DirectionMode::kKmeans2:
        ok = kmeans2(x, tol, gamma);
        break;
      case DirectionMode::kPca:
        ok = principal_axis(x, tol, gamma);
        break;
      case DirectionMode::kRandom: {
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(rows.front() + 1)));
        std::normal_distribution<double> normal;
        do {
          for (Index j = 0; j < d; ++j) gamma[j] = normal(rng);
        } while (gamma.norm() == 0.0);
        gamma /= gamma.norm();
        ok = true;
        break;
      }
    }
    if (ok) {
      dirs.gamma.row(a) = gamma;
      dirs.degenerate[a] = 0;
    }
  });
  return dirs;
}

VertexField cut_gradient(const Graph& graph, const VertexField& f, const VertexField& g, const RegularizerSpec& spec,
                         double tol) {
  check_vertex_field(graph, f, "cut_gradient");
  check_vertex_field(graph, g, "cut_gradient");
  VertexField grad = f - g;
  if (spec.kind == RegularizerSpec::Kind::kPq && spec.alpha != 0.0)
    grad += spec.alpha * regularizer_gradient(graph, f, spec, tol);
  return grad;
}

namespace {

void add_terminal(FlowNetwork& net, Index node, double a) {
  // a >= 0 keeps the node with the source unless pulled over
  if (a > 0.0)
    net.add_source_arc(node, a);
  else if (a < 0.0)
    net.add_sink_arc(node, -a);
}

}  // namespace

FlowNetwork build_flow_aniso(const Graph& graph, const VertexField& f, const VertexField& grad, double alpha,
                             double tol) {
  check_vertex_field(graph, f, "build_flow_aniso");
  check_vertex_field(graph, grad, "build_flow_aniso");
  const Index n = graph.num_vertices(), d = f.cols();
  FlowNetwork net(n * d);
  for (Index j = 0; j < d; ++j)
    for (Index u = 0; u < n; ++u) add_terminal(net, j * n + u, grad(u, j));
  if (alpha > 0.0) {
    for (Index e = 0; e < graph.num_edges(); ++e) {
      const Index u = graph.source(e), v = graph.target(e);
      for (Index j = 0; j < d; ++j)
        if (std::abs(f(u, j) - f(v, j)) <= tol) net.add_arc(j * n + u, j * n + v, alpha * graph.sqrt_weight(e));
    }
  }
  check_submodular(net);
  return net;
}

FlowNetwork build_flow_iso(const Graph& graph, const VertexField& f, const VertexField& grad, double alpha,
                           const Partition& part, const DirectionSet& dirs, double tol) {
  check_vertex_field(graph, f, "build_flow_iso");
  check_vertex_field(graph, grad, "build_flow_iso");
  if (dirs.gamma.rows() != part.size()) throw ConformanceError("build_flow_iso: one direction per subset");
  const Index n = graph.num_vertices();
  FlowNetwork net(n);
  for (Index u = 0; u < n; ++u) {
    const Index a = part.subset_of(u);
    if (dirs.degenerate[a]) continue;
    add_terminal(net, u, grad.row(u).dot(dirs.gamma.row(a)));
  }
  if (alpha > 0.0) {
    for (Index e = 0; e < graph.num_edges(); ++e) {
      const Index u = graph.source(e), v = graph.target(e);
      if ((f.row(u) - f.row(v)).cwiseAbs().maxCoeff() <= tol) net.add_arc(u, v, alpha * graph.sqrt_weight(e));
    }
  }
  check_submodular(net);
  return net;
}

std::vector<char> threshold_cut(const Partition& part, const VertexField& grad, const DirectionSet& dirs) {
  if (grad.rows() != part.num_vertices()) throw ConformanceError("threshold_cut: one gradient row per vertex");
  std::vector<char> in_b(static_cast<std::size_t>(part.num_vertices()), 0);
  for (Index u = 0; u < part.num_vertices(); ++u) {
    const Index a = part.subset_of(u);
    if (!dirs.degenerate[a] && grad.row(u).dot(dirs.gamma.row(a)) < 0.0) in_b[u] = 1;
  }
  return in_b;
}

namespace {

double sink_capacity(const FlowNetwork& net) {
  double total = 0.0;
  for (const auto& a : net.arcs)
    if (a.to == net.sink() && a.from < net.n_nodes) total += a.capacity;
  return total;
}

struct CutOutcome {
  std::vector<Index> labels;  // per vertex; split_by_labels input
  double derivative = 0.0;
  double cut_value = 0.0;
};

/* Solves the partition problem and returns labels for the refinement. B is
 * the sink side of the cut with the largest source side. */
CutOutcome solve_partition_problem(const Graph& graph, const Partition& part, const VertexField& f,
                                   const VertexField& grad, const DirectionSet* dirs, CutMode mode, double alpha,
                                   double tol, unsigned threads) {
  const Index n = graph.num_vertices(), d = f.cols();
  CutOutcome out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  if (mode == CutMode::kThreshold) {
    const auto in_b = threshold_cut(part, grad, *dirs);
    for (Index u = 0; u < n; ++u) {
      if (!in_b[u]) continue;
      out.labels[u] = 1;
      out.derivative += grad.row(u).dot(dirs->gamma.row(part.subset_of(u)));
    }
    out.cut_value = out.derivative;
    return out;
  }
  const FlowNetwork net = mode == CutMode::kAniso ? build_flow_aniso(graph, f, grad, alpha, tol)
                                                  : build_flow_iso(graph, f, grad, alpha, part, *dirs, tol);
  const CutResult cut = max_flow_by_components(net, CutSide::kMaximalSource, threads);
  out.cut_value = cut.value;
  out.derivative = cut.value - sink_capacity(net);
  if (mode == CutMode::kAniso) {
    for (Index j = 0; j < d; ++j)
      for (Index u = 0; u < n; ++u)
        if (!cut.source_side[j * n + u]) out.labels[u] |= Index{1} << j;
  } else {
    for (Index u = 0; u < n; ++u) out.labels[u] = cut.source_side[u] ? 0 : 1;
  }
  return out;
}

double auto_stop_tol(const CutPursuitConfig& cfg, double initial_energy) {
  return cfg.stop_tol >= 0.0 ? cfg.stop_tol : 1e-9 * (1.0 + std::abs(initial_energy));
}

/* parent subset of every subset of a refinement */
std::vector<Index> parents(const Partition& fine, const Partition& coarse) {
  std::vector<Index> out(static_cast<std::size_t>(fine.size()));
  for (Index a = 0; a < fine.size(); ++a) out[a] = coarse.subset_of(fine.subset(a).front());
  return out;
}

RunResult run_pq(const Graph& graph, const VertexField& g, const CutPursuitConfig& cfg) {
  const bool octree = cfg.octree_iters.has_value();
  const RegularizerSpec& spec = cfg.spec;
  const double tol = equality_tolerance(g);
  const double ctol = std::max(tol, cfg.cut_tol * domain_diameter(g));
  const int max_iters = octree ? *cfg.octree_iters : cfg.max_outer_iters;

  RunResult res;
  Index n_comp = 0;
  res.partition = Partition::from_labels(graph.connected_components(&n_comp));
  res.c = solve_l0_reduced(res.partition, g);
  res.f = expand(res.partition, res.c);
  IterationRecord first;
  first.energy = energy(graph, res.f, g, spec, tol);
  first.subsets = res.partition.size();
  res.trace.records.push_back(first);
  const double stop_tol = auto_stop_tol(cfg, first.energy);
  res.trace.stop_reason = "max_outer_iters";

  for (int it = 1; it <= max_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    auto t0 = Clock::now();
    DirectionSet dirs;
    if (cfg.cut_mode != CutMode::kAniso)
      dirs = choose_directions(g, res.partition, cfg.direction_mode, cfg.seed + static_cast<std::uint64_t>(it),
                               cfg.threads);
    rec.ms_directions = ms_since(t0);

    t0 = Clock::now();
    const VertexField grad = cut_gradient(graph, res.f, g, spec, ctol);
    const CutOutcome cut = solve_partition_problem(graph, res.partition, res.f, grad, &dirs, cfg.cut_mode,
                                                   spec.alpha, ctol, cfg.threads);
    rec.ms_cut = ms_since(t0);
    rec.derivative = cut.derivative;
    rec.cut_value = cut.cut_value;
    if (!octree && cut.derivative >= -stop_tol) {
      res.trace.stop_reason = "no descent direction";
      break;
    }

    t0 = Clock::now();
    Partition next = split_by_labels(graph, res.partition, cut.labels);
    rec.ms_partition = ms_since(t0);
    if (next.size() == res.partition.size()) {
      res.trace.stop_reason = "partition unchanged";
      break;
    }

    t0 = Clock::now();
    const ReducedGraph rg = reduce_graph(graph, next);
    const auto parent = parents(next, res.partition);
    ReducedField warm(next.size(), g.cols());
    for (Index a = 0; a < next.size(); ++a) warm.row(a) = res.c.row(parent[a]);
    const ReducedField sums = reduce_field(next, g);
    const auto sq = reduce_squared_norms(next, g);
    PDResult pd = primal_dual_reduced(rg, next, sums, sq, spec, cfg.pd, nullptr, &warm);
    rec.solver_iterations = pd.iterations;
    // never accept a solve that ends above its starting point
    res.c = pd.energy.back() <= pd.initial_energy ? std::move(pd.f) : warm;
    rec.ms_solve = ms_since(t0);

    res.partition = std::move(next);
    res.f = expand(res.partition, res.c);
    rec.energy = energy(graph, res.f, g, spec, tol);
    rec.subsets = res.partition.size();
    if (!std::isfinite(rec.energy)) throw NumericalError("cut pursuit: non-finite energy at iteration " + std::to_string(it));
    res.trace.records.push_back(rec);
    if (octree && it == max_iters) res.trace.stop_reason = "octree level reached";
  }
  return res;
}

}  // namespace

RunResult run(const Graph& graph, const VertexField& g, const CutPursuitConfig& cfg) {
  check_vertex_field(graph, g, "run");
  if (cfg.spec.kind != RegularizerSpec::Kind::kPq) throw DomainError("run: use run_l0 for the l0 regularizer");
  cfg.validate();
  RunResult res = run_pq(graph, g, cfg);
  if (cfg.debias) {
    res.c = solve_l0_reduced(res.partition, g);
    res.f = expand(res.partition, res.c);
  }
  return res;
}

RunResult run_l0(const Graph& graph, const VertexField& g, const CutPursuitConfig& cfg) {
  check_vertex_field(graph, g, "run_l0");
  if (cfg.spec.kind != RegularizerSpec::Kind::kL0) throw DomainError("run_l0: regularizer must be l0");
  CutPursuitConfig local = cfg;
  local.cut_mode = cfg.l0_aniso ? CutMode::kAniso : CutMode::kIso;
  local.validate();
  const RegularizerSpec& spec = cfg.spec;
  const double alpha = spec.alpha;
  const double tol = equality_tolerance(g);

  RunResult res;
  res.partition = Partition::from_labels(graph.connected_components());
  res.c = solve_l0_reduced(res.partition, g);
  res.f = expand(res.partition, res.c);
  IterationRecord first;
  first.energy = energy(graph, res.f, g, spec, tol);
  first.subsets = res.partition.size();
  res.trace.records.push_back(first);
  const double stop_tol = auto_stop_tol(cfg, first.energy);
  res.trace.stop_reason = "max_outer_iters";

  for (int it = 1; it <= cfg.max_outer_iters; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    auto t0 = Clock::now();
    DirectionSet dirs;
    if (local.cut_mode == CutMode::kIso)
      dirs = choose_directions(g, res.partition, cfg.direction_mode, cfg.seed + static_cast<std::uint64_t>(it),
                               cfg.threads);
    rec.ms_directions = ms_since(t0);

    t0 = Clock::now();
    const VertexField grad = res.f - g;
    const CutOutcome cut = solve_partition_problem(graph, res.partition, res.f, grad, &dirs, local.cut_mode, alpha,
                                                   tol, cfg.threads);
    rec.ms_cut = ms_since(t0);
    rec.derivative = cut.derivative;
    rec.cut_value = cut.cut_value;
    if (cut.derivative >= -stop_tol) {
      res.trace.stop_reason = "no descent direction";
      break;
    }

    t0 = Clock::now();
    const Partition candidate = split_by_labels(graph, res.partition, cut.labels);
    // keep a subset's split only if it lowers J0: between-child sum of squares
    // against twice the sqrt(w) of the newly cut edges
    const ReducedField child_sums = reduce_field(candidate, g);
    const auto parent = parents(candidate, res.partition);
    std::vector<double> gain(static_cast<std::size_t>(res.partition.size()), 0.0);
    for (Index b = 0; b < candidate.size(); ++b) {
      const double size = static_cast<double>(candidate.subset_size(b));
      gain[parent[b]] += 0.5 * size * (child_sums.row(b) / size - res.c.row(parent[b])).squaredNorm();
    }
    std::vector<double> cost(gain.size(), 0.0);
    for (Index e = 0; e < graph.num_edges(); ++e) {
      const Index u = graph.source(e), v = graph.target(e);
      if (res.partition.subset_of(u) == res.partition.subset_of(v) &&
          candidate.subset_of(u) != candidate.subset_of(v))
        cost[res.partition.subset_of(u)] += alpha * graph.sqrt_weight(e);
    }
    std::vector<Index> labels(static_cast<std::size_t>(graph.num_vertices()));
    for (Index u = 0; u < graph.num_vertices(); ++u) {
      const Index a = res.partition.subset_of(u);
      labels[u] = cost[a] < gain[a] ? candidate.subset_of(u) : -1 - a;
    }
    Partition next = Partition::from_labels(labels);
    rec.ms_partition = ms_since(t0);
    if (next.size() == res.partition.size()) {
      res.trace.stop_reason = "partition unchanged";
      break;
    }

    t0 = Clock::now();
    res.partition = std::move(next);
    res.c = solve_l0_reduced(res.partition, g);
    res.f = expand(res.partition, res.c);
    rec.ms_solve = ms_since(t0);
    rec.energy = energy(graph, res.f, g, spec, tol);
    rec.subsets = res.partition.size();
    if (!std::isfinite(rec.energy)) throw NumericalError("cut pursuit: non-finite energy at iteration " + std::to_string(it));
    res.trace.records.push_back(rec);
  }
  return res;
}

RunResult run_octree(const Graph& graph, const VertexField& g, int iters, unsigned threads) {
  check_vertex_field(graph, g, "run_octree");
  if (iters < 1) throw DomainError("run_octree: iters must be >= 1");
  CutPursuitConfig cfg;
  cfg.spec = RegularizerSpec::pq(1.0, 1.0, 0.0, 0.0);
  cfg.cut_mode = CutMode::kAniso;
  cfg.octree_iters = iters;
  cfg.threads = threads;
  cfg.validate();
  return run_pq(graph, g, cfg);
}

VertexField debias(const Partition& part, const VertexField& g) { return expand(part, solve_l0_reduced(part, g)); }

}  // namespace cpsparse
