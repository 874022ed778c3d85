// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.
//
//   cpsparse_acceptance [--only N] [--bunny PATH]
//
// The bunny criterion runs only when a PLY path is given (or CPSPARSE_BUNNY is set).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "cpsparse/baseline.hpp"
#include "cpsparse/cut_pursuit.hpp"
#include "cpsparse/errors.hpp"
#include "cpsparse/graph_build.hpp"
#include "cpsparse/io.hpp"
#include "cpsparse/maxflow.hpp"
#include "cpsparse/operators.hpp"
#include "cpsparse/partition.hpp"
#include "cpsparse/solver.hpp"
#include "oracles.hpp"

using namespace cpsparse;
using Clock = std::chrono::steady_clock;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)}; }

/* the random connected graphs with at most 8 vertices used by the small-scale criteria */
std::vector<WeightedEdge> small_graph(std::mt19937_64& rng, Index n, int kind) {
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::vector<WeightedEdge> edges;
  switch (kind) {
    case 0:
      for (Index u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, weight(rng)});
      break;
    case 1:
      for (Index u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, weight(rng)});
      if (n > 2) edges.push_back({0, n - 1, weight(rng)});
      break;
    case 2:
      for (Index u = 1; u < n; ++u) edges.push_back({0, u, weight(rng)});
      break;
    default:
      edges = oracle::random_connected_edges(rng, n, n);
  }
  return edges;
}

/* directional derivative of 1/2 ||f-g||^2 + alpha sum_{undirected} sqrt(w) |f(u)-f(v)|_1 along h */
double tv_derivative(const std::vector<WeightedEdge>& edges, const Field& f, const Field& g, const Field& h,
                     double alpha, double tol) {
  double value = ((f - g).array() * h.array()).sum();
  for (const auto& e : edges)
    for (Index j = 0; j < f.cols(); ++j) {
      const double df = f(e.u, j) - f(e.v, j), dh = h(e.u, j) - h(e.v, j);
      value += alpha * std::sqrt(e.w) * (std::abs(df) <= tol ? std::abs(dh) : (df > 0 ? dh : -dh));
    }
  return value;
}

// 1 ------------------------------------------------------------------------

Outcome operator_correctness() {
  std::mt19937_64 rng(101);
  double worst_adj = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 49);
    const Graph g(n, oracle::random_connected_edges(rng, n, n));
    const Index d = 1 + static_cast<Index>(rng() % 3);
    const Field f = oracle::random_field(rng, n, d), G = oracle::random_field(rng, g.num_edges(), d);
    const double lhs = (gradient(g, f).array() * G.array()).sum();
    const double rhs = (f.array() * adjoint(g, G).array()).sum();
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  double worst_fd = 0.0;
  const double h = 1e-6;
  for (auto [p, q] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 3 + static_cast<Index>(rng() % 12);
      const auto edges = oracle::random_connected_edges(rng, n, n);
      const Graph g(n, edges);
      Field f = oracle::random_field(rng, n, 2, 3.0);
      bool ok = true;
      for (const auto& e : edges)
        for (Index j = 0; j < 2; ++j) ok = ok && std::abs(f(e.u, j) - f(e.v, j)) > 1e-3;
      if (!ok) continue;
      const VertexField grad = regularizer_gradient(g, f, RegularizerSpec::pq(p, q, 1, 1));
      for (Index u = 0; u < n; ++u)
        for (Index j = 0; j < 2; ++j) {
          Field a = f, b = f;
          a(u, j) += h;
          b(u, j) -= h;
          const double fd = (oracle::pq_sum(edges, a, p, q) - oracle::pq_sum(edges, b, p, q)) / (2.0 * p) / (2.0 * h);
          worst_fd = std::max(worst_fd, std::abs(fd - grad(u, j)) / std::max(1.0, std::abs(fd)));
        }
    }
  }
  return verdict(worst_adj <= 1e-10 && worst_fd < 1e-5,
                 "adjointness " + fmt("%.1e", worst_adj) + ", finite differences " + fmt("%.1e", worst_fd));
}

// 2 ------------------------------------------------------------------------

Outcome min_cut_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> cap(0.0, 10.0), coin(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 12);
    FlowNetwork net(n);
    for (Index u = 0; u < n + 2; ++u)
      for (Index v = 0; v < n + 2; ++v)
        if (u != v && coin(rng) < 0.35) net.add_arc(u, v, cap(rng));
    const double a = max_flow(net).value, b = brute_force_min_cut(net).value;
    worst = std::max(worst, std::abs(a - b) / (1.0 + b));
  }
  int networks = 0, rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 30);
    const Graph g(n, oracle::random_connected_edges(rng, n, n));
    Field f = oracle::random_field(rng, n, 3);
    for (Index u = 1; u < n; u += 2) f.row(u) = f.row(u - 1);  // equal-valued neighbours
    const Field data = oracle::random_field(rng, n, 3);
    std::vector<Index> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<Index>(rng() % 3);
    const auto part = Partition::from_labels(labels);
    const auto spec = RegularizerSpec::pq(1, 1, 0.5, 0.5);
    const VertexField grad = cut_gradient(g, f, data, spec, 1e-12);
    const auto dirs = choose_directions(data, part, DirectionMode::kKmeans2);
    try {
      check_submodular(build_flow_aniso(g, f, grad, 0.5, 1e-12));
      check_submodular(build_flow_iso(g, f, grad, 0.5, part, dirs, 1e-12));
    } catch (const ConformanceError&) {
      ++rejected;
    }
    networks += 2;
  }
  return verdict(worst <= 1e-9 && rejected == 0, "500 networks, worst gap " + fmt("%.1e", worst) + "; " +
                                                      std::to_string(networks) + " cut networks submodular, " +
                                                      std::to_string(rejected) + " rejected");
}

// 3 ------------------------------------------------------------------------

Outcome partition_faithfulness() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  int sets = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 6;
    const auto edges = small_graph(rng, n, 0);
    const Graph g(n, edges);
    const Index d = 1 + trial % 2;
    Field f = oracle::random_field(rng, n, d);
    // ties on some edges and coordinates
    for (Index u = 1; u < n; ++u)
      for (Index j = 0; j < d; ++j)
        if (rng() % 2) f(u, j) = f(u - 1, j);
    const Field data = oracle::random_field(rng, n, d);
    const double alpha = 0.2 + 0.3 * static_cast<double>(trial % 5);
    const auto spec = RegularizerSpec::pq(1, 1, alpha, alpha);
    const double tol = 1e-12;
    const FlowNetwork net = build_flow_aniso(g, f, cut_gradient(g, f, data, spec, tol), alpha, tol);
    const Index nodes = n * d;
    double offset = 0.0;
    for (Index mask = 0; mask < (Index{1} << nodes); ++mask) {
      std::vector<char> source_side(static_cast<std::size_t>(nodes + 2), 1);
      source_side[net.sink()] = 0;
      Field h = Field::Zero(n, d);
      for (Index k = 0; k < nodes; ++k)
        if (mask >> k & 1) {
          source_side[k] = 0;
          h(k % n, k / n) = 1.0;
        }
      const double gap = cut_capacity(net, source_side) - tv_derivative(edges, f, data, h, alpha, tol);
      if (mask == 0) offset = gap;
      worst = std::max(worst, std::abs(gap - offset));
      ++sets;
    }
  }
  return verdict(worst <= 1e-9, std::to_string(sets) + " sets on 6-vertex chains, worst difference mismatch " +
                                    fmt("%.1e", worst));
}

// 4 ------------------------------------------------------------------------

Outcome reduced_algebra() {
  std::mt19937_64 rng(404);
  double worst_lemma = 0.0, worst_norm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 60);
    const Graph g(n, oracle::random_connected_edges(rng, n, n));
    const Index m = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    std::vector<Index> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<Index>(rng() % static_cast<std::uint64_t>(m));
    const auto part = Partition::from_labels(labels);
    const ReducedField c = oracle::random_field(rng, part.size(), 3);
    const ReducedField ppc = reduce_field(part, expand(part, c));
    for (Index a = 0; a < part.size(); ++a)
      worst_lemma = std::max(worst_lemma, (ppc.row(a) - static_cast<double>(part.subset_size(a)) * c.row(a))
                                                  .cwiseAbs()
                                                  .maxCoeff() /
                                              (1.0 + ppc.row(a).cwiseAbs().maxCoeff()));
    const auto rg = reduce_graph(g, part);
    const double full = pq_norm(g, expand(part, c), 1, 1);
    const double reduced = pq_norm(rg.operator_graph(1.0), c, 1, 1);
    worst_norm = std::max(worst_norm, std::abs(full - reduced) / (1.0 + full));
  }
  return verdict(worst_lemma <= 1e-10 && worst_norm <= 1e-10,
                 "P*P = diag|A| " + fmt("%.1e", worst_lemma) + ", norm equality " + fmt("%.1e", worst_norm));
}

// 5 ------------------------------------------------------------------------

Outcome global_optimum() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> reg(0.05, 1.0);
  double worst_tv = 0.0, worst_l0 = 0.0;
  int l0_mismatch = 0, instances = 0;
  for (int i = 0; i < 50; ++i) {
    const Index n = 2 + i % 7;
    const auto edges = small_graph(rng, n, (i / 7) % 4);
    const Graph g(n, edges);
    const Index d = 1 + i % 2;
    const Field data = oracle::random_field(rng, n, d);
    const double alpha = reg(rng);
    const auto parts = oracle::connected_partitions(n, edges);

    double best_tv = 1e300, best_l0 = 1e300;
    for (const auto& labels : parts) {
      best_tv = std::min(best_tv, oracle::tv_on_partition(edges, labels, data, alpha, 1.0).energy);
      Field means = Field::Zero(n, d);
      std::vector<double> count(static_cast<std::size_t>(n), 0.0);
      Field sums = Field::Zero(n, d);
      for (Index u = 0; u < n; ++u) {
        sums.row(labels[u]) += data.row(u);
        count[labels[u]] += 1.0;
      }
      for (Index u = 0; u < n; ++u) means.row(u) = sums.row(labels[u]) / count[labels[u]];
      best_l0 = std::min(best_l0, oracle::l0_energy(edges, means, data, alpha));
    }

    CutPursuitConfig cfg;
    cfg.spec = RegularizerSpec::pq(1, 1, alpha, alpha);
    const auto tv = run(g, data, cfg);
    const double e_tv = energy(g, tv.f, data, cfg.spec);
    worst_tv = std::max(worst_tv, (e_tv - best_tv) / std::abs(best_tv));

    CutPursuitConfig l0cfg;
    l0cfg.spec = RegularizerSpec::l0(alpha);
    const auto l0 = run_l0(g, data, l0cfg);
    const double e_l0 = energy(g, l0.f, data, l0cfg.spec, equality_tolerance(data));
    const double gap = (e_l0 - best_l0) / std::abs(best_l0);
    worst_l0 = std::max(worst_l0, gap);
    if (gap > 1e-12) ++l0_mismatch;
    ++instances;
  }
  return verdict(worst_tv <= 1e-4 && l0_mismatch == 0,
                 std::to_string(instances) + " instances: pq worst relative excess " + fmt("%.1e", worst_tv) +
                     "; l0 matched " + std::to_string(instances - l0_mismatch) + "/" + std::to_string(instances) +
                     ", worst excess " + fmt("%.1e", worst_l0));
}

// 6 ------------------------------------------------------------------------

Outcome solver_equivalence() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_cp = 0.0, worst_pc = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    PointCloud cloud;
    cloud.points.resize(200, 2);
    for (Index i = 0; i < 200; ++i) cloud.points.row(i) << unit(rng), unit(rng);
    const auto knn = knn_graph(cloud, 8);
    const Field& g = knn.cloud.points;
    const double beta = trial % 3 == 0 ? 1e-3 : trial % 3 == 1 ? 3e-3 : 1e-2;
    const auto spec = RegularizerSpec::pq(1, 1, beta, beta);

    PDConfig tight;
    tight.rel_tol = 1e-14;
    tight.max_iters = 1000000;
    PDConfig pre = tight;
    pre.precondition = true;
    const auto plain = primal_dual_full(knn.graph, g, spec, tight);
    const auto precond = primal_dual_full(knn.graph, g, spec, pre);
    const double e_plain = plain.energy.back(), e_pre = precond.energy.back();
    worst_pc = std::max(worst_pc, std::abs(e_plain - e_pre) / std::abs(e_plain));

    CutPursuitConfig cfg;
    cfg.spec = spec;
    const auto cp = run(knn.graph, g, cfg);
    const double e_cp = energy(knn.graph, cp.f, g, spec);
    const double e_direct = std::min(e_plain, e_pre);
    worst_cp = std::max(worst_cp, std::abs(e_cp - e_direct) / std::abs(e_direct));
  }
  return verdict(worst_cp <= 1e-4 && worst_pc <= 1e-6, "cut pursuit vs direct " + fmt("%.1e", worst_cp) +
                                                           ", preconditioned vs plain " + fmt("%.1e", worst_pc));
}

// 7 ------------------------------------------------------------------------

Outcome octree_equivalence() {
  const auto grid = make_grid(16, 2);
  const auto knn = knn_graph(grid, 8);
  bool ok = true;
  std::string detail;
  for (int level = 1; level <= 4; ++level) {
    const auto res = run_octree(knn.graph, knn.cloud.points, level);
    const bool same = oracle::canonical(res.partition.assignment()) == oracle::midpoint_cells(knn.cloud.points, level);
    ok = ok && same;
    detail += "level " + std::to_string(level) + ": " + std::to_string(res.partition.size()) + " cells" +
              (same ? "" : " (differs)") + (level < 4 ? ", " : "");
  }
  return verdict(ok, detail);
}

// 8 ------------------------------------------------------------------------

Outcome l0_closed_form() {
  std::mt19937_64 rng(808);
  double worst_res = 0.0, worst_idem = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 200);
    const Field g = oracle::random_field(rng, n, 3, 10.0);
    std::vector<Index> labels(static_cast<std::size_t>(n));
    const Index m = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    for (auto& l : labels) l = static_cast<Index>(rng() % static_cast<std::uint64_t>(m));
    const auto part = Partition::from_labels(labels);
    const ReducedField c = solve_l0_reduced(part, g);
    worst_res = std::max(worst_res, reduce_field(part, expand(part, c) - g).cwiseAbs().maxCoeff());
    const VertexField once = debias(part, g);
    worst_idem = std::max(worst_idem, (debias(part, once) - once).cwiseAbs().maxCoeff());
  }
  return verdict(worst_res <= 1e-12 && worst_idem <= 1e-12,
                 "residual " + fmt("%.1e", worst_res) + ", idempotence " + fmt("%.1e", worst_idem));
}

// 9 ------------------------------------------------------------------------

Outcome projection_laws() {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int violations = 0, checks = 0;
  for (auto [ps, qs] : {std::pair{kInf, kInf}, {kInf, 2.0}}) {
    auto norm = [ps = ps, qs = qs](const EdgeField& y) {
      (void)ps;
      return qs == kInf ? y.cwiseAbs().maxCoeff() : y.rowwise().norm().maxCoeff();
    };
    for (int trial = 0; trial < 300; ++trial) {
      const Index m = 1 + static_cast<Index>(rng() % 8);
      const double radius = 0.05 + std::abs(unit(rng));
      const EdgeField z = oracle::random_field(rng, m, 3, 1.5);
      const EdgeField pz = project_ball(z, ps, qs, radius);
      violations += norm(pz) > radius * (1.0 + 1e-12);
      violations += (project_ball(pz, ps, qs, radius) - pz).cwiseAbs().maxCoeff() > 1e-15 * (1.0 + radius);
      const EdgeField inside = z * (0.99 * radius / std::max(norm(z), 1e-300));
      violations += project_ball(inside, ps, qs, radius) != inside;
      const double dist = (z - pz).norm();
      for (int k = 0; k < 100; ++k) {
        EdgeField y(m, 3);
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < 3; ++j) y(i, j) = unit(rng);
        const double ny = norm(y);
        if (ny > radius) y *= radius / ny * std::abs(unit(rng));
        violations += dist > (z - y).norm() + 1e-12;
      }
      checks += 103;
    }
  }
  return verdict(violations == 0, std::to_string(checks) + " checks, " + std::to_string(violations) + " violations");
}

// 10 -----------------------------------------------------------------------

Outcome descent_monotonicity() {
  std::mt19937_64 rng(1010);
  int bad_energy = 0, bad_count = 0, runs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto cloud = add_gaussian_noise(make_sphere_shell(300 + 20 * trial, rng()), 0.02, rng());
    const auto knn = knn_graph(cloud, 8);
    const Field& g = knn.cloud.points;
    const double scale = trial % 2 ? 1e-3 : 1e-4;
    CutPursuitConfig pq;
    pq.spec = RegularizerSpec::pq(1, 1, scale, scale);
    CutPursuitConfig l0;
    l0.spec = RegularizerSpec::l0(scale);
    l0.cut_mode = CutMode::kIso;
    for (const RunResult& res : {run(knn.graph, g, pq), run_l0(knn.graph, g, l0)}) {
      const auto& recs = res.trace.records;
      const double j0 = recs.front().energy;
      for (std::size_t k = 1; k < recs.size(); ++k) {
        bad_energy += recs[k].energy > recs[k - 1].energy + 1e-9 * j0;
        bad_count += recs[k].subsets < recs[k - 1].subsets;
      }
      ++runs;
    }
  }
  return verdict(bad_energy == 0 && bad_count == 0, std::to_string(runs) + " runs, " + std::to_string(bad_energy) +
                                                        " energy increases, " + std::to_string(bad_count) +
                                                        " subset-count decreases");
}

// 11 -----------------------------------------------------------------------

Outcome performance() {
  const auto cloud = add_gaussian_noise(make_cube_shell(50000, 1), 0.02, 2);
  const auto knn = knn_graph(cloud, 8);
  const Field& g = knn.cloud.points;

  PDConfig pd;
  const auto t0 = Clock::now();
  const auto direct = direct_sparsify(knn.graph, g, RegularizerSpec::pq(1, 1, 1e-2, 1e-2), pd, FilterConfig{});
  const double t_direct = std::chrono::duration<double>(Clock::now() - t0).count();
  const double target = static_cast<double>(direct.cloud.size());

  // match the compression of the direct result: bisection on log alpha
  double lo = std::log(1e-6), hi = std::log(1e-3);
  double t_l0 = 0.0, kept = 0.0;
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    CutPursuitConfig cfg;
    cfg.spec = RegularizerSpec::l0(std::exp(mid));
    cfg.cut_mode = CutMode::kIso;
    const auto t1 = Clock::now();
    const auto res = run_l0(knn.graph, g, cfg);
    t_l0 = std::chrono::duration<double>(Clock::now() - t1).count();
    kept = static_cast<double>(res.partition.size());
    if (std::abs(kept - target) <= 0.05 * target) break;
    (kept > target ? lo : hi) = mid;
  }
  const double ratio = t_direct / t_l0;
  const bool matched = std::abs(kept - target) <= 0.2 * target;
  std::string detail = "direct " + fmt("%.2f s", t_direct) + " (" + fmt("%.0f", target) + " points), l0 " +
                       fmt("%.2f s", t_l0) + " (" + fmt("%.0f", kept) + " points), speedup " + fmt("%.1fx", ratio);
  if (ratio < 10.0 && ratio >= 5.0) detail += " (below the 10x target, above the 5x gate)";
  return verdict(matched && ratio >= 5.0, detail);
}

// 12 -----------------------------------------------------------------------

Outcome bunny(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return {Verdict::kSkip, "dataset not available"};
  const auto cloud = read_cloud(path);
  const auto knn = knn_graph(cloud, 8);
  const Field& g = knn.cloud.points;
  const double n = static_cast<double>(cloud.size());
  const std::pair<double, double> table[] = {{0.5, 63.0}, {1.0, 22.3}, {5.0, 4.0}};
  bool ok = true;
  std::string detail;
  for (auto [alpha, expected] : table) {
    CutPursuitConfig cfg;
    cfg.spec = RegularizerSpec::l0(alpha);
    cfg.cut_mode = CutMode::kIso;
    const auto res = run_l0(knn.graph, g, cfg);
    const double pct = 100.0 * static_cast<double>(res.partition.size()) / n;
    ok = ok && std::abs(pct - expected) <= 3.0;
    detail += "alpha " + fmt("%g", alpha) + ": " + fmt("%.1f%%", pct) + " (expected " + fmt("%.1f%%", expected) + ") ";
  }
  return verdict(ok, detail);
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // <= 0: no runtime bound
  std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::string bunny_path = std::getenv("CPSPARSE_BUNNY") ? std::getenv("CPSPARSE_BUNNY") : "";
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--bunny") && i + 1 < argc)
      bunny_path = argv[++i];
    else {
      std::fprintf(stderr, "usage: %s [--only N] [--bunny PATH]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "operator correctness", 5, operator_correctness},
      {2, "min-cut oracle", 30, min_cut_oracle},
      {3, "partition-problem faithfulness", 5, partition_faithfulness},
      {4, "reduced-algebra identities", 5, reduced_algebra},
      {5, "global-optimum agreement", 120, global_optimum},
      {6, "solver equivalence", 60, solver_equivalence},
      {7, "octree equivalence", 5, octree_equivalence},
      {8, "l0 closed form", 1, l0_closed_form},
      {9, "projection laws", 5, projection_laws},
      {10, "descent and monotonicity", 60, descent_monotonicity},
      {11, "performance vs direct solve", 0, performance},
      {12, "bunny compression table", 0, [&] { return bunny(bunny_path); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = Clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.verdict == Verdict::kPass && c.limit_s > 0 && secs > c.limit_s) {
      out.verdict = Verdict::kFail;
      out.detail += "; over the " + fmt("%.0f s", c.limit_s) + " budget";
    }
    const char* tag = out.verdict == Verdict::kPass ? "PASS" : out.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %2d %s: %s (%.2f s)\n", tag, c.id, c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.verdict == Verdict::kFail;
  }
  return failed ? 1 : 0;
}
