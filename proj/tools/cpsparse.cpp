#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cpsparse/baseline.hpp"
#include "cpsparse/cut_pursuit.hpp"
#include "cpsparse/errors.hpp"
#include "cpsparse/graph_build.hpp"
#include "cpsparse/io.hpp"
#include "cpsparse/operators.hpp"

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct Options {
  std::string input;
  std::string output;
  int k = 8;
  std::string regularizer = "pq";
  double p = 1.0;
  double q = 1.0;
  double alpha = 1.0;
  std::optional<double> beta;
  std::string cut;
  std::string direction = "kmeans2";
  bool debias = false;
  std::optional<int> octree_iters;
  double noise_sigma = 0.0;
  bool noise_relative = false;
  std::uint64_t seed = 0;
  bool baseline = false;
  double epsilon = 1e-3;
  std::string metrics;
  unsigned threads = 1;
  bool expand = false;
  int max_iters = 100;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

cpsparse::CutPursuitConfig make_config(const Options& o) {
  using namespace cpsparse;
  CutPursuitConfig cfg;
  const double beta = o.beta.value_or(o.alpha);
  cfg.spec = o.regularizer == "l0" ? RegularizerSpec::l0(o.alpha) : RegularizerSpec::pq(o.p, o.q, o.alpha, beta);
  if (o.cut.empty()) {
    if (o.regularizer == "l0")
      cfg.cut_mode = CutMode::kIso;
    else if (o.p > 1.0 && o.q > 1.0)
      cfg.cut_mode = CutMode::kThreshold;
    else
      cfg.cut_mode = o.q == 1.0 ? CutMode::kAniso : CutMode::kIso;
  } else {
    cfg.cut_mode = o.cut == "aniso" ? CutMode::kAniso : o.cut == "iso" ? CutMode::kIso : CutMode::kThreshold;
  }
  cfg.l0_aniso = o.regularizer == "l0" && cfg.cut_mode == CutMode::kAniso;
  cfg.direction_mode = o.direction == "pca" ? DirectionMode::kPca
                       : o.direction == "random" ? DirectionMode::kRandom
                                                 : DirectionMode::kKmeans2;
  cfg.debias = o.debias;
  cfg.threads = o.threads;
  cfg.seed = o.seed;
  cfg.max_outer_iters = o.max_iters;
  if (o.regularizer == "l0") {
    cfg.spec.validate();
  } else {
    cfg.validate();
  }
  return cfg;
}

int run_cli(const Options& o) {
  using namespace cpsparse;
  const auto t_start = std::chrono::steady_clock::now();
  MetricsReport report;

  CutPursuitConfig cfg;
  try {
    cfg = make_config(o);
    if (o.baseline && o.regularizer == "l0") throw DomainError("--baseline needs the pq regularizer");
  } catch (const Error& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitFlags;
  }

  PointCloud input;
  try {
    input = read_cloud(o.input);
  } catch (const IoError& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitIo;
  }
  report.phase_timings_ms["read"] = elapsed_ms(t_start);

  if (o.noise_sigma > 0.0) {
    const double sigma = o.noise_relative ? o.noise_sigma * domain_diameter(input.points) : o.noise_sigma;
    input = add_gaussian_noise(input, sigma, o.seed);
  }

  auto t0 = std::chrono::steady_clock::now();
  const KnnGraph knn = knn_graph(input, o.k, o.threads);
  report.phase_timings_ms["graph"] = elapsed_ms(t0);
  const VertexField& g = knn.cloud.points;

  t0 = std::chrono::steady_clock::now();
  PointCloud output;
  VertexField f;
  RunTrace trace;
  if (o.baseline) {
    BaselineResult res = direct_sparsify(knn.graph, g, cfg.spec, cfg.pd, FilterConfig{o.epsilon});
    output = std::move(res.cloud);
    f = std::move(res.f);
    trace = std::move(res.trace);
  } else {
    RunResult res = o.octree_iters ? run_octree(knn.graph, g, *o.octree_iters, o.threads)
                    : o.regularizer == "l0" ? run_l0(knn.graph, g, cfg)
                                            : run(knn.graph, g, cfg);
    if (o.debias) {
      res.c = solve_l0_reduced(res.partition, g);
      res.f = expand(res.partition, res.c);
    }
    output.points = std::move(res.c);
    f = std::move(res.f);
    trace = std::move(res.trace);
  }
  report.phase_timings_ms["sparsify"] = elapsed_ms(t0);
  double directions = 0, cut = 0, partition = 0, solve = 0;
  for (const auto& r : trace.records) {
    directions += r.ms_directions;
    cut += r.ms_cut;
    partition += r.ms_partition;
    solve += r.ms_solve;
    report.energy_trace.push_back(r.energy);
  }
  report.phase_timings_ms["directions"] = directions;
  report.phase_timings_ms["cut"] = cut;
  report.phase_timings_ms["partition"] = partition;
  report.phase_timings_ms["solve"] = solve;
  report.iterations = static_cast<int>(trace.records.size()) - (o.baseline ? 0 : 1);

  if (o.expand) {
    PointCloud full;
    full.points.resize(static_cast<Index>(knn.merge_map.size()), f.cols());
    for (std::size_t i = 0; i < knn.merge_map.size(); ++i) full.points.row(static_cast<Index>(i)) = f.row(knn.merge_map[i]);
    output = std::move(full);
  }

  try {
    t0 = std::chrono::steady_clock::now();
    write_cloud(output, o.output);
    report.phase_timings_ms["write"] = elapsed_ms(t0);
    report.input_points = input.size();
    report.output_points = o.expand ? static_cast<Index>(trace.records.back().subsets) : output.size();
    report.phase_timings_ms["total"] = elapsed_ms(t_start);
    report.config = {{"input", o.input},
                     {"output", o.output},
                     {"k", std::to_string(o.k)},
                     {"regularizer", o.regularizer},
                     {"p", fmt(o.p)},
                     {"q", fmt(o.q)},
                     {"alpha", fmt(o.alpha)},
                     {"beta", fmt(o.beta.value_or(o.alpha))},
                     {"cut", o.cut.empty() ? "auto" : o.cut},
                     {"direction", o.direction},
                     {"debias", o.debias ? "true" : "false"},
                     {"octree_iters", o.octree_iters ? std::to_string(*o.octree_iters) : "none"},
                     {"noise_sigma", fmt(o.noise_sigma)},
                     {"noise_relative", o.noise_relative ? "true" : "false"},
                     {"seed", std::to_string(o.seed)},
                     {"baseline", o.baseline ? "true" : "false"},
                     {"epsilon", fmt(o.epsilon)},
                     {"threads", std::to_string(o.threads)},
                     {"stop_reason", trace.stop_reason}};
    if (!o.metrics.empty()) write_metrics(report, o.metrics);
  } catch (const IoError& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point cloud sparsification by cut pursuit"};
  Options o;
  app.add_option("--input", o.input, "input cloud (.ply ascii or .xyz)")->required();
  app.add_option("--output", o.output, "output cloud (.ply or .xyz)")->required();
  app.add_option("--k", o.k, "nearest neighbours per point")->check(CLI::PositiveNumber);
  app.add_option("--regularizer", o.regularizer)->check(CLI::IsMember({"l0", "pq"}));
  app.add_option("--p", o.p)->check(CLI::IsMember({1.0, 2.0}));
  app.add_option("--q", o.q)->check(CLI::IsMember({1.0, 2.0}));
  app.add_option("--alpha", o.alpha, "cut regularization weight")->check(CLI::NonNegativeNumber);
  app.add_option("--beta", o.beta, "reduced-problem weight (default: alpha)")->check(CLI::NonNegativeNumber);
  app.add_option("--cut", o.cut)->check(CLI::IsMember({"aniso", "iso", "threshold"}));
  app.add_option("--direction", o.direction)->check(CLI::IsMember({"kmeans2", "pca", "random"}));
  app.add_flag("--debias", o.debias, "replace constants by subset means at the end");
  app.add_option("--octree-iters", o.octree_iters, "octree mode with this many levels")->check(CLI::PositiveNumber);
  app.add_option("--noise-sigma", o.noise_sigma, "Gaussian noise added to the input")->check(CLI::NonNegativeNumber);
  app.add_flag("--noise-relative", o.noise_relative, "noise sigma is relative to the domain diameter");
  app.add_option("--seed", o.seed);
  app.add_flag("--baseline", o.baseline, "full-graph denoising plus cluster filter");
  app.add_option("--epsilon", o.epsilon, "baseline filter radius relative to the diameter")->check(CLI::PositiveNumber);
  app.add_option("--metrics", o.metrics, "write metrics JSON here");
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)");
  app.add_option("--max-iters", o.max_iters, "outer iteration cap")->check(CLI::PositiveNumber);
  app.add_flag("--expand", o.expand, "write the full-resolution piecewise-constant cloud");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFlags;
  }

  try {
    return run_cli(o);
  } catch (const cpsparse::IoError& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitIo;
  } catch (const cpsparse::DomainError& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitFlags;
  } catch (const cpsparse::Error& e) {
    std::cerr << "cpsparse: " << e.what() << "\n";
    return kExitNumerical;
  }
}
