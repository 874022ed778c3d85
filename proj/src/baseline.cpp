#include "cpsparse/baseline.hpp"

#include <chrono>
#include <cmath>
#include <unordered_map>

#include "cpsparse/errors.hpp"
#include "cpsparse/operators.hpp"

namespace cpsparse {
namespace {

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto k : key) h = (h ^ static_cast<std::size_t>(k)) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

PointCloud cluster_filter(const PointCloud& cloud, const FilterConfig& filter, double diameter) {
  if (!(filter.epsilon > 0.0)) throw DomainError("cluster_filter: epsilon must be > 0");
  const Field& X = cloud.points;
  const Index n = X.rows(), d = X.cols();
  if (diameter < 0.0) diameter = domain_diameter(X);
  const double radius = filter.epsilon * diameter;

  std::vector<Index> kept;
  std::unordered_map<std::vector<std::int64_t>, std::vector<Index>, CellHash> grid;
  std::vector<std::int64_t> key(static_cast<std::size_t>(d)), probe(static_cast<std::size_t>(d));
  const double cell = radius > 0.0 ? radius : 1.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) key[j] = static_cast<std::int64_t>(std::floor(X(i, j) / cell));
    bool covered = false;
    // scan the 3^d neighbouring cells
    std::vector<int> offset(static_cast<std::size_t>(d), -1);
    while (!covered) {
      for (Index j = 0; j < d; ++j) probe[j] = key[j] + offset[j];
      if (auto it = grid.find(probe); it != grid.end())
        for (Index k : it->second)
          if ((X.row(k) - X.row(i)).norm() <= radius) {
            covered = true;
            break;
          }
      Index j = 0;
      while (j < d && offset[j] == 1) offset[j++] = -1;
      if (j == d) break;
      ++offset[j];
    }
    if (covered) continue;
    kept.push_back(i);
    grid[key].push_back(i);
  }

  PointCloud out;
  out.points.resize(static_cast<Index>(kept.size()), d);
  for (std::size_t k = 0; k < kept.size(); ++k) out.points.row(static_cast<Index>(k)) = X.row(kept[k]);
  if (!cloud.labels.empty())
    for (Index k : kept) out.labels.push_back(cloud.labels[k]);
  return out;
}

BaselineResult direct_sparsify(const Graph& graph, const VertexField& g, const RegularizerSpec& spec,
                               const PDConfig& pd, const FilterConfig& filter) {
  check_vertex_field(graph, g, "direct_sparsify");
  const auto start = std::chrono::steady_clock::now();
  PDConfig cfg = pd;
  cfg.precondition = true;
  PDResult solved = primal_dual_full(graph, g, spec, cfg);
  const double ms_solve = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  BaselineResult res;
  res.f = std::move(solved.f);
  const auto t1 = std::chrono::steady_clock::now();
  PointCloud denoised;
  denoised.points = res.f;
  res.cloud = cluster_filter(denoised, filter, domain_diameter(g));

  IterationRecord rec;
  rec.iteration = 1;
  rec.energy = energy(graph, res.f, g, spec, equality_tolerance(g));
  rec.subsets = res.cloud.size();
  rec.solver_iterations = solved.iterations;
  rec.ms_solve = ms_solve;
  rec.ms_partition = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1).count();
  res.trace.records.push_back(rec);
  res.trace.stop_reason = solved.converged ? "converged" : "max_iters";
  return res;
}

}  // namespace cpsparse
