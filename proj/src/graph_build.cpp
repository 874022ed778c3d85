#include "cpsparse/graph_build.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cpsparse/errors.hpp"
#include "cpsparse/parallel.hpp"
#include "kdtree.hpp"

namespace cpsparse {

std::vector<Index> knn_search(const Field& points, Index k, unsigned threads) {
  const Index n = points.rows();
  if (k < 1 || k >= n) throw DomainError("knn_search: need 1 <= k < N");
  detail::KdTree tree(points);
  std::vector<Index> out(static_cast<std::size_t>(n * k));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    auto nn = tree.nearest(static_cast<Index>(i), k);
    std::copy(nn.begin(), nn.end(), out.begin() + static_cast<std::ptrdiff_t>(i * k));
  });
  return out;
}

KnnGraph knn_graph(const PointCloud& cloud, Index k, unsigned threads) {
  const Index n = cloud.size();
  if (n < 2) throw DomainError("knn_graph: need at least two points");
  if (k < 1 || k >= n) throw DomainError("knn_graph: need 1 <= k < N");
  if (!cloud.points.allFinite()) throw DomainError("knn_graph: non-finite coordinates");

  // merge exact duplicates; vertex ids follow first occurrence
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& P = cloud.points;
  auto row_less = [&](Index a, Index b) {
    for (Index j = 0; j < P.cols(); ++j)
      if (P(a, j) != P(b, j)) return P(a, j) < P(b, j);
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);
  std::vector<Index> representative(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && P.row(order[i]) == P.row(order[i - 1]))
      representative[order[i]] = representative[order[i - 1]];
    else
      representative[order[i]] = order[i];
  }
  KnnGraph result;
  result.merge_map.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> kept;
  for (Index i = 0; i < n; ++i) {
    if (representative[i] == i) {
      result.merge_map[i] = static_cast<Index>(kept.size());
      kept.push_back(i);
    } else {
      result.merge_map[i] = result.merge_map[representative[i]];
    }
  }
  const Index m = static_cast<Index>(kept.size());
  result.cloud.points.resize(m, P.cols());
  for (Index v = 0; v < m; ++v) result.cloud.points.row(v) = P.row(kept[v]);
  if (!cloud.labels.empty()) {
    result.cloud.labels.resize(static_cast<std::size_t>(m));
    for (Index v = 0; v < m; ++v) result.cloud.labels[v] = cloud.labels[kept[v]];
  }
  if (m < 2) {
    result.graph = Graph(m, {});
    return result;
  }
  const Index kk = std::min(k, m - 1);
  const auto nn = knn_search(result.cloud.points, kk, threads);

  // symmetrize by union: keep (min, max) pairs once
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(m * kk));
  for (Index u = 0; u < m; ++u)
    for (Index i = 0; i < kk; ++i) {
      const Index v = nn[u * kk + i];
      pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  const auto& X = result.cloud.points;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0 / (X.row(u) - X.row(v)).squaredNorm()});
  result.graph = Graph(m, edges);
  return result;
}

PointCloud make_grid(Index side, int d) {
  if (side < 1) throw DomainError("make_grid: side must be >= 1");
  if (d != 2 && d != 3) throw DomainError("make_grid: d must be 2 or 3");
  Index n = side * side * (d == 3 ? side : 1);
  PointCloud cloud;
  cloud.points.resize(n, d);
  for (Index i = 0; i < n; ++i) {
    Index rest = i;
    for (int j = 0; j < d; ++j) {
      cloud.points(i, j) = static_cast<double>(rest % side);
      rest /= side;
    }
  }
  return cloud;
}

PointCloud make_cube_shell(Index n, std::uint64_t seed) {
  if (n < 0) throw DomainError("make_cube_shell: negative size");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> face(0, 5);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  PointCloud cloud;
  cloud.points.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    const int f = face(rng);
    const int axis = f / 2;
    for (int j = 0; j < 3; ++j) cloud.points(i, j) = uniform(rng);
    cloud.points(i, axis) = (f % 2 == 0) ? -1.0 : 1.0;
  }
  return cloud;
}

PointCloud make_sphere_shell(Index n, std::uint64_t seed, double radius) {
  if (n < 0) throw DomainError("make_sphere_shell: negative size");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  PointCloud cloud;
  cloud.points.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    Eigen::RowVector3d x;
    do {
      x = {normal(rng), normal(rng), normal(rng)};
    } while (x.norm() < 1e-8);
    cloud.points.row(i) = radius * x / x.norm();
  }
  return cloud;
}

PointCloud add_gaussian_noise(const PointCloud& cloud, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw DomainError("add_gaussian_noise: sigma must be >= 0");
  PointCloud out = cloud;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Index i = 0; i < out.points.rows(); ++i)
    for (Index j = 0; j < out.points.cols(); ++j) out.points(i, j) += normal(rng);
  return out;
}

}  // namespace cpsparse
