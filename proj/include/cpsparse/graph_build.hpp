#pragma once

#include <cstdint>
#include <vector>

#include "cpsparse/graph.hpp"
#include "cpsparse/types.hpp"

namespace cpsparse {

/* N x d point coordinates, optionally labelled. */
struct PointCloud {
  Field points;
  std::vector<std::int64_t> labels;  // empty or one per point

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

/* Result of k-NN graph construction. Exactly coincident input points are
 * merged into one vertex first; merge_map sends every input index to its
 * vertex, and `cloud` holds the merged (deduplicated) points in order of
 * first occurrence. */
struct KnnGraph {
  Graph graph;
  PointCloud cloud;
  std::vector<Index> merge_map;
};

/* Exact symmetrized k-nearest-neighbour graph with w(u,v) = 1/||x_u - x_v||^2.
 * Ties in distance go to the lower vertex id. Requires 1 <= k < N; after
 * merging duplicates k is clamped to (merged count - 1). */
KnnGraph knn_graph(const PointCloud& cloud, Index k, unsigned threads = 1);

/* Exact k nearest neighbours (excluding the point itself) of every point,
 * row-major N x k, ordered by (distance, id). */
std::vector<Index> knn_search(const Field& points, Index k, unsigned threads = 1);

/* side^d points on the unit-spaced grid {0, ..., side-1}^d, d in {2, 3},
 * ordered with the first coordinate varying fastest. */
PointCloud make_grid(Index side, int d);

/* n points uniform on the surface of the cube [-1, 1]^3 */
PointCloud make_cube_shell(Index n, std::uint64_t seed);

/* n points uniform on the sphere of the given radius */
PointCloud make_sphere_shell(Index n, std::uint64_t seed, double radius = 1.0);

/* adds i.i.d. N(0, sigma^2) noise to every coordinate */
PointCloud add_gaussian_noise(const PointCloud& cloud, double sigma, std::uint64_t seed);

}  // namespace cpsparse
