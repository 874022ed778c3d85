#pragma once

#include "cpsparse/cut_pursuit.hpp"
#include "cpsparse/graph_build.hpp"
#include "cpsparse/solver.hpp"

namespace cpsparse {

struct FilterConfig {
  double epsilon = 1e-3;  // radius relative to the domain diameter
};

/* Greedy sweep in input order: a point is kept iff no kept point lies within
 * epsilon * diameter of it. diameter < 0 uses the bounding-box diagonal of
 * the points themselves. Labels follow their points. */
PointCloud cluster_filter(const PointCloud& cloud, const FilterConfig& filter, double diameter = -1.0);

struct BaselineResult {
  PointCloud cloud;  // filtered representatives
  VertexField f;     // denoised field before filtering
  RunTrace trace;
};

/* Full-graph primal-dual denoising followed by cluster_filter relative to the
 * diameter of g. */
BaselineResult direct_sparsify(const Graph& graph, const VertexField& g, const RegularizerSpec& spec,
                               const PDConfig& pd, const FilterConfig& filter);

}  // namespace cpsparse
