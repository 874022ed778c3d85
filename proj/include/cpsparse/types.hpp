#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace cpsparse {

using Index = std::int64_t;

/* Row-major real matrix used for every vertex, edge and reduced field:
 * one row per vertex (or directed edge, or subset), one column per
 * coordinate. */
using Field = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/* Vertex-indexed values of a field, N rows of dimension d. */
using VertexField = Field;
/* Directed-edge-indexed values, M rows. */
using EdgeField = Field;
/* Per-subset constants c_A, m rows. */
using ReducedField = Field;

}  // namespace cpsparse
