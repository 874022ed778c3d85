#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "cpsparse/types.hpp"

namespace cpsparse::detail {

/* Static kd-tree over the rows of a point matrix for exact k-NN queries.
 * Candidates are ordered by (squared distance, index) so equal distances
 * resolve to the lower index. */
class KdTree {
 public:
  explicit KdTree(const Field& points, Index leaf_size = 16) : points_(points), leaf_size_(leaf_size) {
    index_.resize(static_cast<std::size_t>(points.rows()));
    for (Index i = 0; i < points.rows(); ++i) index_[i] = i;
    if (points.rows() > 0) build(0, points.rows());
  }

  /* k nearest points to row `query`, excluding the row itself */
  std::vector<Index> nearest(Index query, Index k) const {
    Heap heap;
    if (k > 0 && !nodes_.empty()) search(0, query, k, heap);
    std::vector<Index> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      out[i] = heap.top().second;
      heap.pop();
    }
    return out;
  }

 private:
  using Candidate = std::pair<double, Index>;
  // max-heap on (dist2, id): top is the current worst candidate
  using Heap = std::priority_queue<Candidate>;

  struct Node {
    Index begin, end;  // range into index_
    int axis = -1;     // -1 for leaves
    double split = 0.0;
    Index left = -1, right = -1;
  };

  Index build(Index begin, Index end) {
    const Index id = static_cast<Index>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= leaf_size_) return id;

    const Index d = points_.cols();
    int axis = 0;
    double best_spread = -1.0;
    for (Index j = 0; j < d; ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (Index i = begin; i < end; ++i) {
        const double x = points_(index_[i], j);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        axis = static_cast<int>(j);
      }
    }
    if (best_spread <= 0.0) return id;  // all points identical: keep as leaf

    const Index mid = begin + (end - begin) / 2;
    std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                     [&](Index a, Index b) { return points_(a, axis) < points_(b, axis); });
    const double split = points_(index_[mid], axis);
    const Index left = build(begin, mid);
    const Index right = build(mid, end);
    Node& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
  }

  void search(Index node_id, Index query, Index k, Heap& heap) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (Index i = node.begin; i < node.end; ++i) {
        const Index cand = index_[i];
        if (cand == query) continue;
        const double d2 = (points_.row(cand) - points_.row(query)).squaredNorm();
        Candidate c{d2, cand};
        if (static_cast<Index>(heap.size()) < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    // left subtree holds coordinates <= split, right holds >= split
    const double diff = points_(query, node.axis) - node.split;
    const Index near = diff < 0.0 ? node.left : node.right;
    const Index far = diff < 0.0 ? node.right : node.left;
    search(near, query, k, heap);
    // equality keeps ties reachable so the lower index can still win
    if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.top().first) search(far, query, k, heap);
  }

  const Field& points_;
  Index leaf_size_;
  std::vector<Index> index_;
  std::vector<Node> nodes_;
};

}  // namespace cpsparse::detail
