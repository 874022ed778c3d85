#pragma once

#include <numeric>
#include <vector>

#include "cpsparse/types.hpp"

namespace cpsparse {

/* Disjoint sets with path halving and union by size. */
class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  /* dense labels 0..count-1 numbered by lowest member */
  std::vector<Index> labels(Index* count = nullptr) {
    const Index n = static_cast<Index>(parent_.size());
    std::vector<Index> root_label(static_cast<std::size_t>(n), -1), out(static_cast<std::size_t>(n));
    Index next = 0;
    for (Index i = 0; i < n; ++i) {
      const Index r = find(i);
      if (root_label[r] < 0) root_label[r] = next++;
      out[i] = root_label[r];
    }
    if (count) *count = next;
    return out;
  }

 private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

}  // namespace cpsparse
