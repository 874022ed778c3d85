#include "cpsparse/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "cpsparse/errors.hpp"

namespace cpsparse {

Graph::Graph(Index n_vertices, std::span<const WeightedEdge> edges) : n_vertices_(n_vertices) {
  if (n_vertices < 0) throw DomainError("graph: negative vertex count");

  struct Directed {
    Index u, v;
    double w;
  };
  std::vector<Directed> directed;
  directed.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n_vertices || e.v >= n_vertices)
      throw DomainError("graph: edge endpoint out of range");
    if (e.u == e.v) throw DomainError("graph: self-loop at vertex " + std::to_string(e.u));
    if (!std::isfinite(e.w)) throw DomainError("graph: non-finite edge weight");
    if (e.w <= 0.0) continue;
    directed.push_back({e.u, e.v, e.w});
    directed.push_back({e.v, e.u, e.w});
  }
  std::sort(directed.begin(), directed.end(), [](const Directed& a, const Directed& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < directed.size(); ++i)
    if (directed[i].u == directed[i - 1].u && directed[i].v == directed[i - 1].v)
      throw DomainError("graph: duplicate edge (" + std::to_string(directed[i].u) + ", " +
                        std::to_string(directed[i].v) + ")");

  const std::size_t m = directed.size();
  offset_.assign(static_cast<std::size_t>(n_vertices) + 1, 0);
  source_.resize(m);
  target_.resize(m);
  weight_.resize(m);
  sqrt_weight_.resize(m);
  reverse_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    source_[i] = directed[i].u;
    target_[i] = directed[i].v;
    weight_[i] = directed[i].w;
    sqrt_weight_[i] = std::sqrt(directed[i].w);
    ++offset_[directed[i].u + 1];
  }
  std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
  for (std::size_t i = 0; i < m; ++i) reverse_[i] = find_edge(target_[i], source_[i]);
}

Index Graph::find_edge(Index u, Index v) const {
  auto first = target_.begin() + offset_[u];
  auto last = target_.begin() + offset_[u + 1];
  auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return -1;
  return static_cast<Index>(it - target_.begin());
}

std::vector<Index> Graph::connected_components(Index* count) const {
  std::vector<Index> comp(static_cast<std::size_t>(n_vertices_), -1);
  Index next = 0;
  std::queue<Index> queue;
  for (Index s = 0; s < n_vertices_; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    queue.push(s);
    while (!queue.empty()) {
      Index u = queue.front();
      queue.pop();
      for (Index e = offset_[u]; e < offset_[u + 1]; ++e) {
        Index v = target_[e];
        if (comp[v] < 0) {
          comp[v] = next;
          queue.push(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

std::vector<WeightedEdge> Graph::undirected_edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(target_.size() / 2);
  for (std::size_t e = 0; e < target_.size(); ++e)
    if (source_[e] < target_[e]) out.push_back({source_[e], target_[e], weight_[e]});
  return out;
}

void RegularizerSpec::validate() const {
  if (!std::isfinite(alpha) || alpha < 0.0) throw DomainError("regularizer: alpha must be finite and >= 0");
  if (!std::isfinite(beta) || beta < 0.0) throw DomainError("regularizer: beta must be finite and >= 0");
  if (kind == Kind::kPq && (!(p >= 1.0) || !(q >= 1.0)))
    throw DomainError("regularizer: p and q must be >= 1");
}

}  // namespace cpsparse
