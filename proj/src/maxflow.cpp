#include "cpsparse/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "cpsparse/errors.hpp"
#include "cpsparse/parallel.hpp"
#include "cpsparse/union_find.hpp"

namespace cpsparse {
namespace {

void validate(const FlowNetwork& net) {
  if (net.n_nodes < 0) throw DomainError("flow network: negative node count");
  const Index limit = net.n_nodes + 2;
  for (const auto& a : net.arcs) {
    if (a.from < 0 || a.from >= limit || a.to < 0 || a.to >= limit)
      throw DomainError("flow network: arc endpoint out of range");
    if (!std::isfinite(a.capacity) || a.capacity < 0.0)
      throw DomainError("flow network: capacity must be finite and nonnegative, got " +
                        std::to_string(a.capacity));
  }
}

/* Boykov-Kolmogorov search trees over the inner nodes; terminal arcs are
 * folded into a signed residual tr_cap (> 0 towards s, < 0 towards t). */
class BkSolver {
 public:
  explicit BkSolver(const FlowNetwork& net) : n_(net.n_nodes) {
    double max_cap = 0.0;
    for (const auto& a : net.arcs) max_cap = std::max(max_cap, a.capacity);
    eps_ = 1e-12 * max_cap;

    tr_cap_.assign(static_cast<std::size_t>(n_), 0.0);
    std::vector<Index> count(static_cast<std::size_t>(n_) + 1, 0);
    const Index s = net.source(), t = net.sink();
    std::vector<const FlowNetwork::Arc*> inner;
    for (const auto& a : net.arcs) {
      if (a.capacity == 0.0) continue;
      if (a.from == s && a.to == t) {
        flow_ += a.capacity;
      } else if (a.from == s && a.to < n_) {
        tr_cap_[a.to] += a.capacity;
      } else if (a.to == t && a.from < n_) {
        tr_cap_[a.from] -= a.capacity;
      } else if (a.from < n_ && a.to < n_ && a.from != a.to) {
        inner.push_back(&a);
        ++count[a.from + 1];
        ++count[a.to + 1];
      }
      // arcs into s, out of t or self-loops never cross an s-t cut
    }
    direct_flow(net);

    for (Index u = 0; u < n_; ++u) count[u + 1] += count[u];
    first_ = count;
    const std::size_t m = 2 * inner.size();
    head_.resize(m);
    r_cap_.resize(m);
    adj_.resize(m);
    std::vector<Index> fill(first_.begin(), first_.end() - 1);
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const auto& a = *inner[k];
      const Index fwd = static_cast<Index>(2 * k), bwd = fwd + 1;
      head_[fwd] = a.to;
      r_cap_[fwd] = a.capacity;
      head_[bwd] = a.from;
      r_cap_[bwd] = 0.0;
      adj_[fill[a.from]++] = fwd;
      adj_[fill[a.to]++] = bwd;
    }
  }

  void solve() {
    parent_.assign(static_cast<std::size_t>(n_), kNone);
    in_sink_.assign(static_cast<std::size_t>(n_), 0);
    active_.assign(static_cast<std::size_t>(n_), 0);
    dist_.assign(static_cast<std::size_t>(n_), 0);
    stamp_.assign(static_cast<std::size_t>(n_), 0);
    for (Index u = 0; u < n_; ++u) {
      if (tr_cap_[u] > eps_) {
        parent_[u] = kTerminal;
        dist_[u] = 1;
        set_active(u);
      } else if (tr_cap_[u] < -eps_) {
        parent_[u] = kTerminal;
        in_sink_[u] = 1;
        dist_[u] = 1;
        set_active(u);
      }
    }

    Index current = -1;
    while (true) {
      Index i = current;
      if (i < 0 || parent_[i] == kNone) {
        current = -1;
        i = next_active();
        if (i < 0) break;
      }
      const Index bridge = grow(i);
      ++time_;
      if (bridge < 0) {
        current = -1;
        continue;
      }
      // keep growing from the same node next round
      current = i;
      augment(bridge);
      adopt_orphans();
    }
  }

  /* residual reachability from s (minimal) or complement of reaching t (maximal) */
  std::vector<char> source_side(CutSide side) const {
    std::vector<char> mark(static_cast<std::size_t>(n_), 0);
    std::deque<Index> queue;
    const bool forward = side == CutSide::kMinimalSource;
    for (Index u = 0; u < n_; ++u) {
      if (forward ? tr_cap_[u] > eps_ : tr_cap_[u] < -eps_) {
        mark[u] = 1;
        queue.push_back(u);
      }
    }
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop_front();
      for (Index k = first_[u]; k < first_[u + 1]; ++k) {
        const Index a = adj_[k];
        const Index v = head_[a];
        const double cap = forward ? r_cap_[a] : r_cap_[a ^ 1];
        if (!mark[v] && cap > eps_) {
          mark[v] = 1;
          queue.push_back(v);
        }
      }
    }
    std::vector<char> out(static_cast<std::size_t>(n_) + 2, 0);
    for (Index u = 0; u < n_; ++u) out[u] = forward ? mark[u] : !mark[u];
    out[n_] = 1;
    return out;
  }

  double flow() const { return flow_; }

 private:
  static constexpr Index kNone = -1;
  static constexpr Index kTerminal = -2;
  static constexpr Index kOrphan = -3;

  /* the common part of s->u and u->t is pushed straight through */
  void direct_flow(const FlowNetwork& net) {
    std::vector<double> to_s(static_cast<std::size_t>(n_), 0.0), to_t(static_cast<std::size_t>(n_), 0.0);
    for (const auto& a : net.arcs) {
      if (a.from == net.source() && a.to < n_) to_s[a.to] += a.capacity;
      if (a.to == net.sink() && a.from < n_) to_t[a.from] += a.capacity;
    }
    for (Index u = 0; u < n_; ++u) flow_ += std::min(to_s[u], to_t[u]);
  }

  Index tail(Index a) const { return head_[a ^ 1]; }

  void set_active(Index u) {
    if (!active_[u]) {
      active_[u] = 1;
      queue_.push_back(u);
    }
  }

  Index next_active() {
    while (!queue_.empty()) {
      const Index u = queue_.front();
      queue_.pop_front();
      if (!active_[u]) continue;
      active_[u] = 0;
      if (parent_[u] != kNone) return u;
    }
    return -1;
  }

  /* grows the tree of i by one layer; returns an s-tree -> t-tree arc or -1 */
  Index grow(Index i) {
    const bool sink = in_sink_[i];
    for (Index k = first_[i]; k < first_[i + 1]; ++k) {
      const Index a = adj_[k];
      const Index j = head_[a];
      const double cap = sink ? r_cap_[a ^ 1] : r_cap_[a];
      if (cap <= eps_) continue;
      if (parent_[j] == kNone) {
        in_sink_[j] = sink;
        parent_[j] = a ^ 1;
        stamp_[j] = stamp_[i];
        dist_[j] = dist_[i] + 1;
        set_active(j);
      } else if (in_sink_[j] != sink) {
        return sink ? (a ^ 1) : a;
      } else if (stamp_[j] <= stamp_[i] && dist_[j] > dist_[i]) {
        parent_[j] = a ^ 1;
        stamp_[j] = stamp_[i];
        dist_[j] = dist_[i] + 1;
      }
    }
    return -1;
  }

  void augment(Index bridge) {
    double b = r_cap_[bridge];
    for (Index i = tail(bridge); parent_[i] != kTerminal; i = head_[parent_[i]])
      b = std::min(b, r_cap_[parent_[i] ^ 1]);
    {
      Index i = tail(bridge);
      while (parent_[i] != kTerminal) i = head_[parent_[i]];
      b = std::min(b, tr_cap_[i]);
    }
    for (Index i = head_[bridge]; parent_[i] != kTerminal; i = head_[parent_[i]])
      b = std::min(b, r_cap_[parent_[i]]);
    {
      Index i = head_[bridge];
      while (parent_[i] != kTerminal) i = head_[parent_[i]];
      b = std::min(b, -tr_cap_[i]);
    }

    r_cap_[bridge ^ 1] += b;
    r_cap_[bridge] -= b;
    Index i = tail(bridge);
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      const Index up = head_[a];
      r_cap_[a] += b;
      r_cap_[a ^ 1] -= b;
      if (r_cap_[a ^ 1] <= eps_) make_orphan(i);
      i = up;
    }
    tr_cap_[i] -= b;
    if (tr_cap_[i] <= eps_) make_orphan(i);

    i = head_[bridge];
    while (parent_[i] != kTerminal) {
      const Index a = parent_[i];
      const Index up = head_[a];
      r_cap_[a ^ 1] += b;
      r_cap_[a] -= b;
      if (r_cap_[a] <= eps_) make_orphan(i);
      i = up;
    }
    tr_cap_[i] += b;
    if (tr_cap_[i] >= -eps_) make_orphan(i);
    flow_ += b;
  }

  void make_orphan(Index i) {
    parent_[i] = kOrphan;
    orphans_.push_front(i);
  }

  /* depth of j to its terminal, or -1 if j hangs below an orphan */
  Index root_distance(Index j) {
    Index d = 0;
    for (Index k = j;;) {
      if (stamp_[k] == time_) return d + dist_[k];
      const Index a = parent_[k];
      ++d;
      if (a == kTerminal) {
        stamp_[k] = time_;
        dist_[k] = 1;
        return d;
      }
      if (a == kOrphan || a == kNone) return -1;
      k = head_[a];
    }
  }

  void mark_path(Index j, Index d) {
    for (Index k = j; stamp_[k] != time_; k = head_[parent_[k]]) {
      stamp_[k] = time_;
      dist_[k] = d--;
    }
  }

  void adopt_orphans() {
    while (!orphans_.empty()) {
      const Index i = orphans_.front();
      orphans_.pop_front();
      const bool sink = in_sink_[i];
      Index best = kNone;
      Index best_d = std::numeric_limits<Index>::max();
      for (Index k = first_[i]; k < first_[i + 1]; ++k) {
        const Index a = adj_[k];
        const Index j = head_[a];
        const double cap = sink ? r_cap_[a] : r_cap_[a ^ 1];
        if (cap <= eps_ || parent_[j] == kNone || in_sink_[j] != sink) continue;
        const Index d = root_distance(j);
        if (d < 0) continue;
        if (d < best_d) {
          best = a;
          best_d = d;
        }
        mark_path(j, d);
      }
      if (best != kNone) {
        parent_[i] = best;
        stamp_[i] = time_;
        dist_[i] = best_d + 1;
        continue;
      }
      parent_[i] = kNone;
      for (Index k = first_[i]; k < first_[i + 1]; ++k) {
        const Index a = adj_[k];
        const Index j = head_[a];
        if (parent_[j] == kNone || in_sink_[j] != sink) continue;
        const double cap = sink ? r_cap_[a] : r_cap_[a ^ 1];
        if (cap > eps_) set_active(j);
        const Index pj = parent_[j];
        if (pj >= 0 && head_[pj] == i) make_orphan_back(j);
      }
    }
  }

  void make_orphan_back(Index j) {
    parent_[j] = kOrphan;
    orphans_.push_back(j);
  }

  Index n_;
  double eps_ = 0.0;
  double flow_ = 0.0;
  std::vector<double> tr_cap_;
  std::vector<Index> first_;
  std::vector<Index> adj_;
  std::vector<Index> head_;
  std::vector<double> r_cap_;

  std::vector<Index> parent_;
  std::vector<char> in_sink_;
  std::vector<char> active_;
  std::vector<Index> dist_;
  std::vector<long long> stamp_;
  long long time_ = 1;
  std::deque<Index> queue_;
  std::deque<Index> orphans_;
};

}  // namespace

double cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side) {
  if (static_cast<Index>(source_side.size()) != net.n_nodes + 2)
    throw ConformanceError("cut_capacity: side vector must have n_nodes + 2 entries");
  double total = 0.0;
  for (const auto& a : net.arcs)
    if (source_side[a.from] && !source_side[a.to]) total += a.capacity;
  return total;
}

CutResult max_flow(const FlowNetwork& net, CutSide side) {
  validate(net);
  BkSolver solver(net);
  solver.solve();
  CutResult result;
  result.source_side = solver.source_side(side);
  result.value = cut_capacity(net, result.source_side);
  return result;
}

CutResult max_flow_by_components(const FlowNetwork& net, CutSide side, unsigned threads) {
  validate(net);
  const Index n = net.n_nodes;
  UnionFind uf(n);
  for (const auto& a : net.arcs)
    if (a.capacity > 0.0 && a.from < n && a.to < n) uf.unite(a.from, a.to);
  Index n_comp = 0;
  const auto comp = uf.labels(&n_comp);

  std::vector<Index> local(static_cast<std::size_t>(n));
  std::vector<Index> comp_size(static_cast<std::size_t>(n_comp), 0);
  for (Index u = 0; u < n; ++u) local[u] = comp_size[comp[u]]++;
  std::vector<FlowNetwork> parts(static_cast<std::size_t>(n_comp));
  for (Index c = 0; c < n_comp; ++c) parts[c] = FlowNetwork(comp_size[c]);

  CutResult result;
  result.source_side.assign(static_cast<std::size_t>(n) + 2, 0);
  result.source_side[net.source()] = 1;
  for (const auto& a : net.arcs) {
    if (a.capacity == 0.0) continue;
    if (a.from < n && a.to < n) {
      parts[comp[a.from]].add_arc(local[a.from], local[a.to], a.capacity);
    } else if (a.from == net.source() && a.to < n) {
      parts[comp[a.to]].add_source_arc(local[a.to], a.capacity);
    } else if (a.to == net.sink() && a.from < n) {
      parts[comp[a.from]].add_sink_arc(local[a.from], a.capacity);
    }
  }

  std::vector<std::vector<char>> sides(static_cast<std::size_t>(n_comp));
  parallel_for(static_cast<std::size_t>(n_comp), threads, [&](std::size_t c) {
    const auto& part = parts[c];
    if (part.arcs.empty()) {
      sides[c].assign(static_cast<std::size_t>(part.n_nodes) + 2, side == CutSide::kMaximalSource);
      return;
    }
    BkSolver solver(part);
    solver.solve();
    sides[c] = solver.source_side(side);
  });
  for (Index u = 0; u < n; ++u) result.source_side[u] = sides[comp[u]][local[u]];
  result.value = cut_capacity(net, result.source_side);
  return result;
}

CutResult brute_force_min_cut(const FlowNetwork& net) {
  validate(net);
  const Index n = net.n_nodes;
  if (n > 20) throw RefusalError("brute_force_min_cut: refusing instances with more than 20 nodes");
  double scale = 0.0;
  for (const auto& a : net.arcs) scale += a.capacity;
  const double tie = 1e-12 * (1.0 + scale);

  CutResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<char> side(static_cast<std::size_t>(n) + 2, 0);
  side[net.source()] = 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    // node 0 is the most significant bit, so codes run in lexicographic order
    for (Index u = 0; u < n; ++u) side[u] = static_cast<char>((code >> (n - 1 - u)) & 1u);
    const double value = cut_capacity(net, side);
    if (value < best.value - tie) {
      best.value = value;
      best.source_side = side;
    }
  }
  return best;
}

void check_submodular(const FlowNetwork& net) {
  for (const auto& a : net.arcs) {
    if (a.from >= net.n_nodes || a.to >= net.n_nodes) continue;
    // E(0,0) = E(1,1) = 0 and E(0,1) + E(1,0) = capacity
    if (!std::isfinite(a.capacity) || a.capacity < 0.0)
      throw ConformanceError("flow network violates submodularity: pairwise capacity " +
                             std::to_string(a.capacity));
  }
}

}  // namespace cpsparse
