#pragma once

#include <vector>

#include "cpsparse/types.hpp"

namespace cpsparse {

/* Capacitated digraph on n_nodes inner nodes 0..n_nodes-1 plus a source
 * (id source()) and a sink (id sink()). Parallel arcs are allowed and act as
 * their sum. */
struct FlowNetwork {
  struct Arc {
    Index from;
    Index to;
    double capacity;
  };

  Index n_nodes = 0;
  std::vector<Arc> arcs;

  FlowNetwork() = default;
  explicit FlowNetwork(Index n) : n_nodes(n) {}

  Index source() const { return n_nodes; }
  Index sink() const { return n_nodes + 1; }

  void add_arc(Index from, Index to, double capacity) { arcs.push_back({from, to, capacity}); }
  void add_source_arc(Index u, double capacity) { add_arc(source(), u, capacity); }
  void add_sink_arc(Index u, double capacity) { add_arc(u, sink(), capacity); }
};

/* source_side is indexed by node id (size n_nodes + 2). */
struct CutResult {
  std::vector<char> source_side;
  double value = 0.0;
};

/* Which minimum cut to report when several exist. */
enum class CutSide {
  kMinimalSource,  // nodes reachable from s in the residual network
  kMaximalSource,  // complement of the nodes that reach t in the residual network
};

/* Boykov-Kolmogorov augmenting paths. Throws DomainError on negative or
 * non-finite capacities and on arcs with endpoints out of range. */
CutResult max_flow(const FlowNetwork& net, CutSide side = CutSide::kMinimalSource);

/* Solves every weakly connected component of the inner arc graph separately,
 * in parallel, and merges the cuts. Same result as max_flow. */
CutResult max_flow_by_components(const FlowNetwork& net, CutSide side, unsigned threads);

/* Exhaustive enumeration for n_nodes <= 20 (RefusalError otherwise). Ties go
 * to the lexicographically smallest side indicator with node 0 most
 * significant. */
CutResult brute_force_min_cut(const FlowNetwork& net);

/* total capacity of arcs leaving the given source side */
double cut_capacity(const FlowNetwork& net, const std::vector<char>& source_side);

/* Throws ConformanceError unless every inner pairwise arc has a finite,
 * nonnegative capacity, so that E(0,0)+E(1,1) <= E(0,1)+E(1,0) holds for
 * each pairwise term. */
void check_submodular(const FlowNetwork& net);

}  // namespace cpsparse
