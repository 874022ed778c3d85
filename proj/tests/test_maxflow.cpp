#include <doctest.h>

#include <random>

#include "cpsparse/errors.hpp"
#include "cpsparse/maxflow.hpp"

using namespace cpsparse;

namespace {

FlowNetwork example_network() {
  // nodes a = 0, b = 1
  FlowNetwork net(2);
  net.add_source_arc(0, 2);
  net.add_source_arc(1, 1);
  net.add_arc(0, 1, 1);
  net.add_sink_arc(0, 1);
  net.add_sink_arc(1, 2);
  return net;
}

FlowNetwork random_network(std::mt19937_64& rng, Index n, double density) {
  std::uniform_real_distribution<double> cap(0.0, 10.0), coin(0.0, 1.0);
  FlowNetwork net(n);
  for (Index u = 0; u < n + 2; ++u)
    for (Index v = 0; v < n + 2; ++v)
      if (u != v && coin(rng) < density) net.add_arc(u, v, coin(rng) < 0.1 ? 0.0 : cap(rng));
  return net;
}

}  // namespace

TEST_CASE("max_flow on the two-node example") {
  const auto net = example_network();
  const auto cut = max_flow(net);
  CHECK(cut.value == doctest::Approx(3.0));
  CHECK(cut.source_side[net.source()] == 1);
  CHECK(cut.source_side[net.sink()] == 0);
  CHECK(cut_capacity(net, cut.source_side) == doctest::Approx(cut.value));
}

TEST_CASE("brute force prefers the lexicographically smallest side") {
  const auto cut = brute_force_min_cut(example_network());
  CHECK(cut.value == doctest::Approx(3.0));
  CHECK(cut.source_side[0] == 0);
  CHECK(cut.source_side[1] == 0);
}

TEST_CASE("zero capacities give the source-reachable side") {
  FlowNetwork net(3);
  net.add_source_arc(0, 0.0);
  net.add_arc(0, 1, 0.0);
  net.add_sink_arc(2, 0.0);
  const auto cut = max_flow(net);
  CHECK(cut.value == 0.0);
  CHECK(cut.source_side == std::vector<char>{0, 0, 0, 1, 0});
}

TEST_CASE("single source-sink arc") {
  FlowNetwork net(0);
  net.add_arc(net.source(), net.sink(), 5.0);
  CHECK(max_flow(net).value == doctest::Approx(5.0));
  CHECK(brute_force_min_cut(net).value == doctest::Approx(5.0));
}

TEST_CASE("empty arc list") { CHECK(brute_force_min_cut(FlowNetwork(4)).value == 0.0); }

TEST_CASE("negative capacity is rejected") {
  FlowNetwork net(1);
  net.add_source_arc(0, -1.0);
  CHECK_THROWS_AS(max_flow(net), DomainError);
  CHECK_THROWS_AS(check_submodular([] {
                    FlowNetwork n(2);
                    n.add_arc(0, 1, -0.5);
                    return n;
                  }()),
                  ConformanceError);
}

TEST_CASE("brute force refuses large instances") { CHECK_THROWS_AS(brute_force_min_cut(FlowNetwork(21)), RefusalError); }

TEST_CASE("max_flow matches enumeration on random networks") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 12);
    const auto net = random_network(rng, n, 0.35);
    const auto bk = max_flow(net);
    const auto bk_max = max_flow(net, CutSide::kMaximalSource);
    const auto split = max_flow_by_components(net, CutSide::kMaximalSource, 3);
    const auto oracle = brute_force_min_cut(net);
    const double tol = 1e-9 * (1.0 + oracle.value);
    REQUIRE(std::abs(bk.value - oracle.value) <= tol);
    REQUIRE(std::abs(bk_max.value - oracle.value) <= tol);
    REQUIRE(std::abs(split.value - oracle.value) <= tol);
    CHECK(bk.source_side[net.source()] == 1);
    CHECK(bk.source_side[net.sink()] == 0);
    // the minimal source side is contained in the maximal one
    for (Index u = 0; u < n; ++u) CHECK((!bk.source_side[u] || bk_max.source_side[u]));
    CHECK(split.source_side == bk_max.source_side);
  }
}

TEST_CASE("max_flow handles a long grid") {
  // 30x30 grid, unit neighbour capacities, left column to s, right column to t
  const Index side = 30;
  FlowNetwork net(side * side);
  for (Index r = 0; r < side; ++r)
    for (Index c = 0; c < side; ++c) {
      const Index u = r * side + c;
      if (c + 1 < side) {
        net.add_arc(u, u + 1, 1.0);
        net.add_arc(u + 1, u, 1.0);
      }
      if (r + 1 < side) {
        net.add_arc(u, u + side, 1.0);
        net.add_arc(u + side, u, 1.0);
      }
    }
  for (Index r = 0; r < side; ++r) {
    net.add_source_arc(r * side, 100.0);
    net.add_sink_arc(r * side + side - 1, 100.0);
  }
  CHECK(max_flow(net).value == doctest::Approx(30.0));
}
