#include <doctest.h>

#include <random>

#include "hjkit/dijkstra.hpp"
#include "hjkit/oracles.hpp"

using namespace hjkit;

namespace {

void check_one_pass(const MarchStats& st) {
  CHECK(st.heap_pops == st.node_count);
  CHECK(st.order_violations == 0);
  CHECK(st.value_order_violations == 0);
  CHECK(st.transition_violations == 0);
}

}  // namespace

TEST_CASE("dijkstra unit costs give Manhattan distance") {
  Grid2D g(5, 5, 0, 4, 0, 4);
  DijkstraProblem p{ScalarField2D(g, 1.0), {{g.id(0, 0), 0.0}}};
  const DijkstraResult r = dijkstra_solve(p);
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 5; ++i) CHECK(r.u.at(i, j) == i + j);
  check_one_pass(r.stats);
}

TEST_CASE("dijkstra single node keeps the source value") {
  Grid2D g(1, 1, 0, 1, 0, 1);
  DijkstraProblem p{ScalarField2D(g, 7.0), {{0, 2.5}}};
  const DijkstraResult r = dijkstra_solve(p);
  CHECK(r.u[0] == 2.5);
  CHECK(oracles::bellman_ford_grid(p)[0] == 2.5);
}

TEST_CASE("dijkstra low-cost corridor matches Bellman-Ford") {
  Grid2D g(4, 4, 0, 3, 0, 3);
  ScalarField2D c(g, 10.0);
  for (int i = 0; i < 4; ++i) c.at(i, 0) = 1.0;
  for (int j = 0; j < 4; ++j) c.at(3, j) = 1.0;
  DijkstraProblem p{c, {{g.id(0, 0), 0.0}}};
  const DijkstraResult r = dijkstra_solve(p);
  const ScalarField2D ref = oracles::bellman_ford_grid(p);
  for (NodeId id = 0; id < g.size(); ++id) CHECK(r.u[id] == ref[id]);
  // Going along the corridor beats the direct route to the far corner.
  CHECK(r.u.at(3, 3) == 6.0);
}

TEST_CASE("dijkstra random fields, multiple sources and anisotropic spacing") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> cost(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int nx = 1 + static_cast<int>(rng() % 12), ny = 1 + static_cast<int>(rng() % 12);
    Grid2D g(nx, ny, 0.0, 1.0 + trial, 0.0, 2.0);
    ScalarField2D c(g);
    for (double& v : c.values()) v = cost(rng);
    DijkstraProblem p{c, {}};
    for (int s = 0, ns = 1 + static_cast<int>(rng() % 3); s < ns; ++s)
      p.sources.push_back({rng() % g.size(), cost(rng)});
    const DijkstraResult r = dijkstra_solve(p);
    const ScalarField2D ref = oracles::bellman_ford_grid(p);
    for (NodeId id = 0; id < g.size(); ++id) REQUIRE(r.u[id] == ref[id]);
    check_one_pass(r.stats);
  }
}

TEST_CASE("dijkstra fixed point satisfies the recurrence") {
  Grid2D g(9, 6, 0, 1, 0, 1);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> cost(0.5, 2.0);
  ScalarField2D c(g);
  for (double& v : c.values()) v = cost(rng);
  DijkstraProblem p{c, {{g.id(4, 3), 0.0}}};
  const ScalarField2D u = oracles::bellman_ford_grid(p);
  for (NodeId id = 0; id < g.size(); ++id) {
    if (id == g.id(4, 3)) continue;
    double best = kInfinity;
    for_each_axis_neighbor(g, id, [&](NodeId m) { best = std::min(best, u[m]); });
    CHECK(u[id] == best + c[id]);
  }
}

TEST_CASE("dijkstra validation") {
  Grid2D g(3, 3, 0, 1, 0, 1);
  CHECK_THROWS_AS(dijkstra_solve({ScalarField2D(g, 1.0), {}}), std::invalid_argument);
  CHECK_THROWS_AS(dijkstra_solve({ScalarField2D(g, 0.0), {{0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(dijkstra_solve({ScalarField2D(g, 1.0), {{9, 0.0}}}), std::invalid_argument);
  ScalarField2D bad(g, 1.0);
  bad[4] = kInfinity;
  CHECK_THROWS_AS(dijkstra_solve({bad, {{0, 0.0}}}), std::invalid_argument);
}
