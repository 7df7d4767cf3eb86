#include <doctest.h>

#include <random>

#include "hjkit/core.hpp"

using namespace hjkit;

TEST_CASE("grid ids and positions") {
  Grid2D g(4, 3, 0.0, 3.0, -1.0, 1.0);
  CHECK(g.size() == 12);
  CHECK(g.hx() == doctest::Approx(1.0));
  CHECK(g.hy() == doctest::Approx(1.0));
  CHECK(g.id(2, 1) == 6);
  CHECK(g.i_of(6) == 2);
  CHECK(g.j_of(6) == 1);
  CHECK(g.position(6) == Vec2{2.0, 0.0});
  CHECK(g.nearest({2.4, 0.6}) == g.id(2, 2));
  CHECK(g.nearest({-5.0, -5.0}) == 0);
}

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(Grid2D(0, 3, 0, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Grid2D(3, 3, 1, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Grid2D(3, 3, 0, 1, 0, std::nan("")), std::invalid_argument);
  CHECK_NOTHROW(Grid2D(1, 1, 0, 1, 0, 1));
  CHECK_THROWS_AS(require_continuous_grid(Grid2D(1, 5, 0, 1, 0, 1), "t"), std::invalid_argument);
}

TEST_CASE("field construction checks size") {
  Grid2D g(3, 3, 0, 1, 0, 1);
  CHECK_THROWS_AS(ScalarField2D(g, std::vector<double>(8, 0.0)), std::invalid_argument);
  ScalarField2D f = ScalarField2D::sample(g, [](double x, double y) { return x + 10 * y; });
  CHECK(f.at(2, 1) == doctest::Approx(6.0));
}

TEST_CASE("bilinear sampling") {
  Grid2D g(11, 7, 0.0, 1.0, 0.0, 1.0);
  ScalarField2D affine = ScalarField2D::sample(g, [](double x, double y) { return 2 * x + 3 * y; });

  SUBCASE("node-coincident returns the node value") {
    ScalarField2D f(g);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-5, 5);
    for (double& v : f.values()) v = d(rng);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) CHECK(bilinear_sample(f, g.position(i, j)) == f.at(i, j));
  }
  SUBCASE("affine exactness") {
    CHECK(bilinear_sample(affine, {0.37, 0.21}) == doctest::Approx(1.37).epsilon(1e-14));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0, 1);
    for (int n = 0; n < 1000; ++n) {
      const Vec2 p{d(rng), d(rng)};
      CHECK(std::abs(bilinear_sample(affine, p) - (2 * p.x + 3 * p.y)) < 1e-13);
    }
  }
  SUBCASE("cell centre of {0,1,1,2} is 1") {
    Grid2D c(2, 2, 0, 1, 0, 1);
    ScalarField2D f(c, {0.0, 1.0, 1.0, 2.0});
    CHECK(bilinear_sample(f, {0.5, 0.5}) == doctest::Approx(1.0));
  }
  SUBCASE("clamp band and out of domain") {
    CHECK(bilinear_sample(affine, {1.05, 0.5}) == doctest::Approx(2 * 1.0 + 1.5));
    CHECK_THROWS_AS(bilinear_sample(affine, {1.5, 0.5}), OutOfDomain);
    CHECK_THROWS_AS(bilinear_sample(affine, {0.5, -0.3}), OutOfDomain);
  }
  SUBCASE("infinite corners with zero weight are ignored") {
    Grid2D c(2, 2, 0, 1, 0, 1);
    ScalarField2D f(c, {1.0, kInfinity, 3.0, kInfinity});
    CHECK(bilinear_sample(f, {0.0, 0.5}) == doctest::Approx(2.0));
  }
}

TEST_CASE("point to segment distance") {
  CHECK(point_segment_distance({0.5, 0.5}, {0, 0}, {1, 0}) == doctest::Approx(0.5));
  CHECK(point_segment_distance({2, 0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("mesh from grid") {
  SUBCASE("2x2") {
    const SimplicialMesh m = mesh_from_grid(Grid2D(2, 2, 0, 1, 0, 1));
    CHECK(m.vertex_count() == 4);
    CHECK(m.triangles.size() == 2);
    CHECK(m.diameter == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("3x3 and 3x2 counts") {
    CHECK(mesh_from_grid(Grid2D(3, 3, 0, 1, 0, 1)).triangles.size() == 8);
    const SimplicialMesh m = mesh_from_grid(Grid2D(3, 2, 0, 1, 0, 1));
    CHECK(m.vertex_count() == 6);
    CHECK(m.triangles.size() == 4);
  }
  SUBCASE("Euler characteristic of a disk") {
    for (auto [nx, ny] : {std::pair{2, 2}, {3, 3}, {5, 2}, {7, 11}, {33, 17}}) {
      const SimplicialMesh m = mesh_from_grid(Grid2D(nx, ny, 0, 1, 0, 1));
      const long v = static_cast<long>(m.vertex_count());
      const long e = static_cast<long>(m.edge_count());
      const long t = static_cast<long>(m.triangles.size());
      CHECK(v - e + t == 1);
    }
  }
  SUBCASE("diagonals run lower-left to upper-right") {
    const Grid2D g(3, 3, 0, 1, 0, 1);
    const SimplicialMesh m = mesh_from_grid(g);
    const auto& nb = m.neighbors[g.id(1, 1)];
    CHECK(std::binary_search(nb.begin(), nb.end(), g.id(2, 2)));
    CHECK(std::binary_search(nb.begin(), nb.end(), g.id(0, 0)));
    CHECK_FALSE(std::binary_search(nb.begin(), nb.end(), g.id(2, 0)));
    CHECK(m.edge_apexes(g.id(0, 0), g.id(1, 1)).size() == 2);
    CHECK(m.edge_apexes(g.id(0, 0), g.id(1, 0)).size() == 1);
    CHECK(m.on_boundary[g.id(1, 0)]);
    CHECK_FALSE(m.on_boundary[g.id(1, 1)]);
  }
  SUBCASE("anisotropic spacing") {
    const SimplicialMesh m = mesh_from_grid(Grid2D(5, 3, 0, 4, 0, 1));
    CHECK(m.diameter == doctest::Approx(std::hypot(1.0, 0.5)));
  }
}

TEST_CASE("node states only move forward one step") {
  NodeStates s(3);
  CHECK(s.advance(0, NodeState::Considered));
  CHECK(s.advance(0, NodeState::Accepted));
  CHECK_FALSE(s.advance(0, NodeState::Considered));
  CHECK_FALSE(s.advance(1, NodeState::Accepted));
  CHECK_FALSE(s.advance(0, NodeState::Accepted));
  CHECK(s.violations() == 3);
  CHECK(s.count(NodeState::Accepted) == 1);
  CHECK(s.count(NodeState::Far) == 2);
}

TEST_CASE("acceptance order bookkeeping") {
  MarchStats st;
  AcceptanceOrder o;
  o.record(0.0, 0.0, st);
  o.record(1.0, 1.0, st);
  o.record(1.0, 0.75, st);
  o.record(0.5, 2.0, st);
  CHECK(st.heap_pops == 4);
  CHECK(st.order_violations == 1);
  CHECK(st.max_order_drop == doctest::Approx(0.5));
  CHECK(st.value_order_violations == 1);
  CHECK(st.max_value_drop == doctest::Approx(0.25));
}
