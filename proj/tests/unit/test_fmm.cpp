#include <doctest.h>

#include <random>

#include "hjkit/fmm.hpp"
#include "hjkit/oracles.hpp"

using namespace hjkit;

namespace {

FmmResult center_source(int n, double speed) {
  Grid2D g(n, n, 0, 1, 0, 1);
  return fmm_solve({ScalarField2D(g, speed), {{g.nearest({0.5, 0.5}), 0.0}}});
}

double linf_outside_ball(const ScalarField2D& u, Vec2 source) {
  const Grid2D& g = u.grid();
  const double h = std::max(g.hx(), g.hy());
  double err = 0.0;
  for (NodeId id = 0; id < g.size(); ++id) {
    const double d = oracles::euclidean_distance(g.position(id), source);
    if (d > 2 * h) err = std::max(err, std::abs(u[id] - d));
  }
  return err;
}

}  // namespace

TEST_CASE("fmm local update") {
  CHECK(fmm_local_update(0.0, kInfinity, kInfinity, kInfinity, 0.1, 0.1, 1.0) ==
        doctest::Approx(0.1));
  CHECK(fmm_local_update(0.0, kInfinity, 0.0, kInfinity, 1, 1, 1) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  const double u = fmm_local_update(kInfinity, 0.0, 0.5, kInfinity, 1, 1, 1);
  CHECK(u == doctest::Approx((1.0 + std::sqrt(7.0)) / 4.0).epsilon(1e-14));
  CHECK(std::abs(u * u + (u - 0.5) * (u - 0.5) - 1.0) < 1e-12);

  SUBCASE("one-sided fallback when the root is upwind of b") {
    // |a - b| > h/F: the quadratic root would be below b.
    CHECK(fmm_local_update(0.0, kInfinity, 5.0, kInfinity, 1, 1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("per-axis spacing") {
    const double hx = 0.5, hy = 2.0;
    const double v = fmm_local_update(0.0, kInfinity, 0.0, kInfinity, hx, hy, 1.0);
    CHECK(v * v / (hx * hx) + v * v / (hy * hy) == doctest::Approx(1.0));
  }
  CHECK(fmm_local_update(kInfinity, kInfinity, kInfinity, kInfinity, 1, 1, 1) == kInfinity);
}

TEST_CASE("fmm constant speed from the centre") {
  const FmmResult r = center_source(129, 1.0);
  const Grid2D& g = r.u.grid();
  CHECK(std::abs(r.u[g.nearest({0.75, 0.5})] - 0.25) <= 0.02);
  CHECK(std::abs(r.u[g.nearest({0.75, 0.75})] - 0.35355) <= 0.02);
  CHECK(r.stats.heap_pops == g.size());
  CHECK(r.stats.order_violations == 0);
  CHECK(r.stats.value_order_violations == 0);
  CHECK(r.stats.transition_violations == 0);
}

TEST_CASE("fmm error decreases under refinement") {
  double prev = kInfinity;
  for (int n : {33, 65, 129}) {
    const double e = linf_outside_ball(center_source(n, 1.0).u, {0.5, 0.5});
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("fmm speed scaling is node-exact") {
  const FmmResult one = center_source(65, 1.0);
  const FmmResult two = center_source(65, 2.0);
  for (NodeId id = 0; id < one.u.grid().size(); ++id) CHECK(two.u[id] == one.u[id] / 2.0);
}

TEST_CASE("fmm comparison principle") {
  Grid2D g(33, 33, 0, 1, 0, 1);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> f(0.5, 2.0);
  ScalarField2D speed(g);
  for (double& v : speed.values()) v = f(rng);
  const FmmResult base = fmm_solve({speed, {{0, 0.0}}});
  ScalarField2D faster = speed;
  for (int n = 0; n < 100; ++n) faster[rng() % g.size()] *= 1.5;
  const FmmResult up = fmm_solve({faster, {{0, 0.0}}});
  for (NodeId id = 0; id < g.size(); ++id) CHECK(up.u[id] <= base.u[id]);
}

TEST_CASE("fmm symmetry of a centred source") {
  const FmmResult r = center_source(33, 1.0);
  for (int j = 0; j < 33; ++j)
    for (int i = 0; i < 33; ++i) {
      CHECK(r.u.at(i, j) == r.u.at(32 - i, j));
      CHECK(r.u.at(i, j) == r.u.at(j, i));
    }
}

TEST_CASE("fmm validation") {
  Grid2D g(3, 3, 0, 1, 0, 1);
  CHECK_THROWS_AS(fmm_solve({ScalarField2D(g, -1.0), {{0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(fmm_solve({ScalarField2D(g, 1.0), {}}), std::invalid_argument);
  CHECK_THROWS_AS(fmm_solve({ScalarField2D(Grid2D(1, 3, 0, 1, 0, 1), 1.0), {{0, 0.0}}}),
                  std::invalid_argument);
}
