#include <doctest.h>

#include <numbers>
#include <random>

#include "hjkit/dijkstra.hpp"
#include "hjkit/models.hpp"
#include "hjkit/oracles.hpp"

using namespace hjkit;
using namespace hjkit::oracles;

namespace {

const Grid2D kUnitSquare(21, 21, 0, 1, 0, 1);

}  // namespace

TEST_CASE("trace_ray straight rays") {
  const SlownessModel one = builtin_slowness("const-slowness", kUnitSquare);
  const RayPath r = trace_ray(one, 0.5, 0.5, 0.0, 0.01);
  REQUIRE(r.escaped);
  CHECK(std::abs(r.exit.position.x - 1.0) < 1e-9);
  CHECK(std::abs(r.exit.position.y - 0.5) < 1e-12);
  CHECK(std::abs(r.exit.time - 0.5) < 1e-9);
  CHECK(std::abs(r.exit.sigma - 0.5) < 1e-9);

  const RayPath d = trace_ray(one, 0.5, 0.5, std::numbers::pi / 4, 0.01);
  REQUIRE(d.escaped);
  CHECK(std::abs(d.exit.time - std::sqrt(0.5)) < 1e-9);

  for (std::size_t s = 1; s < r.samples.size(); ++s) {
    CHECK(r.samples[s].u >= r.samples[s - 1].u);
    CHECK(r.samples[s].sigma - r.samples[s - 1].sigma == doctest::Approx(0.01));
  }
  CHECK_FALSE(trace_ray(one, 0.5, 0.5, 0.0, 0.01, 10).escaped);
  CHECK_THROWS_AS(trace_ray(one, 0.5, 0.5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(trace_ray(one, 1.5, 0.5, 0.0, 0.01), std::invalid_argument);
}

TEST_CASE("trace_ray is fourth order on a smooth model") {
  const SlownessModel linear = builtin_slowness("linear-slowness", kUnitSquare);
  auto exit_time = [&](double step) { return trace_ray(linear, 0.0, 0.5, 0.0, step).exit.time; };
  const double t1 = exit_time(0.2), t2 = exit_time(0.1), t3 = exit_time(0.05);
  const double ratio = (t1 - t2) / (t2 - t3);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.15));
  // The ray turns toward larger slowness.
  const RayPath r = trace_ray(linear, 0.0, 0.5, 0.0, 0.01);
  CHECK(r.exit.theta > 0.0);
  CHECK(r.exit.theta < std::numbers::pi);
}

TEST_CASE("trace_ray without a closed form reads the node slowness") {
  const Grid2D g(41, 41, 0, 1, 0, 1);
  const SlownessModel sampled(ScalarField2D::sample(g, [](double, double z) { return 1 + 0.5 * z; }));
  const SlownessModel exact = builtin_slowness("linear-slowness", g);
  const RayExit a = trace_ray(sampled, 0.1, 0.3, 0.4, 0.005).exit;
  const RayExit b = trace_ray(exact, 0.1, 0.3, 0.4, 0.005).exit;
  CHECK(a.time == doctest::Approx(b.time).epsilon(1e-6));
  CHECK(a.theta == doctest::Approx(b.theta).epsilon(1e-6));
}

TEST_CASE("bellman-ford oracle") {
  SUBCASE("unit costs from a corner give the Manhattan field") {
    const Grid2D g(6, 4, 0, 1, 0, 1);
    const ScalarField2D u = bellman_ford_grid({ScalarField2D(g, std::vector<double>(24, 1.0)), {{0, 0.0}}});
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 6; ++i) CHECK(u.at(i, j) == i + j);
  }
  SUBCASE("single node") {
    const Grid2D g(1, 1, 0, 1, 0, 1);
    CHECK(bellman_ford_grid({ScalarField2D(g, {3.0}), {{0, 2.5}}}).at(0, 0) == 2.5);
  }
  SUBCASE("fixed point residual") {
    const Grid2D g(8, 8, 0, 1, 0, 1);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(0.1, 5);
    ScalarField2D c(g);
    for (double& v : c.values()) v = d(rng);
    const ScalarField2D u = bellman_ford_grid({c, {{g.id(3, 4), 0.0}}});
    for (NodeId id = 0; id < g.size(); ++id) {
      if (id == g.id(3, 4)) continue;
      double best = kInfinity;
      for_each_axis_neighbor(g, id, [&](NodeId m) { best = std::min(best, u[m]); });
      CHECK(u[id] == best + c[id]);
    }
  }
  CHECK_THROWS_AS(
      bellman_ford_grid({ScalarField2D(Grid2D(65, 2, 0, 1, 0, 1), std::vector<double>(130, 1.0)), {{0, 0.0}}}),
      std::invalid_argument);
}

TEST_CASE("closed forms") {
  CHECK(euclidean_distance({3, 4}, {0, 0}) == 5.0);
  auto ellipse = [](Vec2 a) { return std::sqrt(4 * a.x * a.x + a.y * a.y); };
  CHECK(homogeneous_straight_ray(ellipse, {0.5, 0}) == doctest::Approx(0.25));
  CHECK(homogeneous_relaxed(ellipse, {0.5, 0}) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(homogeneous_relaxed(ellipse, {0, 0.5}) == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-9));

  // Dense enumeration of straight paths agrees with the closed form.
  auto wulff = [](Vec2 a) { return 2 / std::sqrt(a.x * a.x + 4 * a.y * a.y); };
  const Vec2 x{0.3, -0.7};
  CHECK(homogeneous_relaxed(wulff, x) == doctest::Approx(homogeneous_straight_ray(wulff, x)).epsilon(1e-8));

  CHECK(straight_exit(kUnitSquare, {0.5, 0.5}, 0.0) == doctest::Approx(0.5));
  CHECK(straight_exit(kUnitSquare, {0.5, 0.5}, 0.0, 3.0) == doctest::Approx(1.5));
  CHECK(straight_exit(kUnitSquare, {0.25, 0.5}, std::numbers::pi) == doctest::Approx(0.25));
  CHECK(straight_exit(kUnitSquare, {0.5, 0.5}, std::numbers::pi / 4) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(straight_exit(kUnitSquare, {1.5, 0.5}, 0.0), OutOfDomain);
}

TEST_CASE("surface front speed") {
  CHECK(surface_front_speed(0, 0, 1.3) == doctest::Approx(1.0));
  // Front moving along x across a slope in x is slowed by the slope.
  CHECK(surface_front_speed(1, 0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(surface_front_speed(1, 0, std::numbers::pi / 2) == doctest::Approx(1.0));
}
