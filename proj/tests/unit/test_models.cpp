#include <doctest.h>

#include <string>

#include "hjkit/models.hpp"

using namespace hjkit;

TEST_CASE("builtin catalogue") {
  const auto models = builtin_models();
  REQUIRE(models.size() == 7);
  for (const auto& m : models) {
    CHECK(&builtin_info(m.name) == &m);
    CHECK_FALSE(m.description.empty());
  }
  CHECK(builtin_info("waveguide").kind == ModelKind::Slowness);
  CHECK_FALSE(builtin_info("ellipse-2").isotropic);
}

TEST_CASE("unknown names list the available models") {
  try {
    builtin_speed("ellipse-3");
    FAIL("expected UnknownModel");
  } catch (const UnknownModel& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ellipse-3") != std::string::npos);
    for (const auto& m : builtin_models()) CHECK(msg.find(m.name) != std::string::npos);
  }
  CHECK_THROWS_AS(builtin_slowness("nope", Grid2D(3, 3, 0, 1, 0, 1)), UnknownModel);
}

TEST_CASE("speed and slowness builtins convert where isotropic") {
  const Grid2D g(5, 5, 0, 1, 0, 1);
  const SpeedProfile linear = builtin_speed("linear-slowness");
  CHECK(linear({1, 0}, {0.3, 0.5}) == doctest::Approx(1 / 1.25));
  const SlownessModel unit = builtin_slowness("const-speed", g);
  for (double v : unit.slowness().values()) CHECK(v == 1.0);
  CHECK_THROWS_AS(builtin_slowness("ellipse-2", g), std::invalid_argument);
}

TEST_CASE("waveguide slowness") {
  const SlownessModel m = builtin_slowness("waveguide", Grid2D(11, 11, 0, 1, 0, 1));
  const SlownessSample centre = (*m.analytic())(0.3, 0.5);
  CHECK(centre.n == doctest::Approx(1 / 1.8));
  CHECK(centre.n_z == doctest::Approx(0.0));
  // Closed-form gradient against a central difference.
  const double d = 1e-6;
  const double fd = ((*m.analytic())(0.3, 0.4 + d).n - (*m.analytic())(0.3, 0.4 - d).n) / (2 * d);
  CHECK((*m.analytic())(0.3, 0.4).n_z == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("elliptic builtins") {
  const SpeedProfile e = builtin_speed("ellipse-2");
  CHECK(e({1, 0}, {}) == doctest::Approx(2.0));
  CHECK(e({0, 1}, {}) == doctest::Approx(1.0));
  const SpeedProfile w = builtin_speed("ellipse-wulff-2");
  CHECK(w({1, 0}, {}) == doctest::Approx(2.0));
  CHECK(w({0, 1}, {}) == doctest::Approx(1.0));
  REQUIRE(w.bounds());
  CHECK(w.bounds()->anisotropy() == doctest::Approx(2.0));
}
