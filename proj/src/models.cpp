#include "hjkit/models.hpp"

#include <array>
#include <numbers>

namespace hjkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kManifoldAmplitude = 0.9;

constexpr std::array<BuiltinInfo, 7> kBuiltins{{
    {"const-speed", ModelKind::Speed, true, "f = 1 everywhere (F1 = F2 = 1)"},
    {"ellipse-2", ModelKind::Speed, false,
     "homogeneous f(a) = sqrt(4 a1^2 + a2^2) (F1 = 1, F2 = 2)"},
    {"ellipse-wulff-2", ModelKind::Speed, false,
     "homogeneous f(a) = 2 / sqrt(a1^2 + 4 a2^2): speed polar is the ellipse with "
     "semi-axes 2 and 1 (F1 = 1, F2 = 2)"},
    {"sin-manifold", ModelKind::Speed, false,
     "planar speed of unit-speed travel on z = 0.9 sin(2 pi x) sin(2 pi y)"},
    {"const-slowness", ModelKind::Slowness, true, "n = 1 everywhere"},
    {"linear-slowness", ModelKind::Slowness, true, "n = 1 + 0.5 z"},
    {"waveguide", ModelKind::Slowness, true, "n = 1 / (1 + 0.8 exp(-25 (z - 0.5)^2))"},
}};

[[noreturn]] void unknown(std::string_view name) {
  std::string msg = "unknown model '" + std::string(name) + "'; available:";
  for (const auto& b : kBuiltins) msg += " " + std::string(b.name);
  throw UnknownModel(msg);
}

SlownessSample analytic_slowness(std::string_view name, double, double z) {
  if (name == "const-slowness" || name == "const-speed") return {1.0, 0.0, 0.0};
  if (name == "linear-slowness") return {1.0 + 0.5 * z, 0.0, 0.5};
  // waveguide
  const double d = z - 0.5;
  const double e = 0.8 * std::exp(-25.0 * d * d);
  const double n = 1.0 / (1.0 + e);
  return {n, 0.0, 50.0 * d * e * n * n};
}

}  // namespace

std::span<const BuiltinInfo> builtin_models() { return kBuiltins; }

const BuiltinInfo& builtin_info(std::string_view name) {
  for (const auto& b : kBuiltins)
    if (b.name == name) return b;
  unknown(name);
}

Vec2 sin_manifold_gradient(Vec2 p) {
  const double k = 2.0 * kPi;
  return {kManifoldAmplitude * k * std::cos(k * p.x) * std::sin(k * p.y),
          kManifoldAmplitude * k * std::sin(k * p.x) * std::cos(k * p.y)};
}

SpeedProfile builtin_speed(std::string_view name) {
  const BuiltinInfo& info = builtin_info(name);
  if (name == "const-speed")
    return SpeedProfile([](Vec2, Vec2) { return 1.0; }, SpeedBounds{1.0, 1.0});
  if (name == "ellipse-2")
    return SpeedProfile(
        [](Vec2 a, Vec2) { return std::sqrt(4.0 * a.x * a.x + a.y * a.y); },
        SpeedBounds{1.0, 2.0});
  if (name == "ellipse-wulff-2")
    return SpeedProfile(
        [](Vec2 a, Vec2) { return 2.0 / std::sqrt(a.x * a.x + 4.0 * a.y * a.y); },
        SpeedBounds{1.0, 2.0});
  if (name == "sin-manifold") {
    // Moving at unit surface speed along planar direction a covers planar
    // distance at rate 1 / sqrt(1 + (grad g . a)^2).
    const double steepest = kManifoldAmplitude * 2.0 * kPi;
    return SpeedProfile(
        [](Vec2 a, Vec2 x) {
          const double slope = dot(sin_manifold_gradient(x), a);
          return 1.0 / std::sqrt(1.0 + slope * slope);
        },
        SpeedBounds{1.0 / std::sqrt(1.0 + steepest * steepest), 1.0});
  }
  if (info.kind == ModelKind::Slowness) {
    const std::string key(name);
    return SpeedProfile([key](Vec2, Vec2 x) { return 1.0 / analytic_slowness(key, x.x, x.y).n; });
  }
  unknown(name);
}

SlownessModel builtin_slowness(std::string_view name, const Grid2D& grid) {
  const BuiltinInfo& info = builtin_info(name);
  if (!info.isotropic) throw std::invalid_argument("model '" + std::string(name) +
                                                   "' is anisotropic; a slowness model is isotropic");
  const std::string key(name);
  return SlownessModel::from_function(
      grid, [key](double x, double z) { return analytic_slowness(key, x, z); });
}

}  // namespace hjkit
