#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hjkit/core.hpp"
#include "hjkit/escape.hpp"
#include "hjkit/oum.hpp"

namespace hjkit {

enum class ModelKind { Speed, Slowness };

struct BuiltinInfo {
  std::string_view name;
  ModelKind kind;
  bool isotropic;
  std::string_view description;
};

/// Thrown for an unknown builtin; the message lists the available names.
class UnknownModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::span<const BuiltinInfo> builtin_models();
const BuiltinInfo& builtin_info(std::string_view name);

/// Speed profile by name. Isotropic slowness builtins are accepted as
/// f = 1/n.
SpeedProfile builtin_speed(std::string_view name);

/// Slowness model sampled on `grid`. Isotropic speed builtins are accepted
/// as n = 1/f.
SlownessModel builtin_slowness(std::string_view name, const Grid2D& grid);

/// Gradient of g(x, y) = 0.9 sin(2 pi x) sin(2 pi y).
Vec2 sin_manifold_gradient(Vec2 p);

}  // namespace hjkit
