#pragma once

#include <vector>

#include "hjkit/core.hpp"
#include "hjkit/dijkstra.hpp"

namespace hjkit {

/// Isotropic Eikonal problem |grad u| * F = 1 with u = q on boundary nodes.
struct EikonalProblem {
  ScalarField2D speed;
  std::vector<SeedValue> boundary;

  void validate() const;
};

/// Upwind update at one node from its axis neighbours (+inf = unknown).
///
/// With a = min(x neighbours) and b = min(y neighbours), returns the largest
/// root of max((U-a)/hx, 0)^2 + max((U-b)/hy, 0)^2 = 1/F^2: the two-sided
/// quadratic root when it is real and >= max(a, b), otherwise the one-sided
/// value min(a + hx/F, b + hy/F).
double fmm_local_update(double u_x_minus, double u_x_plus, double u_y_minus, double u_y_plus,
                        double hx, double hy, double speed);

struct FmmResult {
  ScalarField2D u;
  MarchStats stats;
};

FmmResult fmm_solve(const EikonalProblem& problem);

}  // namespace hjkit
