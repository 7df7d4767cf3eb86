#pragma once

#include <functional>
#include <vector>

#include "hjkit/core.hpp"
#include "hjkit/dijkstra.hpp"
#include "hjkit/escape.hpp"

/// Reference computations for tests and acceptance checks. Nothing in the
/// solvers calls into this namespace.
namespace hjkit::oracles {

struct RaySample {
  double x, z, theta, u, sigma;
};

struct RayExit {
  Vec2 position;
  double theta = 0.0;
  double time = 0.0;
  double sigma = 0.0;
};

struct RayPath {
  std::vector<RaySample> samples;
  bool escaped = false;
  RayExit exit;
};

/// Classical RK4 on dx/ds = cos, dz/ds = sin, dtheta/ds = (n_z cos - n_x sin)/n,
/// du/ds = n. The boundary crossing inside the last step is located by
/// bisection on the step length to 1e-10. Uses the model's closed form when
/// it has one, else its own bilinear reading of the node slowness.
RayPath trace_ray(const SlownessModel& model, double x0, double z0, double theta0, double step,
                  std::size_t max_steps = 1000000);

/// Iterates U_ij = min(neighbours) + C_ij to its fixed point. Grids up to 64x64.
ScalarField2D bellman_ford_grid(const DijkstraProblem& problem);

double euclidean_distance(Vec2 x, Vec2 source);

/// |x| / f(x/|x|): straight-ray travel time from the origin for an
/// x-independent profile. Only exact when the speed polar {f(a) a} is convex.
double homogeneous_straight_ray(const std::function<double(Vec2)>& speed, Vec2 x);

/// Travel time from the origin for an x-independent profile with relaxed
/// (zig-zag) controls: the gauge of the convex hull of {f(a) a}, i.e.
/// max_p (p.x) / max_a (p.a) f(a), by dense enumeration plus golden refinement.
double homogeneous_relaxed(const std::function<double(Vec2)>& speed, Vec2 x);

/// n * distance from (x, z) along (cos theta, sin theta) to the rectangle wall.
double straight_exit(const Grid2D& domain, Vec2 p, double theta, double n = 1.0);

/// Normal speed, projected to the plane, of a unit-speed front on the surface
/// z = g(x, y) whose planar normal has angle omega. Built from the embedded
/// tangent plane: front tangent, surface normal, in-surface front normal.
double surface_front_speed(double g_x, double g_y, double omega);

}  // namespace hjkit::oracles
