#include "hjkit/oracles.hpp"

#include <algorithm>
#include <array>
#include <numbers>

namespace hjkit::oracles {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using State = std::array<double, 5>;  // x, z, theta, u, sigma

// Plain bilinear read of node data, kept separate from the solvers' sampler.
double read_bilinear(const ScalarField2D& f, double x, double z) {
  const Grid2D& g = f.grid();
  const double fx = std::clamp((x - g.xmin()) / g.hx(), 0.0, double(g.nx() - 1));
  const double fz = std::clamp((z - g.ymin()) / g.hy(), 0.0, double(g.ny() - 1));
  const int i = std::min(static_cast<int>(fx), g.nx() - 2);
  const int j = std::min(static_cast<int>(fz), g.ny() - 2);
  const double tx = fx - i, tz = fz - j;
  return (1 - tx) * (1 - tz) * f.at(i, j) + tx * (1 - tz) * f.at(i + 1, j) +
         (1 - tx) * tz * f.at(i, j + 1) + tx * tz * f.at(i + 1, j + 1);
}

class RaySystem {
 public:
  explicit RaySystem(const SlownessModel& model) : model_(model) {}

  State derivative(const State& y) const {
    double n, nx, nz;
    if (const auto* fn = model_.analytic()) {
      const SlownessSample s = (*fn)(y[0], y[1]);
      n = s.n, nx = s.n_x, nz = s.n_z;
    } else {
      const ScalarField2D& f = model_.slowness();
      const double dx = 1e-4 * f.grid().hx(), dz = 1e-4 * f.grid().hy();
      n = read_bilinear(f, y[0], y[1]);
      nx = (read_bilinear(f, y[0] + dx, y[1]) - read_bilinear(f, y[0] - dx, y[1])) / (2 * dx);
      nz = (read_bilinear(f, y[0], y[1] + dz) - read_bilinear(f, y[0], y[1] - dz)) / (2 * dz);
    }
    const double c = std::cos(y[2]), s = std::sin(y[2]);
    return {c, s, (nz * c - nx * s) / n, n, 1.0};
  }

  State rk4(const State& y, double h) const {
    auto axpy = [](const State& a, double t, const State& b) {
      State r;
      for (int q = 0; q < 5; ++q) r[q] = a[q] + t * b[q];
      return r;
    };
    const State k1 = derivative(y);
    const State k2 = derivative(axpy(y, 0.5 * h, k1));
    const State k3 = derivative(axpy(y, 0.5 * h, k2));
    const State k4 = derivative(axpy(y, h, k3));
    State r;
    for (int q = 0; q < 5; ++q) r[q] = y[q] + h / 6.0 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);
    return r;
  }

 private:
  const SlownessModel& model_;
};

// Signed distance to the rectangle boundary, positive outside.
double gamma(const Grid2D& g, double x, double z) {
  const double dx = std::max(g.xmin() - x, x - g.xmax());
  const double dz = std::max(g.ymin() - z, z - g.ymax());
  if (dx > 0 || dz > 0) return std::hypot(std::max(dx, 0.0), std::max(dz, 0.0));
  return std::max(dx, dz);
}

template <class Fn>
double golden_max(Fn&& fn, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = fn(c), fd = fn(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d, d = c, fd = fc, c = hi - inv_phi * (hi - lo), fc = fn(c);
    } else {
      lo = c, c = d, fc = fd, d = lo + inv_phi * (hi - lo), fd = fn(d);
    }
  }
  return std::max({fc, fd, fn(0.5 * (lo + hi))});
}

// Max of fn over the circle: dense scan then golden refinement around the
// best sample.
template <class Fn>
double circle_max(Fn&& fn, int samples = 4096) {
  const double h = kTwoPi / samples;
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s)
    if (const double v = fn(s * h); v > best_v) best_v = v, best = s;
  return std::max(best_v, golden_max(fn, (best - 1) * h, (best + 1) * h, 1e-13));
}

}  // namespace

RayPath trace_ray(const SlownessModel& model, double x0, double z0, double theta0, double step,
                  std::size_t max_steps) {
  if (!(step > 0.0)) throw std::invalid_argument("trace_ray: step must be positive");
  const Grid2D& g = model.grid();
  if (!g.contains({x0, z0})) throw std::invalid_argument("trace_ray: start outside the domain");
  const RaySystem sys(model);
  RayPath path;
  State y{x0, z0, theta0, 0.0, 0.0};
  path.samples.push_back({y[0], y[1], y[2], y[3], y[4]});
  for (std::size_t n = 0; n < max_steps; ++n) {
    const State next = sys.rk4(y, step);
    if (gamma(g, next[0], next[1]) <= 0.0) {
      y = next;
      path.samples.push_back({y[0], y[1], y[2], y[3], y[4]});
      continue;
    }
    double lo = 0.0, hi = step;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      const State s = sys.rk4(y, mid);
      (gamma(g, s[0], s[1]) > 0.0 ? hi : lo) = mid;
    }
    const State e = sys.rk4(y, 0.5 * (lo + hi));
    path.escaped = true;
    path.exit = {{std::clamp(e[0], g.xmin(), g.xmax()), std::clamp(e[1], g.ymin(), g.ymax())},
                 std::fmod(std::fmod(e[2], kTwoPi) + kTwoPi, kTwoPi),
                 e[3],
                 e[4]};
    return path;
  }
  return path;
}

ScalarField2D bellman_ford_grid(const DijkstraProblem& problem) {
  const Grid2D& g = problem.costs.grid();
  if (g.nx() > 64 || g.ny() > 64)
    throw std::invalid_argument("bellman_ford_grid: oracle limited to 64x64 grids");
  ScalarField2D u(g, kInfinity);
  std::vector<bool> source(g.size(), false);
  for (const SeedValue& s : problem.sources) {
    source[s.node] = true;
    u[s.node] = std::min(u[s.node], s.value);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const NodeId id = g.id(i, j);
        if (source[id]) continue;
        double best = kInfinity;
        if (i > 0) best = std::min(best, u.at(i - 1, j));
        if (i + 1 < g.nx()) best = std::min(best, u.at(i + 1, j));
        if (j > 0) best = std::min(best, u.at(i, j - 1));
        if (j + 1 < g.ny()) best = std::min(best, u.at(i, j + 1));
        const double v = best + problem.costs[id];
        if (v < u[id]) {
          u[id] = v;
          changed = true;
        }
      }
  }
  return u;
}

double euclidean_distance(Vec2 x, Vec2 source) { return std::hypot(x.x - source.x, x.y - source.y); }

double homogeneous_straight_ray(const std::function<double(Vec2)>& speed, Vec2 x) {
  const double r = std::hypot(x.x, x.y);
  if (r == 0.0) return 0.0;
  return r / speed({x.x / r, x.y / r});
}

double homogeneous_relaxed(const std::function<double(Vec2)>& speed, Vec2 x) {
  if (x.x == 0.0 && x.y == 0.0) return 0.0;
  auto support = [&](double phi) {
    const double px = std::cos(phi), py = std::sin(phi);
    return circle_max([&](double a) {
      const double ax = std::cos(a), ay = std::sin(a);
      return (px * ax + py * ay) * speed({ax, ay});
    }, 1024);
  };
  return circle_max([&](double phi) {
    return (std::cos(phi) * x.x + std::sin(phi) * x.y) / support(phi);
  }, 512);
}

double straight_exit(const Grid2D& d, Vec2 p, double theta, double n) {
  if (!d.contains(p)) throw OutOfDomain("straight_exit: point outside the domain");
  const double c = std::cos(theta), s = std::sin(theta);
  double t = kInfinity;
  if (c > 0) t = std::min(t, (d.xmax() - p.x) / c);
  if (c < 0) t = std::min(t, (d.xmin() - p.x) / c);
  if (s > 0) t = std::min(t, (d.ymax() - p.y) / s);
  if (s < 0) t = std::min(t, (d.ymin() - p.y) / s);
  return n * t;
}

double surface_front_speed(double g_x, double g_y, double omega) {
  using V3 = std::array<double, 3>;
  auto cross = [](V3 a, V3 b) {
    return V3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto unit = [](V3 a) {
    const double l = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    return V3{a[0] / l, a[1] / l, a[2] / l};
  };
  const V3 r_x{1.0, 0.0, g_x}, r_y{0.0, 1.0, g_y};
  const V3 normal = cross(r_x, r_y);
  const double nx = std::cos(omega), ny = std::sin(omega);
  // Front tangent in the plane is perpendicular to its normal; lift it.
  const double tx = -ny, ty = nx;
  const V3 tangent{r_x[0] * tx + r_y[0] * ty, r_x[1] * tx + r_y[1] * ty,
                   r_x[2] * tx + r_y[2] * ty};
  // Unit in-surface direction orthogonal to the front: the front's velocity.
  V3 m = unit(cross(tangent, normal));
  if (m[0] * nx + m[1] * ny < 0) m = {-m[0], -m[1], -m[2]};
  return m[0] * nx + m[1] * ny;
}

}  // namespace hjkit::oracles
