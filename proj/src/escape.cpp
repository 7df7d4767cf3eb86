#include "hjkit/escape.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>
#include <thread>

#include "hjkit/indexed_min_heap.hpp"

namespace hjkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

// Derivative along one axis: central inside, second-order one-sided at the
// ends (first-order when the axis has only two nodes).
double axis_derivative(double f_m2, double f_m1, double f0, double f_p1, double f_p2, int idx,
                       int n, double h) {
  if (idx > 0 && idx < n - 1) return (f_p1 - f_m1) / (2.0 * h);
  if (n == 2) return idx == 0 ? (f_p1 - f0) / h : (f0 - f_m1) / h;
  if (idx == 0) return (-3.0 * f0 + 4.0 * f_p1 - f_p2) / (2.0 * h);
  return (3.0 * f0 - 4.0 * f_m1 + f_m2) / (2.0 * h);
}

}  // namespace

PhaseGrid3D::PhaseGrid3D(Grid2D space, int ntheta)
    : space_(space), ntheta_(ntheta), htheta_(kTwoPi / ntheta) {
  require_continuous_grid(space_, "PhaseGrid3D");
  if (ntheta < 8) throw std::invalid_argument("PhaseGrid3D: ntheta must be at least 8");
}

SlownessModel::SlownessModel(ScalarField2D slowness)
    : n_(std::move(slowness)), n_x_(n_.grid()), n_z_(n_.grid()) {
  const Grid2D& g = n_.grid();
  require_continuous_grid(g, "SlownessModel");
  for (double v : n_.values())
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("SlownessModel: slowness must be finite and strictly positive");
  auto val = [&](int i, int j) {
    i = std::clamp(i, 0, g.nx() - 1);
    j = std::clamp(j, 0, g.ny() - 1);
    return n_.at(i, j);
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      n_x_.at(i, j) = axis_derivative(val(i - 2, j), val(i - 1, j), val(i, j), val(i + 1, j),
                                      val(i + 2, j), i, g.nx(), g.hx());
      n_z_.at(i, j) = axis_derivative(val(i, j - 2), val(i, j - 1), val(i, j), val(i, j + 1),
                                      val(i, j + 2), j, g.ny(), g.hy());
    }
}

SlownessModel SlownessModel::from_function(const Grid2D& grid, Analytic fn) {
  SlownessModel model(ScalarField2D::sample(grid, [&](double x, double z) { return fn(x, z).n; }));
  model.analytic_ = std::move(fn);
  return model;
}

SlownessSample SlownessModel::sample(Vec2 p) const {
  return {bilinear_sample(n_, p), bilinear_sample(n_x_, p), bilinear_sample(n_z_, p)};
}

CharVelocity char_velocity(const SlownessSample& s, double theta) {
  if (!(s.n > 0.0)) throw std::invalid_argument("char_velocity: slowness must be positive");
  const double c = std::cos(theta), sn = std::sin(theta);
  return {c, sn, (s.n_z * c - s.n_x * sn) / s.n, s.n};
}

CharVelocity char_velocity(const SlownessModel& model, double x, double z, double theta) {
  return char_velocity(model.sample({x, z}), theta);
}

EscapeSolution::EscapeSolution(PhaseGrid3D g)
    : grid(g),
      u(g.size(), kInfinity),
      sigma(g.size(), kInfinity),
      exit_x(g.size(), 0.0),
      exit_z(g.size(), 0.0),
      exit_theta(g.size(), 0.0),
      order_key(g.size(), kInfinity),
      state(g.size(), NodeState::Far) {}

namespace {

// Direction cosines at theta_k; components within 1e-12 of zero are snapped
// so axis-aligned directions are exact.
std::pair<double, double> direction(const PhaseGrid3D& grid, int k) {
  double c = std::cos(grid.theta(k)), s = std::sin(grid.theta(k));
  if (std::abs(c) < 1e-12) c = 0.0;
  if (std::abs(s) < 1e-12) s = 0.0;
  return {c, s};
}

}  // namespace

bool is_outflow(const PhaseGrid3D& grid, PhaseNode node, double eps) {
  const Grid2D& g = grid.space();
  const auto [c, s] = direction(grid, node.k);
  return (node.i == 0 && -c > eps) || (node.i == g.nx() - 1 && c > eps) ||
         (node.j == 0 && -s > eps) || (node.j == g.ny() - 1 && s > eps);
}

Backtrace escape_backtrace(const PhaseGrid3D& grid, const SlownessModel& model, PhaseNode node) {
  const Grid2D& g = grid.space();
  const NodeId sid = g.id(node.i, node.j);
  const double n = model.slowness()[sid];
  auto [c, s] = direction(grid, node.k);
  const double w = (model.gradient_z()[sid] * c - model.gradient_x()[sid] * s) / n;
  // Outward components on walls are tangent within the outflow threshold.
  if ((node.i == 0 && c < 0.0) || (node.i == g.nx() - 1 && c > 0.0)) c = 0.0;
  if ((node.j == 0 && s < 0.0) || (node.j == g.ny() - 1 && s > 0.0)) s = 0.0;

  const double tx = c != 0.0 ? g.hx() / std::abs(c) : kInfinity;
  const double tz = s != 0.0 ? g.hy() / std::abs(s) : kInfinity;
  const double tt = w != 0.0 ? grid.htheta() / std::abs(w) : kInfinity;
  Backtrace bt;
  bt.step = std::min({tx, tz, tt});
  if (!std::isfinite(bt.step)) return bt;

  auto fraction = [&](double t, double speed, double h) {
    if (speed == 0.0) return 0.0;
    // Faces reached within rounding of the first one count as reached.
    return t <= bt.step * (1 + 1e-12) ? 1.0 : std::min(1.0, std::abs(speed) * bt.step / h);
  };
  const double fx = fraction(tx, c, g.hx());
  const double fz = fraction(tz, s, g.hy());
  const double ft = fraction(tt, w, grid.htheta());
  const int sx = c > 0.0 ? 1 : -1, sz = s > 0.0 ? 1 : -1, st = w > 0.0 ? 1 : -1;

  for (int dk = 0; dk < 2; ++dk) {
    const double wk = dk ? ft : 1.0 - ft;
    if (wk == 0.0) continue;
    for (int dj = 0; dj < 2; ++dj) {
      const double wj = dj ? fz : 1.0 - fz;
      if (wj == 0.0) continue;
      for (int di = 0; di < 2; ++di) {
        const double wi = di ? fx : 1.0 - fx;
        if (wi == 0.0) continue;
        bt.nodes[bt.count] = grid.id(node.i + di * sx, node.j + dj * sz, grid.wrap(node.k + dk * st));
        bt.weights[bt.count] = wi * wj * wk;
        ++bt.count;
      }
    }
  }
  return bt;
}

std::optional<EscapeCandidate> escape_local_update(const SlownessModel& model,
                                                   const EscapeSolution& current,
                                                   PhaseNode node) {
  const Backtrace bt = escape_backtrace(current.grid, model, node);
  if (bt.count == 0) return std::nullopt;
  for (int q = 0; q < bt.count; ++q)
    if (current.state[bt.nodes[q]] != NodeState::Accepted) return std::nullopt;

  const double n = model.slowness()[current.grid.space().id(node.i, node.j)];
  const double ref = current.exit_theta[bt.nodes[0]];
  EscapeCandidate c{bt.step * n, bt.step, 0.0, 0.0, 0.0, -kInfinity};
  double theta = 0.0, key = -kInfinity;
  for (int q = 0; q < bt.count; ++q) {
    const NodeId s = bt.nodes[q];
    const double w = bt.weights[q];
    c.u += w * current.u[s];
    c.sigma += w * current.sigma[s];
    c.exit_x += w * current.exit_x[s];
    c.exit_z += w * current.exit_z[s];
    theta += w * (ref + std::remainder(current.exit_theta[s] - ref, kTwoPi));
    key = std::max(key, current.order_key[s]);
  }
  c.exit_theta = wrap_angle(theta);
  c.order_key = std::max(c.u, key);
  return c;
}

EscapeSolution escape_solve(const PhaseGrid3D& grid, const SlownessModel& model) {
  if (!(model.grid() == grid.space()))
    throw std::invalid_argument("escape_solve: slowness grid differs from phase grid");
  const auto t0 = std::chrono::steady_clock::now();
  const Grid2D& g = grid.space();
  EscapeSolution sol(grid);
  MarchStats& stats = sol.stats;
  stats.node_count = grid.size();
  IndexedMinHeap heap(grid.size());
  AcceptanceOrder order;

  auto advance = [&](NodeId id, NodeState to) {
    if (static_cast<int>(to) != static_cast<int>(sol.state[id]) + 1) {
      ++stats.transition_violations;
      return;
    }
    sol.state[id] = to;
  };

  for (int k = 0; k < grid.ntheta(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!is_outflow(grid, {i, j, k})) continue;
        const NodeId id = grid.id(i, j, k);
        const Vec2 p = g.position(i, j);
        sol.u[id] = 0.0;
        sol.sigma[id] = 0.0;
        sol.exit_x[id] = p.x;
        sol.exit_z[id] = p.y;
        sol.exit_theta[id] = grid.theta(k);
        sol.order_key[id] = 0.0;
        advance(id, NodeState::Considered);
        heap.insert_or_decrease(id, 0.0);
        ++sol.outflow_count;
      }

  while (!heap.empty()) {
    const auto [r, key] = heap.pop_min();
    order.record(key, sol.u[r], stats);
    advance(r, NodeState::Accepted);

    const int ri = static_cast<int>(r % g.nx());
    const int rj = static_cast<int>((r / g.nx()) % g.ny());
    const int rk = static_cast<int>(r / (static_cast<NodeId>(g.nx()) * g.ny()));
    for (int dk = -1; dk <= 1; ++dk)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const PhaseNode m{ri + di, rj + dj, grid.wrap(rk + dk)};
          if (m.i < 0 || m.j < 0 || m.i >= g.nx() || m.j >= g.ny()) continue;
          const NodeId id = grid.id(m.i, m.j, m.k);
          if (sol.state[id] != NodeState::Far) continue;
          ++stats.recomputes;
          const auto cand = escape_local_update(model, sol, m);
          if (!cand) continue;
          sol.u[id] = cand->u;
          sol.sigma[id] = cand->sigma;
          sol.exit_x[id] = cand->exit_x;
          sol.exit_z[id] = cand->exit_z;
          sol.exit_theta[id] = cand->exit_theta;
          sol.order_key[id] = cand->order_key;
          advance(id, NodeState::Considered);
          heap.insert_or_decrease(id, cand->order_key);
        }
  }

  sol.never_ready = static_cast<std::size_t>(
      std::count(sol.state.begin(), sol.state.end(), NodeState::Far));
  stats.unreachable = sol.never_ready;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

double boundary_perimeter(const Grid2D& g) {
  return 2.0 * ((g.xmax() - g.xmin()) + (g.ymax() - g.ymin()));
}

double boundary_arclength(const Grid2D& g, Vec2 p) {
  const double x = std::clamp(p.x, g.xmin(), g.xmax());
  const double y = std::clamp(p.y, g.ymin(), g.ymax());
  const double w = g.xmax() - g.xmin(), h = g.ymax() - g.ymin();
  const double d_bottom = y - g.ymin(), d_right = g.xmax() - x;
  const double d_top = g.ymax() - y, d_left = x - g.xmin();
  const double d = std::min({d_bottom, d_right, d_top, d_left});
  if (d == d_bottom) return x - g.xmin();
  if (d == d_right) return w + (y - g.ymin());
  if (d == d_top) return w + h + (g.xmax() - x);
  return 2.0 * w + h + (g.ymax() - y);
}

std::vector<ArrivalRecord> extract_arrivals(const EscapeSolution& sol, Vec2 receiver,
                                            Vec2 source) {
  const PhaseGrid3D& grid = sol.grid;
  const Grid2D& g = grid.space();
  if (!(receiver.x > g.xmin() && receiver.x < g.xmax() && receiver.y > g.ymin() &&
        receiver.y < g.ymax()))
    throw std::invalid_argument("extract_arrivals: receiver must lie strictly inside the domain");
  const double tol = 1e-9 * std::max(g.xmax() - g.xmin(), g.ymax() - g.ymin());
  const double to_wall = std::min({std::abs(source.x - g.xmin()), std::abs(source.x - g.xmax()),
                                   std::abs(source.y - g.ymin()), std::abs(source.y - g.ymax())});
  if (!g.contains(source) || to_wall > tol)
    throw std::invalid_argument("extract_arrivals: source must lie on the boundary");

  const double perimeter = boundary_perimeter(g);
  const double s_source = boundary_arclength(g, source);
  const double fx_all = (receiver.x - g.xmin()) / g.hx();
  const double fz_all = (receiver.y - g.ymin()) / g.hy();
  const int i0 = std::min(static_cast<int>(fx_all), g.nx() - 2);
  const int j0 = std::min(static_cast<int>(fz_all), g.ny() - 2);
  const double fx = fx_all - i0, fz = fz_all - j0;
  const std::array<double, 4> w{(1 - fx) * (1 - fz), fx * (1 - fz), (1 - fx) * fz, fx * fz};

  const int nt = grid.ntheta();
  std::vector<double> offset(nt), time(nt);
  std::vector<bool> valid(nt, true);
  for (int k = 0; k < nt; ++k) {
    const std::array<NodeId, 4> ids{grid.id(i0, j0, k), grid.id(i0 + 1, j0, k),
                                    grid.id(i0, j0 + 1, k), grid.id(i0 + 1, j0 + 1, k)};
    double ex = 0.0, ez = 0.0, t = 0.0;
    for (int q = 0; q < 4; ++q) {
      if (w[q] == 0.0) continue;
      if (!std::isfinite(sol.u[ids[q]])) valid[k] = false;
      ex += w[q] * sol.exit_x[ids[q]];
      ez += w[q] * sol.exit_z[ids[q]];
      t += w[q] * sol.u[ids[q]];
    }
    time[k] = t;
    // Signed boundary offset from the source, wrapped into [-P/2, P/2).
    double d = boundary_arclength(g, {ex, ez}) - s_source;
    d -= perimeter * std::floor(d / perimeter + 0.5);
    offset[k] = d;
  }

  std::vector<ArrivalRecord> out;
  for (int k = 0; k < nt; ++k) {
    const int k1 = (k + 1) % nt;
    if (!valid[k] || !valid[k1]) continue;
    const double a = offset[k], b = offset[k1];
    if ((a > 0.0) == (b > 0.0)) continue;
    // Opposite ends of the perimeter, not a crossing.
    if (std::abs(a - b) >= 0.5 * perimeter) continue;
    const double t = a / (a - b);
    out.push_back({wrap_angle(grid.theta(k) + t * grid.htheta()),
                   time[k] + t * (time[k1] - time[k]), 0});
  }
  std::sort(out.begin(), out.end(),
            [](const ArrivalRecord& l, const ArrivalRecord& r) { return l.theta < r.theta; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ArrivalRecord& l, const ArrivalRecord& r) {
                          return std::abs(l.theta - r.theta) < 1e-12;
                        }),
            out.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const ArrivalRecord& l, const ArrivalRecord& r) { return l.time < r.time; });
  for (std::size_t b = 0; b < out.size(); ++b) out[b].branch = static_cast<int>(b);
  return out;
}

std::vector<PhasePoint> isochron(const EscapeSolution& sol, double T, int threads) {
  if (!(T >= 0.0)) throw std::invalid_argument("isochron: T must be non-negative");
  const PhaseGrid3D& grid = sol.grid;
  const Grid2D& g = grid.space();
  const int nt = grid.ntheta();

  auto scan = [&](int k_begin, int k_end, std::vector<PhasePoint>& out) {
    for (int k = k_begin; k < k_end; ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          const double a = sol.u[grid.id(i, j, k)] - T;
          if (!std::isfinite(a)) continue;
          const Vec2 p = g.position(i, j);
          const double theta = grid.theta(k);
          auto edge = [&](NodeId other, double dx, double dz, double dtheta) {
            const double b = sol.u[other] - T;
            if (!std::isfinite(b) || (a == 0.0 && b == 0.0)) return;
            if ((a <= 0.0) == (b <= 0.0)) return;
            const double t = a / (a - b);
            out.push_back({p.x + t * dx, p.y + t * dz, wrap_angle(theta + t * dtheta)});
          };
          if (i + 1 < g.nx()) edge(grid.id(i + 1, j, k), g.hx(), 0.0, 0.0);
          if (j + 1 < g.ny()) edge(grid.id(i, j + 1, k), 0.0, g.hy(), 0.0);
          edge(grid.id(i, j, grid.wrap(k + 1)), 0.0, 0.0, grid.htheta());
        }
  };

  threads = std::clamp(threads, 1, nt);
  std::vector<std::vector<PhasePoint>> parts(threads);
  if (threads == 1) {
    scan(0, nt, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(scan, nt * t / threads, nt * (t + 1) / threads, std::ref(parts[t]));
    for (auto& th : pool) th.join();
  }
  std::vector<PhasePoint> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  auto lex = [](const PhasePoint& l, const PhasePoint& r) {
    if (l.x != r.x) return l.x < r.x;
    if (l.z != r.z) return l.z < r.z;
    return l.theta < r.theta;
  };
  std::sort(out.begin(), out.end(), lex);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hjkit
