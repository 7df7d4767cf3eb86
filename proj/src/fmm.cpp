#include "hjkit/fmm.hpp"

#include <algorithm>
#include <chrono>

#include "hjkit/indexed_min_heap.hpp"

namespace hjkit {

void EikonalProblem::validate() const {
  require_continuous_grid(speed.grid(), "fmm");
  for (double f : speed.values())
    if (!(f > 0.0) || !std::isfinite(f))
      throw std::invalid_argument("fmm: speed must be finite and strictly positive");
  if (boundary.empty()) throw std::invalid_argument("fmm: empty boundary");
  for (const SeedValue& s : boundary) {
    if (s.node >= speed.grid().size()) throw std::invalid_argument("fmm: boundary node out of bounds");
    if (!std::isfinite(s.value)) throw std::invalid_argument("fmm: boundary value must be finite");
  }
}

double fmm_local_update(double u_x_minus, double u_x_plus, double u_y_minus, double u_y_plus,
                        double hx, double hy, double speed) {
  const double a = std::min(u_x_minus, u_x_plus);
  const double b = std::min(u_y_minus, u_y_plus);
  const double one_sided = std::min(a + hx / speed, b + hy / speed);
  if (!std::isfinite(a) || !std::isfinite(b)) return one_sided;

  const double hx2 = hx * hx, hy2 = hy * hy;
  const double disc = (hx2 + hy2) / (speed * speed) - (a - b) * (a - b);
  if (disc < 0.0) return one_sided;
  const double root = (a * hy2 + b * hx2 + hx * hy * std::sqrt(disc)) / (hx2 + hy2);
  return root >= std::max(a, b) ? root : one_sided;
}

FmmResult fmm_solve(const EikonalProblem& problem) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid2D& g = problem.speed.grid();
  const std::size_t n = g.size();

  FmmResult result{ScalarField2D(g, kInfinity), {}};
  MarchStats& stats = result.stats;
  stats.node_count = n;
  ScalarField2D& u = result.u;
  NodeStates states(n);
  std::vector<bool> fixed(n, false);
  IndexedMinHeap heap(n);
  AcceptanceOrder order;

  for (const SeedValue& s : problem.boundary) {
    if (!fixed[s.node]) {
      fixed[s.node] = true;
      states.advance(s.node, NodeState::Considered);
    } else if (!(s.value < u[s.node])) {
      continue;
    }
    u[s.node] = s.value;
    heap.insert_or_decrease(s.node, s.value);
  }

  // Only Accepted neighbours feed the update.
  auto accepted_value = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny()) return kInfinity;
    const NodeId id = g.id(i, j);
    return states[id] == NodeState::Accepted ? u[id] : kInfinity;
  };

  while (!heap.empty()) {
    const auto [r, key] = heap.pop_min();
    order.record(key, u[r], stats);
    states.advance(r, NodeState::Accepted);
    for_each_axis_neighbor(g, r, [&](NodeId m) {
      if (states[m] == NodeState::Accepted || fixed[m]) return;
      if (states[m] == NodeState::Far) states.advance(m, NodeState::Considered);
      ++stats.recomputes;
      const int i = g.i_of(m), j = g.j_of(m);
      const double candidate =
          fmm_local_update(accepted_value(i - 1, j), accepted_value(i + 1, j),
                           accepted_value(i, j - 1), accepted_value(i, j + 1), g.hx(), g.hy(),
                           problem.speed[m]);
      if (candidate < u[m]) {
        u[m] = candidate;
        heap.insert_or_decrease(m, candidate);
      }
    });
  }

  stats.transition_violations = states.violations();
  stats.unreachable = n - states.count(NodeState::Accepted);
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace hjkit
