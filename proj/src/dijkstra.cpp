#include "hjkit/dijkstra.hpp"

#include <chrono>

#include "hjkit/indexed_min_heap.hpp"

namespace hjkit {

void DijkstraProblem::validate() const {
  for (double c : costs.values())
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("dijkstra: costs must be finite and strictly positive");
  if (sources.empty()) throw std::invalid_argument("dijkstra: no sources");
  for (const SeedValue& s : sources) {
    if (s.node >= costs.grid().size())
      throw std::invalid_argument("dijkstra: source out of bounds");
    if (!std::isfinite(s.value))
      throw std::invalid_argument("dijkstra: source value must be finite");
  }
}

DijkstraResult dijkstra_solve(const DijkstraProblem& problem) {
  problem.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Grid2D& g = problem.costs.grid();
  const std::size_t n = g.size();

  DijkstraResult result{ScalarField2D(g, kInfinity), {}};
  MarchStats& stats = result.stats;
  stats.node_count = n;
  ScalarField2D& u = result.u;
  NodeStates states(n);
  std::vector<bool> fixed(n, false);
  IndexedMinHeap heap(n);
  AcceptanceOrder order;

  for (const SeedValue& s : problem.sources) {
    if (fixed[s.node]) {
      // Duplicate source: keep the smaller pinned value.
      if (s.value < u[s.node]) {
        u[s.node] = s.value;
        heap.insert_or_decrease(s.node, s.value);
      }
      continue;
    }
    fixed[s.node] = true;
    u[s.node] = s.value;
    states.advance(s.node, NodeState::Considered);
    heap.insert_or_decrease(s.node, s.value);
  }

  while (!heap.empty()) {
    const auto [r, key] = heap.pop_min();
    order.record(key, u[r], stats);
    states.advance(r, NodeState::Accepted);
    for_each_axis_neighbor(g, r, [&](NodeId m) {
      if (states[m] == NodeState::Accepted || fixed[m]) return;
      if (states[m] == NodeState::Far) states.advance(m, NodeState::Considered);
      ++stats.recomputes;
      const double candidate = u[r] + problem.costs[m];
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
