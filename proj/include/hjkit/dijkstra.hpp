#pragma once

#include <vector>

#include "hjkit/core.hpp"

namespace hjkit {

/// A source node and the value it is pinned to.
struct SeedValue {
  NodeId node = 0;
  double value = 0.0;
};

/// Node-cost shortest-path problem on the 4-neighbour grid network.
/// Entering node (i, j) costs C_ij; sources keep their given value and never
/// pay their own cost.
struct DijkstraProblem {
  ScalarField2D costs;
  std::vector<SeedValue> sources;

  /// Throws std::invalid_argument on non-positive costs or bad sources.
  void validate() const;
};

struct DijkstraResult {
  ScalarField2D u;
  MarchStats stats;
};

DijkstraResult dijkstra_solve(const DijkstraProblem& problem);

/// Calls fn(neighbour_id) for each in-grid 4-neighbour of id.
template <class Fn>
void for_each_axis_neighbor(const Grid2D& g, NodeId id, Fn&& fn) {
  const int i = g.i_of(id), j = g.j_of(id);
  if (i > 0) fn(g.id(i - 1, j));
  if (i + 1 < g.nx()) fn(g.id(i + 1, j));
  if (j > 0) fn(g.id(i, j - 1));
  if (j + 1 < g.ny()) fn(g.id(i, j + 1));
}

}  // namespace hjkit
