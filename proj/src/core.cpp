#include "hjkit/core.hpp"

#include <algorithm>
#include <string>

namespace hjkit {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

Grid2D::Grid2D(int nx, int ny, double xmin, double xmax, double ymin, double ymax)
    : nx_(nx), ny_(ny), xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("Grid2D: node counts must be positive");
  if (!(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("Grid2D: bounds must satisfy max > min");
  if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) ||
      !std::isfinite(ymax))
    throw std::invalid_argument("Grid2D: bounds must be finite");
  hx_ = (xmax - xmin) / std::max(nx - 1, 1);
  hy_ = (ymax - ymin) / std::max(ny - 1, 1);
}

NodeId Grid2D::nearest(Vec2 p) const {
  const double fx = std::clamp((p.x - xmin_) / hx_, 0.0, double(nx_ - 1));
  const double fy = std::clamp((p.y - ymin_) / hy_, 0.0, double(ny_ - 1));
  return id(static_cast<int>(std::lround(fx)), static_cast<int>(std::lround(fy)));
}

void require_continuous_grid(const Grid2D& grid, const char* who) {
  if (grid.nx() < 2 || grid.ny() < 2)
    throw std::invalid_argument(std::string(who) +
                                ": grid needs at least 2 nodes per axis");
}

ScalarField2D::ScalarField2D(Grid2D grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField2D::ScalarField2D(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("ScalarField2D: value count does not match grid");
}

namespace {

// Cell index and local fraction along one axis; n == 1 collapses to node 0.
std::pair<int, double> locate(double coord, double lo, double h, int n) {
  if (n == 1) return {0, 0.0};
  double f = std::clamp((coord - lo) / h, 0.0, double(n - 1));
  // Node positions come back from lo + i*h with rounding; land them exactly.
  if (const double r = std::round(f); std::abs(f - r) < 1e-12 * std::max(1.0, r)) f = r;
  int i = std::min(static_cast<int>(f), n - 2);
  return {i, f - i};
}

}  // namespace

double bilinear_sample(const ScalarField2D& field, Vec2 p) {
  const Grid2D& g = field.grid();
  if (p.x < g.xmin() - g.hx() || p.x > g.xmax() + g.hx() || p.y < g.ymin() - g.hy() ||
      p.y > g.ymax() + g.hy() || !std::isfinite(p.x) || !std::isfinite(p.y))
    throw OutOfDomain("bilinear_sample: point outside grid");
  const auto [i, fx] = locate(p.x, g.xmin(), g.hx(), g.nx());
  const auto [j, fy] = locate(p.y, g.ymin(), g.hy(), g.ny());
  const int i1 = std::min(i + 1, g.nx() - 1);
  const int j1 = std::min(j + 1, g.ny() - 1);
  // Skip zero-weight corners so +inf neighbours do not poison exact node hits.
  double v = 0.0;
  auto add = [&](double w, int ii, int jj) {
    if (w != 0.0) v += w * field.at(ii, jj);
  };
  add((1 - fx) * (1 - fy), i, j);
  add(fx * (1 - fy), i1, j);
  add((1 - fx) * fy, i, j1);
  add(fx * fy, i1, j1);
  return v;
}

std::size_t SimplicialMesh::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors) twice += nb.size();
  return twice / 2;
}

std::vector<NodeId> SimplicialMesh::edge_apexes(NodeId a, NodeId b) const {
  std::vector<NodeId> out;
  for (std::size_t t : incident_triangles[a]) {
    const auto& tri = triangles[t];
    if (tri[0] != b && tri[1] != b && tri[2] != b) continue;
    for (NodeId v : tri)
      if (v != a && v != b) out.push_back(v);
  }
  return out;
}

SimplicialMesh mesh_from_grid(const Grid2D& grid) {
  require_continuous_grid(grid, "mesh_from_grid");
  SimplicialMesh mesh;
  const std::size_t n = grid.size();
  mesh.vertices.resize(n);
  mesh.neighbors.resize(n);
  mesh.incident_triangles.resize(n);
  mesh.on_boundary.resize(n);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const NodeId v = grid.id(i, j);
      mesh.vertices[v] = grid.position(i, j);
      mesh.on_boundary[v] = i == 0 || j == 0 || i == grid.nx() - 1 || j == grid.ny() - 1;
    }
  mesh.triangles.reserve(2 * static_cast<std::size_t>(grid.nx() - 1) * (grid.ny() - 1));
  for (int j = 0; j + 1 < grid.ny(); ++j)
    for (int i = 0; i + 1 < grid.nx(); ++i) {
      const NodeId v00 = grid.id(i, j), v10 = grid.id(i + 1, j);
      const NodeId v01 = grid.id(i, j + 1), v11 = grid.id(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const NodeId a = tri[e], b = tri[(e + 1) % 3];
      mesh.neighbors[a].push_back(b);
      mesh.neighbors[b].push_back(a);
      mesh.incident_triangles[a].push_back(t);
      mesh.diameter = std::max(mesh.diameter, norm(mesh.vertices[a] - mesh.vertices[b]));
    }
  }
  for (auto& nb : mesh.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return mesh;
}

bool NodeStates::advance(NodeId id, NodeState to) {
  if (static_cast<int>(to) != static_cast<int>(states_[id]) + 1) {
    ++violations_;
    return false;
  }
  states_[id] = to;
  return true;
}

std::size_t NodeStates::count(NodeState s) const {
  return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), s));
}

}  // namespace hjkit
