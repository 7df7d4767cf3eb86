#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hjkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using NodeId = std::size_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Distance from p to the closed segment [a, b]; a == b is allowed.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Thrown when a query point lies outside a grid beyond the clamp band.
class OutOfDomain : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Regular rectangular grid. Node (i, j) sits at (xmin + i*hx, ymin + j*hy)
/// and has id j*nx + i.
///
/// An axis with a single node is allowed (network solvers run on it); its
/// spacing is reported as the full extent. Continuous solvers require at
/// least two nodes per axis and check it themselves.
class Grid2D {
 public:
  Grid2D(int nx, int ny, double xmin, double xmax, double ymin, double ymax);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  double ymin() const { return ymin_; }
  double ymax() const { return ymax_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  NodeId id(int i, int j) const { return static_cast<NodeId>(j) * nx_ + i; }
  int i_of(NodeId id) const { return static_cast<int>(id % nx_); }
  int j_of(NodeId id) const { return static_cast<int>(id / nx_); }
  Vec2 position(int i, int j) const { return {xmin_ + i * hx_, ymin_ + j * hy_}; }
  Vec2 position(NodeId id) const { return position(i_of(id), j_of(id)); }
  bool contains(Vec2 p) const {
    return p.x >= xmin_ && p.x <= xmax_ && p.y >= ymin_ && p.y <= ymax_;
  }

  /// Nearest node to p (p is clamped to the grid first).
  NodeId nearest(Vec2 p) const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  int nx_;
  int ny_;
  double xmin_, xmax_, ymin_, ymax_;
  double hx_, hy_;
};

/// Throws std::invalid_argument unless both axes have at least two nodes.
void require_continuous_grid(const Grid2D& grid, const char* who);

/// Node-valued data on a Grid2D. Solution fields use +inf for Far nodes.
class ScalarField2D {
 public:
  explicit ScalarField2D(Grid2D grid, double fill = 0.0);
  ScalarField2D(Grid2D grid, std::vector<double> values);

  template <class Fn>
  static ScalarField2D sample(const Grid2D& grid, Fn&& fn) {
    ScalarField2D f(grid);
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        Vec2 p = grid.position(i, j);
        f.at(i, j) = fn(p.x, p.y);
      }
    return f;
  }

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double& operator[](NodeId id) { return values_[id]; }
  double operator[](NodeId id) const { return values_[id]; }
  double& at(int i, int j) { return values_[grid_.id(i, j)]; }
  double at(int i, int j) const { return values_[grid_.id(i, j)]; }

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Bilinear interpolation. Points up to one spacing outside the grid are
/// clamped onto it; anything further throws OutOfDomain.
double bilinear_sample(const ScalarField2D& field, Vec2 p);

/// Triangulated planar mesh built from a regular grid.
struct SimplicialMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<NodeId, 3>> triangles;
  /// Sorted edge-adjacent vertices per vertex.
  std::vector<std::vector<NodeId>> neighbors;
  /// Incident triangle indices per vertex.
  std::vector<std::vector<std::size_t>> incident_triangles;
  std::vector<bool> on_boundary;
  /// Longest edge length.
  double diameter = 0.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const;
  /// Vertices opposite to edge (a, b) in the triangles that share it.
  std::vector<NodeId> edge_apexes(NodeId a, NodeId b) const;
};

/// Splits each grid cell along its lower-left to upper-right diagonal.
SimplicialMesh mesh_from_grid(const Grid2D& grid);

enum class NodeState : std::uint8_t { Far = 0, Considered = 1, Accepted = 2 };

/// Per-node Far -> Considered -> Accepted state machine. Any other
/// transition (backward, repeated or skipping Considered) is refused and
/// counted.
class NodeStates {
 public:
  explicit NodeStates(std::size_t n) : states_(n, NodeState::Far) {}

  NodeState operator[](NodeId id) const { return states_[id]; }
  bool advance(NodeId id, NodeState to);
  std::size_t violations() const { return violations_; }
  std::size_t size() const { return states_.size(); }
  std::size_t count(NodeState s) const;

 private:
  std::vector<NodeState> states_;
  std::size_t violations_ = 0;
};

/// Bookkeeping shared by the one-pass solvers.
struct MarchStats {
  std::size_t node_count = 0;
  std::size_t heap_pops = 0;
  std::size_t recomputes = 0;
  std::size_t unreachable = 0;
  /// Pops whose key was smaller than the previous pop.
  std::size_t order_violations = 0;
  /// Largest drop of a popped key below its predecessor.
  double max_order_drop = 0.0;
  /// Same for the accepted solution values. Differs from the key counters
  /// only where the key is not the value itself (escape, oum).
  std::size_t value_order_violations = 0;
  double max_value_drop = 0.0;
  /// Refused state transitions.
  std::size_t transition_violations = 0;
  double wall_seconds = 0.0;
};

/// Tracks pop order for MarchStats::order_violations.
class AcceptanceOrder {
 public:
  void record(double key, double value, MarchStats& stats) {
    ++stats.heap_pops;
    if (key < last_key_) {
      ++stats.order_violations;
      stats.max_order_drop = std::max(stats.max_order_drop, last_key_ - key);
    }
    if (value < last_value_) {
      ++stats.value_order_violations;
      stats.max_value_drop = std::max(stats.max_value_drop, last_value_ - value);
    }
    last_key_ = key;
    last_value_ = value;
  }

 private:
  double last_key_ = -kInfinity;
  double last_value_ = -kInfinity;
};

}  // namespace hjkit
