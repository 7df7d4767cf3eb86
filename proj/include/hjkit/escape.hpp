#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "hjkit/core.hpp"

namespace hjkit {

/// Reduced phase space (x, z, theta) over a rectangle. theta is periodic with
/// node k at 2*pi*k/ntheta. Node id = (k*ny + j)*nx + i.
class PhaseGrid3D {
 public:
  PhaseGrid3D(Grid2D space, int ntheta);

  const Grid2D& space() const { return space_; }
  int ntheta() const { return ntheta_; }
  double htheta() const { return htheta_; }
  double theta(int k) const { return htheta_ * k; }
  std::size_t size() const { return space_.size() * static_cast<std::size_t>(ntheta_); }

  NodeId id(int i, int j, int k) const {
    return (static_cast<NodeId>(k) * space_.ny() + j) * space_.nx() + i;
  }
  int wrap(int k) const { return ((k % ntheta_) + ntheta_) % ntheta_; }

 private:
  Grid2D space_;
  int ntheta_;
  double htheta_;
};

struct PhaseNode {
  int i = 0;
  int j = 0;
  int k = 0;
};

struct SlownessSample {
  double n = 1.0;
  double n_x = 0.0;
  double n_z = 0.0;
};

/// Slowness n(x, z) > 0 on a grid with finite-difference gradients
/// (second-order central inside, second-order one-sided at edges).
///
/// A model built from a closed form keeps it; solvers only ever read the node
/// fields, the closed form is there for reference tracing.
class SlownessModel {
 public:
  using Analytic = std::function<SlownessSample(double x, double z)>;

  explicit SlownessModel(ScalarField2D slowness);
  static SlownessModel from_function(const Grid2D& grid, Analytic fn);

  const Grid2D& grid() const { return n_.grid(); }
  const ScalarField2D& slowness() const { return n_; }
  const ScalarField2D& gradient_x() const { return n_x_; }
  const ScalarField2D& gradient_z() const { return n_z_; }
  const Analytic* analytic() const { return analytic_ ? &analytic_ : nullptr; }

  /// Bilinear interpolation of n and of the node-sampled gradients.
  SlownessSample sample(Vec2 p) const;

 private:
  ScalarField2D n_, n_x_, n_z_;
  Analytic analytic_;
};

/// Right-hand side of the reduced characteristic system, sigma = arclength.
struct CharVelocity {
  double dx = 0.0;
  double dz = 0.0;
  double dtheta = 0.0;
  double du = 0.0;
};

CharVelocity char_velocity(const SlownessSample& s, double theta);
CharVelocity char_velocity(const SlownessModel& model, double x, double z, double theta);

/// Exit time, exit parameter, exit position and exit angle per phase node.
struct EscapeSolution {
  explicit EscapeSolution(PhaseGrid3D grid);

  PhaseGrid3D grid;
  std::vector<double> u;
  std::vector<double> sigma;
  std::vector<double> exit_x;
  std::vector<double> exit_z;
  std::vector<double> exit_theta;
  /// Heap key each node was accepted with.
  std::vector<double> order_key;
  std::vector<NodeState> state;
  MarchStats stats;
  /// Nodes whose upwind face never became fully accepted.
  std::size_t never_ready = 0;

  std::size_t outflow_count = 0;
};

/// True for boundary nodes whose ray leaves the rectangle: (cos, sin) .
/// outward normal > eps on at least one wall through the node.
bool is_outflow(const PhaseGrid3D& grid, PhaseNode node, double eps = 1e-9);

/// One semi-Lagrangian step: the phase cell corner reached by following R
/// from the node to the first face of its upwind cell, and the trilinear
/// weights of that point over the cell's nodes (zero weights dropped).
struct Backtrace {
  double step = 0.0;
  int count = 0;
  std::array<NodeId, 8> nodes{};
  std::array<double, 8> weights{};
};

Backtrace escape_backtrace(const PhaseGrid3D& grid, const SlownessModel& model, PhaseNode node);

struct EscapeCandidate {
  double u = kInfinity;
  double sigma = kInfinity;
  double exit_x = 0.0;
  double exit_z = 0.0;
  double exit_theta = 0.0;
  /// max(u, keys of the stencil): never below the most recent acceptance.
  double order_key = kInfinity;
};

/// Candidate for a non-outflow node from the current solution, or nullopt
/// when a stencil node is not Accepted yet.
std::optional<EscapeCandidate> escape_local_update(const SlownessModel& model,
                                                   const EscapeSolution& current,
                                                   PhaseNode node);

EscapeSolution escape_solve(const PhaseGrid3D& grid, const SlownessModel& model);

/// Arclength of the boundary point nearest to p, counter-clockwise from
/// (xmin, ymin).
double boundary_arclength(const Grid2D& grid, Vec2 p);
double boundary_perimeter(const Grid2D& grid);

struct ArrivalRecord {
  /// Direction leaving the receiver whose ray exits at the source.
  double theta = 0.0;
  double time = 0.0;
  int branch = 0;
};

/// All rays from `receiver` that exit at `source` (reciprocity turns them into
/// source-to-receiver arrivals), sorted by time.
std::vector<ArrivalRecord> extract_arrivals(const EscapeSolution& sol, Vec2 receiver,
                                            Vec2 source);

struct PhasePoint {
  double x = 0.0;
  double z = 0.0;
  double theta = 0.0;
  friend bool operator==(PhasePoint, PhasePoint) = default;
};

/// Crossings of u = T along phase grid edges (theta edges wrap). The result
/// is ordered and free of duplicates regardless of `threads`.
std::vector<PhasePoint> isochron(const EscapeSolution& sol, double T, int threads = 1);

}  // namespace hjkit
