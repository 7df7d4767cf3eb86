#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "hjkit/core.hpp"
#include "hjkit/dijkstra.hpp"

namespace hjkit {

struct SpeedBounds {
  double min_speed = 0.0;  // F1
  double max_speed = 0.0;  // F2
  double anisotropy() const { return max_speed / min_speed; }
};

/// Direction- and position-dependent speed f(a, x) of the control problem
/// max_a { (grad u . (-a)) f(a, x) } = 1. `a` is a unit vector of motion.
///
/// The evaluator must be pure; solves running on different threads may share
/// one profile.
class SpeedProfile {
 public:
  using Function = std::function<double(Vec2 direction, Vec2 position)>;

  explicit SpeedProfile(Function f, std::optional<SpeedBounds> bounds = std::nullopt);

  double operator()(Vec2 direction, Vec2 position) const { return f_(direction, position); }
  const std::optional<SpeedBounds>& bounds() const { return bounds_; }
  SpeedProfile with_bounds(SpeedBounds b) const { return SpeedProfile(f_, b); }

  /// Samples `directions` evenly spaced directions at every point and checks
  /// all values lie within the declared bounds.
  bool check_bounds(std::span<const Vec2> points, int directions = 64) const;

 private:
  Function f_;
  std::optional<SpeedBounds> bounds_;
};

/// Min/max of f over `directions` directions at every point, widened by the
/// relative margin so the update radius is never underestimated.
SpeedBounds estimate_speed_bounds(const SpeedProfile& speed, std::span<const Vec2> points,
                                  int directions = 64, double margin = 0.01);

/// Mesh edge (a, b) with a < b, or a single front vertex when a == b.
struct Segment {
  NodeId a = 0;
  NodeId b = 0;
  static Segment of(NodeId u, NodeId v) { return u < v ? Segment{u, v} : Segment{v, u}; }
  bool degenerate() const { return a == b; }
  friend bool operator==(Segment, Segment) = default;
};

/// The set AF of front segments joining Accepted vertices that still border
/// a not-yet-accepted vertex, plus isolated front vertices. Segments are
/// bucketed by midpoint so radius queries touch a few cells only.
class AcceptedFront {
 public:
  AcceptedFront(const SimplicialMesh& mesh, double cell_size);

  bool insert(Segment s);
  bool erase(Segment s);
  bool contains(Segment s) const { return members_.count(key(s)) != 0; }
  std::size_t size() const { return members_.size(); }

  /// Visits every stored segment that may lie within r of p (a superset).
  template <class Fn>
  void for_each_candidate(Vec2 p, double r, Fn&& fn) const {
    const double reach = r + 0.5 * max_length_;
    const auto [i0, j0] = cell_of({p.x - reach, p.y - reach});
    const auto [i1, j1] = cell_of({p.x + reach, p.y + reach});
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        for (Segment s : buckets_[static_cast<std::size_t>(j) * cols_ + i]) fn(s);
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& bucket : buckets_)
      for (Segment s : bucket) fn(s);
  }

  double distance(Vec2 p, Segment s) const {
    return point_segment_distance(p, (*vertices_)[s.a], (*vertices_)[s.b]);
  }

 private:
  std::uint64_t key(Segment s) const { return static_cast<std::uint64_t>(s.a) * stride_ + s.b; }
  std::pair<int, int> cell_of(Vec2 p) const;
  std::size_t bucket_of(Segment s) const;

  const std::vector<Vec2>* vertices_;
  std::uint64_t stride_;
  double max_length_;
  Vec2 origin_;
  double cell_;
  int cols_ = 1;
  int rows_ = 1;
  std::vector<std::vector<Segment>> buckets_;
  std::unordered_set<std::uint64_t> members_;
};

/// NF(x_i): front segments containing a point within h * upsilon of x_i.
std::vector<Segment> nf_segments(const AcceptedFront& front, Vec2 x_i, double h, double upsilon);

struct SegmentUpdate {
  double value = kInfinity;
  /// Minimising weight on x_j (0 picks x_k, 1 picks x_j).
  double zeta = 0.0;
};

/// Semi-Lagrangian update from segment [x_j, x_k]:
///   min over zeta in [0,1] of |x_i - x_z| / f(a_z, x_i) + zeta U_j + (1-zeta) U_k,
/// x_z = zeta x_j + (1-zeta) x_k, a_z the unit vector from x_i to x_z.
/// Golden-section search down to `tolerance` in zeta; both endpoints are
/// always candidates. x_j == x_k reduces to the two-point update.
SegmentUpdate oum_update_K(double u_j, double u_k, Vec2 x_i, Vec2 x_j, Vec2 x_k,
                           const SpeedProfile& speed, double tolerance = 1e-9);

struct OumProblem {
  SimplicialMesh mesh;
  SpeedProfile speed;
  std::vector<SeedValue> boundary;

  void validate() const;
};

struct OumOptions {
  double golden_tolerance = 1e-9;
  /// At every acceptance, brute-force the whole front and count updates whose
  /// minimiser lies outside the h * upsilon radius. Expensive.
  bool audit_radius = false;
};

struct OumResult {
  std::vector<double> u;
  MarchStats stats;
  SpeedBounds bounds;
  /// h * F2 / F1.
  double radius = 0.0;
  /// Radius used to select Considered vertices for recomputation.
  double recompute_radius = 0.0;
  std::vector<std::uint32_t> recompute_counts;
  /// Per-vertex count of mesh vertices within recompute_radius.
  std::vector<std::uint32_t> recompute_limits;
  std::size_t k_evaluations = 0;
  std::size_t radius_audit_violations = 0;
};

/// Ordered Upwind Method. Vertices never reached keep U = +inf and are
/// counted in stats.unreachable.
OumResult oum_solve(const OumProblem& problem, const OumOptions& options = {});

/// Normal speed of a front on the surface z = g(x, y), seen in the plane:
/// sqrt((1 + g_y^2 cos^2 w + g_x^2 sin^2 w - g_x g_y sin 2w) / (1 + g_x^2 + g_y^2)),
/// w being the angle of grad u with the x axis.
double geodesic_speed(double g_x, double g_y, double omega);

}  // namespace hjkit
