#include "hjkit/oum.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>

#include "hjkit/indexed_min_heap.hpp"

namespace hjkit {

SpeedProfile::SpeedProfile(Function f, std::optional<SpeedBounds> bounds)
    : f_(std::move(f)), bounds_(bounds) {
  if (!f_) throw std::invalid_argument("SpeedProfile: empty evaluator");
  if (bounds_ && !(bounds_->min_speed > 0.0 && bounds_->max_speed >= bounds_->min_speed &&
                   std::isfinite(bounds_->max_speed)))
    throw std::invalid_argument("SpeedProfile: bounds must satisfy 0 < F1 <= F2 < inf");
}

bool SpeedProfile::check_bounds(std::span<const Vec2> points, int directions) const {
  if (!bounds_) return false;
  for (Vec2 p : points)
    for (int d = 0; d < directions; ++d) {
      const double w = 2.0 * std::numbers::pi * d / directions;
      const double f = f_({std::cos(w), std::sin(w)}, p);
      if (!(f >= bounds_->min_speed && f <= bounds_->max_speed)) return false;
    }
  return true;
}

SpeedBounds estimate_speed_bounds(const SpeedProfile& speed, std::span<const Vec2> points,
                                  int directions, double margin) {
  double lo = kInfinity, hi = 0.0;
  for (Vec2 p : points)
    for (int d = 0; d < directions; ++d) {
      const double w = 2.0 * std::numbers::pi * d / directions;
      const double f = speed({std::cos(w), std::sin(w)}, p);
      if (!(f > 0.0) || !std::isfinite(f))
        throw std::invalid_argument("speed profile returned a non-positive or non-finite value");
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  if (!(hi > 0.0)) throw std::invalid_argument("estimate_speed_bounds: no sample points");
  return {lo * (1.0 - margin), hi * (1.0 + margin)};
}

AcceptedFront::AcceptedFront(const SimplicialMesh& mesh, double cell_size)
    : vertices_(&mesh.vertices),
      stride_(mesh.vertex_count() + 1),
      max_length_(mesh.diameter),
      cell_(std::max(cell_size, mesh.diameter)) {
  if (!(cell_ > 0.0)) throw std::invalid_argument("AcceptedFront: cell size must be positive");
  Vec2 hi = mesh.vertices.empty() ? Vec2{} : mesh.vertices.front();
  origin_ = hi;
  for (Vec2 v : mesh.vertices) {
    origin_ = {std::min(origin_.x, v.x), std::min(origin_.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  cols_ = static_cast<int>((hi.x - origin_.x) / cell_) + 1;
  rows_ = static_cast<int>((hi.y - origin_.y) / cell_) + 1;
  buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
}

std::pair<int, int> AcceptedFront::cell_of(Vec2 p) const {
  const int i = std::clamp(static_cast<int>(std::floor((p.x - origin_.x) / cell_)), 0, cols_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((p.y - origin_.y) / cell_)), 0, rows_ - 1);
  return {i, j};
}

std::size_t AcceptedFront::bucket_of(Segment s) const {
  const Vec2 mid = 0.5 * ((*vertices_)[s.a] + (*vertices_)[s.b]);
  const auto [i, j] = cell_of(mid);
  return static_cast<std::size_t>(j) * cols_ + i;
}

bool AcceptedFront::insert(Segment s) {
  if (!members_.insert(key(s)).second) return false;
  buckets_[bucket_of(s)].push_back(s);
  return true;
}

bool AcceptedFront::erase(Segment s) {
  if (members_.erase(key(s)) == 0) return false;
  auto& bucket = buckets_[bucket_of(s)];
  auto it = std::find(bucket.begin(), bucket.end(), s);
  *it = bucket.back();
  bucket.pop_back();
  return true;
}

std::vector<Segment> nf_segments(const AcceptedFront& front, Vec2 x_i, double h, double upsilon) {
  const double radius = h * upsilon;
  std::vector<Segment> out;
  front.for_each_candidate(x_i, radius, [&](Segment s) {
    if (front.distance(x_i, s) <= radius) out.push_back(s);
  });
  return out;
}

SegmentUpdate oum_update_K(double u_j, double u_k, Vec2 x_i, Vec2 x_j, Vec2 x_k,
                           const SpeedProfile& speed, double tolerance) {
  const Vec2 span = x_j - x_k;
  auto cost = [&](double zeta) {
    const Vec2 d = (x_k + zeta * span) - x_i;
    const double dist = norm(d);
    const double carried = zeta * u_j + (1.0 - zeta) * u_k;
    if (dist == 0.0) return carried;
    return dist / speed((1.0 / dist) * d, x_i) + carried;
  };
  if (span.x == 0.0 && span.y == 0.0) return {cost(1.0), 1.0};

  SegmentUpdate best{cost(0.0), 0.0};
  if (const double c1 = cost(1.0); c1 < best.value) best = {c1, 1.0};

  constexpr double inv_phi = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = cost(c), fd = cost(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = cost(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = cost(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  for (auto [z, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, cost(mid)}})
    if (v < best.value) best = {v, z};
  return best;
}

void OumProblem::validate() const {
  if (mesh.vertex_count() == 0) throw std::invalid_argument("oum: empty mesh");
  if (boundary.empty()) throw std::invalid_argument("oum: empty boundary");
  for (const SeedValue& s : boundary) {
    if (s.node >= mesh.vertex_count()) throw std::invalid_argument("oum: boundary vertex out of range");
    if (!std::isfinite(s.value)) throw std::invalid_argument("oum: boundary value must be finite");
  }
}

namespace {

// Static uniform bucketing of mesh vertices for radius queries.
class VertexBuckets {
 public:
  VertexBuckets(std::span<const Vec2> points, double cell) : points_(points), cell_(cell) {
    origin_ = points.front();
    Vec2 hi = origin_;
    for (Vec2 p : points) {
      origin_ = {std::min(origin_.x, p.x), std::min(origin_.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    cols_ = static_cast<int>((hi.x - origin_.x) / cell_) + 1;
    rows_ = static_cast<int>((hi.y - origin_.y) / cell_) + 1;
    start_.assign(static_cast<std::size_t>(cols_) * rows_ + 1, 0);
    for (Vec2 p : points) ++start_[bucket(p) + 1];
    for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
    ids_.resize(points.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (NodeId v = 0; v < points.size(); ++v) ids_[fill[bucket(points[v])]++] = v;
  }

  template <class Fn>
  void for_each_within(Vec2 p, double r, Fn&& fn) const {
    const auto [i0, j0] = cell({p.x - r, p.y - r});
    const auto [i1, j1] = cell({p.x + r, p.y + r});
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const std::size_t b = static_cast<std::size_t>(j) * cols_ + i;
        for (std::size_t k = start_[b]; k < start_[b + 1]; ++k)
          if (norm(points_[ids_[k]] - p) <= r) fn(ids_[k]);
      }
  }

 private:
  std::pair<int, int> cell(Vec2 p) const {
    return {std::clamp(static_cast<int>(std::floor((p.x - origin_.x) / cell_)), 0, cols_ - 1),
            std::clamp(static_cast<int>(std::floor((p.y - origin_.y) / cell_)), 0, rows_ - 1)};
  }
  std::size_t bucket(Vec2 p) const {
    const auto [i, j] = cell(p);
    return static_cast<std::size_t>(j) * cols_ + i;
  }

  std::span<const Vec2> points_;
  double cell_;
  Vec2 origin_;
  int cols_ = 1, rows_ = 1;
  std::vector<std::size_t> start_;
  std::vector<NodeId> ids_;
};

class OumSolver {
 public:
  OumSolver(const OumProblem& problem, const OumOptions& options)
      : p_(problem),
        opt_(options),
        mesh_(problem.mesh),
        n_(mesh_.vertex_count()),
        states_(n_),
        fixed_(n_, false),
        fresh_stamp_(n_, 0),
        heap_(n_),
        key_(n_, kInfinity) {
    result_.u.assign(n_, kInfinity);
    result_.bounds = p_.speed.bounds() ? *p_.speed.bounds()
                                       : estimate_speed_bounds(p_.speed, mesh_.vertices);
    result_.radius = mesh_.diameter * result_.bounds.anisotropy();
    // New segments have length <= h, so their near points are within
    // radius + h of the newly accepted vertex.
    result_.recompute_radius = result_.radius + mesh_.diameter;
    result_.recompute_counts.assign(n_, 0);
    result_.stats.node_count = n_;
  }

  OumResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    AcceptedFront front(mesh_, result_.radius);
    VertexBuckets buckets(mesh_.vertices, result_.recompute_radius);
    front_ = &front;
    std::vector<double>& u = result_.u;

    for (const SeedValue& s : p_.boundary) {
      if (!fixed_[s.node]) {
        fixed_[s.node] = true;
        states_.advance(s.node, NodeState::Considered);
      } else if (!(s.value < u[s.node])) {
        continue;
      }
      u[s.node] = s.value;
      key_[s.node] = s.value;
      heap_.insert_or_decrease(s.node, s.value);
    }

    std::vector<NodeId> promoted;
    std::vector<Segment> added;
    std::size_t stamp = 0;
    while (!heap_.empty()) {
      const auto [r, key] = heap_.pop_min();
      if (opt_.audit_radius) audit(r);
      order_.record(key, u[r], result_.stats);
      key_[r] = key;
      states_.advance(r, NodeState::Accepted);

      ++stamp;
      promoted.clear();
      for (NodeId m : mesh_.neighbors[r])
        if (states_[m] == NodeState::Far) {
          states_.advance(m, NodeState::Considered);
          promoted.push_back(m);
          fresh_stamp_[m] = stamp;
        }

      added.clear();
      update_front(r, added);

      for (NodeId m : promoted) {
        if (fixed_[m]) continue;
        offer(m, full_scan(m));
      }

      if (added.empty()) continue;
      const Vec2 xr = mesh_.vertices[r];
      buckets.for_each_within(xr, result_.recompute_radius, [&](NodeId i) {
        if (states_[i] != NodeState::Considered || fixed_[i] || fresh_stamp_[i] == stamp) return;
        const Vec2 xi = mesh_.vertices[i];
        Candidate best;
        bool touched = false;
        for (Segment s : added) {
          if (front.distance(xi, s) > result_.radius) continue;
          touched = true;
          best = std::min(best, evaluate(i, s));
        }
        if (!touched) return;
        ++result_.stats.recomputes;
        ++result_.recompute_counts[i];
        offer(i, best);
      });
    }

    result_.stats.transition_violations = states_.violations();
    result_.stats.unreachable = n_ - states_.count(NodeState::Accepted);
    result_.recompute_limits.assign(n_, 0);
    for (NodeId v = 0; v < n_; ++v)
      buckets.for_each_within(mesh_.vertices[v], result_.recompute_radius,
                              [&](NodeId) { ++result_.recompute_limits[v]; });
    result_.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::move(result_);
  }

 private:
  // A value and its heap key. The key never undercuts the keys of the
  // segment it came from: the value depends on them, so it cannot be
  // accepted before them even where interpolation dips below.
  struct Candidate {
    double value = kInfinity;
    double key = kInfinity;
    friend bool operator<(const Candidate& l, const Candidate& r) { return l.value < r.value; }
  };

  bool accepted(NodeId v) const { return states_[v] == NodeState::Accepted; }

  Candidate evaluate(NodeId i, Segment s) {
    ++result_.k_evaluations;
    const auto& x = mesh_.vertices;
    const double v = oum_update_K(result_.u[s.a], result_.u[s.b], x[i], x[s.a], x[s.b], p_.speed,
                                  opt_.golden_tolerance)
                         .value;
    return {v, std::max({v, key_[s.a], key_[s.b]})};
  }

  void offer(NodeId i, Candidate c) {
    if (!(c.value < result_.u[i])) return;
    result_.u[i] = c.value;
    heap_.insert_or_decrease(i, c.key);
  }

  Candidate full_scan(NodeId i) {
    Candidate best;
    for (Segment s : nf_segments(*front_, mesh_.vertices[i], mesh_.diameter,
                                 result_.bounds.anisotropy()))
      best = std::min(best, evaluate(i, s));
    return best;
  }

  void sync(Segment s, bool wanted, std::vector<Segment>& added) {
    if (wanted) {
      if (front_->insert(s)) added.push_back(s);
    } else {
      front_->erase(s);
    }
  }

  // Re-derives front membership for everything whose status can depend on r:
  // r and its neighbours as vertices, and every edge of a triangle at r.
  void update_front(NodeId r, std::vector<Segment>& added) {
    auto borders_open = [&](NodeId v) {
      return std::any_of(mesh_.neighbors[v].begin(), mesh_.neighbors[v].end(),
                         [&](NodeId w) { return !accepted(w); });
    };
    sync({r, r}, borders_open(r), added);
    for (NodeId m : mesh_.neighbors[r])
      if (accepted(m)) sync({m, m}, borders_open(m), added);

    for (std::size_t t : mesh_.incident_triangles[r]) {
      const auto& tri = mesh_.triangles[t];
      for (int e = 0; e < 3; ++e) {
        const Segment s = Segment::of(tri[e], tri[(e + 1) % 3]);
        bool wanted = accepted(s.a) && accepted(s.b);
        if (wanted) {
          const auto apexes = mesh_.edge_apexes(s.a, s.b);
          wanted = std::any_of(apexes.begin(), apexes.end(),
                               [&](NodeId v) { return !accepted(v); });
        }
        sync(s, wanted, added);
      }
    }
  }

  // Compares the heap minimum against the best update over the whole front.
  void audit(NodeId r) {
    if (fixed_[r]) return;
    const Vec2 xr = mesh_.vertices[r];
    const double current = result_.u[r];
    front_->for_each([&](Segment s) {
      if (front_->distance(xr, s) <= result_.radius) return;
      const auto& x = mesh_.vertices;
      const double v = oum_update_K(result_.u[s.a], result_.u[s.b], xr, x[s.a], x[s.b],
                                    p_.speed, opt_.golden_tolerance)
                           .value;
      if (v < current - 1e-9 * std::max(1.0, std::abs(current)))
        ++result_.radius_audit_violations;
    });
  }

  const OumProblem& p_;
  const OumOptions& opt_;
  const SimplicialMesh& mesh_;
  std::size_t n_;
  NodeStates states_;
  std::vector<bool> fixed_;
  std::vector<std::size_t> fresh_stamp_;
  IndexedMinHeap heap_;
  std::vector<double> key_;
  AcceptanceOrder order_;
  AcceptedFront* front_ = nullptr;
  OumResult result_;
};

}  // namespace

OumResult oum_solve(const OumProblem& problem, const OumOptions& options) {
  problem.validate();
  return OumSolver(problem, options).run();
}

double geodesic_speed(double g_x, double g_y, double omega) {
  const double c = std::cos(omega), s = std::sin(omega);
  const double num = 1.0 + g_y * g_y * c * c + g_x * g_x * s * s - g_x * g_y * std::sin(2.0 * omega);
  return std::sqrt(num / (1.0 + g_x * g_x + g_y * g_y));
}

}  // namespace hjkit
