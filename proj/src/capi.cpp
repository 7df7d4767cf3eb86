#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "hjkit/dijkstra.hpp"
#include "hjkit/escape.hpp"
#include "hjkit/fmm.hpp"
#include "hjkit/hjkit.h"
#include "hjkit/models.hpp"
#include "hjkit/oum.hpp"

struct hjk_speed {
  hjkit::SpeedProfile profile;
};

struct hjk_slowness {
  hjkit::SlownessModel model;
};

struct hjk_escape {
  hjkit::EscapeSolution solution;
};

namespace {

thread_local std::string g_last_error;

hjk_status fail(hjk_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, mapping exceptions to status codes.
template <class Fn>
hjk_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const hjkit::UnknownModel& e) {
    return fail(HJK_UNKNOWN_NAME, e.what());
  } catch (const hjkit::OutOfDomain& e) {
    return fail(HJK_OUT_OF_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HJK_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(HJK_INTERNAL, e.what());
  } catch (...) {
    return fail(HJK_INTERNAL, "unknown exception");
  }
}

hjkit::Grid2D to_grid(const hjk_grid* g) {
  if (!g) throw std::invalid_argument("grid is null");
  return hjkit::Grid2D(g->nx, g->ny, g->xmin, g->xmax, g->ymin, g->ymax);
}

hjk_grid from_grid(const hjkit::Grid2D& g) {
  return {g.nx(), g.ny(), g.xmin(), g.xmax(), g.ymin(), g.ymax()};
}

hjkit::ScalarField2D to_field(const hjkit::Grid2D& grid, const double* values) {
  if (!values) throw std::invalid_argument("node values are null");
  return hjkit::ScalarField2D(grid, std::vector<double>(values, values + grid.size()));
}

std::vector<hjkit::SeedValue> to_seeds(const hjkit::Grid2D& grid, const uint64_t* nodes,
                                       const double* values, size_t n) {
  if (n > 0 && (!nodes || !values)) throw std::invalid_argument("source arrays are null");
  std::vector<hjkit::SeedValue> seeds(n);
  for (size_t s = 0; s < n; ++s) {
    if (nodes[s] >= grid.size()) throw std::invalid_argument("source node id out of range");
    seeds[s] = {static_cast<hjkit::NodeId>(nodes[s]), values[s]};
  }
  return seeds;
}

void fill_stats(const hjkit::MarchStats& in, hjk_stats* out) {
  if (!out) return;
  *out = {in.node_count,       in.heap_pops,         in.recomputes,  in.unreachable,
          in.order_violations, in.transition_violations, in.wall_seconds};
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

extern "C" {

const char* hjk_last_error(void) { return g_last_error.c_str(); }

hjk_status hjk_dijkstra_solve(const hjk_grid* grid, const double* costs, const uint64_t* sources,
                              const double* values, size_t nsources, double* u_out,
                              hjk_stats* stats) {
  return guarded([&] {
    require(u_out, "output buffer is null");
    const hjkit::Grid2D g = to_grid(grid);
    hjkit::DijkstraProblem problem{to_field(g, costs), to_seeds(g, sources, values, nsources)};
    const hjkit::DijkstraResult r = hjkit::dijkstra_solve(problem);
    std::memcpy(u_out, r.u.values().data(), g.size() * sizeof(double));
    fill_stats(r.stats, stats);
    return HJK_OK;
  });
}

hjk_status hjk_fmm_solve(const hjk_grid* grid, const double* speed, const uint64_t* sources,
                         const double* values, size_t nsources, double* u_out, hjk_stats* stats) {
  return guarded([&] {
    require(u_out, "output buffer is null");
    const hjkit::Grid2D g = to_grid(grid);
    hjkit::EikonalProblem problem{to_field(g, speed), to_seeds(g, sources, values, nsources)};
    const hjkit::FmmResult r = hjkit::fmm_solve(problem);
    std::memcpy(u_out, r.u.values().data(), g.size() * sizeof(double));
    fill_stats(r.stats, stats);
    return HJK_OK;
  });
}

hjk_status hjk_speed_builtin(const char* name, hjk_speed** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new hjk_speed{hjkit::builtin_speed(name)};
    return HJK_OK;
  });
}

hjk_status hjk_speed_field(const hjk_grid* grid, const double* values, hjk_speed** out) {
  return guarded([&] {
    require(out, "null argument");
    const hjkit::Grid2D g = to_grid(grid);
    require_continuous_grid(g, "hjk_speed_field");
    auto field = std::make_shared<const hjkit::ScalarField2D>(to_field(g, values));
    double lo = hjkit::kInfinity, hi = 0.0;
    for (double v : field->values()) {
      if (!(v > 0.0) || !std::isfinite(v)) return fail(HJK_INVALID_MODEL, "speeds must be positive");
      lo = std::min(lo, v), hi = std::max(hi, v);
    }
    *out = new hjk_speed{hjkit::SpeedProfile(
        [field](hjkit::Vec2, hjkit::Vec2 x) { return hjkit::bilinear_sample(*field, x); },
        hjkit::SpeedBounds{lo, hi})};
    return HJK_OK;
  });
}

hjk_status hjk_speed_callback(hjk_speed_fn fn, void* user, hjk_speed** out) {
  return guarded([&] {
    require(fn && out, "null argument");
    *out = new hjk_speed{hjkit::SpeedProfile(
        [fn, user](hjkit::Vec2 a, hjkit::Vec2 x) { return fn(a.x, a.y, x.x, x.y, user); })};
    return HJK_OK;
  });
}

hjk_status hjk_speed_set_bounds(hjk_speed* s, double f1, double f2) {
  return guarded([&] {
    require(s, "null handle");
    if (!(f1 > 0.0) || !(f2 >= f1) || !std::isfinite(f2))
      return fail(HJK_INVALID_MODEL, "speed bounds need 0 < F1 <= F2 < inf");
    s->profile = s->profile.with_bounds({f1, f2});
    return HJK_OK;
  });
}

hjk_status hjk_speed_bounds(const hjk_speed* s, double* f1, double* f2) {
  return guarded([&] {
    require(s && f1 && f2, "null argument");
    if (!s->profile.bounds()) return fail(HJK_INVALID_ARGUMENT, "no declared bounds");
    *f1 = s->profile.bounds()->min_speed;
    *f2 = s->profile.bounds()->max_speed;
    return HJK_OK;
  });
}

hjk_status hjk_speed_eval(const hjk_speed* s, double ax, double ay, double x, double y,
                          double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    const double l = std::hypot(ax, ay);
    require(l > 0.0, "direction must be nonzero");
    *out = s->profile({ax / l, ay / l}, {x, y});
    return HJK_OK;
  });
}

void hjk_speed_destroy(hjk_speed* s) { delete s; }

hjk_status hjk_oum_solve(const hjk_grid* grid, const hjk_speed* speed, const uint64_t* sources,
                         const double* values, size_t nsources, const hjk_oum_options* opts,
                         double* u_out, hjk_stats* stats) {
  return guarded([&] {
    require(speed && u_out, "null argument");
    const hjkit::Grid2D g = to_grid(grid);
    require_continuous_grid(g, "hjk_oum_solve");
    hjkit::OumProblem problem{hjkit::mesh_from_grid(g), speed->profile,
                              to_seeds(g, sources, values, nsources)};
    hjkit::OumOptions options;
    if (opts && opts->golden_tolerance > 0.0) options.golden_tolerance = opts->golden_tolerance;
    const hjkit::OumResult r = hjkit::oum_solve(problem, options);
    std::memcpy(u_out, r.u.data(), g.size() * sizeof(double));
    fill_stats(r.stats, stats);
    return HJK_OK;
  });
}

hjk_status hjk_slowness_builtin(const char* name, const hjk_grid* grid, hjk_slowness** out) {
  return guarded([&] {
    require(name && out, "null argument");
    const hjkit::Grid2D g = to_grid(grid);
    require_continuous_grid(g, "hjk_slowness_builtin");
    if (!hjkit::builtin_info(name).isotropic)
      return fail(HJK_INVALID_MODEL, std::string("model '") + name + "' is anisotropic");
    *out = new hjk_slowness{hjkit::builtin_slowness(name, g)};
    return HJK_OK;
  });
}

hjk_status hjk_slowness_field(const hjk_grid* grid, const double* values, hjk_slowness** out) {
  return guarded([&] {
    require(out, "null argument");
    const hjkit::Grid2D g = to_grid(grid);
    require_continuous_grid(g, "hjk_slowness_field");
    hjkit::ScalarField2D f = to_field(g, values);
    for (double v : f.values())
      if (!(v > 0.0) || !std::isfinite(v)) return fail(HJK_INVALID_MODEL, "slowness must be positive");
    *out = new hjk_slowness{hjkit::SlownessModel(std::move(f))};
    return HJK_OK;
  });
}

void hjk_slowness_destroy(hjk_slowness* s) { delete s; }

hjk_status hjk_escape_solve(const hjk_slowness* model, int32_t ntheta, hjk_escape** out,
                            hjk_stats* stats) {
  return guarded([&] {
    require(model && out, "null argument");
    const hjkit::PhaseGrid3D grid(model->model.grid(), ntheta);
    auto* e = new hjk_escape{hjkit::escape_solve(grid, model->model)};
    fill_stats(e->solution.stats, stats);
    *out = e;
    return HJK_OK;
  });
}

hjk_status hjk_escape_dims(const hjk_escape* e, hjk_grid* grid, int32_t* ntheta) {
  return guarded([&] {
    require(e, "null handle");
    if (grid) *grid = from_grid(e->solution.grid.space());
    if (ntheta) *ntheta = e->solution.grid.ntheta();
    return HJK_OK;
  });
}

hjk_status hjk_escape_copy_field(const hjk_escape* e, hjk_escape_field field, double* out,
                                 size_t capacity) {
  return guarded([&] {
    require(e && out, "null argument");
    const hjkit::EscapeSolution& s = e->solution;
    const std::vector<double>* src = nullptr;
    switch (field) {
      case HJK_ESCAPE_TIME: src = &s.u; break;
      case HJK_ESCAPE_PARAMETER: src = &s.sigma; break;
      case HJK_ESCAPE_EXIT_X: src = &s.exit_x; break;
      case HJK_ESCAPE_EXIT_Z: src = &s.exit_z; break;
      case HJK_ESCAPE_EXIT_THETA: src = &s.exit_theta; break;
      default: return fail(HJK_INVALID_ARGUMENT, "unknown escape field");
    }
    if (capacity < src->size()) return fail(HJK_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(out, src->data(), src->size() * sizeof(double));
    return HJK_OK;
  });
}

hjk_status hjk_escape_arrivals(const hjk_escape* e, double source_x, double source_z,
                               double receiver_x, double receiver_z, hjk_arrival* out,
                               size_t capacity, size_t* count) {
  return guarded([&] {
    require(e && count && (out || capacity == 0), "null argument");
    const auto arrivals = hjkit::extract_arrivals(e->solution, {receiver_x, receiver_z},
                                                  {source_x, source_z});
    *count = arrivals.size();
    for (size_t a = 0; a < std::min(capacity, arrivals.size()); ++a)
      out[a] = {arrivals[a].branch, arrivals[a].theta, arrivals[a].time};
    if (capacity < arrivals.size()) return fail(HJK_BUFFER_TOO_SMALL, "arrival buffer too small");
    return HJK_OK;
  });
}

hjk_status hjk_escape_isochron(const hjk_escape* e, double time, int32_t threads,
                               hjk_phase_point* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(e && count && (out || capacity == 0), "null argument");
    const auto points = hjkit::isochron(e->solution, time, std::max(1, threads));
    *count = points.size();
    for (size_t p = 0; p < std::min(capacity, points.size()); ++p)
      out[p] = {points[p].x, points[p].z, points[p].theta};
    if (capacity < points.size()) return fail(HJK_BUFFER_TOO_SMALL, "point buffer too small");
    return HJK_OK;
  });
}

void hjk_escape_destroy(hjk_escape* e) { delete e; }

size_t hjk_builtin_count(void) { return hjkit::builtin_models().size(); }

hjk_status hjk_builtin_at(size_t index, const char** name, hjk_model_kind* kind,
                          int32_t* isotropic, const char** description) {
  return guarded([&] {
    const auto all = hjkit::builtin_models();
    require(index < all.size(), "builtin index out of range");
    // The catalogue is built from string literals, so data() is terminated.
    const hjkit::BuiltinInfo& b = all[index];
    if (name) *name = b.name.data();
    if (kind) *kind = b.kind == hjkit::ModelKind::Speed ? HJK_MODEL_SPEED : HJK_MODEL_SLOWNESS;
    if (isotropic) *isotropic = b.isotropic ? 1 : 0;
    if (description) *description = b.description.data();
    return HJK_OK;
  });
}

}  // extern "C"
