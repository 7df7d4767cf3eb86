#ifndef HJKIT_H
#define HJKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(HJKIT_BUILDING)
#define HJK_API __attribute__((visibility("default")))
#else
#define HJK_API
#endif

typedef enum hjk_status {
  HJK_OK = 0,
  HJK_INVALID_ARGUMENT = 1,
  HJK_INVALID_MODEL = 2,
  HJK_OUT_OF_DOMAIN = 3,
  HJK_SOLVER_ERROR = 4,
  HJK_UNKNOWN_NAME = 5,
  HJK_BUFFER_TOO_SMALL = 6,
  HJK_INTERNAL = 7
} hjk_status;

/* Message for the last failing call on this thread ("" after success). */
HJK_API const char* hjk_last_error(void);

typedef struct hjk_grid {
  int32_t nx, ny;
  double xmin, xmax, ymin, ymax;
} hjk_grid;

typedef struct hjk_stats {
  uint64_t node_count;
  uint64_t heap_pops;
  uint64_t recomputes;
  uint64_t unreachable;
  uint64_t order_violations;
  uint64_t transition_violations;
  double wall_seconds;
} hjk_stats;

/* Node arrays below are nx*ny doubles, id = j*nx + i. */

/* costs: entering cost per node. sources/values: node ids and pinned values. */
HJK_API hjk_status hjk_dijkstra_solve(const hjk_grid* grid, const double* costs,
                                      const uint64_t* sources, const double* values,
                                      size_t nsources, double* u_out, hjk_stats* stats);

HJK_API hjk_status hjk_fmm_solve(const hjk_grid* grid, const double* speed,
                                 const uint64_t* sources, const double* values,
                                 size_t nsources, double* u_out, hjk_stats* stats);

/* ---- anisotropic speed profiles f(a, x) ---- */

typedef struct hjk_speed hjk_speed;

typedef double (*hjk_speed_fn)(double ax, double ay, double x, double y, void* user);

HJK_API hjk_status hjk_speed_builtin(const char* name, hjk_speed** out);
/* Isotropic profile read bilinearly from node speeds. */
HJK_API hjk_status hjk_speed_field(const hjk_grid* grid, const double* values, hjk_speed** out);
/* fn must stay callable, and user valid, until the handle is destroyed. */
HJK_API hjk_status hjk_speed_callback(hjk_speed_fn fn, void* user, hjk_speed** out);
/* Replaces the declared (F1, F2); otherwise they are estimated per solve. */
HJK_API hjk_status hjk_speed_set_bounds(hjk_speed* s, double f1, double f2);
HJK_API hjk_status hjk_speed_bounds(const hjk_speed* s, double* f1, double* f2);
HJK_API hjk_status hjk_speed_eval(const hjk_speed* s, double ax, double ay, double x, double y,
                                  double* out);
HJK_API void hjk_speed_destroy(hjk_speed* s);

typedef struct hjk_oum_options {
  double golden_tolerance; /* <= 0 picks the default 1e-9 */
} hjk_oum_options;

/* Solves on the grid's triangulation; opts may be NULL. */
HJK_API hjk_status hjk_oum_solve(const hjk_grid* grid, const hjk_speed* speed,
                                 const uint64_t* sources, const double* values,
                                 size_t nsources, const hjk_oum_options* opts, double* u_out,
                                 hjk_stats* stats);

/* ---- phase-space escape solver ---- */

typedef struct hjk_slowness hjk_slowness;

HJK_API hjk_status hjk_slowness_builtin(const char* name, const hjk_grid* grid,
                                        hjk_slowness** out);
HJK_API hjk_status hjk_slowness_field(const hjk_grid* grid, const double* values,
                                      hjk_slowness** out);
HJK_API void hjk_slowness_destroy(hjk_slowness* s);

typedef struct hjk_escape hjk_escape;

typedef enum hjk_escape_field {
  HJK_ESCAPE_TIME = 0,
  HJK_ESCAPE_PARAMETER = 1,
  HJK_ESCAPE_EXIT_X = 2,
  HJK_ESCAPE_EXIT_Z = 3,
  HJK_ESCAPE_EXIT_THETA = 4
} hjk_escape_field;

typedef struct hjk_arrival {
  int32_t branch;
  double theta;
  double time;
} hjk_arrival;

typedef struct hjk_phase_point {
  double x, z, theta;
} hjk_phase_point;

HJK_API hjk_status hjk_escape_solve(const hjk_slowness* model, int32_t ntheta, hjk_escape** out,
                                    hjk_stats* stats);
HJK_API hjk_status hjk_escape_dims(const hjk_escape* e, hjk_grid* grid, int32_t* ntheta);
/* nx*ny*ntheta values, id = (k*ny + j)*nx + i. */
HJK_API hjk_status hjk_escape_copy_field(const hjk_escape* e, hjk_escape_field field, double* out,
                                         size_t capacity);
/* Writes up to capacity records and sets *count to the total; returns
   HJK_BUFFER_TOO_SMALL when they did not all fit. */
HJK_API hjk_status hjk_escape_arrivals(const hjk_escape* e, double source_x, double source_z,
                                       double receiver_x, double receiver_z, hjk_arrival* out,
                                       size_t capacity, size_t* count);
HJK_API hjk_status hjk_escape_isochron(const hjk_escape* e, double time, int32_t threads,
                                       hjk_phase_point* out, size_t capacity, size_t* count);
HJK_API void hjk_escape_destroy(hjk_escape* e);

/* ---- builtin catalogue ---- */

typedef enum hjk_model_kind { HJK_MODEL_SPEED = 0, HJK_MODEL_SLOWNESS = 1 } hjk_model_kind;

HJK_API size_t hjk_builtin_count(void);
/* Pointers stay valid for the lifetime of the library. */
HJK_API hjk_status hjk_builtin_at(size_t index, const char** name, hjk_model_kind* kind,
                                  int32_t* isotropic, const char** description);

#ifdef __cplusplus
}
#endif

#endif
