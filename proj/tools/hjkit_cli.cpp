// hjkit: command-line front end over the C API.
#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "field_file.hpp"
#include "hjkit/hjkit.h"

namespace {

using hjkit::tools::FieldFile;
using hjkit::tools::format_double;

enum ExitCode { kOk = 0, kParse = 2, kModel = 3, kSolver = 4, kIo = 5 };

struct Failure {
  int code;
  std::string message;
};

struct SolveConfig {
  std::string solver;
  std::string builtin;
  std::string model_path;
  std::vector<int> grid{129, 129};
  std::vector<double> domain{0.0, 1.0, 0.0, 1.0};
  std::vector<std::pair<double, double>> sources;
  double source_value = 0.0;
  int ntheta = 64;
  std::vector<double> f_bounds;
  double golden_tol = 0.0;
  std::string out;
  std::string out_prefix;
  std::vector<double> arrivals;
  std::string arrivals_out;
  std::optional<double> isochron_time;
  std::string isochron_out;
  unsigned long long max_unreachable = 0;
};

int code_for(hjk_status s) {
  switch (s) {
    case HJK_INVALID_MODEL:
    case HJK_UNKNOWN_NAME: return kModel;
    case HJK_INVALID_ARGUMENT:
    case HJK_OUT_OF_DOMAIN: return kParse;
    default: return kSolver;
  }
}

void check(hjk_status s, const char* what) {
  if (s != HJK_OK) throw Failure{code_for(s), std::string(what) + ": " + hjk_last_error()};
}

int post_threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HJKIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

struct Setup {
  hjk_grid grid{};
  std::optional<FieldFile> model_file;
};

Setup make_setup(const SolveConfig& c) {
  Setup s;
  if (!c.model_path.empty()) {
    try {
      s.model_file = hjkit::tools::read_field(c.model_path);
    } catch (const hjkit::tools::FieldFormatError& e) {
      throw Failure{kModel, e.what()};
    } catch (const std::exception& e) {
      throw Failure{kIo, e.what()};
    }
    const FieldFile& f = *s.model_file;
    if (f.ntheta != 0) throw Failure{kModel, "model file must be a 2D field"};
    for (double v : f.values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw Failure{kModel, "model values must be finite and strictly positive"};
    s.grid = {f.nx, f.ny, f.xmin, f.xmax, f.ymin, f.ymax};
  } else {
    s.grid = {c.grid[0], c.grid[1], c.domain[0], c.domain[1], c.domain[2], c.domain[3]};
  }
  if (s.grid.nx < 2 || s.grid.ny < 2 || s.grid.nx > 4097 || s.grid.ny > 4097)
    throw Failure{kParse, "grid dimensions must lie in [2, 4097]"};
  if (!(s.grid.xmax > s.grid.xmin) || !(s.grid.ymax > s.grid.ymin))
    throw Failure{kParse, "domain must have xmax > xmin and ymax > ymin"};
  return s;
}

std::size_t node_count(const hjk_grid& g) { return static_cast<std::size_t>(g.nx) * g.ny; }

double spacing_x(const hjk_grid& g) { return (g.xmax - g.xmin) / (g.nx - 1); }
double spacing_y(const hjk_grid& g) { return (g.ymax - g.ymin) / (g.ny - 1); }

// Nearest node to each source point.
std::vector<uint64_t> source_nodes(const SolveConfig& c, const hjk_grid& g) {
  if (c.sources.empty()) throw Failure{kParse, "--source is required for this solver"};
  std::vector<uint64_t> ids;
  for (const auto& [x, y] : c.sources) {
    if (x < g.xmin || x > g.xmax || y < g.ymin || y > g.ymax)
      throw Failure{kParse, "source (" + format_double(x) + ", " + format_double(y) +
                                ") lies outside the domain"};
    const long i = std::lround((x - g.xmin) / spacing_x(g));
    const long j = std::lround((y - g.ymin) / spacing_y(g));
    ids.push_back(static_cast<uint64_t>(j) * g.nx + static_cast<uint64_t>(i));
  }
  return ids;
}

// Node speeds for the isotropic grid solvers.
std::vector<double> isotropic_speeds(const SolveConfig& c, const Setup& s) {
  if (s.model_file) return s.model_file->values;
  hjk_speed* speed = nullptr;
  check(hjk_speed_builtin(c.builtin.c_str(), &speed), "model");
  const std::size_t n = node_count(s.grid);
  std::vector<double> values(n);
  bool isotropic = true;
  for (std::size_t id = 0; id < n && isotropic; ++id) {
    const double x = s.grid.xmin + static_cast<double>(id % s.grid.nx) * spacing_x(s.grid);
    const double y = s.grid.ymin + static_cast<double>(id / s.grid.nx) * spacing_y(s.grid);
    double f0 = 0, f1 = 0;
    hjk_speed_eval(speed, 1, 0, x, y, &f0);
    hjk_speed_eval(speed, 0.6, 0.8, x, y, &f1);
    isotropic = std::abs(f0 - f1) <= 1e-12 * f0;
    values[id] = f0;
  }
  hjk_speed_destroy(speed);
  if (!isotropic)
    throw Failure{kModel, "model '" + c.builtin + "' is anisotropic; use --solver oum"};
  return values;
}

void write_or_fail(const std::string& path, const FieldFile& f) {
  try {
    hjkit::tools::write_field(path, f);
  } catch (const std::exception& e) {
    throw Failure{kIo, e.what()};
  }
}

void print_summary(const std::string& solver, const hjk_stats& st) {
  std::printf("solver %s\n", solver.c_str());
  std::printf("nodes %llu\n", static_cast<unsigned long long>(st.node_count));
  std::printf("heap_pops %llu\n", static_cast<unsigned long long>(st.heap_pops));
  std::printf("recomputes %llu\n", static_cast<unsigned long long>(st.recomputes));
  std::printf("unreachable %llu\n", static_cast<unsigned long long>(st.unreachable));
  std::printf("wall_seconds %.6f\n", st.wall_seconds);
}

void check_unreachable(const SolveConfig& c, const hjk_stats& st) {
  if (st.unreachable > c.max_unreachable)
    throw Failure{kSolver, std::to_string(st.unreachable) + " unreachable nodes (limit " +
                               std::to_string(c.max_unreachable) + ")"};
}

int run_grid_solver(const SolveConfig& c) {
  const Setup s = make_setup(c);
  const std::vector<uint64_t> ids = source_nodes(c, s.grid);
  const std::vector<double> values(ids.size(), c.source_value);
  std::vector<double> u(node_count(s.grid));
  hjk_stats st{};

  if (c.solver == "oum") {
    hjk_speed* speed = nullptr;
    if (s.model_file)
      check(hjk_speed_field(&s.grid, s.model_file->values.data(), &speed), "model");
    else
      check(hjk_speed_builtin(c.builtin.c_str(), &speed), "model");
    if (c.f_bounds.size() == 2) {
      const hjk_status b = hjk_speed_set_bounds(speed, c.f_bounds[0], c.f_bounds[1]);
      if (b != HJK_OK) hjk_speed_destroy(speed);
      check(b, "--f-bounds");
    }
    hjk_oum_options opts{c.golden_tol};
    const hjk_status r =
        hjk_oum_solve(&s.grid, speed, ids.data(), values.data(), ids.size(), &opts, u.data(), &st);
    hjk_speed_destroy(speed);
    check(r, "oum");
  } else {
    std::vector<double> speed = isotropic_speeds(c, s);
    if (c.solver == "fmm") {
      check(hjk_fmm_solve(&s.grid, speed.data(), ids.data(), values.data(), ids.size(), u.data(),
                          &st),
            "fmm");
    } else {
      // Entering a node costs the time to cross one spacing at its speed.
      const double h = std::min(spacing_x(s.grid), spacing_y(s.grid));
      for (double& v : speed) v = h / v;
      check(hjk_dijkstra_solve(&s.grid, speed.data(), ids.data(), values.data(), ids.size(),
                               u.data(), &st),
            "dijkstra");
    }
  }

  print_summary(c.solver, st);
  if (!c.out.empty())
    write_or_fail(c.out, FieldFile{s.grid.nx, s.grid.ny, 0, s.grid.xmin, s.grid.xmax, s.grid.ymin,
                                   s.grid.ymax, std::move(u)});
  check_unreachable(c, st);
  return kOk;
}

int run_escape(const SolveConfig& c) {
  const Setup s = make_setup(c);
  hjk_slowness* model = nullptr;
  if (s.model_file)
    check(hjk_slowness_field(&s.grid, s.model_file->values.data(), &model), "model");
  else
    check(hjk_slowness_builtin(c.builtin.c_str(), &s.grid, &model), "model");
  hjk_escape* esc = nullptr;
  hjk_stats st{};
  const hjk_status r = hjk_escape_solve(model, c.ntheta, &esc, &st);
  hjk_slowness_destroy(model);
  check(r, "escape");
  struct Guard {
    hjk_escape* e;
    ~Guard() { hjk_escape_destroy(e); }
  } guard{esc};

  print_summary(c.solver, st);

  if (!c.out_prefix.empty()) {
    constexpr std::array<std::pair<hjk_escape_field, const char*>, 5> kFields{{
        {HJK_ESCAPE_TIME, "u"},
        {HJK_ESCAPE_PARAMETER, "sigma"},
        {HJK_ESCAPE_EXIT_X, "exit_x"},
        {HJK_ESCAPE_EXIT_Z, "exit_z"},
        {HJK_ESCAPE_EXIT_THETA, "exit_theta"},
    }};
    FieldFile f{s.grid.nx, s.grid.ny, c.ntheta, s.grid.xmin, s.grid.xmax, s.grid.ymin,
                s.grid.ymax, {}};
    f.values.resize(f.expected_size());
    for (const auto& [field, name] : kFields) {
      check(hjk_escape_copy_field(esc, field, f.values.data(), f.values.size()), "escape");
      write_or_fail(c.out_prefix + "." + name + ".fld", f);
    }
  }

  if (c.arrivals.size() == 4) {
    size_t count = 0;
    hjk_escape_arrivals(esc, c.arrivals[0], c.arrivals[1], c.arrivals[2], c.arrivals[3], nullptr,
                        0, &count);
    std::vector<hjk_arrival> rows(count);
    check(hjk_escape_arrivals(esc, c.arrivals[0], c.arrivals[1], c.arrivals[2], c.arrivals[3],
                              rows.data(), rows.size(), &count),
          "arrivals");
    std::string table = "branch theta time\n";
    for (const hjk_arrival& a : rows)
      table += std::to_string(a.branch) + ' ' + format_double(a.theta) + ' ' +
               format_double(a.time) + '\n';
    if (c.arrivals_out.empty()) {
      std::printf("arrivals %zu\n%s", rows.size(), table.c_str());
    } else {
      std::ofstream out(c.arrivals_out);
      if (!(out << table) || !out.flush()) throw Failure{kIo, "cannot write " + c.arrivals_out};
      std::printf("arrivals %zu\n", rows.size());
    }
  }

  if (c.isochron_time) {
    size_t count = 0;
    const int threads = post_threads();
    hjk_escape_isochron(esc, *c.isochron_time, threads, nullptr, 0, &count);
    std::vector<hjk_phase_point> pts(count);
    check(hjk_escape_isochron(esc, *c.isochron_time, threads, pts.data(), pts.size(), &count),
          "isochron");
    std::string text = "x z theta\n";
    for (const hjk_phase_point& p : pts)
      text += format_double(p.x) + ' ' + format_double(p.z) + ' ' + format_double(p.theta) + '\n';
    if (c.isochron_out.empty()) {
      std::printf("isochron_points %zu\n%s", pts.size(), text.c_str());
    } else {
      std::ofstream out(c.isochron_out);
      if (!(out << text) || !out.flush()) throw Failure{kIo, "cannot write " + c.isochron_out};
      std::printf("isochron_points %zu\n", pts.size());
    }
  }
  return kOk;
}

int list_models() {
  for (size_t i = 0; i < hjk_builtin_count(); ++i) {
    const char *name = nullptr, *desc = nullptr;
    hjk_model_kind kind{};
    int32_t iso = 0;
    hjk_builtin_at(i, &name, &kind, &iso, &desc);
    std::printf("%-16s %-8s %-11s %s\n", name, kind == HJK_MODEL_SPEED ? "speed" : "slowness",
                iso ? "isotropic" : "anisotropic", desc);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Jacobi solvers on regular grids"};
  app.require_subcommand(1);

  SolveConfig c;
  CLI::App* solve = app.add_subcommand("solve", "Run one solver and write its output");
  solve->add_option("--solver", c.solver, "dijkstra, fmm, oum or escape")
      ->required()
      ->check(CLI::IsMember({"dijkstra", "fmm", "oum", "escape"}));
  auto* builtin = solve->add_option("--builtin", c.builtin, "Named model (see `hjkit models`)");
  auto* model = solve->add_option("--model", c.model_path,
                                  "Field file: speed (dijkstra, fmm, oum) or slowness (escape)");
  builtin->excludes(model);
  auto* grid = solve->add_option("--grid", c.grid, "Nodes per axis")->expected(2);
  auto* domain = solve->add_option("--domain", c.domain, "XMIN XMAX YMIN YMAX")->expected(4);
  model->excludes(grid)->excludes(domain);
  solve->add_option("--source", c.sources, "Source point X Y (repeatable)");
  solve->add_option("--source-value", c.source_value, "Value pinned at sources");
  solve->add_option("--ntheta", c.ntheta, "Angular nodes for escape")
      ->check(CLI::Range(8, 4096));
  solve->add_option("--f-bounds", c.f_bounds, "Declared F1 F2 for oum")->expected(2);
  solve->add_option("--golden-tol", c.golden_tol, "Golden-section tolerance for oum")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", c.out, "Solution field file");
  solve->add_option("--out-prefix", c.out_prefix, "Escape field files PREFIX.{u,sigma,...}.fld");
  solve->add_option("--arrivals", c.arrivals, "SX SZ RX RZ: arrivals at a receiver from a source")
      ->expected(4);
  solve->add_option("--arrivals-out", c.arrivals_out, "Arrival table file (default stdout)");
  solve->add_option("--isochron", c.isochron_time, "Phase points where u equals T");
  solve->add_option("--isochron-out", c.isochron_out, "Isochron point file (default stdout)");
  solve->add_option("--max-unreachable", c.max_unreachable,
                    "Unreachable nodes tolerated before exit code 4");

  app.add_subcommand("models", "List builtin models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (app.got_subcommand("models")) return list_models();
    if (c.builtin.empty() && c.model_path.empty())
      throw Failure{kParse, "one of --builtin or --model is required"};
    if (c.solver != "escape" && (c.arrivals.size() || c.isochron_time || !c.out_prefix.empty()))
      throw Failure{kParse, "--arrivals, --isochron and --out-prefix need --solver escape"};
    return c.solver == "escape" ? run_escape(c) : run_grid_solver(c);
  } catch (const Failure& f) {
    std::fprintf(stderr, "hjkit: %s\n", f.message.c_str());
    return f.code;
  }
}
