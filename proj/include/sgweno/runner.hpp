#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgweno/combine.hpp"
#include "sgweno/diag.hpp"
#include "sgweno/io.hpp"
#include "sgweno/models.hpp"
#include "sgweno/timestep.hpp"

namespace sgweno {

struct InvalidConfig : std::runtime_error {
  std::string field;
  InvalidConfig(std::string f, const std::string& msg)
      : std::runtime_error("invalid config (" + f + "): " + msg), field(std::move(f)) {}
};

enum class GridMode { single, sparse };

struct RunConfig {
  ExampleId example = ExampleId::ex1;
  GridMode grid_mode = GridMode::sparse;
  std::vector<int> root_cells = {10};  // one run per entry (refinement study)
  int finest_level = 3;
  WenoMode scheme = WenoMode::nonlinear;
  InterpMode prolongation = InterpMode::weno;
  double epsilon = 1e-6;
  double cfl = 0.4;
  DtMode dt_mode = DtMode::cfl;
  double tfinal = 0.0;
  std::string out_dir;  // empty: no files written
  std::vector<double> snapshots;
  int threads = 1;
  double scale = 1.0;  // multiplies N_r and T for desk-scale runs
};

inline const char* example_name(ExampleId id) {
  switch (id) {
    case ExampleId::ex1: return "ex1";
    case ExampleId::ex2: return "ex2";
    case ExampleId::ex3a: return "ex3a";
    case ExampleId::ex3b: return "ex3b";
    case ExampleId::ex4: return "ex4";
    case ExampleId::ex5a: return "ex5a";
    case ExampleId::ex5b: return "ex5b";
    case ExampleId::ex6: return "ex6";
  }
  return "?";
}

inline ExampleId parse_example(const std::string& s) {
  for (ExampleId id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3a, ExampleId::ex3b,
                       ExampleId::ex4, ExampleId::ex5a, ExampleId::ex5b, ExampleId::ex6})
    if (s == example_name(id)) return id;
  throw InvalidConfig("example", "unknown example id '" + s + "'");
}

// Config pre-filled with the experiment's published setup.
inline RunConfig default_run_config(ExampleId id) {
  const ExampleDefaults ex = make_example(id);
  RunConfig cfg;
  cfg.example = id;
  cfg.scheme = ex.scheme;
  cfg.prolongation = ex.prolongation;
  cfg.dt_mode = ex.dt_mode;
  cfg.cfl = ex.cfl;
  cfg.tfinal = ex.tfinal;
  cfg.snapshots = ex.snapshot_times;
  return cfg;
}

// True for the smooth-solution examples that produce convergence tables.
inline bool has_error_table(ExampleId id) {
  return id == ExampleId::ex1 || id == ExampleId::ex2 || id == ExampleId::ex3a ||
         id == ExampleId::ex3b;
}

struct TimeSeriesRow {
  double t = 0.0;
  double mass = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> h2, hlog;
};

struct RunResult {
  std::vector<ErrorReport> rows;                      // table path
  std::vector<TimeSeriesRow> series;                  // series path
  std::vector<std::pair<double, GridField>> fields;   // solution at each stop
  double wall_seconds = 0.0;                          // last refinement's evolve+combine wall
  int finest_nh = 0;
};

namespace detail {

inline CombinationSet make_single_grid(const DomainBox& box, const std::vector<int>& root,
                                       const std::vector<BoundaryKind>& bc, int nl) {
  CombinationSet set;
  set.finest_level = nl;
  FamilyMember m;
  m.geom = GridGeometry::make(box, LevelIndex{std::vector<int>(box.dim(), nl)}, root, bc);
  m.state.assign(m.geom.total_points(), 0.0);
  set.members.push_back(std::move(m));
  return set;
}

inline std::string format_time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

inline int nearest_index(const GridGeometry& g, int dim, double coord) {
  const int i = static_cast<int>(std::lround((coord - g.box.lower[dim]) / g.spacing[dim]));
  return std::clamp(i, 0, g.points[dim] - 1);
}

inline void write_plane_csv(const std::string& path, const GridField& f, int dim_a, int dim_b,
                            std::vector<int> fixed_idx) {
  std::ofstream out(path);
  out << "c1,c2,value\n";
  const auto strides = f.geom.strides();
  char buf[96];
  for (int ia = 0; ia < f.geom.points[dim_a]; ++ia)
    for (int ib = 0; ib < f.geom.points[dim_b]; ++ib) {
      fixed_idx[dim_a] = ia;
      fixed_idx[dim_b] = ib;
      std::size_t lin = 0;
      for (int k = 0; k < f.geom.dim(); ++k) lin += fixed_idx[k] * strides[k];
      std::snprintf(buf, sizeof(buf), "%.10e,%.10e,%.10e\n",
                    grid_point_coordinate_1d(f.geom, dim_a, ia),
                    grid_point_coordinate_1d(f.geom, dim_b, ib), f.values[lin]);
      out << buf;
    }
}

inline void write_line_csv(const std::string& path, std::span<const double> coords,
                           std::span<const double> vals) {
  std::ofstream out(path);
  out << "coord,value\n";
  char buf[64];
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.10e,%.10e\n", coords[i], vals[i]);
    out << buf;
  }
}

// plotting cuts at each experiment's standard locations
inline void write_cuts(ExampleId id, const std::string& dir, double t, const GridField& f) {
  namespace fs = std::filesystem;
  const std::string tag = format_time_tag(t);
  const auto strides = f.geom.strides();
  switch (id) {
    case ExampleId::ex4: {
      write_plane_csv(dir + "/cut_yz_x0_t" + tag + ".csv", f, 1, 2, {0, 0, 0});
      // u along x = y on the plane z = 0
      const int n = std::min(f.geom.points[0], f.geom.points[1]);
      std::vector<double> c(n), v(n);
      for (int i = 0; i < n; ++i) {
        c[i] = grid_point_coordinate_1d(f.geom, 0, i);
        v[i] = f.values[i * strides[0] + i * strides[1]];
      }
      write_line_csv(dir + "/cut_diag_z0_t" + tag + ".csv", c, v);
      // u along y at x = 1.5710, z = 0
      const int ix = nearest_index(f.geom, 0, 1.5710);
      std::vector<double> cy(f.geom.points[1]), vy(f.geom.points[1]);
      for (int j = 0; j < f.geom.points[1]; ++j) {
        cy[j] = grid_point_coordinate_1d(f.geom, 1, j);
        vy[j] = f.values[ix * strides[0] + j * strides[1]];
      }
      write_line_csv(dir + "/cut_x1.571_z0_t" + tag + ".csv", cy, vy);
      break;
    }
    case ExampleId::ex5a:
      write_plane_csv(dir + "/cut_xv_t" + tag + ".csv", f, 0, 1, {0, 0});
      break;
    case ExampleId::ex5b: {
      std::vector<int> fixed(4, 0);
      fixed[1] = nearest_index(f.geom, 1, 0.0);
      fixed[3] = nearest_index(f.geom, 3, 0.0);
      write_plane_csv(dir + "/cut_x1v1_t" + tag + ".csv", f, 0, 2, fixed);
      fixed.assign(4, 0);
      fixed[2] = nearest_index(f.geom, 2, 0.0);
      fixed[3] = nearest_index(f.geom, 3, 0.0);
      write_plane_csv(dir + "/cut_x1x2_t" + tag + ".csv", f, 0, 1, fixed);
      break;
    }
    case ExampleId::ex6: {
      std::vector<int> fixed(3, 0);
      fixed[0] = nearest_index(f.geom, 0, 5.0 * std::numbers::pi);
      write_plane_csv(dir + "/cut_xi1xi2_x5pi_t" + tag + ".csv", f, 1, 2, fixed);
      fixed.assign(3, 0);
      fixed[2] = nearest_index(f.geom, 2, 0.0);
      write_plane_csv(dir + "/cut_x2xi1_t" + tag + ".csv", f, 0, 1, fixed);
      fixed.assign(3, 0);
      fixed[1] = nearest_index(f.geom, 1, 0.0);
      write_plane_csv(dir + "/cut_x2xi2_t" + tag + ".csv", f, 0, 2, fixed);
      break;
    }
    default:
      break;
  }
}

inline double field_min(const GridField& f) {
  double m = f.values.front();
  for (double v : f.values) m = std::min(m, v);
  return m;
}
inline double field_max(const GridField& f) {
  double m = f.values.front();
  for (double v : f.values) m = std::max(m, v);
  return m;
}

}  // namespace detail

// CSV convergence table, pinned format: errors %.4e, orders %.3f (empty on
// the first row), wall seconds %.5e.
inline std::string emit_table(const std::vector<ErrorReport>& rows) {
  std::string out = "grid,l1,l1_order,linf,linf_order,wall_seconds\n";
  char buf[160];
  for (const auto& r : rows) {
    std::string o1, o2;
    if (r.order_l1) {
      std::snprintf(buf, sizeof(buf), "%.3f", *r.order_l1);
      o1 = buf;
    }
    if (r.order_linf) {
      std::snprintf(buf, sizeof(buf), "%.3f", *r.order_linf);
      o2 = buf;
    }
    std::snprintf(buf, sizeof(buf), "%d,%.4e,%s,%.4e,%s,%.5e\n", r.grid, r.l1, o1.c_str(),
                  r.linf, o2.c_str(), r.wall_seconds);
    out += buf;
  }
  return out;
}

inline void validate(const RunConfig& cfg) {
  if (cfg.root_cells.empty()) throw InvalidConfig("nr", "need at least one root size");
  const ExampleDefaults ex = make_example(cfg.example);
  const int d = ex.problem.box.dim();
  if (cfg.finest_level < 0) throw InvalidConfig("nl", "finest level must be >= 0");
  if (cfg.grid_mode == GridMode::sparse && cfg.finest_level < d - 1)
    throw InvalidConfig("nl", "sparse mode needs N_L >= d-1");
  for (int nr : cfg.root_cells) {
    // every root line must admit the five-point stencil
    if (nr < 6) throw InvalidConfig("nr", "root grid must have at least 6 cells per direction");
  }
  if (!(cfg.epsilon > 0.0)) throw InvalidConfig("epsilon", "must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw InvalidConfig("cfl", "must lie in (0, 1]");
  if (cfg.tfinal < 0.0) throw InvalidConfig("tfinal", "must be nonnegative");
  if (cfg.threads < 1) throw InvalidConfig("threads", "must be >= 1");
  if (!(cfg.scale > 0.0)) throw InvalidConfig("scale", "must be positive");
  if (!has_error_table(cfg.example) && cfg.root_cells.size() > 1)
    throw InvalidConfig("nr", "refinement lists apply to the smooth examples only");
}

inline RunResult run(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (cfg.scale != 1.0) {
    for (int& nr : cfg.root_cells) nr = static_cast<int>(std::lround(nr * cfg.scale));
    cfg.tfinal *= cfg.scale;
    std::erase_if(cfg.snapshots, [&](double s) { return s > cfg.tfinal; });
    cfg.scale = 1.0;
  }
  validate(cfg);

  const ExampleDefaults ex = make_example(cfg.example);
  const ProblemSpec& problem = ex.problem;
  const int d = problem.box.dim();
  const bool table = has_error_table(cfg.example);
  const WenoParams wp{cfg.epsilon, cfg.scheme};

  namespace fs = std::filesystem;
  if (!cfg.out_dir.empty()) fs::create_directories(cfg.out_dir);

  RunResult result;
  for (std::size_t ri = 0; ri < cfg.root_cells.size(); ++ri) {
    const int nr = cfg.root_cells[ri];
    const std::vector<int> root(d, nr);
    CombinationSet set = (cfg.grid_mode == GridMode::single)
                             ? detail::make_single_grid(problem.box, root, problem.boundary,
                                                        cfg.finest_level)
                             : make_family(problem.box, root, problem.boundary,
                                           cfg.finest_level);
    initialize_family(set, problem);
    FamilyModel model(problem, set, wp, cfg.threads);
    const GridGeometry finest = finest_geometry(set);
    result.finest_nh = nr << cfg.finest_level;

    StepPolicy policy;
    policy.mode = cfg.dt_mode;
    policy.cfl_number = cfg.cfl;
    policy.reference_spacing = *std::min_element(finest.spacing.begin(), finest.spacing.end());

    std::vector<std::pair<double, GridField>> stops_fields;
    const bool want_zero_snapshot =
        !table && std::any_of(cfg.snapshots.begin(), cfg.snapshots.end(),
                              [](double s) { return s == 0.0; });
    if (want_zero_snapshot || cfg.tfinal == 0.0)
      stops_fields.emplace_back(0.0, cfg.grid_mode == GridMode::single
                                         ? set.members.front().field()
                                         : combine(set, cfg.prolongation, cfg.epsilon,
                                                   cfg.threads));

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.tfinal > 0.0) {
      evolve_family(set, model, policy, cfg.tfinal, table ? std::vector<double>{} : cfg.snapshots,
                    [&](double t) {
                      GridField f = (cfg.grid_mode == GridMode::single)
                                        ? set.members.front().field()
                                        : combine(set, cfg.prolongation, cfg.epsilon,
                                                  cfg.threads);
                      stops_fields.emplace_back(t, std::move(f));
                    });
    }
    const auto t1 = std::chrono::steady_clock::now();
    result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

    if (table) {
      const GridField& numeric = stops_fields.back().second;
      GridField exact_field = restrict_to_grid(
          [&](std::span<const double> x) { return problem.exact(x, cfg.tfinal); },
          numeric.geom);
      const auto norms = error_norms(numeric, exact_field);
      ErrorReport row;
      row.grid = result.finest_nh;
      row.l1 = norms.l1;
      row.linf = norms.linf;
      row.wall_seconds = result.wall_seconds;
      if (!result.rows.empty()) {
        row.order_l1 = std::log2(result.rows.back().l1 / row.l1);
        row.order_linf = std::log2(result.rows.back().linf / row.linf);
      }
      result.rows.push_back(row);
      result.fields = std::move(stops_fields);
    } else {
      // time-series diagnostics on the (combined) finest-grid solution
      GridField m_state;
      if (cfg.example == ExampleId::ex5a || cfg.example == ExampleId::ex5b)
        m_state = stationary_state(problem.vb, finest);
      for (auto& [t, f] : stops_fields) {
        TimeSeriesRow row;
        row.t = t;
        row.mass = quadrature_mass(f);
        row.min = detail::field_min(f);
        row.max = detail::field_max(f);
        if (!m_state.values.empty()) {
          const auto e = entropy_functionals(f, m_state);
          row.h2 = e.h2;
          row.hlog = e.hlog;
        }
        result.series.push_back(row);
        if (!cfg.out_dir.empty()) {
          const std::string tag = detail::format_time_tag(t);
          write_field_dump(cfg.out_dir + "/snapshot_t" + tag + ".sgw5", f);
          detail::write_cuts(cfg.example, cfg.out_dir, t, f);
        }
      }
      result.fields = std::move(stops_fields);
    }
  }

  if (!cfg.out_dir.empty()) {
    if (table) {
      std::ofstream out(cfg.out_dir + "/errors.csv");
      out << emit_table(result.rows);
    } else {
      std::ofstream out(cfg.out_dir + "/timeseries.csv");
      out << "t,mass,min,max,h2,hlog\n";
      char buf[200];
      for (const auto& r : result.series) {
        std::string h2s, hls;
        if (r.h2) {
          std::snprintf(buf, sizeof(buf), "%.10e", *r.h2);
          h2s = buf;
        }
        if (r.hlog) {
          std::snprintf(buf, sizeof(buf), "%.10e", *r.hlog);
          hls = buf;
        }
        std::snprintf(buf, sizeof(buf), "%.6f,%.10e,%.10e,%.10e,%s,%s\n", r.t, r.mass, r.min,
                      r.max, h2s.c_str(), hls.c_str());
        out << buf;
      }
    }
    std::ofstream meta(cfg.out_dir + "/run_meta.csv");
    char buf[200];
    meta << "key,value\n";
    meta << "example," << example_name(cfg.example) << "\n";
    meta << "grid_mode," << (cfg.grid_mode == GridMode::single ? "single" : "sparse") << "\n";
    meta << "nr," << cfg.root_cells.back() << "\n";
    meta << "nl," << cfg.finest_level << "\n";
    meta << "nh," << result.finest_nh << "\n";
    std::snprintf(buf, sizeof(buf), "tfinal,%.10e\n", cfg.tfinal);
    meta << buf;
    meta << "scheme," << (cfg.scheme == WenoMode::linear ? "linear" : "weno") << "\n";
    meta << "prolongation,"
         << (cfg.prolongation == InterpMode::lagrange ? "lagrange" : "weno") << "\n";
    std::snprintf(buf, sizeof(buf), "wall_seconds,%.5e\n", result.wall_seconds);
    meta << buf;
  }
  return result;
}

// ---------------------------------------------------------------------------
// run-to-run comparison
// ---------------------------------------------------------------------------

struct CompareRow {
  std::string name;
  double l1 = 0.0;
  double linf = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  double wall_ratio = 0.0;
};

namespace detail {

inline std::map<std::string, std::string> read_meta(const std::string& dir) {
  std::ifstream in(dir + "/run_meta.csv");
  if (!in) throw std::runtime_error("compare: missing run_meta.csv in " + dir);
  std::map<std::string, std::string> kv;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto pos = line.find(',');
    if (pos != std::string::npos) kv[line.substr(0, pos)] = line.substr(pos + 1);
  }
  return kv;
}

}  // namespace detail

inline CompareResult compare_runs(const std::string& dir_a, const std::string& dir_b) {
  namespace fs = std::filesystem;
  const auto meta_a = detail::read_meta(dir_a);
  const auto meta_b = detail::read_meta(dir_b);
  if (meta_a.at("example") != meta_b.at("example") || meta_a.at("nh") != meta_b.at("nh"))
    throw std::runtime_error("compare: incompatible runs (example or finest grid differ)");

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir_a)) {
    const std::string n = e.path().filename().string();
    if (n.starts_with("snapshot_t") && n.ends_with(".sgw5") && fs::exists(dir_b + "/" + n))
      names.push_back(n);
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw std::runtime_error("compare: no common snapshots");

  CompareResult res;
  for (const auto& n : names) {
    const FieldDump a = read_field_dump(dir_a + "/" + n);
    const FieldDump b = read_field_dump(dir_b + "/" + n);
    if (a.extents != b.extents) throw std::runtime_error("compare: snapshot extents differ");
    double sum = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      const double e = std::abs(a.values[i] - b.values[i]);
      sum += e;
      mx = std::max(mx, e);
    }
    res.rows.push_back({n, sum / static_cast<double>(a.values.size()), mx});
  }
  res.wall_ratio = std::stod(meta_a.at("wall_seconds")) / std::stod(meta_b.at("wall_seconds"));
  return res;
}

inline std::string compare_csv(const CompareResult& r) {
  std::string out = "snapshot,l1_diff,linf_diff\n";
  char buf[160];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.4e,%.4e\n", row.name.c_str(), row.l1, row.linf);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "wall_ratio,%.5e,\n", r.wall_ratio);
  out += buf;
  return out;
}

}  // namespace sgweno
