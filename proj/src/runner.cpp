#include "prak/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <thread>
#include <vector>

#include "prak/version.hpp"

namespace prak {

namespace {

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AliasSet alias_set(const std::string& name) {
  if (name == "cylindrical") return AliasSet::cylindrical();
  if (name == "spherical") return AliasSet::spherical();
  if (name == "none") return AliasSet::none();
  throw ConfigError("unknown alias set '" + name + "' (expected cylindrical, spherical or none)");
}

Json point_json(const Point4& x) { return Json::array({x[0], x[1], x[2], x[3]}); }

Json mat_json(const Mat4& m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json meta_json(const char* command, const RunConfig& cfg) {
  Json meta;
  meta["tool"] = "prak";
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["timestamp"] = iso_timestamp();
  meta["config"] = echo_config(cfg);
  return meta;
}

struct Problem {
  MetricField metric;
  VectorField4 field;
  std::optional<VectorField4> beta;  // separate direction field, sys13/sys13a only
};

Problem build_problem(const RunConfig& cfg) {
  if (cfg.catalog) {
    SolutionSpec spec = build_solution(*cfg.catalog, cfg);
    return {std::move(spec.metric), std::move(spec.field), std::nullopt};
  }
  if (!cfg.metric_exprs) throw ConfigError("config needs either a catalog name or a metric");
  const AliasSet aliases = alias_set(cfg.aliases);
  std::array<ScalarField, 10> comps;
  for (int i = 0; i < 10; ++i)
    comps[i] = ScalarField::parse((*cfg.metric_exprs)[i], aliases);
  MetricField metric(std::move(comps));

  std::array<ScalarField, 4> fc;
  if (cfg.field_exprs) {
    for (int i = 0; i < 4; ++i) fc[i] = ScalarField::parse((*cfg.field_exprs)[i], aliases);
  } else {
    throw ConfigError("config needs a field (4 expression strings) alongside the metric");
  }
  VectorField4 field(std::move(fc));

  std::optional<VectorField4> beta;
  if (cfg.beta_exprs) {
    std::array<ScalarField, 4> bc;
    for (int i = 0; i < 4; ++i) bc[i] = ScalarField::parse((*cfg.beta_exprs)[i], aliases);
    beta.emplace(std::move(bc));
  }
  return {std::move(metric), std::move(field), std::move(beta)};
}

struct SweepRow {
  Json row;
  bool ok = false;
  std::string reason;
};

// Evaluates fn on every grid index, possibly on several threads; results are
// assembled in index order so reports do not depend on scheduling.
std::vector<SweepRow> run_sweep(const GridSpec& grid, const std::function<Json(int)>& fn) {
  const int n = grid.total();
  std::vector<SweepRow> rows(static_cast<std::size_t>(n));
  auto eval_one = [&](int i) {
    SweepRow& slot = rows[i];
    try {
      slot.row = fn(i);
      slot.ok = true;
    } catch (const UnevaluableError& e) {
      slot.reason = e.what();
    } catch (const SignatureError& e) {
      slot.reason = e.what();
    } catch (const FactorError& e) {
      slot.reason = e.what();
    } catch (const EvalDomainError& e) {
      slot.reason = e.what();
    }
  };

  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) eval_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) eval_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

Json unevaluable_json(const GridSpec& grid, const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    if (!rows[i].ok) {
      Json e;
      e["index"] = i;
      e["x"] = point_json(grid.point(i));
      e["reason"] = rows[i].reason;
      out.push_back(std::move(e));
    }
  return out;
}

int evaluable_count(const std::vector<SweepRow>& rows) {
  int n = 0;
  for (const auto& r : rows)
    if (r.ok) ++n;
  return n;
}

// moves the evaluated rows into a JSON array; rows must not be read afterwards
Json sweep_points_json(std::vector<SweepRow>& rows) {
  Json pts = Json::array();
  for (auto& r : rows)
    if (r.ok) pts.push_back(std::move(r.row));
  return pts;
}

std::string residual_table(const GridSpec& grid, const std::vector<SweepRow>& rows,
                           const std::vector<std::string>& names) {
  std::string csv = "index,x0,x1,x2,x3,eq20,eq21,scale";
  for (const auto& n : names) csv += "," + n;
  csv += "\n";
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const auto& r = rows[i];
    if (!r.ok) continue;
    const Point4 x = grid.point(i);
    csv += std::to_string(i);
    for (double xv : x) csv += "," + csv_double(xv);
    csv += "," + csv_double(r.row["eq20"].get<double>());
    csv += "," + csv_double(r.row["eq21"].get<double>());
    csv += "," + csv_double(r.row["scale"].get<double>());
    for (const auto& n : names) csv += "," + csv_double(r.row["residuals"][n].get<double>());
    csv += "\n";
  }
  return csv;
}

double grid_axis_mid(const AxisGrid& a) { return 0.5 * (a.min + a.max); }

}  // namespace

int GridSpec::total() const {
  int n = 1;
  for (const auto& a : axes) n *= std::max(a.count, 1);
  return n;
}

Point4 GridSpec::point(int index) const {
  Point4 x{};
  int counts[4];
  for (int i = 0; i < 4; ++i) counts[i] = std::max(axes[i].count, 1);
  int rem = index;
  for (int i = 3; i >= 0; --i) {
    const int k = rem % counts[i];
    rem /= counts[i];
    const AxisGrid& a = axes[i];
    x[i] = a.count <= 1 ? grid_axis_mid(a)
                        : a.min + (a.max - a.min) * k / static_cast<double>(a.count - 1);
  }
  return x;
}

GridSpec GridSpec::default_grid() {
  GridSpec g;
  g.axes[0] = {0.1, 0.9, 5};
  g.axes[1] = {0.1, 0.9, 5};
  g.axes[2] = {0.5, 0.5, 1};
  g.axes[3] = {0.5, 0.5, 1};
  return g;
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PRAK_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::min(n, 256);
}

RunConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("catalog")) cfg.catalog = doc["catalog"].get<std::string>();
    if (doc.contains("metric")) {
      const auto& m = doc["metric"];
      if (!m.is_array() || m.size() != 10)
        throw ConfigError("metric must be an array of 10 upper-triangle expression strings");
      std::array<std::string, 10> exprs;
      for (int i = 0; i < 10; ++i) exprs[i] = m[i].get<std::string>();
      cfg.metric_exprs = exprs;
    }
    auto read_field = [&](const char* key) -> std::optional<std::array<std::string, 4>> {
      if (!doc.contains(key)) return std::nullopt;
      const auto& f = doc[key];
      if (!f.is_array() || f.size() != 4)
        throw ConfigError(std::string(key) + " must be an array of 4 expression strings");
      std::array<std::string, 4> exprs;
      for (int i = 0; i < 4; ++i) exprs[i] = f[i].get<std::string>();
      return exprs;
    };
    cfg.field_exprs = read_field("field");
    cfg.beta_exprs = read_field("beta");

    if (doc.contains("variant")) {
      const auto name = doc["variant"].get<std::string>();
      const auto v = variant_from_name(name);
      if (!v) throw ConfigError("unknown variant '" + name + "'");
      cfg.variant = *v;
    }
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      for (int i = 0; i < 4; ++i) {
        const std::string key = "x" + std::to_string(i);
        if (!g.contains(key)) continue;
        const auto& a = g[key];
        AxisGrid ax;
        ax.min = a.value("min", 0.0);
        ax.max = a.value("max", ax.min);
        ax.count = a.value("count", 1);
        if (ax.count < 1) throw ConfigError("grid count must be >= 1 on axis " + key);
        cfg.grid.axes[i] = ax;
      }
    }
    if (doc.contains("tolerances")) {
      const auto& t = doc["tolerances"];
      cfg.tol.residual = t.value("residual", cfg.tol.residual);
      cfg.tol.curvature_zero = t.value("curvature_zero", cfg.tol.curvature_zero);
      cfg.tol.curvature_nonzero = t.value("curvature_nonzero", cfg.tol.curvature_nonzero);
      if (!(cfg.tol.residual > 0)) throw ConfigError("tolerances.residual must be positive");
      if (!(cfg.tol.curvature_zero < cfg.tol.curvature_nonzero))
        throw ConfigError("curvature_zero must be below curvature_nonzero");
    }
    if (doc.contains("algebra")) {
      const auto& a = doc["algebra"];
      cfg.a = a.value("a", cfg.a);
      cfg.c = a.value("c", cfg.c);
      cfg.corrupt_h01 = a.value("corrupt_h01", 0.0);
      if (a.contains("alpha")) {
        const auto& al = a["alpha"];
        if (!al.is_array() || al.size() != 3)
          throw ConfigError("algebra.alpha must be an array of 3 numbers");
        for (int i = 0; i < 3; ++i) cfg.alpha[i] = al[i].get<double>();
      }
    }
    if (doc.contains("fd_step")) {
      cfg.fd_step = doc["fd_step"].get<double>();
      if (!(cfg.fd_step > 0)) throw ConfigError("fd_step must be positive");
    }
    if (doc.contains("aliases")) cfg.aliases = doc["aliases"].get<std::string>();
    if (doc.contains("trials")) {
      cfg.trials = doc["trials"].get<int>();
      if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    }
    if (doc.contains("solution")) {
      const auto& s = doc["solution"];
      for (auto it = s.begin(); it != s.end(); ++it) {
        if (it.value().is_string())
          cfg.solution_exprs[it.key()] = it.value().get<std::string>();
        else if (it.value().is_number())
          cfg.solution_params[it.key()] = it.value().get<double>();
        else if (it.key() == "direction" && it.value().is_array() && it.value().size() == 3) {
          cfg.solution_params["b1"] = it.value()[0].get<double>();
          cfg.solution_params["b2"] = it.value()[1].get<double>();
          cfg.solution_params["b3"] = it.value()[2].get<double>();
        } else {
          throw ConfigError("solution." + it.key() + " must be an expression string or a number");
        }
      }
    }
    if (doc.contains("trace")) {
      const auto& t = doc["trace"];
      if (t.contains("start")) {
        const auto& st = t["start"];
        if (!st.is_array() || st.size() != 4)
          throw ConfigError("trace.start must be an array of 4 coordinates");
        Point4 p{};
        for (int i = 0; i < 4; ++i) p[i] = st[i].get<double>();
        cfg.trace_start = p;
      }
      cfg.trace_dtau = t.value("dtau", cfg.trace_dtau);
      cfg.trace_steps = t.value("steps", cfg.trace_steps);
      if (cfg.trace_steps < 1) throw ConfigError("trace.steps must be >= 1");
      if (cfg.trace_dtau == 0.0) throw ConfigError("trace.dtau must be nonzero");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

Json echo_config(const RunConfig& cfg) {
  Json j;
  if (cfg.catalog) j["catalog"] = *cfg.catalog;
  if (cfg.metric_exprs) j["metric"] = *cfg.metric_exprs;
  if (cfg.field_exprs) j["field"] = *cfg.field_exprs;
  if (cfg.beta_exprs) j["beta"] = *cfg.beta_exprs;
  j["variant"] = std::string(variant_name(cfg.variant));
  Json grid;
  for (int i = 0; i < 4; ++i) {
    Json a;
    a["min"] = cfg.grid.axes[i].min;
    a["max"] = cfg.grid.axes[i].max;
    a["count"] = cfg.grid.axes[i].count;
    grid["x" + std::to_string(i)] = std::move(a);
  }
  j["grid"] = std::move(grid);
  j["tolerances"] = {{"residual", cfg.tol.residual},
                     {"curvature_zero", cfg.tol.curvature_zero},
                     {"curvature_nonzero", cfg.tol.curvature_nonzero}};
  j["algebra"] = {{"a", cfg.a}, {"c", cfg.c}, {"alpha", cfg.alpha}, {"corrupt_h01", cfg.corrupt_h01}};
  j["fd_step"] = cfg.fd_step;
  j["aliases"] = cfg.aliases;
  j["trials"] = cfg.trials;
  if (!cfg.solution_exprs.empty() || !cfg.solution_params.empty()) {
    Json s;
    for (const auto& [k, v] : cfg.solution_exprs) s[k] = v;
    for (const auto& [k, v] : cfg.solution_params) s[k] = v;
    j["solution"] = std::move(s);
  }
  Json tr;
  if (cfg.trace_start) tr["start"] = point_json(*cfg.trace_start);
  tr["dtau"] = cfg.trace_dtau;
  tr["steps"] = cfg.trace_steps;
  j["trace"] = std::move(tr);
  return j;
}

SolutionSpec build_solution(std::string_view name, const RunConfig& cfg) {
  auto expr = [&](const char* key, const char* fallback, const AliasSet& aliases) {
    auto it = cfg.solution_exprs.find(key);
    return ScalarField::parse(it != cfg.solution_exprs.end() ? it->second : fallback, aliases);
  };
  auto param = [&](const char* key, double fallback) {
    auto it = cfg.solution_params.find(key);
    return it != cfg.solution_params.end() ? it->second : fallback;
  };
  const AliasSet s_alias = AliasSet::single("s");
  const AliasSet coords = AliasSet::cylindrical();

  if (name == "minkowski-cone")
    return minkowski_lightcone(param("b1", 0.6), param("b2", 0.8), param("b3", 0.0));
  if (name == "cyl-sys32")
    return cylindrical_sys32(expr("W", "2 + s^2", s_alias), expr("rho", "r", coords),
                             expr("tau", "t", coords), param("p", 1.0));
  if (name == "cyl-sys19a")
    return cylindrical_sys19a(expr("W", "1/(2 + s^2)", s_alias), expr("f", "r", coords),
                              expr("phi", "t", coords), param("c", 1.0));
  return make_catalog_entry(name);  // throws with the list of names
}

CommandResult cmd_decompose(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  const GridSpec& grid = cfg.grid;

  auto rows = run_sweep(grid, [&](int i) {
    const Point4 x = grid.point(i);
    const SymMetric4 gx = check_signature(prob.metric.value(x));
    const LowerTriangular4 A = triangular_factor(gx);
    const LowerTriangular4 B = invert_lower_triangular(A);
    const double resid = (A.mat() * Mat4::eta() * A.mat().transposed() - gx.mat()).max_abs();
    Json r;
    r["index"] = i;
    r["x"] = point_json(x);
    r["A"] = mat_json(A.mat());
    r["B"] = mat_json(B.mat());
    r["residual"] = resid;
    return r;
  });

  double max_resid = 0.0;
  for (const auto& r : rows)
    if (r.ok) max_resid = std::max(max_resid, r.row["residual"].get<double>());

  std::string csv = "index,x0,x1,x2,x3,residual\n";
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const auto& r = rows[i];
    if (!r.ok) continue;
    const Point4 x = grid.point(i);
    csv += std::to_string(i);
    for (double xv : x) csv += "," + csv_double(xv);
    csv += "," + csv_double(r.row["residual"].get<double>()) + "\n";
  }

  Json report;
  report["meta"] = meta_json("decompose", cfg);
  report["points"] = sweep_points_json(rows);
  report["unevaluable"] = unevaluable_json(grid, rows);
  const bool all_ok = evaluable_count(rows) == grid.total();
  report["summary"] = {{"max_factorization_residual", max_resid}, {"pass", all_ok}};

  // a signature failure anywhere is a configuration-level problem here
  return {std::move(report), std::move(csv), all_ok ? 0 : 2};
}

CommandResult cmd_algebra_report(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  const GridSpec& grid = cfg.grid;
  AlgebraParams params{cfg.a, cfg.c, cfg.alpha};
  params.validate();

  std::vector<std::string> names;
  auto rows = run_sweep(grid, [&](int i) {
    const Point4 x = grid.point(i);
    const SymMetric4 gx = check_signature(prob.metric.value(x));
    AlgebraPoint pt = build_algebra_point(gx, params);
    if (cfg.corrupt_h01 != 0.0) pt.h(0, 1) += cfg.corrupt_h01;
    const ResidualReport rep =
        algebra_identity_report(pt, gx, cfg.trials, 0x5eed + static_cast<std::uint64_t>(i));
    Json r;
    r["index"] = i;
    r["x"] = point_json(x);
    Json res;
    for (const auto& e : rep.entries) res[e.name] = e.value;
    r["residuals"] = std::move(res);
    r["max"] = rep.max_value();
    return r;
  });

  double max_res = 0.0;
  Json per_name;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    max_res = std::max(max_res, r.row["max"].get<double>());
    for (auto it = r.row["residuals"].begin(); it != r.row["residuals"].end(); ++it) {
      const double v = it.value().get<double>();
      if (!per_name.contains(it.key()) || per_name[it.key()].get<double>() < v)
        per_name[it.key()] = v;
    }
  }

  const bool pass = evaluable_count(rows) > 0 && max_res <= cfg.tol.residual;
  Json report;
  report["meta"] = meta_json("algebra-report", cfg);
  report["points"] = sweep_points_json(rows);
  report["unevaluable"] = unevaluable_json(grid, rows);
  report["summary"] = {{"max_residual", max_res},
                       {"per_identity_max", per_name},
                       {"tolerance", cfg.tol.residual},
                       {"pass", pass}};

  const int exit_code = evaluable_count(rows) == 0 ? 2 : (pass ? 0 : 1);
  return {std::move(report), "", exit_code};
}

namespace {

// shared by cmd_residuals and cmd_verify_solution
struct ResidualSweep {
  std::vector<SweepRow> rows;
  std::vector<std::string> names;
  double max_residual = 0.0;
  double max_normalized = 0.0;
  double max_eq20 = 0.0;
  double max_eq21 = 0.0;
  Json per_equation;
};

ResidualSweep residual_sweep(const MetricField& metric, const VectorField4& u,
                             const VectorField4& beta, CrVariant variant, const GridSpec& grid,
                             double a, double c, bool add_geodesic) {
  ResidualSweep out;
  out.rows = run_sweep(grid, [&](int i) {
    const Point4 x = grid.point(i);
    ResidualSample s = residuals_at(variant, u, beta, metric, a, c, x);
    if (add_geodesic) {
      const Vec4 geo = null_geodesic_residual(beta, metric, x);
      for (int k = 0; k < 4; ++k)
        s.residuals.emplace_back("17." + std::to_string(k + 1), std::abs(geo[k]));
    }
    Json r;
    r["index"] = i;
    r["x"] = point_json(x);
    Json res;
    for (const auto& [n, v] : s.residuals) res[n] = v;
    r["residuals"] = std::move(res);
    r["eq20"] = s.eq20;
    r["eq21"] = s.eq21;
    r["scale"] = s.scale;
    r["max"] = s.max_residual();
    r["max_normalized"] = s.max_residual() / s.scale;
    return r;
  });

  for (const auto& r : out.rows) {
    if (!r.ok) continue;
    if (out.names.empty())
      for (auto it = r.row["residuals"].begin(); it != r.row["residuals"].end(); ++it)
        out.names.push_back(it.key());
    out.max_residual = std::max(out.max_residual, r.row["max"].get<double>());
    out.max_normalized = std::max(out.max_normalized, r.row["max_normalized"].get<double>());
    out.max_eq20 = std::max(out.max_eq20, r.row["eq20"].get<double>());
    out.max_eq21 = std::max(out.max_eq21, r.row["eq21"].get<double>());
    for (auto it = r.row["residuals"].begin(); it != r.row["residuals"].end(); ++it) {
      const double v = it.value().get<double>();
      if (!out.per_equation.contains(it.key()) || out.per_equation[it.key()].get<double>() < v)
        out.per_equation[it.key()] = v;
    }
  }
  return out;
}

struct CurvatureSweep {
  std::vector<SweepRow> rows;
  double max_abs = 0.0;
  double max_antisymmetry = 0.0;
  double max_bianchi = 0.0;
  double max_pair_symmetry = 0.0;
};

CurvatureSweep curvature_sweep(const MetricField& metric, const GridSpec& grid, double fd_step) {
  CurvatureSweep out;
  out.rows = run_sweep(grid, [&](int i) {
    const Point4 x = grid.point(i);
    const RiemannAt R = riemann_at(metric, x, fd_step);
    // fully lowered tensor for the pair symmetry defect
    const Mat4 gx = metric.value(x);
    double pair = 0.0;
    double low[4][4][4][4];
    for (int a = 0; a < 4; ++a)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double s = 0.0;
            for (int m = 0; m < 4; ++m) s += gx(a, m) * R.at(m, j, k, l);
            low[a][j][k][l] = s;
          }
    for (int a = 0; a < 4; ++a)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            pair = std::max(pair, std::abs(low[a][j][k][l] - low[k][l][a][j]));

    Json r;
    r["index"] = i;
    r["x"] = point_json(x);
    r["max_abs"] = R.max_abs();
    r["antisymmetry"] = R.antisymmetry_residual();
    r["bianchi"] = R.bianchi_residual();
    r["pair_symmetry"] = pair;
    return r;
  });
  for (const auto& r : out.rows) {
    if (!r.ok) continue;
    out.max_abs = std::max(out.max_abs, r.row["max_abs"].get<double>());
    out.max_antisymmetry = std::max(out.max_antisymmetry, r.row["antisymmetry"].get<double>());
    out.max_bianchi = std::max(out.max_bianchi, r.row["bianchi"].get<double>());
    out.max_pair_symmetry = std::max(out.max_pair_symmetry, r.row["pair_symmetry"].get<double>());
  }
  return out;
}

std::string classify_curvature(double max_abs, const Tolerances& tol) {
  if (max_abs <= tol.curvature_zero) return "zero";
  if (max_abs >= tol.curvature_nonzero) return "nonzero";
  return "indeterminate";
}

constexpr double kTraceTransportTol = 1e-6;
constexpr double kTraceIsotropyTol = 1e-8;

}  // namespace

CommandResult cmd_residuals(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  const bool needs_separate_beta =
      cfg.variant == CrVariant::sys13 || cfg.variant == CrVariant::sys13a;
  if (!needs_separate_beta && prob.beta)
    throw ConfigError("variant " + std::string(variant_name(cfg.variant)) +
                      " tests the beta field itself; drop the separate beta entry");
  const VectorField4& beta = prob.beta ? *prob.beta : prob.field;

  ResidualSweep sw = residual_sweep(prob.metric, prob.field, beta, cfg.variant, cfg.grid, cfg.a,
                                    cfg.c, false);
  const double overall = std::max({sw.max_residual, sw.max_eq20, sw.max_eq21});
  const int evaluable = evaluable_count(sw.rows);
  const bool pass = evaluable > 0 && overall <= cfg.tol.residual;

  std::string csv = residual_table(cfg.grid, sw.rows, sw.names);

  Json report;
  report["meta"] = meta_json("residuals", cfg);
  report["points"] = sweep_points_json(sw.rows);
  report["unevaluable"] = unevaluable_json(cfg.grid, sw.rows);
  report["summary"] = {{"variant", std::string(variant_name(cfg.variant))},
                       {"max_residual", sw.max_residual},
                       {"max_normalized", sw.max_normalized},
                       {"max_eq20", sw.max_eq20},
                       {"max_eq21", sw.max_eq21},
                       {"per_equation_max", sw.per_equation},
                       {"tolerance", cfg.tol.residual},
                       {"evaluable_points", evaluable},
                       {"pass", pass}};
  const int exit_code = evaluable == 0 ? 2 : (pass ? 0 : 1);
  return {std::move(report), std::move(csv), exit_code};
}

namespace {

CommandResult obstruction_report(const RunConfig& cfg) {
  const double theta_lo = M_PI / 6, theta_hi = M_PI / 2;
  const int samples = 181;
  Json families = Json::array();
  bool pass = true;
  for (double H : {1.5, 2.0, 3.0, 5.0}) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int i = 0; i < samples; ++i) {
      const double th = theta_lo + (theta_hi - theta_lo) * i / (samples - 1);
      const double v = spherical_obstruction_value(H, th);
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const double variation = hi - lo;
    const bool witnessed = variation > 0.01;
    pass = pass && witnessed;
    families.push_back(Json{{"H", H}, {"variation", variation}, {"non_constant", witnessed}});
  }
  Json report;
  report["meta"] = meta_json("verify-solution", cfg);
  report["solution"] = "spherical-obstruction";
  report["anchors"] = {{"F(pi/4;2)", spherical_obstruction_value(2.0, M_PI / 4)},
                       {"F(pi/3;2)", spherical_obstruction_value(2.0, M_PI / 3)}};
  report["families"] = std::move(families);
  report["summary"] = {
      {"pass", pass},
      {"note", "the ratio varies with theta, so no spherically symmetric solution exists"}};
  return {std::move(report), "", pass ? 0 : 1};
}

}  // namespace

CommandResult cmd_verify_solution(const std::string& name, const RunConfig& cfg_in) {
  if (name == "spherical-obstruction") return obstruction_report(cfg_in);

  SolutionSpec spec = build_solution(name, cfg_in);
  RunConfig cfg = cfg_in;
  cfg.variant = spec.target_system;  // the echo reflects the system actually run
  const GridSpec& grid = cfg.grid;

  ResidualSweep sw = residual_sweep(spec.metric, spec.field, spec.field, spec.target_system, grid,
                                    cfg.a, cfg.c, true);
  CurvatureSweep curv = curvature_sweep(spec.metric, grid, cfg.fd_step);
  const int curv_evaluable = evaluable_count(curv.rows);
  const std::string curv_class = classify_curvature(curv.max_abs, cfg.tol);
  const std::string expected =
      spec.expected_curvature == CurvatureClass::zero ? "zero" : "nonzero";

  Point4 start{};
  if (cfg.trace_start) {
    start = *cfg.trace_start;
  } else {
    for (int i = 0; i < 4; ++i) start[i] = grid_axis_mid(grid.axes[i]);
  }
  Json trace_json;
  double max_transport = 0.0, max_isotropy = 0.0;
  bool trace_ok = true;
  std::string trace_error;
  try {
    const CurveTrace trace =
        trace_isotropic_curve(spec.field, spec.metric, start, cfg.trace_dtau, cfg.trace_steps);
    max_transport = trace.max_transport();
    max_isotropy = trace.max_isotropy();
    trace_ok = max_transport <= kTraceTransportTol && max_isotropy <= kTraceIsotropyTol;
    trace_json = {{"start", point_json(start)},
                  {"dtau", cfg.trace_dtau},
                  {"steps", cfg.trace_steps},
                  {"max_transport", max_transport},
                  {"max_isotropy", max_isotropy},
                  {"pass", trace_ok}};
  } catch (const Error& e) {
    trace_ok = false;
    trace_error = e.what();
    trace_json = {{"start", point_json(start)}, {"error", trace_error}, {"pass", false}};
  }

  const double overall = std::max({sw.max_residual, sw.max_eq20, sw.max_eq21});
  const int evaluable = evaluable_count(sw.rows);
  const bool residual_pass = evaluable == grid.total() && overall <= cfg.tol.residual;
  // a classification over a partial grid proves nothing
  const bool curvature_pass = curv_evaluable == grid.total() && curv_class == expected;
  const bool pass = residual_pass && curvature_pass && trace_ok;

  std::string csv = residual_table(grid, sw.rows, sw.names);

  Json report;
  report["meta"] = meta_json("verify-solution", cfg);
  report["solution"] = spec.name;
  report["points"] = sweep_points_json(sw.rows);
  report["unevaluable"] = unevaluable_json(grid, sw.rows);
  report["curvature"] = {{"max_abs", curv.max_abs},
                         {"antisymmetry", curv.max_antisymmetry},
                         {"bianchi", curv.max_bianchi},
                         {"pair_symmetry", curv.max_pair_symmetry},
                         {"classification", curv_class},
                         {"expected", expected},
                         {"evaluable_points", curv_evaluable},
                         {"unevaluable", unevaluable_json(grid, curv.rows)},
                         {"pass", curvature_pass}};
  report["trace"] = std::move(trace_json);
  report["summary"] = {{"system", std::string(variant_name(spec.target_system))},
                       {"max_residual", sw.max_residual},
                       {"max_normalized", sw.max_normalized},
                       {"max_eq20", sw.max_eq20},
                       {"max_eq21", sw.max_eq21},
                       {"per_equation_max", sw.per_equation},
                       {"tolerance", cfg.tol.residual},
                       {"residual_pass", residual_pass},
                       {"curvature_pass", curvature_pass},
                       {"trace_pass", trace_ok},
                       {"pass", pass}};
  const int exit_code = evaluable == 0 ? 2 : (pass ? 0 : 1);
  return {std::move(report), std::move(csv), exit_code};
}

CommandResult cmd_curvature(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  CurvatureSweep curv = curvature_sweep(prob.metric, cfg.grid, cfg.fd_step);
  const int evaluable = evaluable_count(curv.rows);
  const std::string curv_class = classify_curvature(curv.max_abs, cfg.tol);
  const bool consistent = curv.max_antisymmetry <= 1e-8 && curv.max_bianchi <= 1e-8;
  const bool pass = evaluable > 0 && consistent;

  std::string csv = "index,x0,x1,x2,x3,max_abs,antisymmetry,bianchi,pair_symmetry\n";
  for (int i = 0; i < static_cast<int>(curv.rows.size()); ++i) {
    const auto& r = curv.rows[i];
    if (!r.ok) continue;
    const Point4 x = cfg.grid.point(i);
    csv += std::to_string(i);
    for (double xv : x) csv += "," + csv_double(xv);
    csv += "," + csv_double(r.row["max_abs"].get<double>());
    csv += "," + csv_double(r.row["antisymmetry"].get<double>());
    csv += "," + csv_double(r.row["bianchi"].get<double>());
    csv += "," + csv_double(r.row["pair_symmetry"].get<double>()) + "\n";
  }

  Json report;
  report["meta"] = meta_json("curvature", cfg);
  report["points"] = sweep_points_json(curv.rows);
  report["unevaluable"] = unevaluable_json(cfg.grid, curv.rows);
  report["summary"] = {{"max_abs", curv.max_abs},
                       {"antisymmetry", curv.max_antisymmetry},
                       {"bianchi", curv.max_bianchi},
                       {"pair_symmetry", curv.max_pair_symmetry},
                       {"classification", curv_class},
                       {"pass", pass}};
  const int exit_code = evaluable == 0 ? 2 : (pass ? 0 : 1);
  return {std::move(report), std::move(csv), exit_code};
}

}  // namespace prak
