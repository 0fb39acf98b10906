#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>

#include "prak/runner.hpp"

using namespace prak;

namespace {

Json minkowski_config() {
  Json doc;
  doc["metric"] = {"1", "0", "0", "0", "-1", "0", "0", "-1", "0", "-1"};
  doc["field"] = {"1", "0.6", "0.8", "0"};
  doc["variant"] = "sys32";
  return doc;
}

Json strip_timestamp(Json report) {
  report["meta"].erase("timestamp");
  return report;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const RunConfig cfg = parse_config(minkowski_config());
  CHECK(cfg.metric_exprs.has_value());
  CHECK(cfg.variant == CrVariant::sys32);
  CHECK(cfg.grid.total() == 25);
  CHECK(cfg.tol.residual == 1e-8);

  CHECK_THROWS_AS(parse_config(Json::array()), ConfigError);
  Json bad = minkowski_config();
  bad["variant"] = "sys99";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = minkowski_config();
  bad["metric"] = {"1", "0"};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = minkowski_config();
  bad["grid"]["x0"] = {{"min", 0.0}, {"max", 1.0}, {"count", 0}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = minkowski_config();
  bad["tolerances"] = {{"residual", -1.0}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("grid enumeration is deterministic and ordered") {
  GridSpec g;
  g.axes[0] = {0.0, 1.0, 3};
  g.axes[1] = {0.0, 1.0, 2};
  g.axes[2] = {0.7, 0.7, 1};
  g.axes[3] = {0.2, 0.9, 1};
  CHECK(g.total() == 6);
  CHECK(g.point(0) == Point4{0.0, 0.0, 0.7, 0.55});
  CHECK(g.point(1) == Point4{0.0, 1.0, 0.7, 0.55});
  CHECK(g.point(5) == Point4{1.0, 1.0, 0.7, 0.55});
}

TEST_CASE("decompose command") {
  const CommandResult r = cmd_decompose(parse_config(minkowski_config()));
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["pass"] == true);
  CHECK(r.report["points"].size() == 25);
  // identity factor everywhere in flat space
  CHECK(r.report["points"][0]["A"][0][0] == 1.0);
  CHECK(r.report["points"][0]["residual"] == 0.0);

  Json catalog;
  catalog["catalog"] = "cyl-sys32";
  const CommandResult rc = cmd_decompose(parse_config(catalog));
  CHECK(rc.exit_code == 0);
  CHECK(rc.report["summary"]["max_factorization_residual"].get<double>() <= 1e-12);

  // euclidean signature is rejected naming the 2x2 minor
  Json bad = minkowski_config();
  bad["metric"] = {"1", "0", "0", "0", "1", "0", "0", "1", "0", "1"};
  const CommandResult rb = cmd_decompose(parse_config(bad));
  CHECK(rb.exit_code == 2);
  REQUIRE(!rb.report["unevaluable"].empty());
  const std::string reason = rb.report["unevaluable"][0]["reason"].get<std::string>();
  CHECK(reason.find("2x2") != std::string::npos);
}

TEST_CASE("algebra-report command") {
  const CommandResult r = cmd_algebra_report(parse_config(minkowski_config()));
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["pass"] == true);

  Json corrupted = minkowski_config();
  corrupted["algebra"] = {{"a", 1.0}, {"c", 1.0}, {"corrupt_h01", 1e-3}};
  const CommandResult rc = cmd_algebra_report(parse_config(corrupted));
  CHECK(rc.exit_code == 1);
  CHECK(rc.report["summary"]["pass"] == false);
}

TEST_CASE("residuals command") {
  // the light cone passes sys32 with all-zero residuals
  const CommandResult cone = cmd_residuals(parse_config(minkowski_config()));
  CHECK(cone.exit_code == 0);
  CHECK(cone.report["summary"]["max_residual"].get<double>() == 0.0);

  Json doc;
  doc["catalog"] = "cyl-sys32";
  doc["variant"] = "sys32";
  const CommandResult r = cmd_residuals(parse_config(doc));
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["max_residual"].get<double>() <= 1e-8);
  CHECK(r.report["points"].size() == 25);

  // table: header + 25 rows, 17-significant-digit floats
  CHECK(!r.table.empty());
  CHECK(r.table.find("index,x0,x1,x2,x3,eq20,eq21,scale") == 0);

  // cross-system evaluation reports residuals without failing the run
  doc["variant"] = "sys19a";
  const CommandResult r2 = cmd_residuals(parse_config(doc));
  CHECK(r2.report["points"].size() == 25);

  // a cone on the wrong variant input: separate beta rejected for sys32
  Json bad = minkowski_config();
  bad["beta"] = {"1", "0.6", "0.8", "0"};
  CHECK_THROWS_AS(cmd_residuals(parse_config(bad)), ConfigError);
}

TEST_CASE("residuals with a separate beta field") {
  Json doc = minkowski_config();
  doc["variant"] = "sys13";
  doc["beta"] = {"1", "0.6", "0.8", "0"};
  doc["field"] = {"0.3", "0.18", "0.24", "0"};  // 0.3 * beta, also a solution
  const CommandResult r = cmd_residuals(parse_config(doc));
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["max_residual"].get<double>() == 0.0);
}

TEST_CASE("verify-solution command") {
  const RunConfig cfg = parse_config(Json::object());
  const CommandResult cone = cmd_verify_solution("minkowski-cone", cfg);
  CHECK(cone.exit_code == 0);
  CHECK(cone.report["summary"]["pass"] == true);
  CHECK(cone.report["curvature"]["classification"] == "zero");

  const CommandResult c32 = cmd_verify_solution("cyl-sys32", cfg);
  CHECK(c32.exit_code == 0);
  CHECK(c32.report["curvature"]["classification"] == "nonzero");
  CHECK(c32.report["summary"]["max_residual"].get<double>() <= 1e-8);

  const CommandResult c19 = cmd_verify_solution("cyl-sys19a", cfg);
  CHECK(c19.exit_code == 0);
  CHECK(c19.report["curvature"]["classification"] == "zero");

  const CommandResult obs = cmd_verify_solution("spherical-obstruction", cfg);
  CHECK(obs.exit_code == 0);
  CHECK(obs.report["summary"]["pass"] == true);

  CHECK_THROWS_AS(cmd_verify_solution("nope", cfg), ConfigError);
}

TEST_CASE("verify-solution is deterministic") {
  const RunConfig cfg = parse_config(Json::object());
  const CommandResult a = cmd_verify_solution("cyl-sys32", cfg);
  const CommandResult b = cmd_verify_solution("cyl-sys32", cfg);
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(strip_timestamp(a.report).dump() == strip_timestamp(b.report).dump());
  CHECK(a.table == b.table);
}

TEST_CASE("curvature command") {
  Json doc;
  doc["catalog"] = "cyl-sys32";
  const CommandResult r = cmd_curvature(parse_config(doc));
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["classification"] == "nonzero");
  CHECK(r.report["summary"]["max_abs"].get<double>() >= 1e-4);
  CHECK(r.report["summary"]["bianchi"].get<double>() <= 1e-8);

  Json flat = minkowski_config();
  const CommandResult rf = cmd_curvature(parse_config(flat));
  CHECK(rf.report["summary"]["classification"] == "zero");
  CHECK(rf.report["summary"]["max_abs"].get<double>() == 0.0);

  // flat polar metric: curvilinear but flat
  Json polar;
  polar["metric"] = {"1", "0", "0", "0", "-1", "0", "0", "-(x1^2)", "0", "-1"};
  polar["field"] = {"1", "0", "0", "0"};
  const CommandResult rp = cmd_curvature(parse_config(polar));
  CHECK(rp.report["summary"]["max_abs"].get<double>() <= 1e-7);
  CHECK(rp.report["summary"]["classification"] == "zero");
}

TEST_CASE("solution overrides flow through the config") {
  Json doc;
  doc["solution"] = {{"W", "3 + s^2"}, {"p", 2.0}};
  const RunConfig cfg = parse_config(doc);
  const CommandResult r = cmd_verify_solution("cyl-sys32", cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report["summary"]["max_residual"].get<double>() <= 1e-8);
}

TEST_CASE("summary maxima equal the maxima over rows") {
  Json doc;
  doc["catalog"] = "cyl-sys32";
  doc["variant"] = "sys32";
  const CommandResult r = cmd_residuals(parse_config(doc));
  double row_max = 0.0, row_eq20 = 0.0, row_eq21 = 0.0;
  for (const auto& p : r.report["points"]) {
    row_max = std::max(row_max, p["max"].get<double>());
    row_eq20 = std::max(row_eq20, p["eq20"].get<double>());
    row_eq21 = std::max(row_eq21, p["eq21"].get<double>());
  }
  CHECK(r.report["summary"]["max_residual"].get<double>() == row_max);
  CHECK(r.report["summary"]["max_eq20"].get<double>() == row_eq20);
  CHECK(r.report["summary"]["max_eq21"].get<double>() == row_eq21);
}

TEST_CASE("worker count respects PRAK_THREADS and does not change reports") {
  Json doc;
  doc["catalog"] = "cyl-sys32";
  doc["variant"] = "sys32";
  const RunConfig cfg = parse_config(doc);

  setenv("PRAK_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  CommandResult serial = cmd_residuals(cfg);
  setenv("PRAK_THREADS", "16", 1);
  CommandResult parallel = cmd_residuals(cfg);
  unsetenv("PRAK_THREADS");

  serial.report["meta"].erase("timestamp");
  parallel.report["meta"].erase("timestamp");
  CHECK(serial.report.dump() == parallel.report.dump());
  CHECK(serial.table == parallel.table);
}

TEST_CASE("unevaluable points are listed with reasons") {
  // beta^0 vanishes along x1 = 0.5 for this field
  Json doc = minkowski_config();
  doc["field"] = {"x1 - 0.5", "1", "0", "0"};
  doc["variant"] = "sys32";
  doc["grid"]["x1"] = {{"min", 0.5}, {"max", 0.5}, {"count", 1}};
  doc["grid"]["x0"] = {{"min", 0.1}, {"max", 0.9}, {"count", 3}};
  const CommandResult r = cmd_residuals(parse_config(doc));
  CHECK(r.exit_code == 2);  // nothing evaluable
  CHECK(r.report["unevaluable"].size() == 3);
  const std::string reason = r.report["unevaluable"][0]["reason"].get<std::string>();
  CHECK(reason.find("beta^0") != std::string::npos);
}
