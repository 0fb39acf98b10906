// prak command-line front end.
//
// Commands:
//   decompose        triangular factorization A eta A^T = g over a grid
//   algebra-report   identity battery of the pointwise algebra
//   residuals        Cauchy-Riemann-analogue residual sweep
//   verify-solution  full verification of a catalog solution
//   curvature        Riemann tensor magnitudes and consistency checks
//
// Reports are JSON (--out), tables are CSV (--table); exit code 0 means all
// checks passed, 1 a residual failure, 2 a configuration or domain error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prak/runner.hpp"
#include "prak/version.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string table_path;
  std::vector<std::string> grid_overrides;
  std::vector<std::string> tol_overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts.config_path, "JSON configuration document");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_path, "write the JSON report here");
  cmd->add_option("--table", opts.table_path, "write the CSV point table here");
  cmd->add_option("--grid-override", opts.grid_overrides,
                  "axis override, e.g. x1=0.1:0.9:5 (repeatable)");
  cmd->add_option("--tol", opts.tol_overrides,
                  "tolerance override, e.g. residual=1e-8 (repeatable)");
}

prak::Json load_config_document(const std::string& path) {
  if (path.empty()) return prak::Json::object();
  std::ifstream in(path);
  if (!in) throw prak::ConfigError("cannot open config file '" + path + "'");
  prak::Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw prak::ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return doc;
}

void apply_overrides(prak::RunConfig& cfg, const CommonOpts& opts) {
  for (const auto& ov : opts.grid_overrides) {
    // form: x<axis>=<min>:<max>:<count>
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq < 2 || ov[0] != 'x')
      throw prak::ConfigError("bad --grid-override '" + ov + "' (want x<axis>=min:max:count)");
    const int axis = ov[1] - '0';
    if (axis < 0 || axis > 3) throw prak::ConfigError("bad axis in --grid-override '" + ov + "'");
    double mn, mx;
    int count;
    if (std::sscanf(ov.c_str() + eq + 1, "%lf:%lf:%d", &mn, &mx, &count) != 3 || count < 1)
      throw prak::ConfigError("bad --grid-override '" + ov + "' (want x<axis>=min:max:count)");
    cfg.grid.axes[axis] = {mn, mx, count};
  }
  for (const auto& ov : opts.tol_overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw prak::ConfigError("bad --tol '" + ov + "' (want key=value)");
    const std::string key = ov.substr(0, eq);
    const double value = std::atof(ov.c_str() + eq + 1);
    if (value <= 0) throw prak::ConfigError("--tol value must be positive in '" + ov + "'");
    if (key == "residual")
      cfg.tol.residual = value;
    else if (key == "curvature_zero")
      cfg.tol.curvature_zero = value;
    else if (key == "curvature_nonzero")
      cfg.tol.curvature_nonzero = value;
    else
      throw prak::ConfigError("unknown --tol key '" + key + "'");
  }
}

void write_outputs(const prak::CommandResult& result, const CommonOpts& opts) {
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw prak::ConfigError("cannot write report to '" + opts.out_path + "'");
    out << result.report.dump(2) << "\n";
  }
  if (!opts.table_path.empty() && !result.table.empty()) {
    std::ofstream out(opts.table_path);
    if (!out) throw prak::ConfigError("cannot write table to '" + opts.table_path + "'");
    out << result.table;
  }
}

void print_summary(const prak::CommandResult& result) {
  const auto& rep = result.report;
  const std::string cmd = rep["meta"]["command"].get<std::string>();
  std::cout << "prak " << cmd;
  if (rep.contains("solution")) std::cout << " " << rep["solution"].get<std::string>();
  std::cout << "\n";
  if (rep.contains("unevaluable") && !rep["unevaluable"].empty()) {
    std::cout << "  unevaluable points: " << rep["unevaluable"].size() << "\n";
    for (const auto& u : rep["unevaluable"])
      std::cout << "    #" << u["index"] << ": " << u["reason"].get<std::string>() << "\n";
  }
  if (rep.contains("summary")) {
    for (auto it = rep["summary"].begin(); it != rep["summary"].end(); ++it) {
      if (it.key() == "per_equation_max" || it.key() == "per_identity_max") continue;
      std::cout << "  " << it.key() << ": " << it.value().dump() << "\n";
    }
  }
  std::cout << (result.exit_code == 0 ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointwise algebra and Cauchy-Riemann-analogue verification for signature "
               "(1,-1,-1,-1) metrics"};
  app.set_version_flag("--version", prak::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string solution_name;

  auto* decompose = app.add_subcommand("decompose", "factor the metric against eta on a grid");
  add_common(decompose, opts, true);
  auto* algebra = app.add_subcommand("algebra-report", "run the algebra identity battery");
  add_common(algebra, opts, true);
  auto* residuals = app.add_subcommand("residuals", "evaluate a residual system on a grid");
  add_common(residuals, opts, true);
  auto* verify = app.add_subcommand("verify-solution", "verify a catalog solution end to end");
  verify->add_option("name", solution_name, "catalog entry name")->required();
  add_common(verify, opts, false);
  auto* curvature = app.add_subcommand("curvature", "Riemann magnitudes over a grid");
  add_common(curvature, opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    prak::RunConfig cfg = prak::parse_config(load_config_document(opts.config_path));
    apply_overrides(cfg, opts);

    prak::CommandResult result;
    if (decompose->parsed())
      result = prak::cmd_decompose(cfg);
    else if (algebra->parsed())
      result = prak::cmd_algebra_report(cfg);
    else if (residuals->parsed())
      result = prak::cmd_residuals(cfg);
    else if (verify->parsed())
      result = prak::cmd_verify_solution(solution_name, cfg);
    else
      result = prak::cmd_curvature(cfg);

    write_outputs(result, opts);
    print_summary(result);
    return result.exit_code;
  } catch (const prak::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const prak::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
