#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "prak/crsys.hpp"
#include "prak/solutions.hpp"

namespace prak {

using Json = nlohmann::ordered_json;

struct AxisGrid {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

/// Cartesian evaluation grid; indices run with x3 fastest.
struct GridSpec {
  std::array<AxisGrid, 4> axes;

  int total() const;
  Point4 point(int index) const;

  /// (x0, x1) in [0.1, 0.9] with 5 samples each, x2 = x3 = 0.5 fixed.
  static GridSpec default_grid();
};

struct Tolerances {
  double residual = 1e-8;
  double curvature_zero = 1e-6;
  double curvature_nonzero = 1e-4;
};

inline constexpr double kDefaultFdStep = 1e-4;

/// Parsed configuration document. Either `catalog` or `metric`+`field`
/// describe the problem; `beta` supplies a separate direction field for the
/// sys13/sys13a variants.
struct RunConfig {
  std::optional<std::string> catalog;
  std::optional<std::array<std::string, 10>> metric_exprs;
  std::optional<std::array<std::string, 4>> field_exprs;
  std::optional<std::array<std::string, 4>> beta_exprs;
  CrVariant variant = CrVariant::sys32;
  GridSpec grid = GridSpec::default_grid();
  Tolerances tol;
  double a = 1.0;
  double c = 1.0;
  std::array<double, 3> alpha{0.6, 0.8, 0.0};
  double corrupt_h01 = 0.0;  // fault injection for the identity battery
  double fd_step = kDefaultFdStep;  // curvature stencil width
  std::string aliases = "cylindrical";
  int trials = 32;
  std::map<std::string, std::string> solution_exprs;
  std::map<std::string, double> solution_params;
  std::optional<Point4> trace_start;
  double trace_dtau = 0.01;
  int trace_steps = 100;
};

RunConfig parse_config(const Json& doc);
Json echo_config(const RunConfig& cfg);

/// Builds a catalog solution with the overrides from the config applied.
SolutionSpec build_solution(std::string_view name, const RunConfig& cfg);

struct CommandResult {
  Json report;
  std::string table;  // CSV rows; empty when the command emits none
  int exit_code = 0;  // 0 all checks pass, 1 residual failure, 2 config/domain error
};

CommandResult cmd_decompose(const RunConfig& cfg);
CommandResult cmd_algebra_report(const RunConfig& cfg);
CommandResult cmd_residuals(const RunConfig& cfg);
CommandResult cmd_verify_solution(const std::string& name, const RunConfig& cfg);
CommandResult cmd_curvature(const RunConfig& cfg);

/// Worker count for grid sweeps: hardware concurrency capped by PRAK_THREADS.
int worker_count();

}  // namespace prak
