// pybind11 bindings: the expression engine, the pointwise algebra and the
// verification commands. Reports cross the boundary as JSON strings; the
// python package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prak/runner.hpp"
#include "prak/version.hpp"

namespace py = pybind11;

namespace {

prak::AliasSet aliases_by_name(const std::string& name) {
  if (name == "cylindrical") return prak::AliasSet::cylindrical();
  if (name == "spherical") return prak::AliasSet::spherical();
  if (name == "none") return prak::AliasSet::none();
  if (name == "s") return prak::AliasSet::single("s");
  throw prak::ConfigError("unknown alias set '" + name + "'");
}

std::vector<std::vector<double>> mat_to_list(const prak::Mat4& m) {
  std::vector<std::vector<double>> rows(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rows[i][j] = m(i, j);
  return rows;
}

prak::Mat4 mat_from_list(const std::vector<std::vector<double>>& rows) {
  if (rows.size() != 4) throw prak::ConfigError("matrix needs 4 rows");
  prak::Mat4 m;
  for (int i = 0; i < 4; ++i) {
    if (rows[i].size() != 4) throw prak::ConfigError("matrix needs 4 columns per row");
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::pair<std::string, int> run_command(const std::string& command, const std::string& config_json,
                                        const std::string& solution_name) {
  const prak::RunConfig cfg = prak::parse_config(prak::Json::parse(config_json));
  prak::CommandResult result;
  if (command == "decompose")
    result = prak::cmd_decompose(cfg);
  else if (command == "algebra-report")
    result = prak::cmd_algebra_report(cfg);
  else if (command == "residuals")
    result = prak::cmd_residuals(cfg);
  else if (command == "verify-solution")
    result = prak::cmd_verify_solution(solution_name, cfg);
  else if (command == "curvature")
    result = prak::cmd_curvature(cfg);
  else
    throw prak::ConfigError("unknown command '" + command + "'");
  return {result.report.dump(), result.exit_code};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "4-dimensional pointwise algebra and Cauchy-Riemann-analogue verification";
  m.attr("__version__") = prak::kVersion;

  py::register_exception<prak::Error>(m, "PrakError");

  py::class_<prak::ScalarField>(m, "ScalarField")
      .def_static(
          "parse",
          [](const std::string& src, const std::string& aliases) {
            return prak::ScalarField::parse(src, aliases_by_name(aliases));
          },
          py::arg("src"), py::arg("aliases") = "cylindrical")
      .def_static("number", &prak::ScalarField::number)
      .def_static("variable", &prak::ScalarField::variable)
      .def("eval",
           [](const prak::ScalarField& f, const std::array<double, 4>& x) { return f.eval(x); })
      .def("derivative", &prak::ScalarField::derivative)
      .def("substitute", &prak::ScalarField::substitute)
      .def("__str__", &prak::ScalarField::str)
      .def("__repr__", [](const prak::ScalarField& f) { return "ScalarField(" + f.str() + ")"; });

  m.def(
      "decompose_metric",
      [](const std::vector<std::vector<double>>& g) {
        const prak::SymMetric4 gv = prak::check_signature(mat_from_list(g));
        const prak::LowerTriangular4 A = prak::triangular_factor(gv);
        const prak::LowerTriangular4 B = prak::invert_lower_triangular(A);
        py::dict out;
        out["A"] = mat_to_list(A.mat());
        out["B"] = mat_to_list(B.mat());
        out["residual"] =
            (A.mat() * prak::Mat4::eta() * A.mat().transposed() - gv.mat()).max_abs();
        return out;
      },
      py::arg("g"), "Triangular factorization A eta A^T = g with B = A^-1");

  m.def(
      "kappa",
      [](double a, double c, const std::array<double, 3>& alpha) {
        return mat_to_list(prak::kappa_matrix(a, c, alpha));
      },
      py::arg("a"), py::arg("c"), py::arg("alpha"));

  m.def("spherical_obstruction", &prak::spherical_obstruction_value, py::arg("H"),
        py::arg("theta"));

  m.def("catalog_names", [] { return prak::catalog_names(); });

  m.def("run_json", &run_command, py::arg("command"), py::arg("config_json") = "{}",
        py::arg("solution_name") = "",
        "Run a verification command; returns (report_json, exit_code)");
}
