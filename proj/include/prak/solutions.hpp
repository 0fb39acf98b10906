#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prak/crsys.hpp"
#include "prak/geometry.hpp"

namespace prak {

enum class CurvatureClass { zero, nonzero };

/// A closed-form (metric, field) pair together with the system it solves and
/// the curvature classification it should exhibit.
struct SolutionSpec {
  std::string name;
  MetricField metric;
  VectorField4 field;
  CrVariant target_system;
  CurvatureClass expected_curvature;
};

Box4 default_solution_check_box();

/// Flat metric with the constant isotropic direction (1, b1, b2, b3);
/// requires b1^2 + b2^2 + b3^2 = 1 within 1e-12.
SolutionSpec minkowski_lightcone(double b1, double b2, double b3);

/// The cylindrically symmetric family solving the differentiable-case system:
/// with s = rho(r) - tau(t),
///   beta = (1/(W(s) tau'), 1/(W(s) rho'), 0, 0)
///   g    = diag(W^2 tau'^2, -W^2 rho'^2, -W^2, -W^2 p^2).
/// W is an expression in one variable (parsed as x0), rho in r, tau in t.
/// Preconditions W > 0, rho' > 0, tau' > 0 are sampled over `check_box`.
SolutionSpec cylindrical_sys32(const ScalarField& W, const ScalarField& rho, const ScalarField& tau,
                               double p, Box4 check_box = default_solution_check_box());

/// The cylindrically symmetric family solving the one-sided system together
/// with both constraints: with s = f(r) - phi(t) and q = sqrt(1 - W^2),
///   beta = (q/phi', q/f', q/sqrt(1+c^2), c q/sqrt(1+c^2))
///   g    = diag(phi'^2/(1-W^2), -W^2 f'^2/(1-W^2), -1, -1).
/// Requires 0 < W^2 < 1 on the checked box. Flat for every admissible W.
SolutionSpec cylindrical_sys19a(const ScalarField& W, const ScalarField& f, const ScalarField& phi,
                                double c, Box4 check_box = default_solution_check_box());

/// The spherical-case obstruction ratio
///   F(theta; H) = (-cos(theta/H) sin(theta) + H cos(theta) sin(theta/H))
///               / ( sin(theta/H) sin(theta) + H cos(theta) cos(theta/H)).
/// A spherically symmetric solution would force F to be constant in theta;
/// its variation witnesses the non-existence.
double spherical_obstruction_value(double H, double theta);

/// Catalog entries addressable by name: "minkowski-cone", "cyl-sys32",
/// "cyl-sys19a". ("spherical-obstruction" is handled by the runner since it
/// is a scalar function, not a metric/field pair.)
SolutionSpec make_catalog_entry(std::string_view name);
std::vector<std::string> catalog_names();

}  // namespace prak
