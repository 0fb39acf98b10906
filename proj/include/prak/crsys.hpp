#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prak/algebra.hpp"
#include "prak/geometry.hpp"

namespace prak {

/// The residual systems. sys13/sys13a take a general field u with a separate
/// beta; the others are statements about the beta field itself.
enum class CrVariant { sys13, sys13a, sys19, sys19a, sys27, sys32 };

std::string_view variant_name(CrVariant v);
std::optional<CrVariant> variant_from_name(std::string_view name);

/// beta^0 or h_00 fell below the division guard at a point; the point is
/// reported as unevaluable rather than producing huge residuals.
class UnevaluableError : public Error {
 public:
  using Error::Error;
};

/// Residuals of one equation family at one sample point. `residuals` keeps
/// the equation order of the source system; eq20/eq21 are the constraint
/// magnitudes and `scale` is max(1, max |u^i_{;j}|) for normalized views.
struct ResidualSample {
  Point4 point{};
  std::vector<std::pair<std::string, double>> residuals;
  double eq20 = 0.0;
  double eq21 = 0.0;
  double scale = 1.0;

  double max_residual() const;
  double find(std::string_view name) const;  // NaN when absent
};

/// The algebra at a point of a beta field: alpha is recovered through
/// alpha^i = sum_j beta^j a_j^i and h rebuilt from it, so the tables follow
/// the field even when the field is not an exact solution.
AlgebraPoint algebra_point_at(const VectorField4& beta, const MetricField& g, double a, double c,
                              const Point4& x);

/// Residuals of the chosen system at x. For sys13/sys13a, u is the field
/// under test and beta the isotropic direction field; the other variants
/// evaluate the beta field against itself.
ResidualSample residuals_at(CrVariant variant, const VectorField4& u, const VectorField4& beta,
                            const MetricField& g, double a, double c, const Point4& x);
ResidualSample residuals_at(CrVariant variant, const VectorField4& beta, const MetricField& g,
                            double a, double c, const Point4& x);

/// (|sum g_ij beta^i beta^j|, |sum_j beta^j a_j^0 - 1|)
std::pair<double, double> constraint_residuals_at(const VectorField4& beta, const MetricField& g,
                                                  const Point4& x);

/// Left/right derivative components recovered from the triple equations:
/// three of the four rows sum_m h_im v^m = u^0_{;i}/beta^0 determine
/// (v^1, v^2, v^3) once v^0 is fixed, and the transposed rows determine w.
struct DerivativeComponents {
  Vec4 v{};
  Vec4 w{};
  double S = 0.0;             // v^0 - (beta^0/beta^1) v^1; NaN when beta^1 ~ 0
  Vec4 s_left{};              // s_i = sum_j v^j h_ij
  Vec4 sigma_right{};         // sigma_i = sum_j w^j h_ji
  double v_free = 0.0;        // the chosen v^0
  double w_free = 0.0;        // the chosen w^0
  std::array<int, 3> rows_used{};  // equation rows that formed the solve
  int dependent_row = 0;           // the row left out
};

DerivativeComponents solve_derivative_components(const VectorField4& u, const VectorField4& beta,
                                                 const MetricField& g, double a, double c,
                                                 const Point4& x, double v0, double w0);

/// Residuals of the differentiable-case relations: the proportionality of
/// v^2, v^3 to v^1, the two expressions for S, and the closed forms tying
/// v^1..v^3 to v^0 and u^0_{;0}.
ResidualSample differentiable_relations_check(const VectorField4& beta, const MetricField& g,
                                              double a, double c, const Point4& x);

/// Residuals of the dependency identities: the beta-weighted column sums of
/// the sys27 right-hand sides, the h-weighted cross relations, the
/// contraction identities against h, and the (13.1) -> (13.2) implication
/// combination (an identity regardless of whether the field solves anything).
ResidualSample dependency_identities_check(const VectorField4& beta, const MetricField& g,
                                           double a, double c, const Point4& x);

/// Numerical rank of the sys13 residual map's Jacobian with respect to the
/// sixteen derivative slots u^i_{;j}; at most 13 for any beta.
int sys13_jacobian_rank(const Vec4& beta, double pivot_tol = 1e-9);

}  // namespace prak
