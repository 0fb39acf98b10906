#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prak/linalg4.hpp"

namespace prak {

/// Named residual magnitudes with a uniform pass/fail view.
struct ResidualReport {
  struct Entry {
    std::string name;
    double value;
  };
  std::vector<Entry> entries;

  void add(std::string name, double value) { entries.push_back({std::move(name), value}); }
  double max_value() const;
  const Entry* find(std::string_view name) const;
  bool all_below(double tol) const { return max_value() <= tol; }
};

/// Constants of the multiplication table: a, c and the unit vector
/// (alpha^1, alpha^2, alpha^3); alpha^0 is always 1.
struct AlgebraParams {
  double a = 1.0;
  double c = 1.0;
  std::array<double, 3> alpha{1.0, 0.0, 0.0};

  /// Throws unless a != 0 and |alpha| = 1 within 1e-12.
  void validate() const;
};

/// The multiplication table in the orthonormalized k-basis: diagonal a,
/// first row/column -alpha^i a, antisymmetric cyclic c-block below.
/// Always singular with rank 3; alpha spans the kernel on both sides.
Mat4 kappa_matrix(double a, double c, const std::array<double, 3>& alpha);
Mat4 kappa_matrix(const AlgebraParams& p);

/// Everything the pointwise algebra needs: the basis transform A and its
/// inverse B, the tables kappa (k-basis) and h (e-basis), the distinguished
/// isotropic vector beta = R in the e-basis, and the table constants.
struct AlgebraPoint {
  LowerTriangular4 A;
  LowerTriangular4 B;
  Mat4 kappa;
  Mat4 h;
  Vec4 beta;        // beta^i = sum_j alpha^j b_j^i
  Vec4 r_vec;       // components of R in the e-basis (= beta)
  Vec4 alpha_full;  // (1, alpha^1, alpha^2, alpha^3)
  double a;
  double c;
};

/// Builds the algebra at a point of a validated metric: A from the
/// triangular factorization, h = A kappa A^T, beta = alpha B.
AlgebraPoint build_algebra_point(const SymMetric4& g, const AlgebraParams& p);

/// alpha^i = sum_j beta^j a_j^i; inverse of the beta construction.
Vec4 alpha_from_beta(const Vec4& beta, const LowerTriangular4& A);
Vec4 beta_from_alpha(const Vec4& alpha_full, const LowerTriangular4& B);

/// Element of the algebra, coefficients in the e-basis.
struct Element {
  Vec4 comps{};
};

/// Product rule e_i e_j = h_ij R: the result is (sum_ij h_ij y^i z^j) beta.
Element multiply(const Element& y, const Element& z, const AlgebraPoint& pt);

/// (y^0, -y^1, -y^2, -y^3)
Element conjugate(const Element& y);

/// Runs the identity battery over `trials` random elements: the
/// conjugate-product identity, zR = Ry = 0, vanishing triple products,
/// the h-kernel conditions in both orders, h_0i = h_i0, the isotropy and
/// normalization constraints, and the kappa rank/determinant.
ResidualReport algebra_identity_report(const AlgebraPoint& pt, const SymMetric4& g, int trials,
                                       std::uint64_t seed = 0x5eed);

}  // namespace prak
