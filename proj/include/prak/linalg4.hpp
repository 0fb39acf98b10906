#pragma once

#include <array>
#include <cstddef>

#include "prak/error.hpp"
#include "prak/expr.hpp"  // Point4 / Vec4

namespace prak {

/// Plain 4x4 real matrix, row-major.
class Mat4 {
 public:
  Mat4() : e_{} {}

  double& operator()(int i, int j) { return e_[static_cast<std::size_t>(4 * i + j)]; }
  double operator()(int i, int j) const { return e_[static_cast<std::size_t>(4 * i + j)]; }

  static Mat4 zero() { return Mat4{}; }
  static Mat4 identity();
  /// diag(1, -1, -1, -1)
  static Mat4 eta();
  static Mat4 diag(double d0, double d1, double d2, double d3);

  friend Mat4 operator*(const Mat4& a, const Mat4& b);
  friend Mat4 operator-(const Mat4& a, const Mat4& b);
  Mat4 transposed() const;
  double max_abs() const;

 private:
  std::array<double, 16> e_;
};

Vec4 mat_vec(const Mat4& m, const Vec4& v);  // (Mv)_i = m_ij v_j
Vec4 vec_mat(const Vec4& v, const Mat4& m);  // (vM)_j = v_i m_ij
double dot(const Vec4& a, const Vec4& b);
double max_abs(const Vec4& v);

/// Symmetric 4x4 matrix that passed the signature check (one positive and
/// three negative directions, expressed by the alternating leading-minor
/// signs). Stored exactly symmetric.
class SymMetric4 {
 public:
  const Mat4& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  friend SymMetric4 check_signature(const Mat4& g);
  explicit SymMetric4(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

/// Lower-triangular 4x4 matrix with strictly positive diagonal.
class LowerTriangular4 {
 public:
  const Mat4& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  friend LowerTriangular4 triangular_factor(const SymMetric4& g);
  friend LowerTriangular4 invert_lower_triangular(const LowerTriangular4& a);
  explicit LowerTriangular4(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

/// Input failed the signature conditions. failed_minor() is the order of the
/// first violated leading minor (1..4), or 0 for an asymmetric input;
/// minor_value() is its value.
class SignatureError : public Error {
 public:
  SignatureError(const std::string& msg, int failed_minor, double minor_value);
  int failed_minor() const noexcept { return failed_minor_; }
  double minor_value() const noexcept { return minor_value_; }

 private:
  int failed_minor_;
  double minor_value_;
};

/// Numerical degeneracy inside the triangular factorization.
class FactorError : public Error {
 public:
  using Error::Error;
};

/// Validates g against the conditions g00 > 0, 2x2 leading minor < 0,
/// 3x3 leading minor > 0, det < 0. Symmetry is required to 1e-12 relative
/// and the result is stored symmetrized. Minors within 1e-10 of zero are
/// rejected as degenerate.
SymMetric4 check_signature(const Mat4& g);

/// Solves A eta A^T = g for the unique lower-triangular A with positive
/// diagonal, eliminating column by column: (a_0^0..a_3^0), (a_1^1..a_3^1),
/// (a_2^2, a_3^2), a_3^3.
LowerTriangular4 triangular_factor(const SymMetric4& g);

/// B = A^{-1} by forward substitution; structurally lower triangular.
LowerTriangular4 invert_lower_triangular(const LowerTriangular4& a);

struct RankDet {
  int rank;
  double det;
};

/// Rank by row echelon with pivot threshold `tol`; determinant from an
/// unthresholded pass of the same elimination.
RankDet rank_and_det(const Mat4& m, double tol);

}  // namespace prak
