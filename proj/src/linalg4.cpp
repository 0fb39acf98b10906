#include "prak/linalg4.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace prak {

Mat4 Mat4::identity() { return diag(1.0, 1.0, 1.0, 1.0); }
Mat4 Mat4::eta() { return diag(1.0, -1.0, -1.0, -1.0); }

Mat4 Mat4::diag(double d0, double d1, double d2, double d3) {
  Mat4 m;
  m(0, 0) = d0;
  m(1, 1) = d1;
  m(2, 2) = d2;
  m(3, 3) = d3;
  return m;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat4 operator-(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat4 Mat4::transposed() const {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double Mat4::max_abs() const {
  double m = 0.0;
  for (double v : e_) m = std::max(m, std::abs(v));
  return m;
}

Vec4 mat_vec(const Mat4& m, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += m(i, j) * v[j];
  return r;
}

Vec4 vec_mat(const Vec4& v, const Mat4& m) {
  Vec4 r{};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) r[j] += v[i] * m(i, j);
  return r;
}

double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double max_abs(const Vec4& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

SignatureError::SignatureError(const std::string& msg, int failed_minor, double minor_value)
    : Error(msg), failed_minor_(failed_minor), minor_value_(minor_value) {}

namespace {

double det2(const Mat4& g) { return g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0); }

double det3(const Mat4& g) {
  return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) -
         g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0)) +
         g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
}

double det4(const Mat4& g) {
  double det = 0.0;
  for (int c = 0; c < 4; ++c) {
    // 3x3 minor skipping row 0 and column c
    double sub[3][3];
    for (int i = 1; i < 4; ++i) {
      int jj = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == c) continue;
        sub[i - 1][jj++] = g(i, j);
      }
    }
    const double m = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                     sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                     sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
    det += ((c % 2 == 0) ? 1.0 : -1.0) * g(0, c) * m;
  }
  return det;
}

constexpr double kDegenerate = 1e-10;

[[noreturn]] void fail_minor(int order, double value, const char* want) {
  std::ostringstream os;
  os << "signature check failed: " << order << "x" << order << " leading minor = " << value
     << " (must be " << want << " and away from zero)";
  throw SignatureError(os.str(), order, value);
}

}  // namespace

SymMetric4 check_signature(const Mat4& g) {
  const double scale = g.max_abs();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(g(i, j) - g(j, i)) > 1e-12 * (1.0 + scale)) {
        std::ostringstream os;
        os << "signature check failed: asymmetric input, g(" << i << "," << j << ") = " << g(i, j)
           << " vs g(" << j << "," << i << ") = " << g(j, i);
        throw SignatureError(os.str(), 0, g(i, j) - g(j, i));
      }
  Mat4 s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = 0.5 * (g(i, j) + g(j, i));

  const double m1 = s(0, 0);
  if (!(m1 > kDegenerate)) fail_minor(1, m1, "> 0");
  const double m2 = det2(s);
  if (!(m2 < -kDegenerate)) fail_minor(2, m2, "< 0");
  const double m3 = det3(s);
  if (!(m3 > kDegenerate)) fail_minor(3, m3, "> 0");
  const double m4 = det4(s);
  if (!(m4 < -kDegenerate)) fail_minor(4, m4, "< 0");
  return SymMetric4(s);
}

LowerTriangular4 triangular_factor(const SymMetric4& g) {
  Mat4 a;
  auto safe_sqrt = [](double v, const char* what) {
    if (v <= 0.0)
      throw FactorError(std::string("triangular factorization hit a non-positive radicand for ") +
                        what + " (metric numerically degenerate)");
    return std::sqrt(v);
  };

  // column 0: g_i0 = a_i^0 a_0^0
  a(0, 0) = safe_sqrt(g(0, 0), "a_0^0");
  for (int i = 1; i < 4; ++i) a(i, 0) = g(i, 0) / a(0, 0);
  // column 1: g_i1 = a_i^0 a_1^0 - a_i^1 a_1^1
  a(1, 1) = safe_sqrt(a(1, 0) * a(1, 0) - g(1, 1), "a_1^1");
  for (int i = 2; i < 4; ++i) a(i, 1) = (a(i, 0) * a(1, 0) - g(i, 1)) / a(1, 1);
  // column 2
  a(2, 2) = safe_sqrt(a(2, 0) * a(2, 0) - a(2, 1) * a(2, 1) - g(2, 2), "a_2^2");
  a(3, 2) = (a(3, 0) * a(2, 0) - a(3, 1) * a(2, 1) - g(3, 2)) / a(2, 2);
  // column 3
  a(3, 3) =
      safe_sqrt(a(3, 0) * a(3, 0) - a(3, 1) * a(3, 1) - a(3, 2) * a(3, 2) - g(3, 3), "a_3^3");

  const double resid = (a * Mat4::eta() * a.transposed() - g.mat()).max_abs();
  if (resid > 1e-12 * (1.0 + g.mat().max_abs()))
    throw FactorError("triangular factorization residual too large: " + std::to_string(resid));
  return LowerTriangular4(a);
}

LowerTriangular4 invert_lower_triangular(const LowerTriangular4& a) {
  Mat4 b;
  for (int i = 0; i < 4; ++i) {
    if (a(i, i) == 0.0) throw FactorError("zero diagonal entry in triangular inverse");
    b(i, i) = 1.0 / a(i, i);
    for (int j = 0; j < i; ++j) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += a(i, k) * b(k, j);
      b(i, j) = -s / a(i, i);
    }
  }
  return LowerTriangular4(b);
}

namespace {

// One row-echelon pass with partial pivoting. Columns whose best remaining
// pivot is within `tol` of zero are skipped rather than eliminated, so tiny
// pivots never amplify later rows. Returns the pivot count and the signed
// pivot product (a valid determinant only when all four pivots were found).
RankDet eliminate(Mat4 m, double tol) {
  int rank = 0;
  int row = 0;
  double det = 1.0;
  for (int col = 0; col < 4 && row < 4; ++col) {
    int piv = row;
    for (int i = row + 1; i < 4; ++i)
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    const double p = m(piv, col);
    if (std::abs(p) <= tol) continue;  // column contributes no pivot
    if (piv != row) {
      for (int j = 0; j < 4; ++j) std::swap(m(piv, j), m(row, j));
      det = -det;
    }
    det *= m(row, col);
    for (int i = row + 1; i < 4; ++i) {
      const double f = m(i, col) / m(row, col);
      for (int j = col; j < 4; ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
    ++rank;
  }
  if (rank < 4) det = 0.0;
  return {rank, det};
}

}  // namespace

RankDet rank_and_det(const Mat4& m, double tol) {
  const RankDet ranked = eliminate(m, tol);
  const RankDet full = eliminate(m, 0.0);
  return {ranked.rank, full.det};
}

}  // namespace prak
