#pragma once

#include <array>
#include <vector>

#include "prak/expr.hpp"
#include "prak/linalg4.hpp"

namespace prak {

/// Axis-aligned box in R^4; the region where a field definition is valid.
struct Box4 {
  Point4 lo{-100.0, -100.0, -100.0, -100.0};
  Point4 hi{100.0, 100.0, 100.0, 100.0};

  bool contains(const Point4& x) const {
    for (std::size_t i = 0; i < 4; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

/// Symmetric expression-valued metric g_ij(x) with signature (1,-1,-1,-1).
/// First derivatives of every component are differentiated symbolically once
/// at construction.
class MetricField {
 public:
  /// Upper-triangle components in the order
  /// g00 g01 g02 g03 g11 g12 g13 g22 g23 g33.
  MetricField(std::array<ScalarField, 10> upper, Box4 domain = {});

  static MetricField minkowski(Box4 domain = {});

  const ScalarField& component(int i, int j) const;
  Mat4 value(const Point4& x) const;
  /// d g_ij / d x^k as a matrix
  Mat4 derivative_value(int k, const Point4& x) const;
  const Box4& domain() const { return domain_; }

 private:
  std::array<ScalarField, 10> comp_;
  std::array<std::array<ScalarField, 10>, 4> dcomp_;
  Box4 domain_;
};

/// Four expression components u^i(x); the 16 partial derivatives are
/// prepared symbolically at construction.
class VectorField4 {
 public:
  explicit VectorField4(std::array<ScalarField, 4> comps);

  const ScalarField& component(int i) const { return comp_[static_cast<std::size_t>(i)]; }
  Vec4 value(const Point4& x) const;
  /// partials(i, j) = d u^i / d x^j
  Mat4 partials(const Point4& x) const;

 private:
  std::array<ScalarField, 4> comp_;
  std::array<std::array<ScalarField, 4>, 4> dcomp_;  // [i][j] = d u^i / d x^j
};

/// Christoffel symbols at one point; symmetric in the two lower indices.
struct ChristoffelAt {
  std::array<double, 64> g{};  // [i][k][j]
  double& gamma(int i, int k, int j) { return g[static_cast<std::size_t>(16 * i + 4 * k + j)]; }
  double gamma(int i, int k, int j) const { return g[static_cast<std::size_t>(16 * i + 4 * k + j)]; }
};

/// Curvature tensor R^i_{jkl} at one point.
struct RiemannAt {
  std::array<double, 256> r{};
  double& at(int i, int j, int k, int l) {
    return r[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)];
  }
  double at(int i, int j, int k, int l) const {
    return r[static_cast<std::size_t>(64 * i + 16 * j + 4 * k + l)];
  }
  double max_abs() const;
  /// max |R^i_{jkl} + R^i_{jlk}|
  double antisymmetry_residual() const;
  /// max |R^i_{jkl} + R^i_{klj} + R^i_{ljk}|
  double bianchi_residual() const;
};

/// Gamma^i_{kj} = 1/2 g^{im} (d_k g_mj + d_j g_mk - d_m g_kj), with the
/// inverse metric taken from the triangular factorization.
ChristoffelAt christoffels_at(const MetricField& g, const Point4& x);

/// u^i_{;j} = d_j u^i + Gamma^i_{kj} u^k, returned with (i, j) indexing.
Mat4 covariant_derivative_at(const VectorField4& u, const MetricField& g, const Point4& x);

/// R^i_{jkl} = d_k Gamma^i_{jl} - d_l Gamma^i_{jk} + Gamma^i_{mk} Gamma^m_{jl}
///           - Gamma^i_{ml} Gamma^m_{jk}; the Gamma derivatives come from
/// central differences with one Richardson refinement.
RiemannAt riemann_at(const MetricField& g, const Point4& x, double fd_step = 1e-4);

/// Per-component geodesic defect sum_l u^i_{;l} beta^l for u = beta.
Vec4 null_geodesic_residual(const VectorField4& beta, const MetricField& g, const Point4& x);

struct CurveSample {
  double tau;
  Point4 x;
  Vec4 transport;   // D beta^i / d tau along the curve
  double isotropy;  // g_ij beta^i beta^j at the sample
};

struct CurveTrace {
  std::vector<CurveSample> samples;
  double max_transport() const;
  double max_isotropy() const;
};

/// Integrates dx/dtau = beta(x) with the classical 4th-order one-step method,
/// recording the parallel-transport defect and the isotropy value at every
/// step. Throws if the curve leaves the metric domain.
CurveTrace trace_isotropic_curve(const VectorField4& beta, const MetricField& g, const Point4& x0,
                                 double dtau, int steps);

}  // namespace prak
