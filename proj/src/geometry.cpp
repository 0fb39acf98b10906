#include "prak/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prak {

namespace {

// upper-triangle storage offsets for a symmetric 4x4
constexpr int kRowStart[4] = {0, 4, 7, 9};

int upper_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return kRowStart[i] + (j - i);
}

std::string point_str(const Point4& x) {
  std::ostringstream os;
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
  return os.str();
}

}  // namespace

MetricField::MetricField(std::array<ScalarField, 10> upper, Box4 domain)
    : comp_(std::move(upper)), domain_(domain) {
  for (int k = 0; k < 4; ++k)
    for (int idx = 0; idx < 10; ++idx)
      dcomp_[k][idx] =
          comp_[idx].derivative(k);
}

MetricField MetricField::minkowski(Box4 domain) {
  std::array<ScalarField, 10> c;
  c[0] = ScalarField::number(1.0);
  c[upper_index(1, 1)] = ScalarField::number(-1.0);
  c[upper_index(2, 2)] = ScalarField::number(-1.0);
  c[upper_index(3, 3)] = ScalarField::number(-1.0);
  return MetricField(std::move(c), domain);
}

const ScalarField& MetricField::component(int i, int j) const {
  return comp_[upper_index(i, j)];
}

Mat4 MetricField::value(const Point4& x) const {
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double v = comp_[upper_index(i, j)].eval(x);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

Mat4 MetricField::derivative_value(int k, const Point4& x) const {
  Mat4 d;
  const auto& dk = dcomp_[k];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double v = dk[upper_index(i, j)].eval(x);
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

VectorField4::VectorField4(std::array<ScalarField, 4> comps) : comp_(std::move(comps)) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      dcomp_[i][j] =
          comp_[i].derivative(j);
}

Vec4 VectorField4::value(const Point4& x) const {
  Vec4 v;
  for (std::size_t i = 0; i < 4; ++i) v[i] = comp_[i].eval(x);
  return v;
}

Mat4 VectorField4::partials(const Point4& x) const {
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m(i, j) = dcomp_[i][j].eval(x);
  return m;
}

double RiemannAt::max_abs() const {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

double RiemannAt::antisymmetry_residual() const {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) m = std::max(m, std::abs(at(i, j, k, l) + at(i, j, l, k)));
  return m;
}

double RiemannAt::bianchi_residual() const {
  double m = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          m = std::max(m, std::abs(at(i, j, k, l) + at(i, k, l, j) + at(i, l, j, k)));
  return m;
}

ChristoffelAt christoffels_at(const MetricField& g, const Point4& x) {
  const SymMetric4 gx = check_signature(g.value(x));
  const LowerTriangular4 A = triangular_factor(gx);
  const LowerTriangular4 B = invert_lower_triangular(A);
  // g^{-1} = B^T eta B since g = A eta A^T
  const Mat4 ginv = B.mat().transposed() * Mat4::eta() * B.mat();

  std::array<Mat4, 4> dg;
  for (int k = 0; k < 4; ++k) dg[k] = g.derivative_value(k, x);

  ChristoffelAt out;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = k; j < 4; ++j) {
        double s = 0.0;
        for (int m = 0; m < 4; ++m)
          s += ginv(i, m) * (dg[k](m, j) +
                             dg[j](m, k) -
                             dg[m](k, j));
        out.gamma(i, k, j) = 0.5 * s;
        out.gamma(i, j, k) = 0.5 * s;
      }
  return out;
}

Mat4 covariant_derivative_at(const VectorField4& u, const MetricField& g, const Point4& x) {
  const ChristoffelAt gam = christoffels_at(g, x);
  const Mat4 du = u.partials(x);
  const Vec4 uv = u.value(x);
  Mat4 cov;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = du(i, j);
      for (int k = 0; k < 4; ++k) s += gam.gamma(i, k, j) * uv[k];
      cov(i, j) = s;
    }
  return cov;
}

RiemannAt riemann_at(const MetricField& g, const Point4& x, double fd_step) {
  auto gamma_shift = [&](int axis, double delta) {
    Point4 y = x;
    y[axis] += delta;
    if (!g.domain().contains(y))
      throw Error("curvature stencil leaves the metric domain at " + point_str(y));
    return christoffels_at(g, y);
  };

  // dGamma[k] by central differences, one Richardson level
  std::array<ChristoffelAt, 4> dgamma;
  for (int k = 0; k < 4; ++k) {
    const ChristoffelAt p1 = gamma_shift(k, fd_step);
    const ChristoffelAt m1 = gamma_shift(k, -fd_step);
    const ChristoffelAt p2 = gamma_shift(k, fd_step / 2);
    const ChristoffelAt m2 = gamma_shift(k, -fd_step / 2);
    ChristoffelAt& d = dgamma[k];
    for (std::size_t idx = 0; idx < d.g.size(); ++idx) {
      const double coarse = (p1.g[idx] - m1.g[idx]) / (2.0 * fd_step);
      const double fine = (p2.g[idx] - m2.g[idx]) / fd_step;
      d.g[idx] = (4.0 * fine - coarse) / 3.0;
    }
  }

  const ChristoffelAt gam = christoffels_at(g, x);
  RiemannAt out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double v = dgamma[k].gamma(i, j, l) -
                     dgamma[l].gamma(i, j, k);
          for (int m = 0; m < 4; ++m)
            v += gam.gamma(i, m, k) * gam.gamma(m, j, l) -
                 gam.gamma(i, m, l) * gam.gamma(m, j, k);
          out.at(i, j, k, l) = v;
        }
  return out;
}

Vec4 null_geodesic_residual(const VectorField4& beta, const MetricField& g, const Point4& x) {
  const Mat4 cov = covariant_derivative_at(beta, g, x);
  const Vec4 b = beta.value(x);
  return mat_vec(cov, b);
}

double CurveTrace::max_transport() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, max_abs(s.transport));
  return m;
}

double CurveTrace::max_isotropy() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.isotropy));
  return m;
}

CurveTrace trace_isotropic_curve(const VectorField4& beta, const MetricField& g, const Point4& x0,
                                 double dtau, int steps) {
  if (steps < 1) throw Error("trace_isotropic_curve: steps must be >= 1");
  if (dtau == 0.0) throw Error("trace_isotropic_curve: dtau must be nonzero");

  auto rhs = [&](const Point4& x) {
    if (!g.domain().contains(x))
      throw Error("isotropic curve left the metric domain at " + point_str(x));
    return beta.value(x);
  };
  auto advanced = [](const Point4& x, const Vec4& k, double f) {
    Point4 y = x;
    for (std::size_t i = 0; i < 4; ++i) y[i] += f * k[i];
    return y;
  };

  CurveTrace trace;
  trace.samples.reserve(static_cast<std::size_t>(steps) + 1);
  Point4 x = x0;
  double tau = 0.0;
  auto record = [&] {
    const Vec4 b = beta.value(x);
    const double iso = dot(b, mat_vec(g.value(x), b));
    trace.samples.push_back({tau, x, null_geodesic_residual(beta, g, x), iso});
  };
  record();
  for (int n = 0; n < steps; ++n) {
    const Vec4 k1 = rhs(x);
    const Vec4 k2 = rhs(advanced(x, k1, dtau / 2));
    const Vec4 k3 = rhs(advanced(x, k2, dtau / 2));
    const Vec4 k4 = rhs(advanced(x, k3, dtau));
    for (std::size_t i = 0; i < 4; ++i)
      x[i] += dtau / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    tau += dtau;
    if (!g.domain().contains(x))
      throw Error("isotropic curve left the metric domain at " + point_str(x));
    record();
  }
  return trace;
}

}  // namespace prak
