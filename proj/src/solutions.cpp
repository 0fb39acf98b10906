#include "prak/solutions.hpp"

#include <cmath>
#include <sstream>

namespace prak {

namespace {

ScalarField num(double v) { return ScalarField::number(v); }

// sample the (x0, x1) face of the box on an 7x7 grid, x2 = x3 = mid
template <typename Fn>
void sample_face(const Box4& box, Fn&& fn) {
  const int n = 7;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Point4 x{box.lo[0] + (box.hi[0] - box.lo[0]) * i / (n - 1),
               box.lo[1] + (box.hi[1] - box.lo[1]) * j / (n - 1),
               0.5 * (box.lo[2] + box.hi[2]), 0.5 * (box.lo[3] + box.hi[3])};
      fn(x);
    }
}

std::array<ScalarField, 10> diagonal_metric(ScalarField g00, ScalarField g11, ScalarField g22,
                                            ScalarField g33) {
  std::array<ScalarField, 10> m;
  m[0] = std::move(g00);
  m[4] = std::move(g11);
  m[7] = std::move(g22);
  m[9] = std::move(g33);
  // remaining entries default to the constant 0
  return m;
}

}  // namespace

Box4 default_solution_check_box() {
  return Box4{{0.05, 0.05, 0.0, 0.0}, {0.95, 0.95, 1.0, 1.0}};
}

SolutionSpec minkowski_lightcone(double b1, double b2, double b3) {
  const double n2 = b1 * b1 + b2 * b2 + b3 * b3;
  if (std::abs(n2 - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "light-cone direction must be a unit vector: b1^2 + b2^2 + b3^2 = " << n2;
    throw Error(os.str());
  }
  VectorField4 beta({num(1.0), num(b1), num(b2), num(b3)});
  return SolutionSpec{"minkowski-cone", MetricField::minkowski(), std::move(beta),
                      CrVariant::sys32, CurvatureClass::zero};
}

SolutionSpec cylindrical_sys32(const ScalarField& W, const ScalarField& rho, const ScalarField& tau,
                               double p, Box4 check_box) {
  if (p == 0.0) throw Error("cylindrical solution parameter p must be nonzero");

  const ScalarField s = rho - tau;      // rho uses x1, tau uses x0
  const ScalarField Wc = W.substitute(0, s);
  const ScalarField rho_r = rho.derivative(1);
  const ScalarField tau_t = tau.derivative(0);

  sample_face(check_box, [&](const Point4& x) {
    if (Wc.eval(x) <= 0.0) throw Error("W must stay positive on the verification box");
    if (rho_r.eval(x) <= 0.0) throw Error("rho must be strictly increasing on the verification box");
    if (tau_t.eval(x) <= 0.0) throw Error("tau must be strictly increasing on the verification box");
  });

  const ScalarField W2 = pow(Wc, 2.0);
  MetricField g(diagonal_metric(W2 * pow(tau_t, 2.0), -(W2 * pow(rho_r, 2.0)), -W2,
                                -(W2 * num(p * p))));
  VectorField4 beta({num(1.0) / (Wc * tau_t), num(1.0) / (Wc * rho_r), num(0.0), num(0.0)});
  return SolutionSpec{"cyl-sys32", std::move(g), std::move(beta), CrVariant::sys32,
                      CurvatureClass::nonzero};
}

SolutionSpec cylindrical_sys19a(const ScalarField& W, const ScalarField& f, const ScalarField& phi,
                                double c, Box4 check_box) {
  const ScalarField s = f - phi;        // f uses x1, phi uses x0
  const ScalarField Wc = W.substitute(0, s);
  const ScalarField f_r = f.derivative(1);
  const ScalarField phi_t = phi.derivative(0);

  sample_face(check_box, [&](const Point4& x) {
    const double w = Wc.eval(x);
    if (!(w * w > 0.0) || w * w >= 1.0)
      throw Error("W^2 must stay inside (0, 1) on the verification box");
    if (f_r.eval(x) <= 0.0) throw Error("f must be strictly increasing on the verification box");
    if (phi_t.eval(x) <= 0.0) throw Error("phi must be strictly increasing on the verification box");
  });

  const ScalarField one_minus_w2 = num(1.0) - pow(Wc, 2.0);
  const ScalarField q = sqrt(one_minus_w2);
  const double root = std::sqrt(1.0 + c * c);

  MetricField g(diagonal_metric(pow(phi_t, 2.0) / one_minus_w2,
                                -(pow(Wc, 2.0) * pow(f_r, 2.0) / one_minus_w2), num(-1.0),
                                num(-1.0)));
  VectorField4 beta({q / phi_t, q / f_r, q / num(root), q * num(c / root)});
  return SolutionSpec{"cyl-sys19a", std::move(g), std::move(beta), CrVariant::sys19a,
                      CurvatureClass::zero};
}

double spherical_obstruction_value(double H, double theta) {
  const double den =
      std::sin(theta / H) * std::sin(theta) + H * std::cos(theta) * std::cos(theta / H);
  if (std::abs(den) < 1e-12)
    throw Error("obstruction ratio denominator vanishes at this (H, theta)");
  const double numr =
      -std::cos(theta / H) * std::sin(theta) + H * std::cos(theta) * std::sin(theta / H);
  return numr / den;
}

SolutionSpec make_catalog_entry(std::string_view name) {
  const AliasSet s_alias = AliasSet::single("s");
  const AliasSet coords = AliasSet::cylindrical();
  if (name == "minkowski-cone") return minkowski_lightcone(0.6, 0.8, 0.0);
  if (name == "cyl-sys32")
    return cylindrical_sys32(ScalarField::parse("2 + s^2", s_alias), ScalarField::parse("r", coords),
                             ScalarField::parse("t", coords), 1.0);
  if (name == "cyl-sys19a")
    return cylindrical_sys19a(ScalarField::parse("1/(2 + s^2)", s_alias),
                              ScalarField::parse("r", coords), ScalarField::parse("t", coords), 1.0);
  std::string available;
  for (const auto& n : catalog_names()) {
    if (!available.empty()) available += ", ";
    available += n;
  }
  throw ConfigError("unknown catalog entry '" + std::string(name) + "'; available: " + available);
}

std::vector<std::string> catalog_names() {
  return {"minkowski-cone", "cyl-sys32", "cyl-sys19a", "spherical-obstruction"};
}

}  // namespace prak
