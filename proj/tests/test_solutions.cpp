#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "prak/solutions.hpp"
#include "test_support.hpp"

using namespace prak;

namespace {

double grid_max_residual(const SolutionSpec& spec, CrVariant variant) {
  double m = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const Point4 x{0.1 + 0.2 * i, 0.1 + 0.2 * j, 0.5, 0.5};
      const ResidualSample s = residuals_at(variant, spec.field, spec.metric, 1.0, 1.0, x);
      m = std::max({m, s.max_residual(), s.eq20, s.eq21});
    }
  return m;
}

}  // namespace

TEST_CASE("minkowski lightcone") {
  const SolutionSpec cone = minkowski_lightcone(1.0, 0.0, 0.0);
  CHECK(grid_max_residual(cone, CrVariant::sys32) == 0.0);
  const SolutionSpec cone2 = minkowski_lightcone(0.6, 0.8, 0.0);
  CHECK(grid_max_residual(cone2, CrVariant::sys32) <= 1e-15);
  CHECK(grid_max_residual(cone2, CrVariant::sys19a) <= 1e-15);
  CHECK_THROWS_AS(minkowski_lightcone(1.0, 1.0, 0.0), Error);
}

TEST_CASE("cylindrical sys32 family: displayed values") {
  const SolutionSpec spec = make_catalog_entry("cyl-sys32");
  const Point4 x{0.3, 0.5, 0.5, 0.5};
  // direct substitution: s = 0.2, W = 2.04
  CHECK(spec.field.component(0).eval(x) == doctest::Approx(1.0 / 2.04).epsilon(1e-15));
  CHECK(spec.field.component(1).eval(x) == doctest::Approx(1.0 / 2.04).epsilon(1e-15));
  CHECK(spec.metric.component(0, 0).eval(x) == doctest::Approx(4.1616).epsilon(1e-15));
  CHECK(spec.metric.component(2, 2).eval(x) == doctest::Approx(-4.1616).epsilon(1e-15));
  CHECK(spec.target_system == CrVariant::sys32);
  CHECK(spec.expected_curvature == CurvatureClass::nonzero);
}

TEST_CASE("cylindrical sys32 family: residuals and curvature") {
  const SolutionSpec spec = make_catalog_entry("cyl-sys32");
  CHECK(grid_max_residual(spec, CrVariant::sys32) <= 1e-8);
  CHECK(riemann_at(spec.metric, {0.3, 0.5, 0.5, 0.5}).max_abs() >= 1e-4);
}

TEST_CASE("cylindrical sys32: parameter covariance") {
  // a reparameterized (rho, tau) pair describes the same family
  const AliasSet s = AliasSet::single("s");
  const AliasSet xy = AliasSet::cylindrical();
  const SolutionSpec spec =
      cylindrical_sys32(ScalarField::parse("2 + s^2", s), ScalarField::parse("r + 0.1*r^2", xy),
                        ScalarField::parse("t + 0.2*t^2", xy), 1.3);
  CHECK(grid_max_residual(spec, CrVariant::sys32) <= 1e-8);
}

TEST_CASE("cylindrical sys32: rejects bad parameters") {
  const AliasSet s = AliasSet::single("s");
  const AliasSet xy = AliasSet::cylindrical();
  // W crosses zero on the box
  CHECK_THROWS_AS(cylindrical_sys32(ScalarField::parse("s", s), ScalarField::parse("r", xy),
                                    ScalarField::parse("t", xy), 1.0),
                  Error);
  // decreasing tau
  CHECK_THROWS_AS(cylindrical_sys32(ScalarField::parse("2 + s^2", s), ScalarField::parse("r", xy),
                                    ScalarField::parse("-t", xy), 1.0),
                  Error);
  CHECK_THROWS_AS(cylindrical_sys32(ScalarField::parse("2 + s^2", s), ScalarField::parse("r", xy),
                                    ScalarField::parse("t", xy), 0.0),
                  Error);
}

TEST_CASE("cylindrical sys19a family") {
  const SolutionSpec spec = make_catalog_entry("cyl-sys19a");
  CHECK(spec.target_system == CrVariant::sys19a);
  CHECK(spec.expected_curvature == CurvatureClass::zero);

  // frozen by direct substitution: W = 1/2.04 at (0.3, 0.5)
  const Point4 x{0.3, 0.5, 0.5, 0.5};
  const double w = 1.0 / 2.04;
  const double q = std::sqrt(1.0 - w * w);
  CHECK(spec.field.component(0).eval(x) == doctest::Approx(q).epsilon(1e-14));
  CHECK(spec.field.component(2).eval(x) == doctest::Approx(q / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(spec.metric.component(0, 0).eval(x) == doctest::Approx(1.0 / (1 - w * w)).epsilon(1e-14));
  CHECK(spec.metric.component(1, 1).eval(x) ==
        doctest::Approx(-w * w / (1 - w * w)).epsilon(1e-14));

  CHECK(grid_max_residual(spec, CrVariant::sys19a) <= 1e-8);
  CHECK(riemann_at(spec.metric, x).max_abs() <= 1e-6);

  // the one-sided family does not satisfy the differentiable-case system
  const ResidualSample s32 =
      residuals_at(CrVariant::sys32, spec.field, spec.metric, 1.0, 1.0, x);
  CHECK(s32.max_residual() >= 1e-3);
}

TEST_CASE("cylindrical sys19a: general profile functions") {
  const AliasSet s = AliasSet::single("s");
  const AliasSet xy = AliasSet::cylindrical();
  const SolutionSpec spec = cylindrical_sys19a(
      ScalarField::parse("1/(2 + s^2)", s), ScalarField::parse("r + 0.1*r^2", xy),
      ScalarField::parse("t + 0.2*t^2", xy), 0.7);
  CHECK(grid_max_residual(spec, CrVariant::sys19a) <= 1e-8);
  CHECK(riemann_at(spec.metric, {0.4, 0.6, 0.5, 0.5}).max_abs() <= 1e-6);
}

TEST_CASE("cylindrical sys19a: rejects W^2 >= 1") {
  const AliasSet s = AliasSet::single("s");
  const AliasSet xy = AliasSet::cylindrical();
  CHECK_THROWS_AS(cylindrical_sys19a(ScalarField::parse("2 + s^2", s), ScalarField::parse("r", xy),
                                     ScalarField::parse("t", xy), 1.0),
                  Error);
}

TEST_CASE("spherical obstruction function") {
  // anchors evaluated independently from the displayed formula
  CHECK(spherical_obstruction_value(2.0, M_PI / 4) == doctest::Approx(-0.0710678).epsilon(1e-4));
  CHECK(spherical_obstruction_value(2.0, M_PI / 3) == doctest::Approx(-0.1924501).epsilon(1e-4));

  // the ratio is genuinely theta-dependent for H != 1 ...
  for (const double H : {1.2, 1.5, 2.0, 3.0, 5.0}) {
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i <= 120; ++i) {
      const double th = M_PI / 6 + (M_PI / 2 - M_PI / 6) * i / 120.0;
      const double v = spherical_obstruction_value(H, th);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo > 0.01);
  }

  // ... and collapses identically at H = 1, where the argument breaks down
  for (int i = 1; i <= 10; ++i)
    CHECK(std::abs(spherical_obstruction_value(1.0, 0.15 * i)) <= 1e-15);

  // the denominator vanishes at (H, theta) = (2, pi)
  CHECK_THROWS_AS(spherical_obstruction_value(2.0, M_PI), Error);
}

TEST_CASE("catalog lookup") {
  CHECK(catalog_names().size() == 4);
  CHECK_NOTHROW(make_catalog_entry("minkowski-cone"));
  CHECK_NOTHROW(make_catalog_entry("cyl-sys32"));
  CHECK_NOTHROW(make_catalog_entry("cyl-sys19a"));
  try {
    make_catalog_entry("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("cyl-sys32") != std::string::npos);
  }
}
