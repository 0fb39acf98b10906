// Shared helpers for the test suites: deterministic random generators and the
// finite-difference oracle that checks the symbolic derivatives.
#pragma once

#include <array>
#include <cmath>
#include <random>

#include "prak/expr.hpp"
#include "prak/linalg4.hpp"

namespace prak::test {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

/// Central difference (f(x+h) - f(x-h)) / 2h along one axis.
inline double fd_derivative(const ScalarField& f, int axis, Point4 x, double h = 1e-5) {
  Point4 xp = x, xm = x;
  xp[axis] += h;
  xm[axis] -= h;
  return (f.eval(xp) - f.eval(xm)) / (2.0 * h);
}

/// Richardson-refined central difference together with a stability verdict:
/// when the two stencil widths disagree wildly the point sits too close to a
/// singularity for any difference quotient to resolve.
struct FdEstimate {
  double value;
  bool stable;
};

inline FdEstimate fd_derivative_refined(const ScalarField& f, int axis, const Point4& x,
                                        double h = 1e-5) {
  const double coarse = fd_derivative(f, axis, x, h);
  const double fine = fd_derivative(f, axis, x, h / 2);
  const double refined = (4.0 * fine - coarse) / 3.0;
  const bool stable = std::abs(coarse - fine) <= 1e-4 * (1.0 + std::abs(fine));
  return {refined, stable};
}

/// Random expression tree of bounded depth over all node kinds.
inline ScalarField random_tree(Rng& rng, int depth) {
  if (depth <= 0 || rng.integer(0, 5) == 0) {
    if (rng.integer(0, 1) == 0) return ScalarField::number(0.25 * rng.integer(-8, 8));
    return ScalarField::variable(rng.integer(0, 3));
  }
  switch (rng.integer(0, 11)) {
    case 0: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 1: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
    case 2: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 3: return random_tree(rng, depth - 1) / random_tree(rng, depth - 1);
    case 4: return -random_tree(rng, depth - 1);
    case 5: return pow(random_tree(rng, depth - 1), rng.integer(1, 3));
    case 6: return sin(random_tree(rng, depth - 1));
    case 7: return cos(random_tree(rng, depth - 1));
    case 8: return exp(random_tree(rng, depth - 1));
    case 9: return tan(random_tree(rng, depth - 1));
    case 10: return cot(random_tree(rng, depth - 1));
    default:
      // keep ln/sqrt arguments positive-ish with a squared core
      return rng.integer(0, 1) == 0 ? ln(ScalarField::number(1.0) + pow(random_tree(rng, depth - 1), 2))
                                    : sqrt(ScalarField::number(1.0) + pow(random_tree(rng, depth - 1), 2));
  }
}

inline Point4 random_point(Rng& rng, double lo = -2.0, double hi = 2.0) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

struct MetricSample {
  Mat4 a;  // the generating lower-triangular factor
  Mat4 g;  // A eta A^T
};

/// Signature-valid metric built as A eta A^T from a random positive-diagonal
/// lower-triangular A.
inline MetricSample random_valid_metric(Rng& rng, double diag_lo = 0.1, double diag_hi = 10.0,
                                        double off = 2.0) {
  Mat4 a;
  for (int i = 0; i < 4; ++i) {
    a(i, i) = rng.uniform(diag_lo, diag_hi);
    for (int j = 0; j < i; ++j) a(i, j) = rng.uniform(-off, off);
  }
  return {a, a * Mat4::eta() * a.transposed()};
}

inline std::array<double, 3> random_unit_alpha(Rng& rng) {
  for (;;) {
    std::array<double, 3> v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 0.1) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

inline Vec4 random_unit_direction4(Rng& rng) {
  const auto a = random_unit_alpha(rng);
  return {1.0, a[0], a[1], a[2]};
}

}  // namespace prak::test
