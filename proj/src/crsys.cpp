#include "prak/crsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prak {

namespace {

constexpr double kGuard = 1e-10;

std::string idx2(int j, int k) {
  std::string s;
  s += static_cast<char>('0' + j);
  s += static_cast<char>('0' + k);
  return s;
}

void check_guard(double value, const char* what) {
  if (std::abs(value) < kGuard) {
    std::ostringstream os;
    os << "division guard: |" << what << "| = " << std::abs(value) << " < " << kGuard;
    throw UnevaluableError(os.str());
  }
}

struct PointData {
  Mat4 ucov;   // u^i_{;j}
  Vec4 b;      // beta at x
  Mat4 bcov;   // beta^i_{;j} (same as ucov when u == beta)
  AlgebraPoint pt;
};

PointData point_data(const VectorField4& u, const VectorField4& beta, const MetricField& g,
                     double a, double c, const Point4& x, bool u_is_beta) {
  AlgebraPoint pt = algebra_point_at(beta, g, a, c, x);
  Mat4 bcov = covariant_derivative_at(beta, g, x);
  Mat4 ucov = u_is_beta ? bcov : covariant_derivative_at(u, g, x);
  return {ucov, pt.beta, bcov, std::move(pt)};
}

void start_sample(ResidualSample& out, const PointData& d, const MetricField& g, const Point4& x) {
  out.point = x;
  out.scale = std::max(1.0, d.ucov.max_abs());
  out.eq20 = std::abs(dot(d.b, mat_vec(g.value(x), d.b)));
  double a0 = 0.0;
  for (int j = 0; j < 4; ++j) a0 += d.b[j] * d.pt.A(j, 0);
  out.eq21 = std::abs(a0 - 1.0);
}

void add_contractions(ResidualSample& out, const char* prefix, const Mat4& ucov, const Vec4& b,
                      bool dotted_names) {
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += ucov(i, j) * b[j];
    std::string name = dotted_names ? std::string(prefix) + "." + std::to_string(i + 1)
                                    : std::string(prefix) + ".c" + std::to_string(i);
    out.residuals.emplace_back(std::move(name), std::abs(s));
  }
}

// equations (.5)-(.16): beta^0 u^i_{;j} = beta^i u^0_{;j}, numbered 5 + 3j + (i-1)
void add_component_cross(ResidualSample& out, const char* prefix, const Mat4& ucov, const Vec4& b) {
  for (int j = 0; j < 4; ++j)
    for (int i = 1; i < 4; ++i) {
      const double r = b[0] * ucov(i, j) - b[i] * ucov(0, j);
      const int id = 5 + 3 * j + (i - 1);
      out.residuals.emplace_back(std::string(prefix) + "." + std::to_string(id), std::abs(r));
    }
}

// invariant record: u^j_{;i} beta^k = u^k_{;i} beta^j for all i and j < k
void add_invariant_cross(ResidualSample& out, const char* prefix, const Mat4& ucov, const Vec4& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const double r = ucov(j, i) * b[k] - ucov(k, i) * b[j];
        out.residuals.emplace_back(
            std::string(prefix) + ".d" + std::to_string(i) + "." + idx2(j, k), std::abs(r));
      }
}

// source numbering of the sys32 equations: column j = 0 holds 32.1..32.3 plus
// the trivial diagonal entry 32.0; column j >= 1 holds 32.(3 + 4(j-1) + i + 1)
std::string sys32_name(int i, int j) {
  if (j == 0) return "32." + std::to_string(i);
  return "32." + std::to_string(3 + 4 * (j - 1) + i + 1);
}

}  // namespace

std::string_view variant_name(CrVariant v) {
  switch (v) {
    case CrVariant::sys13: return "sys13";
    case CrVariant::sys13a: return "sys13a";
    case CrVariant::sys19: return "sys19";
    case CrVariant::sys19a: return "sys19a";
    case CrVariant::sys27: return "sys27";
    case CrVariant::sys32: return "sys32";
  }
  return "?";
}

std::optional<CrVariant> variant_from_name(std::string_view name) {
  if (name == "sys13" || name == "13") return CrVariant::sys13;
  if (name == "sys13a" || name == "13a") return CrVariant::sys13a;
  if (name == "sys19" || name == "19") return CrVariant::sys19;
  if (name == "sys19a" || name == "19a") return CrVariant::sys19a;
  if (name == "sys27" || name == "27") return CrVariant::sys27;
  if (name == "sys32" || name == "32") return CrVariant::sys32;
  return std::nullopt;
}

double ResidualSample::max_residual() const {
  double m = 0.0;
  for (const auto& [name, v] : residuals) m = std::max(m, v);
  return m;
}

double ResidualSample::find(std::string_view name) const {
  for (const auto& [n, v] : residuals)
    if (n == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

AlgebraPoint algebra_point_at(const VectorField4& beta, const MetricField& g, double a, double c,
                              const Point4& x) {
  const SymMetric4 gx = check_signature(g.value(x));
  LowerTriangular4 A = triangular_factor(gx);
  LowerTriangular4 B = invert_lower_triangular(A);
  const Vec4 b = beta.value(x);
  const Vec4 alpha = alpha_from_beta(b, A);
  const Mat4 kappa = kappa_matrix(a, c, {alpha[1], alpha[2], alpha[3]});
  const Mat4 h = A.mat() * kappa * A.mat().transposed();
  return AlgebraPoint{std::move(A), std::move(B), kappa, h, b, b, alpha, a, c};
}

ResidualSample residuals_at(CrVariant variant, const VectorField4& u, const VectorField4& beta,
                            const MetricField& g, double a, double c, const Point4& x) {
  const bool u_is_beta = &u == &beta;
  if (!u_is_beta && variant != CrVariant::sys13 && variant != CrVariant::sys13a)
    throw Error(std::string(variant_name(variant)) +
                " is a statement about the beta field itself; pass it as both u and beta");
  const PointData d = point_data(u, beta, g, a, c, x, u_is_beta);

  ResidualSample out;
  start_sample(out, d, g, x);

  switch (variant) {
    case CrVariant::sys13:
      add_contractions(out, "13", d.ucov, d.b, true);
      add_component_cross(out, "13", d.ucov, d.b);
      break;
    case CrVariant::sys13a:
      add_contractions(out, "13a", d.ucov, d.b, false);
      add_invariant_cross(out, "13a", d.ucov, d.b);
      break;
    case CrVariant::sys19:
      add_contractions(out, "19", d.bcov, d.b, true);
      add_component_cross(out, "19", d.bcov, d.b);
      break;
    case CrVariant::sys19a:
      add_contractions(out, "19a", d.bcov, d.b, false);
      add_invariant_cross(out, "19a", d.bcov, d.b);
      break;
    case CrVariant::sys27:
    case CrVariant::sys32: {
      check_guard(d.b[0], "beta^0");
      check_guard(d.pt.h(0, 0), "h_00");
      const double S = d.bcov(0, 0) / (d.b[0] * d.pt.h(0, 0));
      for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
          const double r = d.bcov(i, j) - d.b[i] * d.pt.h(j, 0) * S;
          std::string name = variant == CrVariant::sys27
                                 ? "27." + std::to_string(4 * j + i + 1)
                                 : sys32_name(i, j);
          out.residuals.emplace_back(std::move(name), std::abs(r));
        }
      break;
    }
  }
  return out;
}

ResidualSample residuals_at(CrVariant variant, const VectorField4& beta, const MetricField& g,
                            double a, double c, const Point4& x) {
  return residuals_at(variant, beta, beta, g, a, c, x);
}

std::pair<double, double> constraint_residuals_at(const VectorField4& beta, const MetricField& g,
                                                  const Point4& x) {
  const SymMetric4 gx = check_signature(g.value(x));
  const LowerTriangular4 A = triangular_factor(gx);
  const Vec4 b = beta.value(x);
  const double eq20 = std::abs(dot(b, mat_vec(gx.mat(), b)));
  double a0 = 0.0;
  for (int j = 0; j < 4; ++j) a0 += b[j] * A(j, 0);
  return {eq20, std::abs(a0 - 1.0)};
}

namespace {

// Picks the best-conditioned 3 of the 4 rows (largest 3x3 subdeterminant in
// the v^1..v^3 columns) and solves; the remaining row is the dependent one.
struct TripleSolve {
  std::array<double, 3> sol;
  std::array<int, 3> rows;
  int dependent;
};

TripleSolve solve_triple(const Mat4& h, bool transposed, const Vec4& rhs, double fixed0) {
  auto entry = [&](int row, int col) { return transposed ? h(col, row) : h(row, col); };

  double best = -1.0;
  int skip_best = -1;
  for (int skip = 0; skip < 4; ++skip) {
    double m[3][3];
    int r = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == skip) continue;
      for (int col = 0; col < 3; ++col) m[r][col] = entry(i, col + 1);
      ++r;
    }
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (std::abs(det) > best) {
      best = std::abs(det);
      skip_best = skip;
    }
  }
  if (best <= 1e-12)
    throw Error(
        "derivative-component system is singular: every 3-row subset of the h rows is rank "
        "deficient (more than one dependent row)");

  TripleSolve out;
  out.dependent = skip_best;
  double m[3][4];  // augmented
  int r = 0;
  for (int i = 0; i < 4; ++i) {
    if (i == skip_best) continue;
    for (int col = 0; col < 3; ++col) m[r][col] = entry(i, col + 1);
    m[r][3] = rhs[i] - entry(i, 0) * fixed0;
    out.rows[r] = i;
    ++r;
  }

  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int i = col + 1; i < 3; ++i)
      if (std::abs(m[i][col]) > std::abs(m[piv][col])) piv = i;
    if (piv != col)
      for (int j = 0; j < 4; ++j) std::swap(m[piv][j], m[col][j]);
    if (std::abs(m[col][col]) <= 1e-12)
      throw Error("derivative-component system is singular at pivot " + std::to_string(col));
    for (int i = col + 1; i < 3; ++i) {
      const double f = m[i][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[i][j] -= f * m[col][j];
    }
  }
  for (int i = 2; i >= 0; --i) {
    double s = m[i][3];
    for (int j = i + 1; j < 3; ++j) s -= m[i][j] * out.sol[j];
    out.sol[i] = s / m[i][i];
  }
  return out;
}

}  // namespace

DerivativeComponents solve_derivative_components(const VectorField4& u, const VectorField4& beta,
                                                 const MetricField& g, double a, double c,
                                                 const Point4& x, double v0, double w0) {
  const bool u_is_beta = &u == &beta;
  const PointData d = point_data(u, beta, g, a, c, x, u_is_beta);
  check_guard(d.b[0], "beta^0");

  Vec4 rhs{};
  for (int i = 0; i < 4; ++i) rhs[i] = d.ucov(0, i) / d.b[0];

  const TripleSolve left = solve_triple(d.pt.h, false, rhs, v0);
  const TripleSolve right = solve_triple(d.pt.h, true, rhs, w0);

  DerivativeComponents out;
  out.v = {v0, left.sol[0], left.sol[1], left.sol[2]};
  out.w = {w0, right.sol[0], right.sol[1], right.sol[2]};
  out.v_free = v0;
  out.w_free = w0;
  out.rows_used = left.rows;
  out.dependent_row = left.dependent;
  out.S = std::abs(d.b[1]) > kGuard ? out.v[0] - d.b[0] / d.b[1] * out.v[1]
                                    : std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 4; ++i) {
    double s = 0.0, sig = 0.0;
    for (int j = 0; j < 4; ++j) {
      s += out.v[j] * d.pt.h(i, j);
      sig += out.w[j] * d.pt.h(j, i);
    }
    out.s_left[i] = s;
    out.sigma_right[i] = sig;
  }
  return out;
}

ResidualSample differentiable_relations_check(const VectorField4& beta, const MetricField& g,
                                              double a, double c, const Point4& x) {
  const PointData d = point_data(beta, beta, g, a, c, x, true);
  check_guard(d.b[0], "beta^0");
  check_guard(d.b[1], "beta^1");
  check_guard(d.pt.h(0, 0), "h_00");

  // w forced equal to v: the relations only involve the left components
  const DerivativeComponents dc = solve_derivative_components(beta, beta, g, a, c, x, 0.0, 0.0);
  const Vec4& v = dc.v;

  ResidualSample out;
  start_sample(out, d, g, x);

  out.residuals.emplace_back("24", std::abs(v[2] - d.b[2] / d.b[1] * v[1]));
  out.residuals.emplace_back("25", std::abs(v[3] - d.b[3] / d.b[1] * v[1]));
  const double s_direct = d.bcov(0, 0) / (d.b[0] * d.pt.h(0, 0));
  out.residuals.emplace_back("26", std::abs(dc.S - s_direct));
  for (int k = 1; k < 4; ++k) {
    const double expect =
        d.b[k] / d.b[0] * v[0] - d.b[k] / (d.b[0] * d.b[0] * d.pt.h(0, 0)) * d.bcov(0, 0);
    out.residuals.emplace_back("33." + std::to_string(k), std::abs(v[k] - expect));
  }
  return out;
}

ResidualSample dependency_identities_check(const VectorField4& beta, const MetricField& g,
                                           double a, double c, const Point4& x) {
  const PointData d = point_data(beta, beta, g, a, c, x, true);
  check_guard(d.b[0], "beta^0");
  check_guard(d.pt.h(0, 0), "h_00");

  ResidualSample out;
  start_sample(out, d, g, x);

  const double S = d.bcov(0, 0) / (d.b[0] * d.pt.h(0, 0));

  // (28): beta-weighted column sums of the sys27 right-hand sides vanish by
  // the h-kernel condition, independently of the derivative values
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += d.b[k] * d.pt.h(j, 0) * S * d.b[j];
    out.residuals.emplace_back("28." + std::to_string(k), std::abs(s));
  }

  // (29): beta^k_{;i} h_{j0} = beta^k_{;j} h_{i0}
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double r = d.bcov(k, i) * d.pt.h(j, 0) - d.bcov(k, j) * d.pt.h(i, 0);
        out.residuals.emplace_back("29.k" + std::to_string(k) + "." + idx2(i, j), std::abs(r));
      }

  // (30)/(31): contraction identities in both index orders
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double left = 0.0, right = 0.0;
      for (int m = 0; m < 4; ++m) {
        left += d.bcov(m, j) * d.pt.h(i, m);
        right += d.bcov(m, j) * d.pt.h(m, i);
      }
      out.residuals.emplace_back("31.left." + idx2(i, j), std::abs(left));
      out.residuals.emplace_back("31.right." + idx2(i, j), std::abs(right));
    }

  // (13.1) -> (13.2) implication: substituting the component relations into
  // the second contraction reproduces (beta^1/beta^0) times the first; the
  // combination vanishes as an algebraic identity whether or not the field
  // solves anything
  const double ratio = d.b[1] / d.b[0];
  double r1 = 0.0, r2sub = 0.0;
  for (int j = 0; j < 4; ++j) {
    r1 += d.bcov(0, j) * d.b[j];
    r2sub += (ratio * d.bcov(0, j)) * d.b[j];
  }
  out.residuals.emplace_back("13imp", std::abs(r2sub - ratio * r1));
  return out;
}

int sys13_jacobian_rank(const Vec4& beta, double pivot_tol) {
  // rows: 4 contractions then 12 cross equations; columns: u^i_{;j} at 4i+j
  double jac[16][16] = {};
  int row = 0;
  for (int i = 0; i < 4; ++i, ++row)
    for (int j = 0; j < 4; ++j) jac[row][4 * i + j] = beta[j];
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < 4; ++j, ++row) {
      jac[row][4 * i + j] += beta[0];
      jac[row][j] -= beta[i];
    }

  int rank = 0;
  int r = 0;
  for (int col = 0; col < 16 && r < 16; ++col) {
    int piv = r;
    for (int i = r + 1; i < 16; ++i)
      if (std::abs(jac[i][col]) > std::abs(jac[piv][col])) piv = i;
    if (std::abs(jac[piv][col]) <= pivot_tol) continue;
    if (piv != r)
      for (int j = 0; j < 16; ++j) std::swap(jac[piv][j], jac[r][j]);
    for (int i = r + 1; i < 16; ++i) {
      const double f = jac[i][col] / jac[r][col];
      if (f == 0.0) continue;
      for (int j = col; j < 16; ++j) jac[i][j] -= f * jac[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace prak
