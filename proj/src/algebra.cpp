#include "prak/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace prak {

double ResidualReport::max_value() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

const ResidualReport::Entry* ResidualReport::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

void AlgebraParams::validate() const {
  if (a == 0.0) throw Error("algebra parameter a must be nonzero");
  const double n2 = alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2];
  if (std::abs(n2 - 1.0) > 1e-12)
    throw Error("alpha must be a unit vector: |alpha|^2 = " + std::to_string(n2));
}

Mat4 kappa_matrix(double a, double c, const std::array<double, 3>& al) {
  const double a1 = al[0], a2 = al[1], a3 = al[2];
  Mat4 k;
  k(0, 0) = a;        k(0, 1) = -a1 * a;  k(0, 2) = -a2 * a;  k(0, 3) = -a3 * a;
  k(1, 0) = -a1 * a;  k(1, 1) = a;        k(1, 2) = a3 * c;   k(1, 3) = -a2 * c;
  k(2, 0) = -a2 * a;  k(2, 1) = -a3 * c;  k(2, 2) = a;        k(2, 3) = a1 * c;
  k(3, 0) = -a3 * a;  k(3, 1) = a2 * c;   k(3, 2) = -a1 * c;  k(3, 3) = a;
  return k;
}

Mat4 kappa_matrix(const AlgebraParams& p) { return kappa_matrix(p.a, p.c, p.alpha); }

AlgebraPoint build_algebra_point(const SymMetric4& g, const AlgebraParams& p) {
  p.validate();
  LowerTriangular4 A = triangular_factor(g);
  LowerTriangular4 B = invert_lower_triangular(A);
  Mat4 kappa = kappa_matrix(p);
  Mat4 h = A.mat() * kappa * A.mat().transposed();
  const Vec4 alpha_full{1.0, p.alpha[0], p.alpha[1], p.alpha[2]};
  const Vec4 beta = beta_from_alpha(alpha_full, B);
  return AlgebraPoint{std::move(A), std::move(B), kappa, h, beta, beta, alpha_full, p.a, p.c};
}

Vec4 alpha_from_beta(const Vec4& beta, const LowerTriangular4& A) {
  return vec_mat(beta, A.mat());
}

Vec4 beta_from_alpha(const Vec4& alpha_full, const LowerTriangular4& B) {
  return vec_mat(alpha_full, B.mat());
}

Element multiply(const Element& y, const Element& z, const AlgebraPoint& pt) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      s += pt.h(i, j) * y.comps[i] * z.comps[j];
  Element r;
  for (std::size_t i = 0; i < 4; ++i) r.comps[i] = s * pt.beta[i];
  return r;
}

Element conjugate(const Element& y) {
  return Element{{y.comps[0], -y.comps[1], -y.comps[2], -y.comps[3]}};
}

namespace {

// A flat copy of the point: A = B = I, h = kappa, beta = alpha_full. The
// conjugate-product identity lives in the k-basis.
AlgebraPoint flat_point(const AlgebraPoint& pt) {
  AlgebraPoint f = pt;
  SymMetric4 eta = check_signature(Mat4::eta());
  f.A = triangular_factor(eta);
  f.B = invert_lower_triangular(f.A);
  f.h = pt.kappa;
  f.beta = pt.alpha_full;
  f.r_vec = pt.alpha_full;
  return f;
}

double minkowski_quadratic(const Element& y) {
  return y.comps[0] * y.comps[0] - y.comps[1] * y.comps[1] - y.comps[2] * y.comps[2] -
         y.comps[3] * y.comps[3];
}

}  // namespace

ResidualReport algebra_identity_report(const AlgebraPoint& pt, const SymMetric4& g, int trials,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_element = [&] {
    Element e;
    for (auto& v : e.comps) v = unit(rng);
    return e;
  };

  const AlgebraPoint flat = flat_point(pt);

  double eq4 = 0.0, zr = 0.0, triple = 0.0, divis = 0.0;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    const Element y = random_element();
    const Element z = random_element();
    const Element w = random_element();

    // conjugate product in the k-basis: y ybar = a * Q(y) * R
    const Element prod = multiply(y, conjugate(y), flat);
    const double q = pt.a * minkowski_quadratic(y);
    for (std::size_t i = 0; i < 4; ++i)
      eq4 = std::max(eq4, std::abs(prod.comps[i] - q * flat.beta[i]));

    // z R = R y = 0 in the e-basis
    const Element r{pt.r_vec};
    zr = std::max(zr, max_abs(multiply(z, r, pt).comps));
    zr = std::max(zr, max_abs(multiply(r, y, pt).comps));

    // triple products vanish
    triple = std::max(triple, max_abs(multiply(multiply(y, z, pt), w, pt).comps));

    // any nonzero product is parallel to beta
    const Element p2 = multiply(y, z, pt);
    const double pn = max_abs(p2.comps);
    if (pn > 1e-12) {
      const double bn = max_abs(pt.beta);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
          divis = std::max(divis, std::abs(p2.comps[i] * pt.beta[j] - p2.comps[j] * pt.beta[i]) /
                                      (pn * bn));
    }
  }

  ResidualReport rep;
  rep.add("eq4", eq4);
  rep.add("zR", zr);
  rep.add("triple", triple);
  rep.add("parallel", divis);

  double r22 = max_abs(mat_vec(pt.h, pt.beta));
  double r22t = max_abs(vec_mat(pt.beta, pt.h));
  rep.add("eq22.row", r22);
  rep.add("eq22.col", r22t);

  double r23 = 0.0;
  for (int i = 0; i < 4; ++i) r23 = std::max(r23, std::abs(pt.h(0, i) - pt.h(i, 0)));
  rep.add("eq23", r23);

  rep.add("eq20", std::abs(dot(pt.beta, mat_vec(g.mat(), pt.beta))));

  double a0 = 0.0;
  for (int j = 0; j < 4; ++j) a0 += pt.beta[j] * pt.A(j, 0);
  rep.add("eq21", std::abs(a0 - 1.0));

  const RankDet rd = rank_and_det(pt.kappa, 1e-10);
  rep.add("kappa.rank", rd.rank == 3 ? 0.0 : 1.0);
  rep.add("kappa.det", std::abs(rd.det));
  return rep;
}

}  // namespace prak
