#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "commutant/coefficient.hpp"
#include "commutant/errors.hpp"
#include "commutant/quadrature.hpp"
#include "commutant/residuals.hpp"
#include "commutant/spectra.hpp"

namespace commutant {

inline constexpr double kInteriorMargin = 1e-2;

/// 21 Chebyshev points on [-1 + margin, 1 - margin].
inline std::vector<double> interior_points(double margin = kInteriorMargin) {
  return chebyshev_points(21, -1.0 + margin, 1.0 - margin);
}

/// Coefficients of the formal adjoint  conj(a) u'' + (2 conj(a)' - conj(b)) u'
/// + (conj(a)'' - conj(b)' + conj(c)) u.
inline DiffOp adjoint_coeffs(const DiffOp& op) {
  const Coefficient ab = op.a.conj(), bb = op.b.conj(), cb = op.c.conj();
  const Coefficient abp = ab.derivative();
  return DiffOp{ab, cplx{2.0} * abp - bb, abp.derivative() - bb.derivative() + cb, op.gauge};
}

struct SelfAdjointReport {
  bool selfadjoint = false;
  double im_a = 0.0;              // max |Im a|
  double re_b_minus_da = 0.0;     // max |Re b - a'|
  double im_c_minus_half_db = 0.0;  // max |Im c - Im b' / 2|
};

inline SelfAdjointReport is_selfadjoint(const DiffOp& op, double tol = 1e-10) {
  SelfAdjointReport r;
  for (double y : interior_points()) {
    const Jet a = op.a.jet(y, 1), b = op.b.jet(y, 1);
    const cplx c = op.c(y);
    r.im_a = std::max(r.im_a, std::abs(a[0].imag()));
    r.re_b_minus_da = std::max(r.re_b_minus_da, std::abs(b[0].real() - a[1].real()));
    r.im_c_minus_half_db = std::max(r.im_c_minus_half_db, std::abs(c.imag() - 0.5 * b[1].imag()));
  }
  r.selfadjoint = r.im_a <= tol && r.re_b_minus_da <= tol && r.im_c_minus_half_db <= tol;
  return r;
}

struct CommuteReport {
  std::array<double, 4> residuals{};  // one per coefficient of u''', ..., u (after the u'''' match)
  bool commute = false;
};

/// Coefficient identities equivalent to L D = D L for L = (a, b, c), D = (A, B, C).
inline CommuteReport commute_conditions(const DiffOp& l, const DiffOp& d, double tol = 1e-10) {
  CommuteReport r;
  double amax = 0.0;
  for (double y : interior_points()) {
    const Jet a = l.a.jet(y, 1), b = l.b.jet(y, 2), c = l.c.jet(y, 2);
    const Jet A = d.a.jet(y, 1), B = d.b.jet(y, 2), C = d.c.jet(y, 2);
    amax = std::max(amax, std::abs(a[0]));
    // terms paired so that D = L cancels exactly
    const cplx e[4] = {
        a[0] * A.derivative(1) - A[0] * a.derivative(1),
        2.0 * (a[0] * B.derivative(1) - A[0] * b.derivative(1)) +
            (b[0] * A.derivative(1) - B[0] * a.derivative(1)),
        (a[0] * B.derivative(2) - A[0] * b.derivative(2)) +
            2.0 * (a[0] * C.derivative(1) - A[0] * c.derivative(1)) +
            (b[0] * B.derivative(1) - B[0] * b.derivative(1)),
        (a[0] * C.derivative(2) - A[0] * c.derivative(2)) +
            (b[0] * C.derivative(1) - B[0] * c.derivative(1)),
    };
    for (int i = 0; i < 4; ++i) r.residuals[i] = std::max(r.residuals[i], std::abs(e[i]));
  }
  if (amax == 0.0) throw DegenerateError("commute_conditions assumes a != 0");
  r.commute = true;
  for (double v : r.residuals) r.commute = r.commute && v <= tol;
  return r;
}

struct NormalityReport {
  bool selfadjoint = false;
  bool normal = false;
  std::map<std::string, double> condition_residuals;
  std::optional<double> matrix_check;
  double alpha = 0.0;  // Im a = alpha Re a
  double gamma = 0.0;  // skew part = gamma (sqrt(a) d/dy + c1)
  std::string reason;
};

namespace detail {

inline double max_over(const std::vector<double>& ys, const auto& f) {
  double m = 0.0;
  for (double y : ys) m = std::max(m, f(y));
  return m;
}

/// max |v - i t| with t the mean of Im v  (v minus a fitted imaginary constant)
inline double residual_mod_imag_const(const std::vector<cplx>& v) {
  double t = 0.0;
  for (cplx x : v) t += x.imag();
  t /= double(v.size());
  return max_abs_minus(v, cplx(0.0, t));
}

inline double residual_mod_real_const(const std::vector<cplx>& v) {
  double t = 0.0;
  for (cplx x : v) t += x.real();
  t /= double(v.size());
  return max_abs_minus(v, cplx(t, 0.0));
}

}  // namespace detail

/// Relative anti-Hermitian part of the Galerkin matrix of L in a Legendre
/// basis of degree < m, with n-point Gauss-Legendre quadrature.
inline double matrix_selfadjoint_defect(const DiffOp& op, int n = 64, int m = 24) {
  const Grid g = build_grid(n, GridKind::gauss_legendre);
  Eigen::MatrixXcd v(n, m), lv(n, m);
  for (int i = 0; i < n; ++i) {
    const double y = g.nodes[i];
    const cplx a = op.a(y), b = op.b(y), c = op.c(y);
    const Jet x = Jet::variable(y, 2);
    Jet p0(1.0, 2), p1 = x;
    for (int k = 0; k < m; ++k) {
      const Jet& p = k == 0 ? p0 : p1;
      const double s = std::sqrt((2.0 * k + 1.0) / 2.0) * std::sqrt(g.weights[i]);
      v(i, k) = s * p[0];
      lv(i, k) = s * (a * p.derivative(2) + b * p.derivative(1) + c * p[0]);
      if (k >= 1) {
        const Jet next = (x * p1 * (2.0 * k + 1.0) - p0 * double(k)) / double(k + 1);
        p0 = p1;
        p1 = next;
      }
    }
  }
  const Eigen::MatrixXcd gm = v.adjoint() * lv;
  const Eigen::MatrixXcd skew = gm - gm.adjoint();
  return spectral_norm(skew) / (spectral_norm(gm) + 1e-300);
}

/// Relative mismatch of the Gram matrices of L and L* on the basis
/// (1 - y^2)^2 P_k, k < m (zero for normal L).
inline double matrix_normal_defect(const DiffOp& op, int n = 96, int m = 16) {
  const Grid g = build_grid(n, GridKind::gauss_legendre);
  const DiffOp adj = adjoint_coeffs(op);
  const Coefficient bump = Coefficient::polynomial({1.0, 0.0, -2.0, 0.0, 1.0});
  Eigen::MatrixXcd lv(n, m), av(n, m);
  for (int i = 0; i < n; ++i) {
    const double y = g.nodes[i];
    const Jet x = Jet::variable(y, 2);
    const Jet w = bump.jet(y, 2);
    Jet p0(1.0, 2), p1 = x;
    for (int k = 0; k < m; ++k) {
      const Jet f = (k == 0 ? p0 : p1) * w;
      const double s = std::sqrt((2.0 * k + 1.0) / 2.0) * std::sqrt(g.weights[i]);
      lv(i, k) = s * (op.a(y) * f.derivative(2) + op.b(y) * f.derivative(1) + op.c(y) * f[0]);
      av(i, k) = s * (adj.a(y) * f.derivative(2) + adj.b(y) * f.derivative(1) + adj.c(y) * f[0]);
      if (k >= 1) {
        const Jet next = (x * p1 * (2.0 * k + 1.0) - p0 * double(k)) / double(k + 1);
        p0 = p1;
        p1 = next;
      }
    }
  }
  const Eigen::MatrixXcd ga = lv.adjoint() * lv, gb = av.adjoint() * av;
  return spectral_norm(ga - gb) / (spectral_norm(ga) + 1e-300);
}

/// Normality test by the self-adjoint/skew split. After rotating L so that
/// a is real and positive, L is normal iff its skew part is gamma L1 with
/// L1 = sqrt(a) d/dy + c1 and
///   Re b0 = a',  c1 - (2 b0 - a') / (4 sqrt a) in iR,
///   4 c0 - [2 b0' - a'' + (a' - 2 b0)(3 a' - 2 b0) / (4 a)] in R,
/// where b0, c0 are the remaining first- and zeroth-order coefficients.
/// A vanishing gamma reduces to: the skew part is an imaginary constant.
inline NormalityReport is_normal(const DiffOp& op, double tol = 1e-10,
                                 bool with_matrix_check = false) {
  NormalityReport rep;
  rep.selfadjoint = is_selfadjoint(op, tol).selfadjoint;
  const std::vector<double> ys = interior_points();

  // rotate: Im a = alpha Re a, then (1 - i alpha) a is real
  double num = 0.0, den = 0.0, amax = 0.0;
  for (double y : ys) {
    const cplx a = op.a(y);
    num += a.real() * a.imag();
    den += a.real() * a.real();
    amax = std::max(amax, std::abs(a));
  }
  if (amax == 0.0) throw DegenerateError("is_normal assumes a != 0");
  if (den == 0.0) {
    // purely imaginary a: rotate by -i instead
    rep.alpha = INFINITY;
  } else {
    rep.alpha = num / den;
  }
  cplx rot = std::isinf(rep.alpha) ? cplx(0.0, -1.0) : cplx(1.0, -rep.alpha);
  double re_sum = 0.0;
  for (double y : ys) re_sum += (rot * op.a(y)).real();
  if (re_sum < 0.0) rot = -rot;
  rot /= std::abs(rot) * amax;  // the verdict is scale-free
  const DiffOp lt = rot * op;

  const double im_a = detail::max_over(ys, [&](double y) { return std::abs(lt.a(y).imag()); });
  const double min_a = [&] {
    double m = INFINITY;
    for (double y : ys) m = std::min(m, lt.a(y).real());
    return m;
  }();
  rep.condition_residuals["im_a"] = im_a;
  if (im_a > tol) {
    rep.reason = "Im a is not proportional to Re a";
    return rep;
  }
  if (!(min_a > 0.0)) {
    rep.reason = "a changes sign in the interior";
    return rep;
  }

  const DiffOp adj = adjoint_coeffs(lt);
  const Coefficient skew_b = cplx{0.5} * (lt.b - adj.b);
  const Coefficient skew_c = cplx{0.5} * (lt.c - adj.c);
  const Coefficient a = lt.a;
  const Coefficient root = a.sqrt();

  double gnum = 0.0, gden = 0.0;
  for (double y : ys) {
    gnum += (skew_b(y) * std::conj(root(y))).real();
    gden += std::norm(root(y));
  }
  rep.gamma = gnum / gden;

  if (std::abs(rep.gamma) <= tol) {
    std::vector<cplx> sc;
    for (double y : ys) sc.push_back(skew_c(y));
    rep.condition_residuals["skew_b"] =
        detail::max_over(ys, [&](double y) { return std::abs(skew_b(y)); });
    rep.condition_residuals["skew_c_constant"] = detail::residual_mod_imag_const(sc);
    rep.normal = rep.condition_residuals["skew_b"] <= tol &&
                 rep.condition_residuals["skew_c_constant"] <= tol;
    if (!rep.normal) rep.reason = "skew part is not a constant multiple of the identity";
  } else {
    const cplx gamma = rep.gamma;
    const Coefficient b0 = lt.b - gamma * root;
    const Coefficient c0 = lt.c - skew_c;
    const Coefficient c1 = skew_c * (1.0 / gamma);
    std::vector<cplx> c1_dev, c0_dev;
    double b1_res = 0.0, re_b0 = 0.0;
    for (double y : ys) {
      const Jet aj = a.jet(y, 2), b0j = b0.jet(y, 1), rj = root.jet(y, 0);
      const cplx av = aj[0], ap = aj.derivative(1), app = aj.derivative(2);
      const cplx bv = b0j[0], bp = b0j.derivative(1);
      b1_res = std::max(b1_res, std::abs(skew_b(y) / gamma - rj[0]));
      re_b0 = std::max(re_b0, std::abs(bv.real() - ap.real()));
      c1_dev.push_back(c1(y) - (2.0 * bv - ap) / (4.0 * rj[0]));
      c0_dev.push_back(4.0 * c0(y) -
                       (2.0 * bp - app + (ap - 2.0 * bv) * (3.0 * ap - 2.0 * bv) / (4.0 * av)));
    }
    rep.condition_residuals["b1_eq_sqrt_a"] = b1_res;
    rep.condition_residuals["re_b0_eq_da"] = re_b0;
    rep.condition_residuals["c1"] = detail::residual_mod_imag_const(c1_dev);
    rep.condition_residuals["c0"] = detail::residual_mod_real_const(c0_dev);
    rep.normal = true;
    for (const auto& [name, v] : rep.condition_residuals) rep.normal = rep.normal && v <= tol;
    if (!rep.normal) rep.reason = "normality conditions violated";
  }
  if (with_matrix_check) rep.matrix_check = matrix_normal_defect(op);
  return rep;
}

}  // namespace commutant
