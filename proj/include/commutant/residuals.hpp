#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "commutant/errors.hpp"
#include "commutant/families.hpp"
#include "commutant/identity.hpp"

namespace commutant {

struct ResidualGrid {
  int ny = 41;
  int nz = 41;
  double z_exclusion = 1e-2;  // applied to singular kernels only
};

struct ResidualReport {
  double max_abs = 0.0;
  double rms = 0.0;
  double argmax_y = 0.0;
  double argmax_z = 0.0;
  int n_points = 0;
  double scale = 0.0;  // max |k| over the sampled z

  double relative() const { return scale > 0.0 ? max_abs / scale : max_abs; }
};

/// n Chebyshev-Lobatto points on [lo, hi], ascending.
inline std::vector<double> chebyshev_points(int n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : -std::cos(std::numbers::pi * i / (n - 1));
    x[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
  }
  return x;
}

inline ResidualReport residual_R2(const Kernel& kernel, const DiffOp& l1, const DiffOp& l2,
                                  const ResidualGrid& grid = {}) {
  if (grid.ny < 2 || grid.nz < 2) throw GridError("residual grid needs ny, nz >= 2");
  ResidualReport rep;
  double sum2 = 0.0;
  for (double y : chebyshev_points(grid.ny)) {
    const IdentityRow row(l1, l2, y);
    for (double z : chebyshev_points(grid.nz, -1.0 - y, 1.0 - y)) {
      if (kernel.singular() && std::abs(z) <= grid.z_exclusion) continue;
      const Jet k = kernel.jet(z, 2);
      const double f = std::abs(row(z, k));
      rep.scale = std::max(rep.scale, std::abs(k[0]));
      sum2 += f * f;
      ++rep.n_points;
      if (f > rep.max_abs || rep.n_points == 1) {
        rep.max_abs = f;
        rep.argmax_y = y;
        rep.argmax_z = z;
      }
    }
  }
  rep.rms = rep.n_points ? std::sqrt(sum2 / rep.n_points) : 0.0;
  return rep;
}

inline ResidualReport residual_R1(const CommutingPair& pair, const ResidualGrid& grid = {}) {
  return residual_R2(pair.kernel, pair.op, pair.op, grid);
}

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline constexpr int kFitPoints = 21;

/// Mean of v, i.e. the least-squares constant.
inline cplx fit_constant(const std::vector<cplx>& v) {
  cplx s = 0.0;
  for (cplx x : v) s += x;
  return v.empty() ? cplx{0.0} : s / double(v.size());
}

inline double max_abs_minus(const std::vector<cplx>& v, cplx shift) {
  double m = 0.0;
  for (cplx x : v) m = std::max(m, std::abs(x - shift));
  return m;
}

}  // namespace detail

/// Residuals of the z-derivatives at z = 0 of the commutation identity,
/// orders 0..max_order, with explicit kernel derivatives k_n = k^{(n)}(0).
inline std::vector<double> taylor_relation_check(const DiffOp& op, std::span<const cplx> kd,
                                                 int max_order) {
  if (max_order < 0 || max_order + 2 > static_cast<int>(kd.size()))
    throw SizeError("taylor_relation_check needs k derivatives through order max_order + 1");
  std::vector<double> out(max_order + 1, 0.0);
  for (double y : chebyshev_points(detail::kFitPoints)) {
    const Jet a = op.a.jet(y, max_order + 2), b = op.b.jet(y, max_order + 1),
              c = op.c.jet(y, max_order);
    for (int n = 0; n <= max_order; ++n) {
      cplx s = 2.0 * a.derivative(1) * kd[n + 1] + (b.derivative(1) - a.derivative(2)) * kd[n];
      for (int j = 0; j < n; ++j) {
        const double cnj = detail::binomial(n, j);
        s += cnj * (a.derivative(n - j) * kd[j + 2] + b.derivative(n - j) * kd[j + 1] +
                    c.derivative(n - j) * kd[j]);
      }
      out[n] = std::max(out[n], std::abs(s));
    }
  }
  return out;
}

inline std::vector<double> taylor_relation_check(const CommutingPair& pair, int max_order) {
  if (pair.kernel.singular())
    throw SingularKernelError("taylor_relation_check requires an analytic kernel");
  if (max_order > Kernel::kSeriesLength - 2)
    throw SizeError("taylor_relation_check order exceeds the stored series");
  std::vector<cplx> kd(Kernel::kSeriesLength);
  for (int n = 0; n < Kernel::kSeriesLength; ++n) kd[n] = pair.kernel.derivative_at_zero(n);
  return taylor_relation_check(pair.op, kd, max_order);
}

struct LemmaReport {
  double b_eq_aprime = 0.0;
  double c_eq_nu_a = 0.0;
  double a_ode = 0.0;
  cplx nu{0.0};
  cplx alpha{0.0};  // fitted a''' + alpha a' = 0
};

/// For analytic kernels with k'(0) = 0: b = a', c = nu a with nu = -3 k''(0)/k(0),
/// and a''' + alpha a' = 0 for a fitted alpha.
inline LemmaReport lemma_coeff_check(const CommutingPair& pair) {
  const Kernel& k = pair.kernel;
  if (k.singular()) throw SingularKernelError("lemma_coeff_check requires an analytic kernel");
  const cplx k0 = k.derivative_at_zero(0), k1 = k.derivative_at_zero(1),
             k2 = k.derivative_at_zero(2);
  if (std::abs(k1) > 1e-10 * std::abs(k0))
    throw GaugeError("kernel not gauge-normalised (k'(0) != 0); apply gauge_normalize first");
  LemmaReport rep;
  rep.nu = -3.0 * k2 / k0;
  std::vector<cplx> ap, appp;
  for (double y : chebyshev_points(detail::kFitPoints)) {
    const Jet a = pair.op.a.jet(y, 3);
    rep.b_eq_aprime = std::max(rep.b_eq_aprime, std::abs(pair.op.b(y) - a.derivative(1)));
    rep.c_eq_nu_a = std::max(rep.c_eq_nu_a, std::abs(pair.op.c(y) - rep.nu * a[0]));
    ap.push_back(a.derivative(1));
    appp.push_back(a.derivative(3));
  }
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    num += std::conj(ap[i]) * appp[i];
    den += std::norm(ap[i]);
  }
  rep.alpha = den > 0.0 ? -num / den : cplx{0.0};
  for (std::size_t i = 0; i < ap.size(); ++i)
    rep.a_ode = std::max(rep.a_ode, std::abs(appp[i] + rep.alpha * ap[i]));
  return rep;
}

struct SingularRelationReport {
  double residual = 0.0;
  cplx fitted_const{0.0};
};

/// For a simple-pole kernel z k(z) = k0 (1 + k2 z^2 + ...):
/// c + a''/3 + 2 k2 a - b'/2 is constant.
inline SingularRelationReport singular_relation_check(const CommutingPair& pair) {
  const Kernel& k = pair.kernel;
  if (!k.singular()) throw RegularKernelError("singular_relation_check requires a pole at 0");
  const cplx t0 = k.taylor(0), t1 = k.taylor(1);
  if (std::abs(t1) > 1e-10 * std::abs(t0))
    throw GaugeError("kernel not gauge-normalised (linear Laurent term); apply gauge_normalize");
  const cplx k2 = k.taylor(2) / t0;
  std::vector<cplx> v;
  for (double y : chebyshev_points(detail::kFitPoints)) {
    const Jet a = pair.op.a.jet(y, 2);
    const Jet b = pair.op.b.jet(y, 1);
    v.push_back(pair.op.c(y) + a.derivative(2) / 3.0 + 2.0 * k2 * a[0] - b.derivative(1) / 2.0);
  }
  SingularRelationReport rep;
  rep.fitted_const = detail::fit_constant(v);
  rep.residual = detail::max_abs_minus(v, rep.fitted_const);
  return rep;
}

/// Boundary term of the principal-value commutation identity at x with an
/// excluded ball of radius eps, for a test function u.
inline cplx phi_defect(const CommutingPair& pair, const Coefficient& u, double x, double eps) {
  if (!pair.kernel.singular()) throw RegularKernelError("phi_defect requires a pole at 0");
  if (!(eps > 0.0) || x - eps < -1.0 || x + eps > 1.0)
    throw DomainError("phi_defect needs 0 < eps and [x - eps, x + eps] inside [-1, 1]");
  const DiffOp& op = pair.op;
  const Jet kp = pair.kernel.jet(eps, 1), km = pair.kernel.jet(-eps, 1);
  const cplx ax = op.a(x), bx = op.b(x);
  const Jet am = op.a.jet(x - eps, 1), apl = op.a.jet(x + eps, 1);
  const Jet um = u.jet(x - eps, 1), upl = u.jet(x + eps, 1);
  const cplx bm = op.b(x - eps), bp = op.b(x + eps);
  return kp[0] * ((am[0] - ax) * um[1] + (bm - bx - am[1]) * um[0]) -
         km[0] * ((apl[0] - ax) * upl[1] + (bp - bx - apl[1]) * upl[0]) +
         kp[1] * um[0] * (am[0] - ax) - km[1] * upl[0] * (apl[0] - ax);
}

}  // namespace commutant
