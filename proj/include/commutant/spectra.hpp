#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "commutant/discretization.hpp"
#include "commutant/errors.hpp"

namespace commutant {

namespace detail {

inline void require_same_grid(const OperatorMatrix& k, const OperatorMatrix& l) {
  if (!(k.grid == l.grid) || k.size() != l.size())
    throw GridMismatch("operators are discretized on different grids");
}

/// W^{1/2} A W^{-1/2}: the matrix of A in the quadrature-weighted inner product.
inline Eigen::MatrixXcd weighted(const OperatorMatrix& a) {
  const int n = a.size();
  Eigen::MatrixXcd r = a.entries;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) *= std::sqrt(a.grid.weights[i] / a.grid.weights[j]);
  return r;
}

}  // namespace detail

/// Spectral norm by power iteration on A^H A.
inline double spectral_norm(const Eigen::MatrixXcd& a, int max_iter = 50, double tol = 1e-10) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXcd v(a.cols());
  for (int i = 0; i < v.size(); ++i) v(i) = 1.0 + 0.37 * std::sin(1.0 + i);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double s = std::sqrt(nw);
    v = w / nw;
    if (std::abs(s - sigma) <= tol * s) {
      sigma = s;
      break;
    }
    sigma = s;
  }
  return sigma;
}

struct CommutatorOptions {
  bool weighted = true;
  // drop first and last grid row/column (pv kernels on Lobatto grids)
  bool interior_only = false;
};

/// ||KL - LK|| / (||K|| ||L|| + tiny)
inline double commutator_norm(const OperatorMatrix& k, const OperatorMatrix& l,
                              const CommutatorOptions& opt = {}) {
  detail::require_same_grid(k, l);
  Eigen::MatrixXcd km = opt.weighted ? detail::weighted(k) : k.entries;
  Eigen::MatrixXcd lm = opt.weighted ? detail::weighted(l) : l.entries;
  Eigen::MatrixXcd c = km * lm - lm * km;
  if (opt.interior_only) {
    const int n = k.size();
    if (n < 3) throw SizeError("interior restriction needs at least 3 nodes");
    c = c.block(1, 1, n - 2, n - 2).eval();
    km = km.block(1, 1, n - 2, n - 2).eval();
    lm = lm.block(1, 1, n - 2, n - 2).eval();
  }
  return spectral_norm(c) / (spectral_norm(km) * spectral_norm(lm) + 1e-300);
}

struct SpectralOptions {
  bool sort_by_real = false;
  bool extended_precision = true;
  double degenerate_tol = 1e-8;
};

struct SpectralReport {
  std::vector<cplx> L_eigenvalues;
  std::vector<cplx> rayleigh;
  std::vector<double> mode_residuals;
  double offdiag_energy = 0.0;
  std::vector<cplx> K_eigenvalues_direct;  // largest |.| first
  bool degenerate_spectrum = false;
};

namespace detail {

using cplxl = std::complex<long double>;
using MatrixXcl = Eigen::Matrix<cplxl, Eigen::Dynamic, Eigen::Dynamic>;

template <class Matrix>
std::vector<cplx> eigenvalues_of(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw EigFailure("eigensolver did not converge");
  std::vector<cplx> out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto v = es.eigenvalues()(i);
    out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return out;
}

}  // namespace detail

/// Uses eigenvectors of L as approximate eigenvectors of K: for the m
/// selected L-modes reports Rayleigh quotients against K, residuals, and the
/// off-diagonal part of the projected K.
inline SpectralReport joint_diagonalization(const OperatorMatrix& k, const OperatorMatrix& l, int m,
                                            const SpectralOptions& opt = {}) {
  detail::require_same_grid(k, l);
  const int n = k.size();
  if (m < 1 || m > n) throw SizeError("mode count must lie in [1, n]");
  const Eigen::MatrixXcd kw = detail::weighted(k);
  const Eigen::MatrixXcd lw = detail::weighted(l);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(lw, true);
  if (es.info() != Eigen::Success) throw EigFailure("eigensolver did not converge on L");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  if (opt.sort_by_real)
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return ev(x).real() < ev(y).real(); });
  else
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return std::abs(ev(x)) < std::abs(ev(y)); });

  SpectralReport rep;
  double evmax = 0.0;
  for (int i = 0; i < n; ++i) evmax = std::max(evmax, std::abs(ev(i)));
  Eigen::MatrixXcd phi(n, m);
  for (int s = 0; s < m; ++s) {
    rep.L_eigenvalues.push_back(ev(order[s]));
    phi.col(s) = es.eigenvectors().col(order[s]).normalized();
  }
  std::vector<int> cluster(m);
  std::iota(cluster.begin(), cluster.end(), 0);
  for (int s = 1; s < m; ++s)
    if (std::abs(rep.L_eigenvalues[s] - rep.L_eigenvalues[s - 1]) <= opt.degenerate_tol * evmax) {
      rep.degenerate_spectrum = true;
      cluster[s] = cluster[s - 1];
    }

  // Projected K accumulated in extended precision: the trailing Rayleigh
  // quotients sit many orders of magnitude below ||K||.
  const detail::MatrixXcl kl = kw.cast<detail::cplxl>();
  const detail::MatrixXcl pl = phi.cast<detail::cplxl>();
  const detail::MatrixXcl kphi = kl * pl;
  const detail::MatrixXcl proj = pl.adjoint() * kphi;
  for (int s = 0; s < m; ++s) {
    const detail::cplxl rho = proj(s, s);
    rep.rayleigh.emplace_back(static_cast<double>(rho.real()), static_cast<double>(rho.imag()));
    const long double num = (kphi.col(s) - rho * pl.col(s)).norm();
    const long double den = kphi.col(s).norm();
    rep.mode_residuals.push_back(den > 0 ? static_cast<double>(num / den) : 0.0);
  }
  double diag_max = 0.0, off_max = 0.0;
  for (int s = 0; s < m; ++s) {
    diag_max = std::max(diag_max, static_cast<double>(std::abs(proj(s, s))));
    for (int t = 0; t < m; ++t)
      if (cluster[s] != cluster[t])
        off_max = std::max(off_max, static_cast<double>(std::abs(proj(s, t))));
  }
  rep.offdiag_energy = diag_max > 0.0 ? off_max / diag_max : 0.0;

  std::vector<cplx> kev = opt.extended_precision ? detail::eigenvalues_of(kl)
                                                 : detail::eigenvalues_of(kw);
  std::sort(kev.begin(), kev.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
  kev.resize(m);
  rep.K_eigenvalues_direct = kev;
  return rep;
}

/// Largest relative distance from each Rayleigh quotient to the nearest
/// direct K eigenvalue.
inline double rayleigh_mismatch(const SpectralReport& rep) {
  double worst = 0.0;
  for (cplx r : rep.rayleigh) {
    double best = INFINITY;
    for (cplx d : rep.K_eigenvalues_direct)
      best = std::min(best, std::abs(r - d) / std::max(std::abs(d), 1e-300));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace commutant
