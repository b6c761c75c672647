#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "commutant/errors.hpp"
#include "commutant/families.hpp"
#include "commutant/quadrature.hpp"

namespace commutant {

enum class OperatorRole { K, L };

struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Grid grid;
  OperatorRole role = OperatorRole::K;
  // pv rows at x = +-1 lack the divergent log term; see nystrom_K_pv
  bool endpoint_rows_truncated = false;

  int size() const { return static_cast<int>(entries.rows()); }
};

/// K[i][j] = w_j k(x_i - x_j)
inline OperatorMatrix nystrom_K(const Kernel& kernel, const Grid& grid) {
  if (kernel.singular()) throw SingularKernelError("nystrom_K needs an analytic kernel; use nystrom_K_pv");
  const int n = grid.size();
  OperatorMatrix m{Eigen::MatrixXcd(n, n), grid, OperatorRole::K};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.entries(i, j) = grid.weights[j] * kernel(grid.nodes[i] - grid.nodes[j]);
  return m;
}

inline OperatorMatrix nystrom_K(const CommutingPair& pair, const Grid& grid) {
  return nystrom_K(pair.kernel, grid);
}

/// Principal-value Nystrom matrix for k(z) = r/z + k_reg(z).
///
/// The pole part is handled by subtraction,
///   pv int r u(y)/(x-y) dy = r int (u(y) - u(x))/(x-y) dy + r u(x) log((1+x)/(1-x)),
/// where the smooth integrand takes the value -u'(x) at y = x; that value
/// is supplied by the spectral differentiation matrix. At x = +-1 the log
/// term diverges and is omitted (flagged on the result).
inline OperatorMatrix nystrom_K_pv(const Kernel& kernel, const Grid& grid) {
  if (!kernel.singular()) throw RegularKernelError("nystrom_K_pv needs a kernel with a pole at 0");
  const int n = grid.size();
  const auto& x = grid.nodes;
  const auto& w = grid.weights;
  const cplx r = kernel.residue();
  const Eigen::MatrixXd d = differentiation_matrix(x);
  OperatorMatrix m{Eigen::MatrixXcd(n, n), grid, OperatorRole::K};
  const cplx kreg0 = kernel.regular_part(0.0);
  for (int i = 0; i < n; ++i) {
    double pole_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double z = x[i] - x[j];
      pole_sum += w[j] / z;
      m.entries(i, j) = w[j] * kernel(z) - r * w[i] * d(i, j);
    }
    cplx diag = w[i] * kreg0 - r * pole_sum - r * w[i] * d(i, i);
    if (std::abs(x[i]) < 1.0)
      diag += r * std::log((1.0 + x[i]) / (1.0 - x[i]));
    else
      m.endpoint_rows_truncated = true;
    m.entries(i, i) = diag;
  }
  return m;
}

inline OperatorMatrix nystrom_K_pv(const CommutingPair& pair, const Grid& grid) {
  return nystrom_K_pv(pair.kernel, grid);
}

/// Nystrom matrix of either kind, chosen by the kernel.
inline OperatorMatrix discretize_K(const Kernel& kernel, const Grid& grid) {
  return kernel.singular() ? nystrom_K_pv(kernel, grid) : nystrom_K(kernel, grid);
}

/// diag(a) D^2 + diag(b) D + diag(c) on Legendre-Gauss-Lobatto nodes.
inline OperatorMatrix collocation_L(const DiffOp& op, const Grid& grid) {
  if (grid.kind != GridKind::legendre_gauss_lobatto)
    throw GridKindError("collocation_L requires a legendre_gauss_lobatto grid");
  const int n = grid.size();
  const Eigen::MatrixXd d = differentiation_matrix(grid.nodes);
  const Eigen::MatrixXd d2 = d * d;
  OperatorMatrix m{Eigen::MatrixXcd(n, n), grid, OperatorRole::L};
  for (int i = 0; i < n; ++i) {
    const double y = grid.nodes[i];
    const cplx a = op.a(y), b = op.b(y), c = op.c(y);
    for (int j = 0; j < n; ++j) m.entries(i, j) = a * d2(i, j) + b * d(i, j);
    m.entries(i, i) += c;
  }
  return m;
}

/// Row-major CSV, one "re,im" quoted cell per entry.
inline void write_matrix_csv(std::ostream& os, const OperatorMatrix& m) {
  char buf[96];
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) {
      const cplx v = m.entries(i, j);
      std::snprintf(buf, sizeof buf, "\"%.17g,%.17g\"", v.real(), v.imag());
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace commutant
