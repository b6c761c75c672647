#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "commutant/errors.hpp"

namespace commutant {

enum class GridKind { gauss_legendre, legendre_gauss_lobatto };

inline std::string to_string(GridKind k) {
  return k == GridKind::gauss_legendre ? "gauss_legendre" : "legendre_gauss_lobatto";
}

inline GridKind grid_kind_from_string(const std::string& s) {
  if (s == "gauss_legendre" || s == "gl") return GridKind::gauss_legendre;
  if (s == "legendre_gauss_lobatto" || s == "lgl") return GridKind::legendre_gauss_lobatto;
  throw GridKindError("unknown grid kind '" + s + "'");
}

struct Grid {
  std::vector<double> nodes;    // ascending in [-1, 1]
  std::vector<double> weights;  // quadrature weights, sum 2
  GridKind kind = GridKind::legendre_gauss_lobatto;

  int size() const { return static_cast<int>(nodes.size()); }
  bool operator==(const Grid& o) const {
    return kind == o.kind && nodes == o.nodes && weights == o.weights;
  }
};

namespace detail {

/// P_n(x) and P_{n-1}(x) by the three-term recurrence.
inline void legendre_pair(int n, double x, double& pn, double& pn1) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    pn = 1.0;
    pn1 = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

}  // namespace detail

inline Grid build_grid(int n, GridKind kind) {
  if (n < 2) throw SizeError("grid size must be at least 2");
  using std::numbers::pi;
  Grid g;
  g.kind = kind;
  g.nodes.resize(n);
  g.weights.resize(n);
  if (kind == GridKind::gauss_legendre) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double pn = 0, pn1 = 0, dp = 1;
      for (int it = 0; it < 100; ++it) {
        detail::legendre_pair(n, x, pn, pn1);
        dp = n * (x * pn - pn1) / (x * x - 1.0);
        const double dx = pn / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      detail::legendre_pair(n, x, pn, pn1);
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      g.nodes[n - 1 - i] = x;
      g.nodes[i] = -x;
      g.weights[i] = g.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.nodes[n / 2] = 0.0;
  } else {
    // interior nodes are the roots of P'_N, N = n - 1
    const int N = n - 1;
    g.nodes[0] = -1.0;
    g.nodes[n - 1] = 1.0;
    for (int i = 1; i <= (n - 1) / 2; ++i) {
      double x = std::cos(pi * i / N);
      for (int it = 0; it < 100; ++it) {
        double pn, pn1;
        detail::legendre_pair(N, x, pn, pn1);
        // Newton on P'_N, with P''_N from the Legendre equation
        const double d1 = N * (x * pn - pn1) / (x * x - 1.0);
        const double d2 = (2.0 * x * d1 - N * (N + 1.0) * pn) / (1.0 - x * x);
        const double dx = d1 / d2;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.nodes[n - 1 - i] = x;
      g.nodes[i] = -x;
    }
    if (n % 2 == 1) g.nodes[n / 2] = 0.0;
    for (int i = 0; i < n; ++i) {
      double pn, pn1;
      detail::legendre_pair(N, g.nodes[i], pn, pn1);
      g.weights[i] = 2.0 / (N * (N + 1.0) * pn * pn);
    }
  }
  return g;
}

/// Barycentric weights, scaled so the largest has modulus 1.
inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> logw(n, 0.0), sign(n, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      logw[j] -= std::log(std::abs(d));
      if (d < 0) sign[j] = -sign[j];
    }
  double mx = logw[0];
  for (double v : logw) mx = std::max(mx, v);
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - mx);
  return w;
}

/// Spectral differentiation matrix on arbitrary distinct nodes.
inline Eigen::MatrixXd differentiation_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const std::vector<double> w = barycentric_weights(x);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

}  // namespace commutant
