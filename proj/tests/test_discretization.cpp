#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "commutant/discretization.hpp"

using namespace commutant;
using std::numbers::pi;

namespace {

CommutingPair sinc_pair() { return make_general_pair(General{0.0, cplx(0.0, pi / 2), 1.0, 0.0}); }
CommutingPair pole_pair() { return make_special_pair(Case4{0.0, {1.0, 0.0, 0.0}}); }

// Sine integral by its Maclaurin series (fine for |t| <= 2 pi).
double sine_integral(double t) {
  double term = t, sum = t;
  for (int k = 1; k < 60; ++k) {
    term *= -t * t / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term / (2.0 * k + 1.0);
  }
  return sum;
}

// int_{-1}^{1} 2 sin(pi (x - y)/2) / ((pi/2)(x - y)) dy
double sinc_row_integral(double x) {
  return (4.0 / pi) * (sine_integral(pi * (x + 1) / 2) - sine_integral(pi * (x - 1) / 2));
}

Eigen::VectorXcd sample(const Grid& g, auto f) {
  Eigen::VectorXcd v(g.size());
  for (int i = 0; i < g.size(); ++i) v(i) = f(g.nodes[i]);
  return v;
}

}  // namespace

TEST(Grid, TwoPointGauss) {
  const Grid g = build_grid(2, GridKind::gauss_legendre);
  EXPECT_NEAR(g.nodes[0], -1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g.nodes[1], 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(g.weights[1], 1.0, 1e-15);
}

TEST(Grid, FourPointLobatto) {
  const Grid g = build_grid(4, GridKind::legendre_gauss_lobatto);
  const double s = 1 / std::sqrt(5.0);
  const double nodes[] = {-1, -s, s, 1}, weights[] = {1.0 / 6, 5.0 / 6, 5.0 / 6, 1.0 / 6};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(g.nodes[i], nodes[i], 1e-15);
    EXPECT_NEAR(g.weights[i], weights[i], 1e-15);
  }
}

TEST(Grid, WeightsSumAndOrdering) {
  for (GridKind kind : {GridKind::gauss_legendre, GridKind::legendre_gauss_lobatto}) {
    for (int n : {2, 3, 5, 16, 64, 127, 256}) {
      const Grid g = build_grid(n, kind);
      double sum = 0;
      for (int i = 0; i < n; ++i) {
        EXPECT_GT(g.weights[i], 0.0);
        if (i) EXPECT_LT(g.nodes[i - 1], g.nodes[i]);
        sum += g.weights[i];
      }
      EXPECT_NEAR(sum, 2.0, 1e-12) << n;
      const bool has_ends = g.nodes.front() == -1.0 && g.nodes.back() == 1.0;
      EXPECT_EQ(has_ends, kind == GridKind::legendre_gauss_lobatto);
    }
  }
}

TEST(Grid, PolynomialExactness) {
  for (int n : {3, 8, 20}) {
    const Grid gl = build_grid(n, GridKind::gauss_legendre);
    const Grid lgl = build_grid(n, GridKind::legendre_gauss_lobatto);
    auto integrate = [](const Grid& g, int d) {
      double s = 0;
      for (int i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
      return s;
    };
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(integrate(gl, d), exact, 1e-13) << n << " " << d;
      if (d <= 2 * n - 3) EXPECT_NEAR(integrate(lgl, d), exact, 1e-13) << n << " " << d;
    }
  }
}

TEST(Grid, Errors) {
  EXPECT_THROW(build_grid(1, GridKind::gauss_legendre), SizeError);
  EXPECT_THROW(grid_kind_from_string("chebyshev"), GridKindError);
  EXPECT_EQ(grid_kind_from_string("lgl"), GridKind::legendre_gauss_lobatto);
  EXPECT_EQ(grid_kind_from_string("gauss_legendre"), GridKind::gauss_legendre);
}

TEST(Nystrom, ConstantKernelExact) {
  const CommutingPair p = make_general_pair(General{2.0, 1.0, 1.0, 0.0});
  const Grid g = build_grid(9, GridKind::legendre_gauss_lobatto);
  const Eigen::VectorXcd ku = nystrom_K(p, g).entries * Eigen::VectorXcd::Ones(9);
  for (int i = 0; i < 9; ++i) EXPECT_LT(std::abs(ku(i) - 4.0), 1e-13);
}

TEST(Nystrom, SymmetricInWeightedInnerProduct) {
  const Grid g = build_grid(64, GridKind::legendre_gauss_lobatto);
  const OperatorMatrix k = nystrom_K(sinc_pair(), g);
  // K W^{-1} is the symmetric kernel matrix k(x_i - x_j)
  double worst = 0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      worst = std::max(worst, std::abs(k.entries(i, j) / g.weights[j] - k.entries(j, i) / g.weights[i]));
  EXPECT_LT(worst, 1e-12);
}

TEST(Nystrom, TopEigenvalueRealPositiveSimple) {
  const Grid g = build_grid(64, GridKind::legendre_gauss_lobatto);
  const OperatorMatrix k = nystrom_K(sinc_pair(), g);
  Eigen::MatrixXd sym(64, 64);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      sym(i, j) = std::sqrt(g.weights[i]) * k.entries(i, j).real() / std::sqrt(g.weights[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  const auto& ev = es.eigenvalues();
  EXPECT_GT(ev(63), 0.0);
  EXPECT_GT(ev(63) - ev(62), 0.1 * ev(63));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(k.entries);
  double top = 0;
  cplx top_v;
  for (int i = 0; i < 64; ++i)
    if (std::abs(ces.eigenvalues()(i)) > top) top = std::abs(top_v = ces.eigenvalues()(i));
  EXPECT_LT(std::abs(top_v.imag()), 1e-12);
  EXPECT_NEAR(top_v.real(), ev(63), 1e-12);
}

TEST(Nystrom, SpectralConvergenceOnConstant) {
  double prev = INFINITY;
  for (int n : {4, 8, 16}) {
    const Grid g = build_grid(n, GridKind::legendre_gauss_lobatto);
    const Eigen::VectorXcd ku = nystrom_K(sinc_pair(), g).entries * Eigen::VectorXcd::Ones(n);
    double err = 0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(ku(i) - sinc_row_integral(g.nodes[i])));
    if (std::isfinite(prev) && prev > 1e-13) EXPECT_LE(err, prev / 10) << n;
    prev = err;
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(Nystrom, KindMismatchErrors) {
  const Grid g = build_grid(8, GridKind::legendre_gauss_lobatto);
  EXPECT_THROW(nystrom_K(pole_pair(), g), SingularKernelError);
  EXPECT_THROW(nystrom_K_pv(sinc_pair(), g), RegularKernelError);
}

TEST(PrincipalValue, RowSumAtArbitraryNode) {
  // any distinct nodes with weights summing to 2: the pole row sum is exact
  const Grid g{{-1.0, -0.7, -0.2, 0.0, 0.5, 0.9, 1.0}, {0.1, 0.3, 0.4, 0.3, 0.4, 0.3, 0.2},
               GridKind::legendre_gauss_lobatto};
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(7);
  const Eigen::VectorXcd pole = nystrom_K_pv(pole_pair(), g).entries * ones;
  EXPECT_LT(std::abs(pole(4) - std::log(3.0)), 1e-12);
  EXPECT_LT(std::abs(pole(3)), 1e-12);
  const Eigen::VectorXcd shifted =
      nystrom_K_pv(make_special_pair(Case3{2.0, {1.0, 0.0, 0.0}}), g).entries * ones;
  EXPECT_LT(std::abs(shifted(4) - (std::log(3.0) + 1.0)), 1e-12);
}

TEST(PrincipalValue, RowSumIdentityOnLobattoGrid) {
  for (int n : {16, 64, 128}) {
    const Grid g = build_grid(n, GridKind::legendre_gauss_lobatto);
    const OperatorMatrix k = nystrom_K_pv(pole_pair(), g);
    EXPECT_TRUE(k.endpoint_rows_truncated);
    const Eigen::VectorXcd s = k.entries * Eigen::VectorXcd::Ones(n);
    for (int i = 1; i + 1 < n; ++i) {
      const double x = g.nodes[i];
      EXPECT_LT(std::abs(s(i) - std::log((1 + x) / (1 - x))), 1e-12) << n << " " << x;
    }
  }
  EXPECT_FALSE(nystrom_K_pv(pole_pair(), build_grid(16, GridKind::gauss_legendre)).endpoint_rows_truncated);
}

TEST(PrincipalValue, FiniteHilbertTransformOfLinear) {
  const Grid g = build_grid(64, GridKind::legendre_gauss_lobatto);
  const Eigen::VectorXcd ku = nystrom_K_pv(pole_pair(), g).entries * sample(g, [](double y) { return y; });
  for (int i = 1; i < 63; ++i) {
    const double x = g.nodes[i];
    EXPECT_LT(std::abs(ku(i) - (-2 + x * std::log((1 + x) / (1 - x)))), 1e-12);
  }
}

TEST(PrincipalValue, RegularPartOfHyperbolicKernel) {
  // k = 1/sinh(z): pv int_{-1}^{1} dy / sinh(x - y) = log(tanh((1+x)/2) / tanh((1-x)/2))
  const CommutingPair p = make_special_pair(Case2{2.0, 1.0, 0.0});
  const Grid g = build_grid(48, GridKind::gauss_legendre);
  const Eigen::VectorXcd s = nystrom_K_pv(p, g).entries * Eigen::VectorXcd::Ones(48);
  for (int i = 0; i < 48; ++i) {
    const double x = g.nodes[i];
    EXPECT_LT(std::abs(s(i) - std::log(std::tanh((1 + x) / 2) / std::tanh((1 - x) / 2))), 1e-12);
  }
}

TEST(Collocation, PolynomialExactness) {
  const DiffOp op{Coefficient::polynomial({-1.0, 0.0, 1.0}), Coefficient::polynomial({0.0, 2.0}),
                  Coefficient::constant(0.0), {}};
  const Grid g = build_grid(12, GridKind::legendre_gauss_lobatto);
  const OperatorMatrix l = collocation_L(op, g);
  const Eigen::VectorXcd ly = l.entries * sample(g, [](double y) { return y; });
  const Eigen::VectorXcd ly2 = l.entries * sample(g, [](double y) { return y * y; });
  for (int i = 0; i < 12; ++i) {
    const double y = g.nodes[i];
    EXPECT_LT(std::abs(ly(i) - 2 * y), 1e-12);
    EXPECT_LT(std::abs(ly2(i) - (6 * y * y - 2)), 1e-12);
  }
}

TEST(Collocation, MultiplicationOperatorIsIdentity) {
  const DiffOp op{Coefficient::constant(0.0), Coefficient::constant(0.0), Coefficient::constant(1.0), {}};
  const Grid g = build_grid(10, GridKind::legendre_gauss_lobatto);
  EXPECT_EQ(collocation_L(op, g).entries, Eigen::MatrixXcd::Identity(10, 10));
}

TEST(Collocation, ExactOnHighDegreePolynomials) {
  const CommutingPair p = sinc_pair();
  const int n = 24;
  const Grid g = build_grid(n, GridKind::legendre_gauss_lobatto);
  const Coefficient u = Coefficient::analytic([](const Jet& y) {
    Jet r(1.0, y.order());
    for (int k = 0; k < 21; ++k) r = r * y * 0.9 + 0.3 * std::cos(k);  // degree n - 3
    return r;
  });
  const Eigen::VectorXcd lu = collocation_L(p.op, g).entries * sample(g, [&](double y) { return u(y); });
  for (int i = 0; i < n; ++i) {
    const double y = g.nodes[i];
    const cplx want = p.op.a(y) * u.derivative(y, 2) + p.op.b(y) * u.derivative(y, 1) + p.op.c(y) * u(y);
    EXPECT_LT(std::abs(lu(i) - want), 1e-10 * (1 + std::abs(want)));
  }
}

TEST(Collocation, RequiresLobattoGrid) {
  EXPECT_THROW(collocation_L(sinc_pair().op, build_grid(8, GridKind::gauss_legendre)), GridKindError);
}

TEST(MatrixCsv, QuotedComplexCells) {
  const Grid g = build_grid(2, GridKind::legendre_gauss_lobatto);
  OperatorMatrix m{Eigen::MatrixXcd(2, 2), g, OperatorRole::K};
  m.entries << cplx(1.0, -0.5), 0.25, cplx(0.0, 3.0), 0.1;
  std::ostringstream os;
  write_matrix_csv(os, m);
  EXPECT_EQ(os.str(), "\"1,-0.5\",\"0.25,0\"\n\"0,3\",\"0.10000000000000001,0\"\n");
}
