#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "commutant/families.hpp"
#include "commutant/residuals.hpp"

using namespace commutant;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

General sinc_params() { return General{0.0, cplx(0.0, pi / 2), 1.0, 0.0}; }

// Independent long-double evaluation of the general kernel away from its zeros.
std::complex<long double> general_kernel_ld(const General& g, long double z) {
  using C = std::complex<long double>;
  const C l(g.lambda), m(g.mu), a1(g.alpha1), a2(g.alpha2);
  const C second = a1 * std::sinh(m * z) / m + a2 * std::cosh(m * z);
  return l / std::sinh(l * z / 2.0L) * second;
}

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace

TEST(GeneralFamily, DoubleLimitGivesPoleKernel) {
  const CommutingPair p = make_general_pair(General{0.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(p.kernel.singular());
  for (double z : {-1.7, -0.4, 0.05, 0.9, 2.0}) EXPECT_LT(rel(p.kernel(z), 2.0 / z), 1e-13);
  for (double y : {-0.8, 0.0, 0.35, 1.0}) {
    EXPECT_LT(std::abs(p.op.a(y) - (y * y - 1) / 2), 1e-15);
    EXPECT_LT(std::abs(p.op.b(y) - y), 1e-15);
    EXPECT_LT(std::abs(p.op.c(y)), 1e-15);
  }
}

TEST(GeneralFamily, HyperbolicKernelValue) {
  const CommutingPair p = make_general_pair(General{2.0, 0.0, 0.0, 1.0});
  // closed form 2 cosh(0)/sinh(1) = 1.7018362...
  EXPECT_LT(rel(p.kernel(1.0), 2.0 / std::sinh(1.0)), 1e-13);
  EXPECT_NEAR(p.kernel(1.0).real(), 1.70183626, 1e-8);
}

TEST(GeneralFamily, SincLimit) {
  const CommutingPair p = make_general_pair(sinc_params());
  EXPECT_FALSE(p.kernel.singular());
  for (double z : {-2.0, -1.1, -0.3, 1e-5, 0.7, 1.9}) {
    const double want = 2 * std::sin(pi * z / 2) / ((pi / 2) * z);
    EXPECT_LT(rel(p.kernel(z), want), 1e-12) << z;
  }
  EXPECT_LT(rel(p.kernel(0.0), 2.0), 1e-14);
  for (double y : {-0.9, -0.2, 0.6})
    EXPECT_LT(std::abs(p.op.c(y) - (pi * pi / 4) * (y * y - 1) / 2), 1e-14);
}

TEST(GeneralFamily, MatchesLongDoubleClosedForm) {
  const General g{cplx(0.8, 0.6), cplx(1.3, -0.4), cplx(0.2, 0.1), 0.0};
  const CommutingPair p = make_general_pair(g);
  for (double z : {-1.9, -0.7, -0.05, 0.02, 0.4, 1.3, 2.0}) {
    const auto want = general_kernel_ld(g, z);
    EXPECT_LT(rel(p.kernel(z), cplx(double(want.real()), double(want.imag()))), 1e-12) << z;
  }
}

TEST(GeneralFamily, SeriesAndDirectBranchesAgreeAcrossSwitch) {
  const General g{1.0, 2.0, 1.0, 0.0};
  const CommutingPair p = make_general_pair(g);
  const double r = p.kernel.switch_radius();
  for (double f : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
    for (double s : {-1.0, 1.0}) {
      const double z = s * f * r;
      const auto want = general_kernel_ld(g, z);
      EXPECT_LT(rel(p.kernel(z), cplx(double(want.real()), double(want.imag()))), 1e-10) << z;
    }
  }
}

TEST(GeneralFamily, SingularLaurentLimit) {
  const CommutingPair p = make_general_pair(General{cplx(0.5, 1.0), 0.7, 0.3, 1.0});
  ASSERT_TRUE(p.kernel.singular());
  const cplx k0 = p.kernel.taylor(0);
  EXPECT_LT(std::abs(k0 - 2.0), 1e-13);  // lambda * alpha2 / (lambda / 2)
  for (double z : {1e-3, 1e-5, -1e-6}) EXPECT_LT(std::abs(z * p.kernel(z) - k0), std::abs(z));
  EXPECT_THROW(p.kernel(0.0), PoleError);
}

TEST(GeneralFamily, EvenWhenAlpha2Vanishes) {
  const CommutingPair p = make_general_pair(General{cplx(1.1, 0.4), cplx(0.3, 2.0), 0.7, 0.0});
  for (double z : {0.1, 0.77, 1.5, 2.0}) EXPECT_LT(std::abs(p.kernel(z) - p.kernel(-z)), 1e-13);
}

TEST(GeneralFamily, CancellingSinhFactorsGiveConstant) {
  const CommutingPair p = make_general_pair(General{2.0, 1.0, 1.0, 0.0});
  for (double z : {-2.0, -0.5, 0.0, 1e-4, 1.3}) EXPECT_LT(std::abs(p.kernel(z) - 2.0), 1e-13);
  EXPECT_TRUE(p.kernel.trivial());
}

TEST(GeneralFamily, DegenerateParameters) {
  EXPECT_THROW(make_general_pair(General{1.0, 1.0, 0.0, 0.0}), DegenerateError);
}

TEST(GeneralFamily, InadmissibleThrows) {
  EXPECT_THROW(make_general_pair(General{1.2 * pi * I, 0.3, 1.0, 0.0}), AdmissibilityError);
}

TEST(SpecialFamilies, Case1Kernel) {
  const CommutingPair p = make_special_pair(Case1{0, 1.0, 1.0});
  EXPECT_LT(std::abs(p.kernel(1.0) - std::sqrt(2.0) / 2), 1e-14);
  for (double z : {-1.6, -0.3, 0.45, 1.2})
    EXPECT_LT(rel(p.kernel(z), std::cos(pi * z / 4) / std::sin(pi * z / 2)), 1e-13);
  for (double y : {-0.7, 0.1, 0.8})
    EXPECT_LT(std::abs(p.op.c(y) + (3 * pi * pi / 16) * p.op.a(y)), 1e-12);
}

TEST(SpecialFamilies, Case3Display) {
  const CommutingPair p = make_special_pair(Case3{2.0, {1.0, 0.0, 0.0}});
  for (double z : {-1.5, -0.2, 0.3, 2.0}) EXPECT_LT(rel(p.kernel(z), 0.5 + 1.0 / z), 1e-14);
  for (double y : {-1.0, -0.4, 0.5}) {
    EXPECT_LT(std::abs(p.op.a(y) - (y * y - 1)), 1e-15);
    EXPECT_LT(std::abs(p.op.b(y) - 2 * y), 1e-15);
    EXPECT_LT(std::abs(p.op.c(y)), 1e-15);
  }
}

TEST(SpecialFamilies, Case4Display) {
  const CommutingPair p = make_special_pair(Case4{0.0, {1.0, 0.0, 0.0}});
  for (double z : {-1.5, -0.2, 0.3, 2.0}) EXPECT_LT(rel(p.kernel(z), 1.0 / z), 1e-14);
  for (double y : {-1.0, 0.25, 0.9}) {
    EXPECT_LT(std::abs(p.op.a(y) - (y * y - 1)), 1e-15);
    EXPECT_LT(std::abs(p.op.b(y) - 2 * y), 1e-15);
    EXPECT_LT(std::abs(p.op.c(y)), 1e-15);
  }
}

TEST(SpecialFamilies, Case2SeriesAtOrigin) {
  const CommutingPair p = make_special_pair(Case2{2.0, 1.0, 0.0});
  ASSERT_TRUE(p.kernel.singular());
  EXPECT_LT(std::abs(p.kernel.taylor(0) - 1.0), 1e-14);
  // z / sinh z = 1 - z^2/6 + 7 z^4/360 - ...
  EXPECT_LT(std::abs(p.kernel.taylor(2) + 1.0 / 6), 1e-14);
  EXPECT_LT(std::abs(p.kernel.taylor(4) - 7.0 / 360), 1e-14);
  for (double z : {1e-2, 1e-4}) EXPECT_LT(std::abs(z * p.kernel(z) - 1.0), z);
}

TEST(SpecialFamilies, Errors) {
  EXPECT_THROW(make_special_pair(Case3{2.0, {1.0, 0.5, 0.0}}), InvalidPolynomial);
  EXPECT_THROW(make_special_pair(Case3{0.0, {1.0, 0.0, 0.0}}), DivisionByZero);
  EXPECT_THROW(make_special_pair(Case2{2.0, 0.0, 0.0}), DegenerateError);
  EXPECT_THROW(make_special_pair(Case2{1e-9, 1.0, 0.0}), AdmissibilityError);
}

TEST(SpecialFamilies, RecoverGeneralFamily) {
  const std::vector<FamilyParams> items{Case1{0, 1.0, 1.0}, Case1{1, cplx(0.3, 0.2), cplx(0.3, 0.2)},
                                        Case2{2.0, 1.0, 0.0}, Case2{cplx(0.5, 1.5), 2.0, 0.0},
                                        Case3{2.0, {1.0, 0.0, 0.0}}, Case3{-0.5, {1.0, 0.0, 0.0}},
                                        Case4{0.0, {1.0, 0.0, 0.0}}};
  for (const auto& item : items) {
    const auto rec = recovery_parameters(item);
    ASSERT_TRUE(rec) << variant_name(item);
    EXPECT_LT(recovery_discrepancy(make_special_pair(item), *rec), 1e-12) << variant_name(item);
  }
  EXPECT_FALSE(recovery_parameters(Case2{2.0, 1.0, 0.5}));
}

TEST(SpecialFamilies, PoleKernelRejectsOrigin) {
  const CommutingPair p = make_special_pair(Case4{0.0, {1.0, 0.0, 0.0}});
  EXPECT_THROW(eval_kernel(p, 0.0), PoleError);
  EXPECT_THROW(eval_kernel(p, 2.5), DomainError);
}

TEST(Families, BoundaryConditionsHold) {
  const std::vector<FamilyParams> all{General{1.0, 2.0, 1.0, 0.0},
                                      General{cplx(0.4, 1.0), cplx(-0.3, 0.8), cplx(0.5, 0.5), 1.0},
                                      General{0.0, 0.0, 0.0, 1.0},
                                      sinc_params(),
                                      Case1{2, 1.0, cplx(0.0, 2.0)},
                                      Case2{cplx(1.0, 0.5), 1.0, 0.3},
                                      Case3{1.5, {1.0, 0.0, 2.0}},
                                      Case4{0.7, {0.5, 1.0, -0.3}}};
  for (const auto& params : all) EXPECT_LT(boundary_defect(make_pair(params).op), 1e-12) << variant_name(params);
}

TEST(Families, CoefficientDerivativesMatchFiniteDifferences) {
  const CommutingPair p = make_pair(Case2{cplx(1.0, 0.5), 1.0, 0.3});
  const double h = 1e-4;
  for (double y : {-0.6, 0.1, 0.7}) {
    for (const Coefficient* c : {&p.op.a, &p.op.b, &p.op.c}) {
      for (int k = 0; k < 4; ++k) {
        const cplx fd = (c->derivative(y + h, k) - c->derivative(y - h, k)) / (2 * h);
        EXPECT_LT(std::abs(c->derivative(y, k + 1) - fd), 1e-6 * (1 + std::abs(fd)));
      }
    }
  }
}

TEST(Admissibility, RemarkExamples) {
  EXPECT_TRUE(check_admissibility(General{1.5 * I, 0.7, 1.0, 1.0}).ok);
  EXPECT_TRUE(check_admissibility(General{1.2 * pi * I, 0.9 * pi * I, 0.0, 1.0}).ok);
  const Admissibility bad = check_admissibility(General{1.2 * pi * I, 0.3, 1.0, 0.0});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.reason, "non-removable singularity inside [-2,2]");
  EXPECT_TRUE(check_admissibility(General{cplx(3.0, 5.0), 0.3, 1.0, 0.0}).ok);
  EXPECT_FALSE(check_admissibility(General{pi * I, 0.25 * pi * I, 0.0, 1.0}).ok);
}

TEST(Admissibility, AcceptedSecondBulletPairIsFinite) {
  const CommutingPair p = make_general_pair(General{1.2 * pi * I, 0.9 * pi * I, 0.0, 1.0});
  const double z0 = 2.0 / 1.2;  // removable zero of sinh(lambda z / 2)
  for (double z : {z0 - 1e-3, z0 - 1e-7, z0, z0 + 1e-7, -z0}) EXPECT_TRUE(std::isfinite(std::abs(p.kernel(z))));
  EXPECT_LT(residual_R1(p).relative(), 1e-9);
}

TEST(Trivial, Classification) {
  EXPECT_TRUE(classify_trivial(General{2.0, 1.0, 1.0, 0.0}));
  EXPECT_FALSE(classify_trivial(General{1.0, cplx(2.0, 0.3), 1.0, 0.0}));
  EXPECT_FALSE(classify_trivial(General{1.0, 1.7, 1.0, 0.0}));
  EXPECT_FALSE(classify_trivial(Case4{0.0, {1.0, 0.0, 0.0}}));
  EXPECT_TRUE(classify_trivial(General{cplx(0.0, 1.0), cplx(0.0, 1.5), 1.0, 0.0}));
  EXPECT_FALSE(classify_trivial(General{2.0, 1.0, 1.0, 0.5}));
}

// 2 mu / lambda = 4: sinh(2z) / (2 sinh(z/2)) collapses to cosh(3z/2) + cosh(z/2).
TEST(Trivial, IntegerRatioCollapsesToExponentials) {
  const General g{1.0, 2.0, 1.0, 0.0};
  EXPECT_TRUE(classify_trivial(g));
  const CommutingPair p = make_general_pair(g);
  for (double z : {-2.0, -0.6, 0.0, 0.01, 1.4})
    EXPECT_LT(rel(p.kernel(z), std::cosh(1.5 * z) + std::cosh(0.5 * z)), 1e-13);
}

TEST(Gauge, IdentityTransform) {
  const CommutingPair p = make_general_pair(General{1.0, 2.0, 1.0, 0.0});
  const CommutingPair q = gauge_transform(p, 0.0, 1.0, 0.0);
  for (double y : {-0.5, 0.5}) EXPECT_EQ(p.op.c(y), q.op.c(y));
  for (double z : {-1.0, 0.3}) EXPECT_EQ(p.kernel(z), q.kernel(z));
}

TEST(Gauge, ConstantShiftKeepsResidual) {
  const CommutingPair p = make_general_pair(General{1.0, 2.0, 1.0, 0.0});
  const CommutingPair q = gauge_transform(p, 0.0, 1.0, 5.0);
  for (double y : {-0.5, 0.2}) EXPECT_LT(std::abs(q.op.c(y) - p.op.c(y) - 5.0), 1e-14);
  EXPECT_NEAR(residual_R1(q).max_abs, residual_R1(p).max_abs, 1e-12);
}

TEST(Gauge, ExponentialConjugationKeepsIdentity) {
  const CommutingPair p = make_general_pair(General{1.0, 2.0, 1.0, 0.0});
  const CommutingPair q = gauge_transform(p, 0.3, 1.0, 0.0);
  EXPECT_LT(residual_R1(q).relative(), 1e-9);
  for (double z : {-1.2, 0.4}) EXPECT_LT(rel(q.kernel(z), p.kernel(z) * std::exp(0.3 * z)), 1e-13);
  EXPECT_LT(std::abs(q.op.gauge.tau - 0.3), 1e-16);
}

TEST(Gauge, VerdictPreservedOnSingularPair) {
  const CommutingPair p = make_special_pair(Case3{2.0, {1.0, 0.0, -0.5}});
  const CommutingPair q = gauge_transform(p, cplx(0.2, -0.1), cplx(0.0, 2.0), 1.5);
  EXPECT_LT(residual_R1(p).relative(), 1e-9);
  EXPECT_LT(residual_R1(q).relative(), 1e-9);
}

TEST(Gauge, NormalizationRemovesFirstCoefficient) {
  const CommutingPair p = gauge_normalize(make_special_pair(Case3{2.0, {1.0, 0.0, 0.0}}));
  EXPECT_LT(std::abs(p.kernel.taylor(1)), 1e-14);
}

TEST(Families, RandomAdmissibleDrawsSatisfyIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-3.0, 3.0), unit(-1.0, 1.0);
  int tested = 0;
  while (tested < 10) {
    const General g{cplx(box(rng), box(rng)), cplx(box(rng), box(rng)), cplx(unit(rng), unit(rng)),
                    cplx(unit(rng), unit(rng))};
    if (!check_admissibility(g).ok) continue;
    EXPECT_LT(residual_R1(make_general_pair(g)).relative(), 1e-9);
    ++tested;
  }
}
