#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commutant/coefficient.hpp"
#include "commutant/errors.hpp"
#include "commutant/identity.hpp"
#include "commutant/kernel.hpp"

namespace commutant {

inline constexpr double kDegeneracyThreshold = 1e-6;

/// k(z) = lambda / sinh(lambda z / 2) * (alpha1 sinh(mu z) / mu + alpha2 cosh(mu z))
struct General {
  cplx lambda{0.0}, mu{0.0}, alpha1{0.0}, alpha2{0.0};
};
/// lambda = pi i, mu = (2m+1) lambda / 4, alpha1 = 0.
struct Case1 {
  int m = 0;
  cplx alpha{0.0}, beta{0.0};
};
/// k(z) = 1 / sinh(lambda z / 2).
struct Case2 {
  cplx lambda{0.0}, alpha{0.0}, beta{0.0};
};
/// k(z) = 1/beta + 1/z; p = p0 + p1 y + p2 y^2 with p1 = 0.
struct Case3 {
  cplx beta{0.0};
  std::array<cplx, 3> p{};
};
/// k(z) = 1/z; p = p0 + p1 y + p2 y^2.
struct Case4 {
  cplx beta{0.0};
  std::array<cplx, 3> p{};
};

using FamilyParams = std::variant<General, Case1, Case2, Case3, Case4>;

inline std::string variant_name(const FamilyParams& p) {
  static const char* names[] = {"general", "case1", "case2", "case3", "case4"};
  return names[p.index()];
}

struct CommutingPair {
  Kernel kernel;
  DiffOp op;
  FamilyParams params;
  std::optional<cplx> nu;  // c = nu * a when it holds
};

struct Admissibility {
  bool ok = true;
  std::string reason;
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;

inline bool is_zero(cplx v, double tol = 0.0) { return std::abs(v) <= tol; }

inline bool is_imaginary(cplx v) { return std::abs(v.real()) <= 1e-12 * std::abs(v); }

/// |x - round(x)| within tol for a complex x that must also be real.
inline std::optional<long> near_integer(cplx x, double tol = 1e-9) {
  if (std::abs(x.imag()) > tol) return std::nullopt;
  const double r = std::round(x.real());
  if (std::abs(x.real() - r) > tol) return std::nullopt;
  return static_cast<long>(r);
}

/// (cosh(l y) - cosh l) in product form, which keeps relative accuracy near y = +-1.
inline Jet cosh_difference(const Jet& y, cplx l) {
  return 2.0 * sinh((y + 1.0) * (l / 2.0)) * sinh((y - 1.0) * (l / 2.0));
}

inline Coefficient poly_times_y2m1(const std::array<cplx, 3>& p) {
  return Coefficient::polynomial({-p[0], -p[1], p[0] - p[2], p[1], p[2]});
}

inline Coefficient poly(const std::array<cplx, 3>& p) {
  return Coefficient::polynomial({p[0], p[1], p[2]});
}

/// Removable zeros of sinh(lambda z / 2) in [-2, 2] \ {0}.
inline std::vector<KernelZero> off_origin_zeros(cplx lambda) {
  std::vector<KernelZero> out;
  if (!is_imaginary(lambda) || std::abs(lambda) < kPi) return out;
  const double z0 = 2.0 * kPi / std::abs(lambda);
  if (z0 <= 2.0 + 1e-12) {
    out.push_back({-z0, false});
    out.push_back({z0, false});
  }
  return out;
}

inline CommutingPair general_unchecked(const General& g) {
  if (is_zero(g.alpha1) && is_zero(g.alpha2))
    throw DegenerateError("general family requires (alpha1, alpha2) != (0, 0)");
  const cplx lambda = g.lambda, mu = g.mu, a1 = g.alpha1, a2 = g.alpha2;
  const bool lambda0 = std::abs(lambda) < kDegeneracyThreshold;
  const bool mu0 = std::abs(mu) < kDegeneracyThreshold;

  // alpha1 sinh(mu z)/mu + alpha2 cosh(mu z), with its mu -> 0 limit
  auto second = [a1, a2, mu, mu0](const Jet& z) {
    if (mu0) return z * a1 + a2;
    Jet s, c;
    sinh_cosh(z * mu, s, c);
    return s * (a1 / mu) + c * a2;
  };

  Kernel::ClosedForm numer, denom;
  std::vector<KernelZero> zeros;
  if (lambda0) {
    numer = [second](const Jet& z) { return 2.0 * second(z); };
    denom = [](const Jet& z) { return z; };
  } else {
    numer = [second, lambda](const Jet& z) { return lambda * second(z); };
    denom = [lambda](const Jet& z) { return sinh(z * (lambda / 2.0)); };
    zeros = off_origin_zeros(lambda);
  }
  zeros.push_back({0.0, !is_zero(a2)});
  Kernel kernel(numer, denom, zeros, std::max(std::abs(lambda) / 2.0, std::abs(mu)));

  Coefficient a;
  cplx nu;
  if (lambda0) {
    a = Coefficient::polynomial({-0.5, 0.0, 0.5});
    nu = -mu * mu;
  } else {
    a = Coefficient::analytic(
        [lambda](const Jet& y) { return cosh_difference(y, lambda) / (lambda * lambda); });
    nu = lambda * lambda / 4.0 - mu * mu;
  }
  DiffOp op{a, a.derivative(), nu * a, {}};
  return CommutingPair{kernel, op, g, nu};
}

inline std::array<cplx, 3> read_p(const FamilyParams& p) {
  if (auto c3 = std::get_if<Case3>(&p)) return c3->p;
  return std::get<Case4>(p).p;
}

}  // namespace detail

/// Verdict of the admissibility conditions for imaginary lambda.
inline Admissibility check_admissibility(const FamilyParams& params) {
  using detail::kPi;
  const Admissibility singular{false, "non-removable singularity inside [-2,2]"};
  if (auto g = std::get_if<General>(&params)) {
    const cplx lambda = g->lambda;
    if (std::abs(lambda) < kDegeneracyThreshold || !detail::is_imaginary(lambda)) return {};
    const double mag = std::abs(lambda);
    if (auto n = detail::near_integer(lambda / cplx(0.0, kPi)); n && *n != 0)
      return {false, "lambda in pi*i*Z is handled by case1"};
    if (mag < kPi) return {};
    if (mag >= 2.0 * kPi || !detail::is_zero(g->alpha1)) return singular;
    if (auto q = detail::near_integer(4.0 * g->mu / lambda); q && (*q % 2 != 0)) return {};
    return singular;
  }
  if (auto c2 = std::get_if<Case2>(&params)) {
    if (std::abs(c2->lambda) < kDegeneracyThreshold)
      return {false, "case2 requires lambda != 0 (the lambda -> 0 limit is case4)"};
    if (detail::is_imaginary(c2->lambda) && std::abs(c2->lambda) >= kPi) return singular;
  }
  return {};
}

/// True when the kernel reduces to a finite combination of exponentials.
inline bool classify_trivial(const FamilyParams& params) {
  auto g = std::get_if<General>(&params);
  if (!g || !detail::is_zero(g->alpha2)) return false;
  const bool lambda0 = std::abs(g->lambda) < kDegeneracyThreshold;
  const bool mu0 = std::abs(g->mu) < kDegeneracyThreshold;
  if (lambda0) return mu0;
  if (mu0) return false;
  auto l = detail::near_integer(2.0 * g->mu / g->lambda);
  return l.has_value() && *l != 0;
}

inline CommutingPair make_general_pair(const General& params) {
  if (auto adm = check_admissibility(params); !adm.ok) throw AdmissibilityError(adm.reason);
  CommutingPair pair = detail::general_unchecked(params);
  pair.kernel.set_trivial(classify_trivial(params));
  return pair;
}

/// The General parameters an item reduces to, and the factor relating the
/// two operators (item L = factor * General L), when the item's recovery
/// specialization holds.
struct Recovery {
  General general;
  cplx factor;
};

inline std::optional<Recovery> recovery_parameters(const FamilyParams& params) {
  using detail::kPi;
  if (auto c1 = std::get_if<Case1>(&params)) {
    if (c1->alpha != c1->beta) return std::nullopt;
    const cplx lambda(0.0, kPi);
    const General g{lambda, (2.0 * c1->m + 1.0) / 4.0 * lambda, 0.0, 1.0 / kPi};
    // a = alpha (e^{i pi y} + e^{-i pi y} + 2) = -2 pi^2 alpha * a_general
    return Recovery{g, -2.0 * kPi * kPi * c1->alpha};
  }
  if (auto c2 = std::get_if<Case2>(&params)) {
    if (!detail::is_zero(c2->beta)) return std::nullopt;
    const cplx l = c2->lambda;
    return Recovery{General{l, 0.0, 0.0, 1.0 / l}, c2->alpha * l * l};
  }
  auto p = detail::read_p(params);
  if (p[0] != cplx{1.0} || !detail::is_zero(p[1]) || !detail::is_zero(p[2])) return std::nullopt;
  if (auto c3 = std::get_if<Case3>(&params))
    return Recovery{General{0.0, 0.0, 1.0 / (2.0 * c3->beta), 0.5}, 2.0};
  if (!detail::is_zero(std::get<Case4>(params).beta)) return std::nullopt;
  return Recovery{General{0.0, 0.0, 0.0, 0.5}, 2.0};
}

/// Largest pointwise mismatch between an item's pair and its General
/// specialization (kernel on a ring of sample points, coefficients on [-1, 1]).
inline double recovery_discrepancy(const CommutingPair& item, const Recovery& rec) {
  const CommutingPair gen = detail::general_unchecked(rec.general);
  double worst = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double y = -1.0 + i / 8.0;
    const DiffOp scaled = rec.factor * gen.op;
    for (int d = 0; d <= 2; ++d) {
      worst = std::max(worst, std::abs(item.op.a.derivative(y, d) - scaled.a.derivative(y, d)));
      worst = std::max(worst, std::abs(item.op.b.derivative(y, d) - scaled.b.derivative(y, d)));
      worst = std::max(worst, std::abs(item.op.c.derivative(y, d) - scaled.c.derivative(y, d)));
    }
    const double z = 2.0 * y + (y < 0 ? -0.03125 : 0.03125);
    if (std::abs(z) <= 2.0) {
      const cplx ki = item.kernel(z), kg = gen.kernel(z);
      worst = std::max(worst, std::abs(ki - kg) / std::max(1.0, std::abs(kg)));
    }
  }
  return worst;
}

inline CommutingPair make_special_pair(const FamilyParams& params) {
  using detail::kPi;
  if (auto adm = check_admissibility(params); !adm.ok) throw AdmissibilityError(adm.reason);
  CommutingPair pair;
  pair.params = params;

  if (auto c1 = std::get_if<Case1>(&params)) {
    if (detail::is_zero(c1->alpha) && detail::is_zero(c1->beta))
      throw DegenerateError("case1 requires (alpha, beta) != (0, 0)");
    const double w = (2.0 * c1->m + 1.0) * kPi / 4.0;
    pair.kernel = Kernel([w](const Jet& z) { return cos(z * w); },
                         [](const Jet& z) { return sin(z * (kPi / 2.0)); },
                         {{-2.0, false}, {0.0, true}, {2.0, false}}, std::max(kPi / 2.0, std::abs(w)));
    const cplx al = c1->alpha, be = c1->beta;
    Coefficient a = Coefficient::analytic([al, be](const Jet& y) {
      return exp(y * cplx(0.0, kPi)) * al + exp(y * cplx(0.0, -kPi)) * be + (al + be);
    });
    const double nu = kPi * kPi / 4.0 * ((2.0 * c1->m + 1.0) * (2.0 * c1->m + 1.0) / 4.0 - 1.0);
    pair.op = DiffOp{a, a.derivative(), cplx{nu} * a, {}};
    pair.nu = nu;
  } else if (auto c2 = std::get_if<Case2>(&params)) {
    if (detail::is_zero(c2->alpha) && detail::is_zero(c2->beta))
      throw DegenerateError("case2 requires (alpha, beta) != (0, 0)");
    const cplx l = c2->lambda;
    pair.kernel = Kernel([](const Jet& z) { return Jet(1.0, z.order()); },
                         [l](const Jet& z) { return sinh(z * (l / 2.0)); },
                         [&] {
                           auto zs = detail::off_origin_zeros(l);
                           zs.push_back({0.0, true});
                           return zs;
                         }(),
                         std::abs(l) / 2.0);
    const Coefficient a0 =
        Coefficient::analytic([l](const Jet& y) { return detail::cosh_difference(y, l); });
    const Coefficient a0p = a0.derivative();
    pair.op = DiffOp{c2->alpha * a0, c2->alpha * a0p + c2->beta * a0,
                     (c2->beta / 2.0) * a0p + (c2->alpha * l * l / 4.0) * a0, {}};
    if (detail::is_zero(c2->beta)) pair.nu = l * l / 4.0;
  } else if (auto c3 = std::get_if<Case3>(&params)) {
    if (!detail::is_zero(c3->p[1])) throw InvalidPolynomial("case3 requires p'(0) = 0");
    if (detail::is_zero(c3->beta)) throw DivisionByZero("case3 requires beta != 0");
    if (detail::is_zero(c3->p[0]) && detail::is_zero(c3->p[2]))
      throw DegenerateError("case3 requires p != 0");
    const cplx be = c3->beta;
    pair.kernel = Kernel([be](const Jet& z) { return z / be + 1.0; },
                         [](const Jet& z) { return z; }, {{0.0, true}}, 1.0);
    const Coefficient p = detail::poly(c3->p), pp = p.derivative(), ppp = pp.derivative();
    const Coefficient a = detail::poly_times_y2m1(c3->p);
    const Coefficient y = Coefficient::polynomial({0.0, 1.0});
    pair.op = DiffOp{a, a.derivative() + be * (y * pp) - be * ppp, be * pp, {}};
  } else {
    const auto& c4 = std::get<Case4>(params);
    if (detail::is_zero(c4.beta) && std::all_of(c4.p.begin(), c4.p.end(),
                                                [](cplx v) { return detail::is_zero(v); }))
      throw DegenerateError("case4 requires p != 0 or beta != 0");
    const cplx be = c4.beta;
    pair.kernel = Kernel([](const Jet& z) { return Jet(1.0, z.order()); },
                         [](const Jet& z) { return z; }, {{0.0, true}}, 1.0);
    const Coefficient p = detail::poly(c4.p);
    const Coefficient a = detail::poly_times_y2m1(c4.p);
    const Coefficient y = Coefficient::polynomial({0.0, 1.0});
    const Coefficient y2m1 = Coefficient::polynomial({-1.0, 0.0, 1.0});
    pair.op = DiffOp{a, a.derivative() + be * y2m1, y * p.derivative() + be * y, {}};
  }

  if (auto rec = recovery_parameters(params)) {
    const double d = recovery_discrepancy(pair, *rec);
    if (!(d <= 1e-10))
      throw Error("internal: " + variant_name(params) +
                  " does not reduce to the general family (discrepancy " + std::to_string(d) + ")");
  }
  return pair;
}

inline CommutingPair make_pair(const FamilyParams& params) {
  if (auto g = std::get_if<General>(&params)) return make_general_pair(*g);
  return make_special_pair(params);
}

inline cplx eval_kernel(const CommutingPair& pair, double z) { return pair.kernel(z); }

/// Conjugation by exp(tau y), kernel rescaling and a constant shift of c.
inline CommutingPair gauge_transform(const CommutingPair& pair, cplx tau, cplx scale, cplx shift) {
  CommutingPair r = pair;
  if (tau != cplx{0.0} || scale != cplx{1.0}) r.kernel = pair.kernel.gauged(tau, scale);
  const DiffOp& op = pair.op;
  if (tau != cplx{0.0}) {
    r.op.b = op.b - (2.0 * tau) * op.a;
    r.op.c = op.c - tau * op.b + (tau * tau) * op.a;
  }
  if (shift != cplx{0.0}) r.op.c = r.op.c + shift;
  r.op.gauge = GaugeRecord{op.gauge.tau + tau, op.gauge.scale * scale, op.gauge.shift + shift};
  if (tau != cplx{0.0} || shift != cplx{0.0}) r.nu.reset();

  const double before = coarse_identity_defect(pair.kernel, pair.op);
  const double after = coarse_identity_defect(r.kernel, r.op);
  if ((before <= 1e-8) != (after <= 1e-8))
    throw Error("internal: gauge transform changed the commutation verdict");
  return r;
}

/// Gauge with tau = -k1/k0 so that the first-order series coefficient vanishes.
inline CommutingPair gauge_normalize(const CommutingPair& pair) {
  const cplx tau = -pair.kernel.taylor(1) / pair.kernel.taylor(0);
  if (std::abs(tau) == 0.0) return pair;
  return gauge_transform(pair, tau, 1.0, 0.0);
}

}  // namespace commutant
