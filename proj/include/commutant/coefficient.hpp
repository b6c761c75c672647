#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <utility>
#include <vector>

#include "commutant/jet.hpp"

namespace commutant {

/// A smooth complex-valued function of a real variable that can report its
/// Taylor expansion to any order up to kMaxJetOrder at any point.
///
/// Coefficients compose by value: sums, products, conjugation and
/// differentiation all return new Coefficient objects sharing the
/// underlying closures.
class Coefficient {
 public:
  using Expansion = std::function<Jet(double y, int order)>;

  Coefficient() : Coefficient(constant(0.0)) {}
  explicit Coefficient(Expansion f) : f_(std::make_shared<Expansion>(std::move(f))) {}

  /// Wraps a generic closed form `f(Jet) -> Jet`.
  template <class F>
  static Coefficient analytic(F f) {
    return Coefficient(Expansion(
        [f](double y, int order) { return f(Jet::variable(y, order)); }));
  }

  static Coefficient constant(cplx v) {
    return Coefficient(Expansion([v](double, int order) { return Jet(v, order); }));
  }

  /// sum_k coeffs[k] y^k
  static Coefficient polynomial(std::vector<cplx> coeffs) {
    return analytic([coeffs](const Jet& y) {
      if (coeffs.empty()) return Jet(0.0, y.order());
      Jet r(coeffs.back(), y.order());
      for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) r = r * y + *it;
      return r;
    });
  }
  static Coefficient polynomial(std::initializer_list<cplx> coeffs) {
    return polynomial(std::vector<cplx>(coeffs));
  }

  Jet jet(double y, int order) const { return (*f_)(y, order); }
  cplx operator()(double y) const { return jet(y, 0).value(); }
  cplx derivative(double y, int k) const { return jet(y, k).derivative(k); }

  Coefficient derivative() const {
    auto f = f_;
    return Coefficient(Expansion([f](double y, int order) {
      return (*f)(y, order + 1).differentiated();
    }));
  }

  Coefficient conj() const {
    auto f = f_;
    return Coefficient(Expansion([f](double y, int order) { return (*f)(y, order).conj(); }));
  }

  Coefficient sqrt() const {
    auto f = f_;
    return Coefficient(
        Expansion([f](double y, int order) { return commutant::sqrt((*f)(y, order)); }));
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    return combine(a, b, [](const Jet& x, const Jet& y) { return x + y; });
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    return combine(a, b, [](const Jet& x, const Jet& y) { return x - y; });
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    return combine(a, b, [](const Jet& x, const Jet& y) { return x * y; });
  }
  friend Coefficient operator/(const Coefficient& a, const Coefficient& b) {
    return combine(a, b, [](const Jet& x, const Jet& y) { return x / y; });
  }
  friend Coefficient operator*(cplx s, const Coefficient& a) {
    auto f = a.f_;
    return Coefficient(Expansion([f, s](double y, int order) { return (*f)(y, order) * s; }));
  }
  friend Coefficient operator*(const Coefficient& a, cplx s) { return s * a; }
  friend Coefficient operator+(const Coefficient& a, cplx s) { return a + constant(s); }
  friend Coefficient operator-(const Coefficient& a) { return cplx{-1.0} * a; }

 private:
  template <class Op>
  static Coefficient combine(const Coefficient& a, const Coefficient& b, Op op) {
    auto fa = a.f_;
    auto fb = b.f_;
    return Coefficient(Expansion(
        [fa, fb, op](double y, int order) { return op((*fa)(y, order), (*fb)(y, order)); }));
  }

  std::shared_ptr<const Expansion> f_;
};

/// Provenance of accumulated gauge transformations applied to an operator.
struct GaugeRecord {
  cplx tau{0.0};
  cplx scale{1.0};
  cplx shift{0.0};
};

/// Second-order operator  u -> a u'' + b u' + c u.
struct DiffOp {
  Coefficient a;
  Coefficient b;
  Coefficient c;
  GaugeRecord gauge{};

  DiffOp with_c(Coefficient c_new) const {
    DiffOp r = *this;
    r.c = std::move(c_new);
    return r;
  }
  DiffOp with_b(Coefficient b_new) const {
    DiffOp r = *this;
    r.b = std::move(b_new);
    return r;
  }

  friend DiffOp operator*(cplx s, const DiffOp& op) {
    return DiffOp{s * op.a, s * op.b, s * op.c, op.gauge};
  }
  friend DiffOp operator+(const DiffOp& x, const DiffOp& y) {
    return DiffOp{x.a + y.a, x.b + y.b, x.c + y.c, x.gauge};
  }
  friend DiffOp operator-(const DiffOp& x, const DiffOp& y) {
    return DiffOp{x.a - y.a, x.b - y.b, x.c - y.c, x.gauge};
  }
};

/// Largest violation of a(+-1) = 0 and b(+-1) = a'(+-1).
inline double boundary_defect(const DiffOp& op) {
  double worst = 0.0;
  for (double y : {-1.0, 1.0}) {
    Jet a = op.a.jet(y, 1);
    worst = std::max(worst, std::abs(a[0]));
    worst = std::max(worst, std::abs(op.b(y) - a[1]));
  }
  return worst;
}

}  // namespace commutant
