#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <complex>

namespace commutant {

using cplx = std::complex<double>;

inline constexpr int kMaxJetOrder = 24;

/// Truncated Taylor expansion f(x0 + h) = sum_k c[k] h^k, k <= order.
///
/// Arithmetic on jets propagates exact derivatives through closed-form
/// expressions, so a kernel or coefficient written once as a generic lambda
/// yields its value and all derivatives without finite differences.
/// Coefficients are stored normalised (f^(k)(x0) / k!).
class Jet {
 public:
  Jet() : Jet(cplx{0.0}, 0) {}
  Jet(cplx value, int order) : order_(order) {
    assert(order >= 0 && order <= kMaxJetOrder);
    c_.fill(cplx{0.0});
    c_[0] = value;
  }
  Jet(double value, int order) : Jet(cplx{value}, order) {}

  /// The independent variable x0 + h.
  static Jet variable(double x0, int order) {
    Jet j(x0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return order_; }
  cplx value() const { return c_[0]; }
  cplx operator[](int k) const { return k <= order_ ? c_[k] : cplx{0.0}; }
  cplx& operator[](int k) { return c_[k]; }

  /// k-th derivative at the expansion point.
  cplx derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return (*this)[k] * f;
  }

  Jet truncated(int order) const {
    Jet r = *this;
    for (int k = order + 1; k <= order_; ++k) r.c_[k] = 0.0;
    r.order_ = std::min(order, order_);
    return r;
  }

  /// Expansion of f' (one order lower).
  Jet differentiated() const {
    Jet r(cplx{0.0}, std::max(order_ - 1, 0));
    for (int k = 0; k + 1 <= order_; ++k) r.c_[k] = c_[k + 1] * double(k + 1);
    return r;
  }

  /// Divides out one factor of h; requires c[0] == 0 up to the caller.
  Jet shifted_down() const {
    Jet r(cplx{0.0}, std::max(order_ - 1, 0));
    for (int k = 0; k + 1 <= order_; ++k) r.c_[k] = c_[k + 1];
    return r;
  }

  /// Evaluates the polynomial sum c[k] t^k at a jet argument.
  Jet compose(const Jet& t) const {
    Jet r(c_[order_], t.order());
    for (int k = order_ - 1; k >= 0; --k) {
      r = r * t;
      r.c_[0] += c_[k];
    }
    return r;
  }

  Jet conj() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = std::conj(c_[k]);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (int k = 0; k <= order_; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(cplx s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(cplx s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(cplx s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(cplx s) {
    for (int k = 0; k <= order_; ++k) c_[k] /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, cplx s) { return a += s; }
  friend Jet operator+(cplx s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, cplx s) { return a -= s; }
  friend Jet operator-(cplx s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, cplx s) { return a /= s; }
  friend Jet operator+(Jet a, double s) { return a += cplx{s}; }
  friend Jet operator+(double s, Jet a) { return a += cplx{s}; }
  friend Jet operator-(Jet a, double s) { return a -= cplx{s}; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += cplx{s}; }
  friend Jet operator*(Jet a, double s) { return a *= cplx{s}; }
  friend Jet operator*(double s, Jet a) { return a *= cplx{s}; }
  friend Jet operator/(Jet a, double s) { return a /= cplx{s}; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(cplx{0.0}, std::min(a.order_, b.order_));
    for (int k = 0; k <= r.order_; ++k) {
      cplx s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& n, const Jet& d) {
    Jet q(cplx{0.0}, std::min(n.order_, d.order_));
    for (int k = 0; k <= q.order_; ++k) {
      cplx s = n.c_[k];
      for (int j = 1; j <= k; ++j) s -= d.c_[j] * q.c_[k - j];
      q.c_[k] = s / d.c_[0];
    }
    return q;
  }
  friend Jet operator/(cplx s, const Jet& d) { return Jet(s, d.order_) / d; }
  friend Jet operator/(double s, const Jet& d) { return Jet(s, d.order_) / d; }

  friend Jet exp(const Jet& g) {
    Jet f(std::exp(g.c_[0]), g.order_);
    for (int k = 1; k <= g.order_; ++k) {
      cplx s = 0.0;
      for (int j = 1; j <= k; ++j) s += double(j) * g.c_[j] * f.c_[k - j];
      f.c_[k] = s / double(k);
    }
    return f;
  }

  // sinh/cosh and sin/cos run the coupled recurrences so the value term keeps
  // full relative accuracy for small arguments.
  friend void sinh_cosh(const Jet& g, Jet& sh, Jet& ch) {
    sh = Jet(std::sinh(g.c_[0]), g.order_);
    ch = Jet(std::cosh(g.c_[0]), g.order_);
    for (int k = 1; k <= g.order_; ++k) {
      cplx s = 0.0, c = 0.0;
      for (int j = 1; j <= k; ++j) {
        s += double(j) * g.c_[j] * ch.c_[k - j];
        c += double(j) * g.c_[j] * sh.c_[k - j];
      }
      sh.c_[k] = s / double(k);
      ch.c_[k] = c / double(k);
    }
  }
  friend void sin_cos(const Jet& g, Jet& sn, Jet& cs) {
    sn = Jet(std::sin(g.c_[0]), g.order_);
    cs = Jet(std::cos(g.c_[0]), g.order_);
    for (int k = 1; k <= g.order_; ++k) {
      cplx s = 0.0, c = 0.0;
      for (int j = 1; j <= k; ++j) {
        s += double(j) * g.c_[j] * cs.c_[k - j];
        c -= double(j) * g.c_[j] * sn.c_[k - j];
      }
      sn.c_[k] = s / double(k);
      cs.c_[k] = c / double(k);
    }
  }
  friend Jet sinh(const Jet& g) {
    Jet s, c;
    sinh_cosh(g, s, c);
    return s;
  }
  friend Jet cosh(const Jet& g) {
    Jet s, c;
    sinh_cosh(g, s, c);
    return c;
  }
  friend Jet sin(const Jet& g) {
    Jet s, c;
    sin_cos(g, s, c);
    return s;
  }
  friend Jet cos(const Jet& g) {
    Jet s, c;
    sin_cos(g, s, c);
    return c;
  }

  /// Principal branch.
  friend Jet sqrt(const Jet& g) {
    Jet f(std::sqrt(g.c_[0]), g.order_);
    for (int k = 1; k <= g.order_; ++k) {
      cplx s = g.c_[k];
      for (int j = 1; j < k; ++j) s -= f.c_[j] * f.c_[k - j];
      f.c_[k] = s / (2.0 * f.c_[0]);
    }
    return f;
  }

 private:
  int order_;
  std::array<cplx, kMaxJetOrder + 1> c_;
};

// Namespace-scope declarations so qualified calls find the hidden friends.
Jet exp(const Jet& g);
Jet sinh(const Jet& g);
Jet cosh(const Jet& g);
Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet sqrt(const Jet& g);

}  // namespace commutant
