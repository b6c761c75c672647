#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "commutant/errors.hpp"
#include "commutant/jet.hpp"

namespace commutant {

/// Real zero of a kernel denominator inside [-2, 2].
struct KernelZero {
  double z;
  bool pole;  // false: cancelled by the numerator (removable)
};

/// Convolution kernel k(z) = N(z) / D(z) on [-2, 2], with D's real zeros
/// listed explicitly.
///
/// Near each zero the closed form is replaced by a local Taylor (or Laurent)
/// series obtained by dividing the expansions of N and D, so neither the
/// value nor the derivatives suffer from 0/0 cancellation.
class Kernel {
 public:
  using ClosedForm = std::function<Jet(const Jet&)>;

  /// Number of published series coefficients at the origin.
  static constexpr int kSeriesLength = 12;
  /// Order used internally for local expansions.
  static constexpr int kLocalOrder = 16;
  /// Series branch is taken while |frequency * (z - z0)| < kSwitchArgument.
  static constexpr double kSwitchArgument = 1e-3;

  Kernel() = default;

  /// `frequency` bounds the growth rate of N and D (e.g. max(|lambda|/2, |mu|)).
  Kernel(ClosedForm numer, ClosedForm denom, std::vector<KernelZero> zeros, double frequency)
      : numer_(std::move(numer)), denom_(std::move(denom)), zeros_(std::move(zeros)),
        frequency_(std::max(1.0, frequency)) {
    std::sort(zeros_.begin(), zeros_.end(),
              [](const KernelZero& l, const KernelZero& r) { return l.z < r.z; });
    for (const auto& zero : zeros_) {
      if (zero.pole && zero.z != 0.0)
        throw DomainError("kernel pole away from the origin at z = " + std::to_string(zero.z));
      local_.push_back(local_series(zero));
    }
  }

  bool singular() const {
    return std::any_of(zeros_.begin(), zeros_.end(), [](const KernelZero& z) { return z.pole; });
  }
  bool trivial() const { return trivial_; }
  void set_trivial(bool t) { trivial_ = t; }

  double frequency() const { return frequency_; }
  double switch_radius() const { return kSwitchArgument / frequency_; }
  const std::vector<KernelZero>& zeros() const { return zeros_; }

  /// Taylor coefficient n at 0 of k (regular) or of z k(z) (singular).
  cplx taylor(int n) const {
    const Jet& s = origin_series();
    return n <= s.order() ? s[n] : cplx{0.0};
  }

  /// The first kSeriesLength coefficients of `taylor`.
  std::vector<cplx> series() const {
    std::vector<cplx> out(kSeriesLength);
    for (int n = 0; n < kSeriesLength; ++n) out[n] = taylor(n);
    return out;
  }

  /// n-th derivative at 0 (of k, or of z k for singular kernels).
  cplx derivative_at_zero(int n) const {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return taylor(n) * f;
  }

  /// Residue at the origin; zero for regular kernels.
  cplx residue() const { return singular() ? taylor(0) : cplx{0.0}; }

  /// Taylor expansion of k about z (derivatives up to `order`).
  Jet jet(double z, int order) const {
    check_domain(z);
    for (std::size_t i = 0; i < zeros_.size(); ++i) {
      const double h = z - zeros_[i].z;
      if (std::abs(h) * frequency_ >= kSwitchArgument) continue;
      if (zeros_[i].pole) {
        if (z == 0.0) throw PoleError("kernel evaluated at its pole z = 0");
        return local_[i].compose(Jet::variable(h, order)) / Jet::variable(z, order);
      }
      return local_[i].compose(Jet::variable(h, order));
    }
    const Jet var = Jet::variable(z, order);
    return numer_(var) / denom_(var);
  }

  cplx operator()(double z) const { return jet(z, 0).value(); }

  /// k(z) - residue / z, analytic through the origin.
  cplx regular_part(double z) const {
    if (!singular()) throw RegularKernelError("regular_part requires a singular kernel");
    check_domain(z);
    if (std::abs(z) * frequency_ <= 0.1) {
      const Jet& s = origin_series();
      Jet tail = s.shifted_down();
      return tail.compose(Jet(z, 0)).value();
    }
    return (*this)(z) - residue() / z;
  }

  /// Kernel of M K M^{-1} for M = multiplication by exp(tau y), times `scale`.
  Kernel gauged(cplx tau, cplx scale) const {
    ClosedForm n = numer_;
    Kernel r(
        [n, tau, scale](const Jet& z) { return n(z) * exp(z * tau) * scale; }, denom_, zeros_,
        std::max(frequency_, std::abs(tau)));
    r.trivial_ = trivial_;
    return r;
  }

  const ClosedForm& numerator() const { return numer_; }
  const ClosedForm& denominator() const { return denom_; }

 private:
  static void check_domain(double z) {
    if (!(std::abs(z) <= 2.0 + 1e-12)) throw DomainError("kernel argument outside [-2, 2]");
  }

  Jet local_series(const KernelZero& zero) const {
    const Jet var = Jet::variable(zero.z, kLocalOrder + 1);
    const Jet d = denom_(var).shifted_down();
    const Jet n = numer_(var);
    return zero.pole ? n.truncated(kLocalOrder) / d : n.shifted_down() / d;
  }

  const Jet& origin_series() const {
    for (std::size_t i = 0; i < zeros_.size(); ++i)
      if (zeros_[i].z == 0.0) return local_[i];
    if (!origin_cache_.empty()) return origin_cache_.front();
    origin_cache_.push_back(numer_(Jet::variable(0.0, kLocalOrder)) /
                            denom_(Jet::variable(0.0, kLocalOrder)));
    return origin_cache_.front();
  }

  ClosedForm numer_;
  ClosedForm denom_;
  std::vector<KernelZero> zeros_;
  std::vector<Jet> local_;
  mutable std::vector<Jet> origin_cache_;
  double frequency_ = 1.0;
  bool trivial_ = false;
};

}  // namespace commutant
