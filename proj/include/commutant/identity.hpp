#pragma once

#include <algorithm>
#include <cmath>

#include "commutant/coefficient.hpp"
#include "commutant/kernel.hpp"

namespace commutant {

/// Evaluates, for fixed y, the left-hand side
///
///   [a2(y+z) - a1(y)] k''(z) + [2 a1'(y) + b2(y+z) - b1(y)] k'(z)
///     + [c2(y+z) - c1(y) + b1'(y) - a1''(y)] k(z)
///
/// of the kernel/coefficient identity for commutation (L1 = L2 = L gives the
/// plain commutation identity). Coefficient increments over short steps are
/// summed from a Taylor expansion about y so the cancellation in
/// a(y+z) - a(y) does not amplify the large derivatives of a singular k.
class IdentityRow {
 public:
  static constexpr int kOrder = 20;
  static constexpr double kTaylorStep = 0.25;

  IdentityRow(const DiffOp& l1, const DiffOp& l2, double y)
      : l2_(&l2), y_(y),
        a2_(l2.a.jet(y, kOrder)), b2_(l2.b.jet(y, kOrder)), c2_(l2.c.jet(y, kOrder)) {
    const Jet a1 = l1.a.jet(y, 2);
    const Jet b1 = l1.b.jet(y, 1);
    a1_ = a1[0];
    b1_ = b1[0];
    c1_ = l1.c(y);
    two_a1p_ = 2.0 * a1[1];
    b1p_minus_a1pp_ = b1[1] - 2.0 * a1[2];
  }

  cplx operator()(double z, const Jet& k) const {
    const cplx da = jump(l2_->a, a2_, a1_, z);
    const cplx db = jump(l2_->b, b2_, b1_, z);
    const cplx dc = jump(l2_->c, c2_, c1_, z);
    return da * (2.0 * k[2]) + (two_a1p_ + db) * k[1] + (dc + b1p_minus_a1pp_) * k[0];
  }

 private:
  cplx jump(const Coefficient& f2, const Jet& f2y, cplx f1y, double z) const {
    if (std::abs(z) > kTaylorStep) return f2(y_ + z) - f1y;
    cplx s = 0.0;
    for (int k = kOrder; k >= 1; --k) s = (s + f2y[k]) * z;
    return s + (f2y[0] - f1y);
  }

  const DiffOp* l2_;
  double y_;
  Jet a2_, b2_, c2_;
  cplx a1_, b1_, c1_, two_a1p_, b1p_minus_a1pp_;
};

/// max |F| / max |k| on a coarse 9 x 9 tensor grid avoiding the origin.
inline double coarse_identity_defect(const Kernel& kernel, const DiffOp& op) {
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double y = -0.95 + 1.9 * i / 8.0;
    const IdentityRow row(op, op, y);
    for (int j = 0; j < 9; ++j) {
      const double z = (-1.0 - y) + (2.0 * (j + 0.5) / 9.0);
      if (kernel.singular() && std::abs(z) < 1e-2) continue;
      const Jet k = kernel.jet(z, 2);
      worst = std::max(worst, std::abs(row(z, k)));
      scale = std::max(scale, std::abs(k[0]));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace commutant
