#include "thetapolar/series.hpp"

#include <stdexcept>

namespace thetapolar {

namespace {
constexpr Bits kBoundBits = 64;
}

TrigSeries::TrigSeries(Real mean, std::vector<Complex> coef, std::vector<Real> coef_error, std::array<Real, 4> tail)
    : mean_(std::move(mean)), coef_(std::move(coef)), coef_error_(std::move(coef_error)), tail_(std::move(tail)) {
  if (!coef_error_.empty() && coef_error_.size() != coef_.size()) {
    throw std::invalid_argument("TrigSeries: coefficient error list has the wrong length");
  }
  const Bits bits = bits_for_bounds();
  const Real two_pi = Real::pi(bits) * 2L;
  const Real u = Real::pow2(-static_cast<long>(mean_.precision()), bits);
  scale_ = Real(bits);
  std::array<Real, 4> rounding;
  for (int j = 0; j < 4; ++j) {
    abs_sum_[j] = Real(bits);
    coef_err_sum_[j] = Real(bits);
    rounding[j] = Real(bits);
  }
  for (size_t i = 0; i < coef_.size(); ++i) {
    const long k = static_cast<long>(i) + 1;
    const Real mag = coef_[i].abs().with_precision(bits);
    if (mag > scale_) scale_ = mag;
    Real w = Real::from_int(2, bits);  // 2 (2 pi k)^j
    const Real step = two_pi * k;
    for (int j = 0; j < 4; ++j) {
      abs_sum_[j] += w * mag;
      rounding[j] += w * mag * (4 * k + 8);
      if (!coef_error_.empty()) coef_err_sum_[j] += w * coef_error_[i].with_precision(bits);
      w *= step;
    }
  }
  for (int j = 0; j < 4; ++j) {
    abs_sum_[j] += tail_[j];
    Real e = rounding[j] * u + coef_err_sum_[j] + tail_[j];
    if (j == 0) e += abs(mean_).with_precision(bits) * u * 8L;
    // Slack for the 64-bit bound arithmetic itself.
    error_[j] = e * (1.0 + 0x1.0p-40);
  }
}

Bits TrigSeries::bits_for_bounds() { return kBoundBits; }

void TrigSeries::eval_orders(const Real& x, int max_order, Real* out) const {
  if (max_order < 0 || max_order > 3) throw std::invalid_argument("TrigSeries: derivative order must be in 0..3");
  const Bits b = bits();
  const Complex e = unit_phase(x.with_precision(b));
  Complex p = e;
  Real acc[4] = {Real(b), Real(b), Real(b), Real(b)};
  for (size_t i = 0; i < coef_.size(); ++i) {
    const long k = static_cast<long>(i) + 1;
    const Complex t = coef_[i] * p;
    acc[0] += t.re;
    if (max_order >= 1) acc[1] -= t.im * k;
    if (max_order >= 2) acc[2] -= t.re * (k * k);
    if (max_order >= 3) acc[3] += t.im * (k * k * k);
    if (i + 1 < coef_.size()) p *= e;
  }
  const Real two_pi = Real::pi(b) * 2L;
  Real factor = Real::from_int(2, b);
  for (int j = 0; j <= max_order; ++j) {
    out[j] = acc[j] * factor;
    factor *= two_pi;
  }
  out[0] += mean_;
}

Real TrigSeries::eval(const Real& x, int order) const {
  Real out[4];
  eval_orders(x, order, out);
  return std::move(out[order]);
}

TrigSeries TrigSeries::negated() const {
  std::vector<Complex> neg;
  neg.reserve(coef_.size());
  for (const auto& c : coef_) neg.emplace_back(-c.re, -c.im);
  return TrigSeries(-mean_, std::move(neg), coef_error_, tail_);
}

}  // namespace thetapolar
