#include "thetapolar/theta.hpp"

#include <stdexcept>

namespace thetapolar {

ThetaParams::ThetaParams(Real a) : alpha(std::move(a)) {
  if (!(alpha > 0L) || !alpha.is_finite()) throw std::invalid_argument("alpha must be a positive finite number");
}

Real series_target(Bits bits) { return Real::pow2(-(static_cast<long>(bits) + 8), 64); }

ThetaKernel::ThetaKernel(const ThetaParams& p, const PrecisionContext& ctx)
    : bits_(ctx.bits()), alpha_(p.alpha.with_precision(ctx.bits())), use_space_(p.alpha < kDualSwitchAlpha) {
  const Real target = series_target(bits_);
  TailBudget budget = tail_cutoff(alpha_, target, SeriesKind::gaussian_frequency);
  const Real pa = Real::pi(bits_) * alpha_;
  weights_.reserve(static_cast<size_t>(budget.cutoff) + 1);
  for (long k = 0; k <= budget.cutoff; ++k) weights_.push_back(exp(-(pa * (k * k))));
  truncation_ = std::move(budget.tail_bound);
  if (use_space_) {
    inv_alpha_ = 1L / alpha_;
    sqrt_alpha_ = sqrt(alpha_);
    space_cutoff_ = tail_cutoff(inv_alpha_, target, SeriesKind::gaussian_space).cutoff;
  }
}

Real ThetaKernel::value(const Real& x) const { return use_space_ ? space_value(x) : frequency_value(x); }

Real ThetaKernel::frequency_value(const Real& x) const {
  const Real t = reduce_half(x.with_precision(bits_));
  const Real c1 = cos(t * Real::pi(bits_) * 2L);
  // Chebyshev recurrence T_{k+1} = 2 c1 T_k - T_{k-1} for cos(2 pi k t).
  Real prev = Real::from_int(1, bits_);
  Real cur = c1;
  Real two_c1 = c1 * 2L;
  Real sum(bits_);
  for (size_t k = 1; k < weights_.size(); ++k) {
    sum += weights_[k] * cur;
    Real next = two_c1 * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return sum * 2L + 1L;
}

Real ThetaKernel::space_value(const Real& x) const {
  const Real t = reduce_half(x.with_precision(bits_));
  const Real pa = Real::pi(bits_) * inv_alpha_;
  Real sum(bits_);
  for (long k = -space_cutoff_; k <= space_cutoff_; ++k) sum += exp(-(pa * square(t + k)));
  return sum / sqrt_alpha_;
}

Real ThetaKernel::derivative(const Real& x, int order) const {
  if (order < 0 || order > 3) throw std::invalid_argument("derivative order must be in 0..3");
  if (order == 0) return frequency_value(x);
  const Real t = reduce_half(x.with_precision(bits_));
  const Real two_pi = Real::pi(bits_) * 2L;
  Real s1(bits_), c1(bits_);
  sin_cos(t * two_pi, s1, c1);
  Real s = s1, c = c1;
  Real sum(bits_);
  for (size_t k = 1; k < weights_.size(); ++k) {
    // d^j/dx^j cos(2 pi k x) = (2 pi k)^j cos(2 pi k x + j pi / 2)
    Real scale = pow(two_pi * static_cast<long>(k), order) * weights_[k];
    switch (order) {
      case 1: sum -= scale * s; break;
      case 2: sum -= scale * c; break;
      case 3: sum += scale * s; break;
    }
    Real cn = c * c1 - s * s1;
    Real sn = s * c1 + c * s1;
    c = std::move(cn);
    s = std::move(sn);
  }
  return sum * 2L;
}

Real theta_series(const Real& x, const ThetaParams& p, const PrecisionContext& ctx) {
  return ThetaKernel(p, ctx).value(x);
}

Real theta_frequency_sum(const Real& x, const ThetaParams& p, const PrecisionContext& ctx) {
  return ThetaKernel(p, ctx).derivative(x, 0);
}

Real theta_product(const Real& x, const ThetaParams& p, const PrecisionContext& ctx) {
  const Bits bits = ctx.bits();
  const Real alpha = p.alpha.with_precision(bits);
  const long K = tail_cutoff(alpha, series_target(bits), SeriesKind::triple_product).cutoff;
  const Real q = exp(-(Real::pi(bits) * alpha));
  const Real q2 = square(q);
  const Real c2 = cos(reduce_half(x.with_precision(bits)) * Real::pi(bits) * 2L) * 2L;
  Real prod = Real::from_int(1, bits);
  Real q_odd = q;     // q^{2k-1}
  Real q_even = q2;   // q^{2k}
  for (long k = 1; k <= K; ++k) {
    Real factor = (1L - q_even) * (c2 * q_odd + square(q_odd) + 1L);
    prod *= factor;
    q_odd *= q2;
    q_even *= q2;
  }
  return prod;
}

Real periodized_gaussian(const Real& x, const Real& alpha, const PrecisionContext& ctx) {
  if (!(alpha > 0L)) throw std::invalid_argument("alpha must be positive");
  const Bits bits = ctx.bits();
  const Real a = alpha.with_precision(bits);
  const long K = tail_cutoff(a, series_target(bits), SeriesKind::gaussian_space).cutoff;
  const Real t = reduce_half(x.with_precision(bits));
  const Real pa = Real::pi(bits) * a;
  Real sum(bits);
  for (long k = -K; k <= K; ++k) sum += exp(-(pa * square(t + k)));
  return sum;
}

Real theta_dual(const Real& x, const ThetaParams& p, const PrecisionContext& ctx) {
  const Real a = p.alpha.with_precision(ctx.bits());
  return periodized_gaussian(x, 1L / a, ctx) / sqrt(a);
}

Real theta_mean_check(const ThetaParams& p, const PrecisionContext& ctx) {
  constexpr long kNodes = 1L << 12;
  const ThetaKernel kernel(p, ctx);
  // Nodes (i + 1/2)/N and 1 - (i + 1/2)/N carry equal values since theta is even.
  Real sum(ctx.bits());
  for (long i = 0; i < kNodes / 2; ++i) sum += kernel.value(ctx.ratio(2 * i + 1, 2 * kNodes));
  return sum * 2L / kNodes;
}

}  // namespace thetapolar
