#include "thetapolar/precision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thetapolar {

PrecisionContext::PrecisionContext(int mantissa_bits, int guard_bits)
    : mantissa_bits_(mantissa_bits),
      guard_bits_(guard_bits),
      digits_(static_cast<int>(std::floor((mantissa_bits - guard_bits) * std::log10(2.0)))),
      eps_(Real::pow2(-(mantissa_bits - guard_bits), std::max(mantissa_bits, 64))) {
  if (mantissa_bits < 64) throw std::invalid_argument("mantissa_bits must be >= 64, got " + std::to_string(mantissa_bits));
  if (guard_bits < 16) throw std::invalid_argument("guard_bits must be >= 16, got " + std::to_string(guard_bits));
  if (guard_bits >= mantissa_bits) throw std::invalid_argument("guard_bits must be smaller than mantissa_bits");
}

PrecisionContext PrecisionContext::from_digits(int digits, int guard_bits) {
  if (digits < 1) throw std::invalid_argument("precision digits must be positive, got " + std::to_string(digits));
  if (digits > 100000) throw std::invalid_argument("precision digits too large: " + std::to_string(digits));
  int bits = static_cast<int>(std::ceil(digits * std::log2(10.0))) + guard_bits;
  PrecisionContext ctx(std::max(bits, 64), guard_bits);
  ctx.digits_ = digits;
  return ctx;
}

Real PrecisionContext::ratio(long num, long den) const {
  Real r = integer(num);
  r /= den;
  return r;
}

PrecisionContext PrecisionContext::widened(int bits) const {
  if (bits <= mantissa_bits_) return *this;
  PrecisionContext ctx(bits, guard_bits_);
  ctx.digits_ = std::max(digits_, ctx.digits_);
  return ctx;
}

Real tail_estimate(const Real& alpha, long cutoff, SeriesKind kind) {
  const Bits bits = std::max<Bits>(alpha.precision(), 64);
  const Real pa = Real::pi(bits) * alpha;
  const Real k = Real::from_int(cutoff, bits);
  switch (kind) {
    case SeriesKind::gaussian_frequency: {
      // 2 e^{-pi a K^2} / (1 - e^{-pi a (2K+1)})
      Real num = exp(-(pa * square(k))) * 2L;
      Real den = 1L - exp(-(pa * (k * 2L + 1L)));
      return num / den;
    }
    case SeriesKind::gaussian_space: {
      // 2 e^{-pi a (K+1/2)^2} / (1 - e^{-pi a (2K+2)})
      Real half = k + Real(0.5, bits);
      Real num = exp(-(pa * square(half))) * 2L;
      Real den = 1L - exp(-(pa * (k * 2L + 2L)));
      return num / den;
    }
    case SeriesKind::triple_product: {
      // S e^S with S = 4 q^{2K+1} / (1 - q^2), q = e^{-pi a}
      Real s = exp(-(pa * (k * 2L + 1L))) * 4L / (1L - exp(-(pa * 2L)));
      return s * exp(s);
    }
  }
  throw std::logic_error("unknown series kind");
}

TailBudget tail_cutoff(const Real& alpha, const Real& target, SeriesKind kind) {
  if (!(alpha > 0L)) throw std::invalid_argument("tail_cutoff: alpha must be positive");
  if (!(target > 0L)) throw std::invalid_argument("tail_cutoff: target must be positive");
  if (!(target < 1L)) throw std::invalid_argument("tail_cutoff: target must be below 1");

  // Starting guess from the dominant exponential, then walk to the smallest K.
  const double a = alpha.to_double();
  const double log_target = -target.log2_abs() * std::log(2.0);
  double guess = 1.0;
  if (a > 0.0 && std::isfinite(a)) {
    switch (kind) {
      case SeriesKind::gaussian_frequency:
      case SeriesKind::gaussian_space:
        guess = std::sqrt(std::max(log_target, 0.0) / (M_PI * a));
        break;
      case SeriesKind::triple_product:
        guess = std::max(log_target, 0.0) / (2.0 * M_PI * a);
        break;
    }
  }
  long k = std::max(1L, static_cast<long>(std::floor(std::min(guess, 1e9))) - 1);
  while (k > 1 && tail_estimate(alpha, k - 1, kind) <= target) --k;
  Real bound = tail_estimate(alpha, k, kind);
  while (bound > target) {
    ++k;
    bound = tail_estimate(alpha, k, kind);
  }
  return TailBudget{kind, k, bound};
}

}  // namespace thetapolar
