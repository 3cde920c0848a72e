#pragma once

#include <optional>
#include <string_view>

#include "thetapolar/real.hpp"

namespace thetapolar {

/// Working precision and the comparison tolerance derived from it.
///
/// Immutable after construction; safe to share between threads.
class PrecisionContext {
 public:
  static constexpr int kDefaultMantissaBits = 256;
  static constexpr int kDefaultGuardBits = 32;

  explicit PrecisionContext(int mantissa_bits = kDefaultMantissaBits, int guard_bits = kDefaultGuardBits);
  /// bits = ceil(digits * log2(10)) + guard_bits.
  static PrecisionContext from_digits(int digits, int guard_bits = kDefaultGuardBits);

  int mantissa_bits() const { return mantissa_bits_; }
  int guard_bits() const { return guard_bits_; }
  Bits bits() const { return mantissa_bits_; }
  /// Decimal digits the context was built for (or the equivalent of
  /// mantissa_bits - guard_bits).
  int digits() const { return digits_; }
  /// 2^(-mantissa_bits + guard_bits).
  const Real& eps() const { return eps_; }
  /// 2^(-mantissa_bits).
  Real unit_roundoff() const { return Real::pow2(-mantissa_bits_, mantissa_bits_); }

  Real real(double v) const { return Real(v, mantissa_bits_); }
  Real integer(long v) const { return Real::from_int(v, mantissa_bits_); }
  Real zero() const { return Real(static_cast<Bits>(mantissa_bits_)); }
  Real pi() const { return Real::pi(mantissa_bits_); }
  /// num / den rounded once.
  Real ratio(long num, long den) const;
  std::optional<Real> parse(std::string_view text) const { return Real::parse(text, mantissa_bits_); }

  /// Same guard bits, at least `bits` of mantissa.
  PrecisionContext widened(int bits) const;

 private:
  int mantissa_bits_;
  int guard_bits_;
  int digits_;
  Real eps_;
};

enum class SeriesKind { gaussian_space, gaussian_frequency, triple_product };

/// Truncation index together with a closed-form bound on what is dropped.
///
/// gaussian_frequency: tail_bound >= sum over |k| > K of e^{-pi a k^2}.
/// gaussian_space: tail_bound >= sum over |k| > K of e^{-pi a (x+k)^2}, |x| <= 1/2.
/// triple_product: tail_bound >= relative error of keeping factors 1..K.
struct TailBudget {
  SeriesKind series_kind;
  long cutoff;
  Real tail_bound;
};

/// Closed-form over-estimate of the tail beyond K.
Real tail_estimate(const Real& alpha, long cutoff, SeriesKind kind);

/// Smallest K >= 1 whose tail over-estimate is <= target.
TailBudget tail_cutoff(const Real& alpha, const Real& target, SeriesKind kind);

}  // namespace thetapolar
