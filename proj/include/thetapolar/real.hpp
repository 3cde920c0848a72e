#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace thetapolar {

using Bits = mpfr_prec_t;

/// Owning MPFR value with an explicit precision.
///
/// Every value carries its own precision; there is no global default. Binary
/// operations between two Reals round to the larger of the two precisions,
/// operations with a machine scalar round to the Real's precision.
class Real {
 public:
  Real() : Real(Bits{64}) {}
  explicit Real(Bits precision);
  Real(double value, Bits precision);
  static Real from_int(long value, Bits precision);
  /// Parses a decimal string. Returns nullopt unless the whole string is a
  /// finite number.
  static std::optional<Real> parse(std::string_view text, Bits precision);
  static Real pi(Bits precision);
  /// 2^exponent, exact.
  static Real pow2(long exponent, Bits precision);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Bits precision() const { return mpfr_get_prec(value_); }
  /// Rounds the stored value to a new precision.
  void set_precision(Bits precision);
  Real with_precision(Bits precision) const;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long_floor() const { return mpfr_get_si(value_, MPFR_RNDD); }
  /// log2 of the magnitude as a double; -inf for zero.
  double log2_abs() const;
  /// Scientific decimal with `digits` significant digits.
  std::string to_string(int digits) const;
  /// Shortest plain (non exponent) decimal with `digits` significant digits
  /// when the exponent is modest, scientific otherwise.
  std::string to_decimal(int digits) const;

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);
  Real& operator*=(double rhs);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator-(long a, const Real& b);
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(long a, const Real& b);
  friend Real operator*(const Real& a, double b);
  friend Real operator*(double a, const Real& b) { return b * a; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b);
  friend bool operator==(const Real& a, double b) { return mpfr_cmp_d(a.value_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, double b);

 private:
  bool live() const { return value_->_mpfr_d != nullptr; }

  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
void sin_cos(const Real& x, Real& s, Real& c);
Real floor(const Real& x);
Real square(const Real& x);
Real pow(const Real& x, long e);
/// x * 2^e, exact.
Real ldexp(const Real& x, long e);
/// x - floor(x), in [0, 1).
Real frac(const Real& x);
/// x reduced to [-1/2, 1/2).
Real reduce_half(const Real& x);
const Real& min(const Real& a, const Real& b);
const Real& max(const Real& a, const Real& b);

/// Complex number with Real parts.
struct Complex {
  Real re;
  Real im;

  Complex() = default;
  explicit Complex(Bits precision) : re(precision), im(precision) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Bits precision() const { return re.precision(); }
  Complex conj() const { return {re, -im}; }
  Real norm() const { return square(re) + square(im); }
  Real abs() const { return sqrt(norm()); }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex& operator*=(const Complex& rhs);
  Complex& operator*=(const Real& rhs);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& a, Complex b) { return b *= a; }
};

/// e^{2 pi i t}.
Complex unit_phase(const Real& t);

}  // namespace thetapolar
