#include "thetapolar/real.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace thetapolar {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

Bits wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real::Real(Bits precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value, Bits precision) {
  mpfr_init2(value_, precision);
  mpfr_set_d(value_, value, kRnd);
}

Real Real::from_int(long value, Bits precision) {
  Real r(precision);
  mpfr_set_si(r.value_, value, kRnd);
  return r;
}

std::optional<Real> Real::parse(std::string_view text, Bits precision) {
  std::string buffer(text);
  if (buffer.empty()) return std::nullopt;
  Real r(precision);
  char* end = nullptr;
  mpfr_strtofr(r.value_, buffer.c_str(), &end, 10, kRnd);
  if (end != buffer.c_str() + buffer.size()) return std::nullopt;
  if (!r.is_finite()) return std::nullopt;
  return r;
}

Real Real::pi(Bits precision) {
  Real r(precision);
  mpfr_const_pi(r.value_, kRnd);
  return r;
}

Real Real::pow2(long exponent, Bits precision) {
  Real r(precision);
  mpfr_set_ui_2exp(r.value_, 1, exponent, kRnd);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRnd);
}

Real::Real(Real&& other) noexcept {
  std::memcpy(value_, other.value_, sizeof(mpfr_t));
  other.value_->_mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (!live()) {
    mpfr_init2(value_, other.precision());
  } else if (precision() != other.precision()) {
    mpfr_set_prec(value_, other.precision());
  }
  mpfr_set(value_, other.value_, kRnd);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_t tmp;
  std::memcpy(tmp, value_, sizeof(mpfr_t));
  std::memcpy(value_, other.value_, sizeof(mpfr_t));
  std::memcpy(other.value_, tmp, sizeof(mpfr_t));
  return *this;
}

Real::~Real() {
  if (live()) mpfr_clear(value_);
}

void Real::set_precision(Bits precision) { mpfr_prec_round(value_, precision, kRnd); }

Real Real::with_precision(Bits precision) const {
  Real r(precision);
  mpfr_set(r.value_, value_, kRnd);
  return r;
}

double Real::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpfr_get_d_2exp(&exp, value_, kRnd);
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

std::string Real::to_string(int digits) const {
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Re", std::max(digits - 1, 0), value_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

std::string Real::to_decimal(int digits) const {
  if (is_zero()) return "0";
  if (!is_finite()) return to_string(digits);
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(std::max(digits, 1)), value_, kRnd);
  std::string mant(raw);
  mpfr_free_str(raw);
  bool negative = false;
  if (!mant.empty() && mant[0] == '-') {
    negative = true;
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  // value = 0.mant * 10^e
  std::string out;
  if (e > -6 && e <= static_cast<mpfr_exp_t>(digits)) {
    if (e <= 0) {
      out = "0." + std::string(static_cast<size_t>(-e), '0') + mant;
    } else if (static_cast<size_t>(e) >= mant.size()) {
      out = mant + std::string(static_cast<size_t>(e) - mant.size(), '0');
    } else {
      out = mant.substr(0, static_cast<size_t>(e)) + "." + mant.substr(static_cast<size_t>(e));
    }
  } else {
    out = mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
  }
  return negative ? "-" + out : out;
}

Real& Real::operator+=(const Real& rhs) {
  if (rhs.precision() > precision()) set_precision(rhs.precision());
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  if (rhs.precision() > precision()) set_precision(rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  if (rhs.precision() > precision()) set_precision(rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  if (rhs.precision() > precision()) set_precision(rhs.precision());
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}
Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, kRnd);
  return *this;
}
Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, kRnd);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRnd);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}
Real& Real::operator*=(double rhs) {
  mpfr_mul_d(value_, value_, rhs, kRnd);
  return *this;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.value_, value_, kRnd);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.value_, a.value_, b.value_, kRnd);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.value_, a.value_, b.value_, kRnd);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.value_, a.value_, b.value_, kRnd);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.value_, a.value_, b.value_, kRnd);
  return r;
}
Real operator+(const Real& a, long b) {
  Real r(a.precision());
  mpfr_add_si(r.value_, a.value_, b, kRnd);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(a.precision());
  mpfr_sub_si(r.value_, a.value_, b, kRnd);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.value_, a.value_, b, kRnd);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.value_, a.value_, b, kRnd);
  return r;
}
Real operator-(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_sub(r.value_, a, b.value_, kRnd);
  return r;
}
Real operator/(long a, const Real& b) {
  Real r(b.precision());
  mpfr_si_div(r.value_, a, b.value_, kRnd);
  return r;
}
Real operator*(const Real& a, double b) {
  Real r(a.precision());
  mpfr_mul_d(r.value_, a.value_, b, kRnd);
  return r;
}

namespace {
std::partial_ordering from_cmp(int c, bool unordered) {
  if (unordered) return std::partial_ordering::unordered;
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}
}  // namespace

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  return from_cmp(mpfr_cmp(a.value_, b.value_), mpfr_unordered_p(a.value_, b.value_) != 0);
}
std::partial_ordering operator<=>(const Real& a, long b) {
  return from_cmp(mpfr_cmp_si(a.value_, b), mpfr_nan_p(a.value_) != 0);
}
std::partial_ordering operator<=>(const Real& a, double b) {
  return from_cmp(mpfr_cmp_d(a.value_, b), mpfr_nan_p(a.value_) != 0 || std::isnan(b));
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), kRnd);
  return r;
}
Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), kRnd);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), kRnd);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), kRnd);
  return r;
}
Real sin(const Real& x) {
  Real r(x.precision());
  mpfr_sin(r.get(), x.get(), kRnd);
  return r;
}
Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), kRnd);
  return r;
}
void sin_cos(const Real& x, Real& s, Real& c) {
  s = Real(x.precision());
  c = Real(x.precision());
  mpfr_sin_cos(s.get(), c.get(), x.get(), kRnd);
}
Real floor(const Real& x) {
  Real r(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}
Real square(const Real& x) {
  Real r(x.precision());
  mpfr_sqr(r.get(), x.get(), kRnd);
  return r;
}
Real pow(const Real& x, long e) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), e, kRnd);
  return r;
}
Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, kRnd);
  return r;
}
Real frac(const Real& x) {
  Real r = x - floor(x);
  if (r >= 1L) r -= 1L;
  return r;
}
Real reduce_half(const Real& x) {
  Real n(x.precision());
  mpfr_rint(n.get(), x.get(), MPFR_RNDN);
  Real r = x - n;
  if (r >= 0.5) r -= 1L;
  return r;
}
const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

Complex& Complex::operator+=(const Complex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}
Complex& Complex::operator-=(const Complex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}
Complex& Complex::operator*=(const Complex& rhs) {
  Real r = re * rhs.re - im * rhs.im;
  Real i = re * rhs.im + im * rhs.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
Complex& Complex::operator*=(const Real& rhs) {
  re *= rhs;
  im *= rhs;
  return *this;
}

Complex unit_phase(const Real& t) {
  Real arg = reduce_half(t) * Real::pi(t.precision()) * 2L;
  Complex z(t.precision());
  sin_cos(arg, z.im, z.re);
  return z;
}

}  // namespace thetapolar
