#include "thetapolar/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thetapolar {

namespace {

std::array<Real, 4> zero_tail() { return {Real(64), Real(64), Real(64), Real(64)}; }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Powers e^{2 pi i k x}, k = 0..count-1.
std::vector<Complex> phase_powers(const Real& x, long count) {
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(std::max(count, 1L)));
  const Bits b = x.precision();
  out.emplace_back(Real::from_int(1, b), Real(b));
  if (count > 1) {
    const Complex e = unit_phase(x);
    for (long k = 1; k < count; ++k) out.push_back(out.back() * e);
  }
  return out;
}

}  // namespace

TrigPoly::TrigPoly(std::map<long, Complex> coefficients, bool real_valued, Bits precision)
    : coef_(std::move(coefficients)), real_(real_valued), bits_(precision) {
  for (auto& [j, a] : coef_) {
    if (j == 0) throw std::invalid_argument("TrigPoly: mean value must be zero (no j = 0 term)");
    a.re.set_precision(bits_);
    a.im.set_precision(bits_);
    degree_ = std::max(degree_, std::labs(j));
  }
  if (!real_) return;
  const Real slack = Real::pow2(16 - static_cast<long>(bits_), 64);
  for (const auto& [j, a] : coef_) {
    const auto it = coef_.find(-j);
    const Real mag = a.abs().with_precision(64);
    if (it == coef_.end()) {
      if (mag.is_zero()) continue;
      throw std::invalid_argument("TrigPoly: real-valued polynomial lacks a_{" + std::to_string(-j) + "}");
    }
    const Complex diff = it->second.conj() - a;
    if (diff.abs() > (mag + it->second.abs()) * slack) {
      throw std::invalid_argument("TrigPoly: a_{" + std::to_string(-j) + "} is not conj(a_{" + std::to_string(j) +
                                  "})");
    }
  }
}

TrigPoly TrigPoly::real_from_positive(const std::map<long, Complex>& positive, Bits precision) {
  std::map<long, Complex> all;
  for (const auto& [j, a] : positive) {
    if (j <= 0) throw std::invalid_argument("TrigPoly: positive frequencies expected");
    all.emplace(j, a);
    all.emplace(-j, a.conj());
  }
  return TrigPoly(std::move(all), true, precision);
}

bool TrigPoly::is_zero() const {
  return std::all_of(coef_.begin(), coef_.end(), [](const auto& e) { return e.second.re.is_zero() && e.second.im.is_zero(); });
}

Complex TrigPoly::eval(const Real& x) const {
  const auto pw = phase_powers(x.with_precision(bits_), degree_ + 1);
  Complex sum(bits_);
  for (const auto& [j, a] : coef_) {
    const Complex& e = pw[static_cast<size_t>(std::labs(j))];
    sum += a * (j > 0 ? e : e.conj());
  }
  return sum;
}

Real TrigPoly::eval_real(const Real& x) const { return eval(x).re; }

Real TrigPoly::l2_norm() const {
  Real sum(bits_);
  for (const auto& [j, a] : coef_) sum += a.norm();
  return sqrt(sum);
}

TrigSeries TrigPoly::series() const {
  if (!real_) throw std::invalid_argument("TrigPoly: series() needs a real-valued polynomial");
  std::vector<Complex> coef(static_cast<size_t>(degree_), Complex(bits_));
  for (const auto& [j, a] : coef_) {
    if (j > 0) coef[static_cast<size_t>(j - 1)] = a;
  }
  return TrigSeries(Real(bits_), std::move(coef), {}, zero_tail());
}

TrigPoly TrigPoly::derivative() const {
  std::map<long, Complex> d;
  const Real two_pi = Real::pi(bits_) * 2L;
  for (const auto& [j, a] : coef_) {
    const Real f = two_pi * j;
    d.emplace(j, Complex(-(a.im * f), a.re * f));
  }
  return TrigPoly(std::move(d), real_, bits_);
}

TrigPoly random_real_poly(std::mt19937_64& rng, long max_degree, Bits precision) {
  if (max_degree < 1) throw std::invalid_argument("random_real_poly: max_degree must be >= 1");
  const long degree = static_cast<long>(rng() % static_cast<std::uint64_t>(max_degree)) + 1;
  std::map<long, Complex> pos;
  for (long j = 1; j <= degree; ++j) {
    const bool keep = j == degree || (rng() & 3u) != 0;
    const double re = 2 * uniform01(rng) - 1;
    const double im = 2 * uniform01(rng) - 1;
    if (keep) pos.emplace(j, Complex(Real(re, precision), Real(im, precision)));
  }
  return TrigPoly::real_from_positive(pos, precision);
}

Real l1_norm(const TrigPoly& g, const PrecisionContext& ctx) {
  if (!g.real_valued()) throw std::invalid_argument("l1_norm: polynomial must be real-valued");
  const Bits bits = std::max<Bits>(g.bits(), ctx.bits());
  if (g.is_zero()) return Real(bits);
  const TrigSeries s = g.series();
  RootOptions opt;
  opt.grid = static_cast<std::size_t>(64 * g.degree());
  const RootScan scan = find_roots(s, 0, opt);
  if (scan.roots.size() < 2) throw std::logic_error("l1_norm: a nonzero mean-zero polynomial must change sign");

  // Antiderivative G = 2 Re sum_{j>0} a_j e^{2 pi i j x} / (2 pi i j).
  const Real two_pi = Real::pi(bits) * 2L;
  std::vector<Complex> anti;
  anti.reserve(s.coefficients().size());
  for (size_t i = 0; i < s.coefficients().size(); ++i) {
    const Complex& a = s.coefficients()[i];
    const Real den = two_pi * static_cast<long>(i + 1);
    anti.emplace_back(a.im / den, -(a.re / den));
  }
  const TrigSeries G(Real(bits), std::move(anti), {}, zero_tail());

  std::vector<Real> at;
  at.reserve(scan.roots.size());
  for (const auto& r : scan.roots) at.push_back(G.eval(r.x, 0));
  Real total(bits);
  for (size_t i = 0; i < at.size(); ++i) total += abs(at[(i + 1) % at.size()] - at[i]);
  return total;
}

PigeonholeReport l1_pigeonhole(const TrigPoly& g, const PrecisionContext& ctx) {
  if (!g.real_valued()) throw std::invalid_argument("l1_pigeonhole: polynomial must be real-valued");
  PigeonholeReport r;
  r.l1 = l1_norm(g, ctx);
  r.bound = -r.l1 / 2L;
  if (g.is_zero()) {
    r.min_value = ctx.zero();
    r.tolerance = ctx.zero();
    r.holds = true;
    return r;
  }
  const TrigSeries s = g.series();
  const ExtremaPair ex = certify_series_extrema(s, std::max<std::size_t>(4096, 64 * static_cast<std::size_t>(g.degree())));
  r.min_value = ex.min.value;
  r.tolerance = ex.min.tolerance + abs(r.l1) * ctx.eps();
  r.holds = r.min_value <= r.bound + r.tolerance;
  return r;
}

Real mps_lower_bound(const TrigPoly& g) {
  Real sum(g.bits());
  long rank = 0;
  for (const auto& [j, a] : g.coefficients()) {
    if (a.re.is_zero() && a.im.is_zero()) continue;
    ++rank;
    sum += a.abs() / rank;
  }
  return sum / 200L;
}

Real elementary_lower_bound(const TrigPoly& g) {
  Real sum(g.bits());
  long terms = 0;
  for (const auto& [j, a] : g.coefficients()) {
    if (a.re.is_zero() && a.im.is_zero()) continue;
    ++terms;
    sum += a.abs();
  }
  return terms == 0 ? sum : sum / terms;
}

FourierSmallness fourier_smallness_bound(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  const long n = static_cast<long>(c.n());
  const Bits bits = ctx.bits();
  const FourierProfile prof = fourier_profile(c, std::max(n - 1, 1L), ctx);
  const Real pa = ctx.pi() * p.alpha.with_precision(bits);
  FourierSmallness r;
  r.lhs = ctx.zero();
  r.rhs = exp(-(pa * (2 * n - 1))) * (2000 * n * n);
  r.strong_holds = true;
  for (long k = 1; k <= n - 1; ++k) {
    Real mag = prof.nonnegative()[static_cast<size_t>(k)].abs();
    Real strong = exp(-(pa * (n * n - k * k))) * (2000 * n * n);
    if (mag > strong) r.strong_holds = false;
    if (mag > r.lhs) {
      r.lhs = mag;
      r.worst_k = k;
    }
    r.magnitude.push_back(std::move(mag));
    r.strong_rhs.push_back(std::move(strong));
  }
  r.holds = r.lhs <= r.rhs;
  return r;
}

Real fejer_kernel(const Real& x, long n, const PrecisionContext& ctx) {
  if (n < 1) throw std::invalid_argument("fejer_kernel: n must be >= 1");
  const Real r = reduce_half(x.with_precision(ctx.bits()));
  if (r.is_zero()) return ctx.integer(n);
  const Real pi = ctx.pi();
  const Real q = sin(pi * r * n) / sin(pi * r);
  return square(q) / n;
}

Real fejer_kernel_series(const Real& x, long n, const PrecisionContext& ctx) {
  if (n < 1) throw std::invalid_argument("fejer_kernel_series: n must be >= 1");
  const Real t = ctx.pi() * 2L * x.with_precision(ctx.bits());
  Real sum(ctx.bits());
  for (long k = 1; k < n; ++k) sum += cos(t * k) * (n - k);
  return 1L + sum * 2L / n;
}

FejerIdentity fejer_double_sum(const Configuration& c, const PrecisionContext& ctx) {
  const long n = static_cast<long>(c.n());
  FejerIdentity r;
  r.lhs = ctx.integer(n * n);
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) r.lhs += fejer_kernel(c[i] - c[j], n, ctx) * 2L;
  }
  const FourierProfile prof = fourier_profile(c, std::max(n - 1, 1L), ctx);
  Real weighted(ctx.bits());
  for (long k = 1; k < n; ++k) weighted += prof.nonnegative()[static_cast<size_t>(k)].norm() * (n - k);
  r.rhs = ctx.integer(n * n) + weighted * 2L / n;
  r.tolerance = ctx.eps() * (32 * n * n);
  r.holds = abs(r.lhs - r.rhs) <= r.tolerance;
  return r;
}

GapRegularity gap_regularity_certificate(const Configuration& c, const Real& epsilon, const PrecisionContext& ctx) {
  const long n = static_cast<long>(c.n());
  const Real limit = ctx.integer(1) / (1000L * n * n * n * n);
  if (!(epsilon > 0L) || epsilon > limit) {
    throw std::invalid_argument("gap_regularity_certificate: epsilon must lie in (0, 1/(1000 n^4)]");
  }
  const FourierProfile prof = fourier_profile(c, std::max(n - 1, 1L), ctx);
  Real worst = ctx.zero();
  long worst_k = 0;
  for (long k = 1; k < n; ++k) {
    Real mag = prof.nonnegative()[static_cast<size_t>(k)].abs();
    if (mag > worst) {
      worst = std::move(mag);
      worst_k = k;
    }
  }
  if (worst > epsilon) return NotApplicable{worst_k, worst, epsilon};

  GapCertificate cert;
  cert.decomposition = decompose(c, ctx);
  cert.max_coefficient = std::move(worst);
  cert.max_deviation = ctx.zero();
  for (const auto& e : cert.decomposition.eps) {
    if (abs(e) > cert.max_deviation) cert.max_deviation = abs(e);
  }
  cert.deviation_holds = cert.max_deviation <= epsilon;
  cert.fejer = fejer_double_sum(c, ctx);
  return cert;
}

FrequencySplit::FrequencySplit(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx)
    : n_(static_cast<long>(c.n())),
      alpha_(p.alpha),
      full_(config_series(c, p, ctx)),
      a_(full_),
      b_(full_),
      h_(full_),
      g1_({}, true, ctx.bits()),
      g2_({}, true, ctx.bits()) {
  if (n_ < 2) throw std::invalid_argument("frequency_split: n must be >= 2");
  const Bits bits = ctx.bits();
  const long K = full_.degree();
  std::vector<Complex> a(static_cast<size_t>(K), Complex(bits));
  std::vector<Complex> b = a;
  std::vector<Complex> h = a;
  std::map<long, Complex> g1, g2;
  for (long k = 1; k <= K; ++k) {
    const Complex& ck = full_.coefficients()[static_cast<size_t>(k - 1)];
    const auto slot = static_cast<size_t>(k - 1);
    if (k % n_ == 0) {
      a[slot] = ck;
      if (k == n_) b[slot] = ck;
    } else if (k > n_) {
      h[slot] = ck;
    } else if (2 * k <= n_ - 1) {
      g1.emplace(k, ck);
    } else {
      g2.emplace(k, ck);
    }
  }
  a_ = TrigSeries(full_.mean(), std::move(a), {}, zero_tail());
  b_ = TrigSeries(full_.mean(), std::move(b), {}, zero_tail());
  std::array<Real, 4> tail = {full_.tail(0), full_.tail(1), full_.tail(2), full_.tail(3)};
  h_ = TrigSeries(Real(bits), std::move(h), {}, std::move(tail));
  g1_ = TrigPoly::real_from_positive(g1, bits);
  g2_ = TrigPoly::real_from_positive(g2, bits);
}

Real FrequencySplit::sum(const Real& x) const { return A(x) + g1_.eval_real(x) + g2_.eval_real(x) + h(x); }

SplitReconstruction check_split(const FrequencySplit& s, const Configuration& c, const std::vector<Real>& xs,
                                const PrecisionContext& ctx) {
  const ThetaParams p(s.alpha());
  SplitReconstruction r;
  r.max_error = ctx.zero();
  r.tolerance = ctx.eps() * (32 * s.n());
  for (const auto& x : xs) {
    Real err = abs(s.sum(x) - config_sum(c, p, x, ctx));
    if (err > r.max_error) r.max_error = std::move(err);
  }
  r.holds = r.max_error <= r.tolerance;
  return r;
}

PlancherelReport dft_plancherel_check(const PerturbationDecomposition& d, const PrecisionContext& ctx) {
  const long n = d.n();
  if (n < 1) throw std::invalid_argument("dft_plancherel_check: empty perturbation");
  const Bits bits = ctx.bits();
  PlancherelReport r;
  Real total(bits), sq(bits), largest(bits);
  for (const auto& e : d.eps) {
    total += e;
    sq += square(e);
    if (abs(e) > largest) largest = abs(e);
  }
  // Perturbations recovered from points carry rounding on the scale of the
  // coordinates, not of the perturbation.
  if (abs(total) > max(largest, ctx.integer(1)) * ctx.eps() * (4 * n)) {
    throw std::invalid_argument("dft_plancherel_check: perturbation must sum to zero");
  }
  r.l2 = sqrt(sq);
  r.lhs = sq * n;
  r.rhs = ctx.zero();
  r.max_dft = ctx.zero();
  std::vector<Complex> roots;
  roots.reserve(static_cast<size_t>(n));
  for (long m = 0; m < n; ++m) roots.push_back(unit_phase(ctx.ratio(-m, n)));
  for (long k = 0; k < n; ++k) {
    Complex acc(bits);
    for (long j = 0; j < n; ++j) acc += roots[static_cast<size_t>((k * j) % n)] * d.eps[static_cast<size_t>(j)];
    Real mag = acc.abs();
    if (k > 0) r.rhs += acc.norm();
    if (mag > r.max_dft) r.max_dft = mag;
    r.dft.push_back(std::move(mag));
  }
  r.tolerance = r.lhs * ctx.eps() * (32 * n);
  r.equality_holds = abs(r.lhs - r.rhs) <= r.tolerance;
  r.large_coefficient = r.max_dft >= r.l2 * (1.0 - 0x1.0p-40);
  r.symmetric = true;
  const Real sym_tol = r.l2 * ctx.eps() * (16 * n);
  for (long k = 1; k < n; ++k) {
    if (abs(r.dft[static_cast<size_t>(k)] - r.dft[static_cast<size_t>(n - k)]) > sym_tol) r.symmetric = false;
  }
  return r;
}

MidpointReport midpoint_negativity(const TrigPoly& f, long n, const PrecisionContext& ctx) {
  if (n < 1) throw std::invalid_argument("midpoint_negativity: n must be >= 1");
  if (!f.real_valued()) throw std::invalid_argument("midpoint_negativity: polynomial must be real-valued");
  if (2 * f.degree() > n - 1) {
    throw std::invalid_argument("midpoint_negativity: degree " + std::to_string(f.degree()) + " exceeds (n-1)/2 for n = " +
                                std::to_string(n));
  }
  if (f.is_zero()) throw std::invalid_argument("midpoint_negativity: polynomial is identically zero");
  MidpointReport r;
  r.midpoint_sum = ctx.zero();
  for (long k = 0; k < n; ++k) {
    Real v = f.eval_real(ctx.ratio(2 * k + 1, 2 * n));
    r.midpoint_sum += v;
    if (k == 0 || v < r.min_value) {
      r.min_value = std::move(v);
      r.argmin = k;
    }
  }
  r.bound = -f.l2_norm() / (3 * n * n);
  r.holds = r.min_value <= r.bound;
  return r;
}

namespace {

// int_a^b f(x) conj(f(x)) dx for f = sum_j a_j e^{2 pi i j x}.
Real squared_integral(const TrigPoly& f, const Real& a, const Real& b) {
  const Bits bits = f.bits();
  const long span = 2 * f.degree() + 1;
  const auto pa = phase_powers(a, span);
  const auto pb = phase_powers(b, span);
  const Real two_pi = Real::pi(bits) * 2L;
  auto integral = [&](long m) {
    if (m == 0) return Complex(b - a, Real(bits));
    const auto idx = static_cast<size_t>(std::labs(m));
    Complex diff = m > 0 ? pb[idx] - pa[idx] : pb[idx].conj() - pa[idx].conj();
    // (diff) / (2 pi i m) = -i diff / (2 pi m)
    const Real den = two_pi * m;
    return Complex(diff.im / den, -(diff.re / den));
  };
  Complex total(bits);
  for (const auto& [j, aj] : f.coefficients()) {
    for (const auto& [l, al] : f.coefficients()) total += aj * al.conj() * integral(j - l);
  }
  return total.re;
}

}  // namespace

PoincareReport modified_poincare_check(const TrigPoly& f, const Real& a, const Real& b, const Real& M,
                                       const PrecisionContext& ctx) {
  if (!f.real_valued()) throw std::invalid_argument("modified_poincare_check: polynomial must be real-valued");
  if (!(a < b)) throw std::invalid_argument("modified_poincare_check: need a < b");
  if (M < 0L) throw std::invalid_argument("modified_poincare_check: M must be non-negative");
  Real scale(ctx.bits());
  for (const auto& [j, c] : f.coefficients()) scale += c.abs();
  const Real slack = scale * ctx.eps() * 16L;
  if (abs(f.eval_real(a)) > M + slack || abs(f.eval_real(b)) > M + slack) {
    throw std::invalid_argument("modified_poincare_check: |f| exceeds M at an endpoint");
  }
  const Real len = b - a;
  const Real pi = ctx.pi();
  PoincareReport r;
  r.lhs = squared_integral(f, a, b);
  r.gradient = square(len) / square(pi) * squared_integral(f.derivative(), a, b);
  r.rhs = square(M) * len + M * 2L * sqrt(len) * sqrt(r.gradient) + r.gradient;
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-20);
  return r;
}

FinalEstimate final_estimate_check(const Configuration& c, const ThetaParams& p, const Real& equispaced_polarization,
                                   const PrecisionContext& ctx) {
  const long n = static_cast<long>(c.n());
  const PerturbationDecomposition d = decompose(c, ctx);
  FinalEstimate r;
  r.n = n;
  r.polarization_equi = equispaced_polarization;
  Real sq(ctx.bits());
  for (const auto& e : d.eps) sq += square(e);
  r.eps_l2 = sqrt(sq);

  const TrigSeries s = config_series(c, p, ctx);
  for (long k = 0; k < n; ++k) {
    Real v = s.eval(ctx.ratio(2 * k + 1, 2 * n) + d.shift, 0);
    if (k == 0 || v < r.z) r.z = std::move(v);
  }
  if (n >= 2) {
    r.g1_l2 = FrequencySplit(c, p, ctx).g1().l2_norm();
  } else {
    r.g1_l2 = ctx.zero();
  }
  const Real nn = ctx.integer(n);
  r.decrease_bound = r.polarization_equi - r.g1_l2 / (nn * sqrt(nn) * 2L);
  const Real half = ctx.ratio(n - 1, 2);
  r.g1_bound = exp(-(ctx.pi() * p.alpha.with_precision(ctx.bits()) * square(half))) * r.eps_l2 / 2L;
  // Rounding in the decomposition leaves residuals near eps even for exact input.
  if (r.eps_l2 <= ctx.eps() * n) {
    r.equality_regime = true;
    r.decrease_holds = true;
    r.g1_holds = true;
    return r;
  }
  r.decrease_holds = r.z <= r.decrease_bound;
  r.g1_holds = r.g1_l2 >= r.g1_bound;
  r.below_threshold = !(r.decrease_holds && r.g1_holds);
  return r;
}

FinalEstimate final_estimate_check(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  return final_estimate_check(c, p, polarization(equispaced(static_cast<long>(c.n()), ctx), p, ctx), ctx);
}

}  // namespace thetapolar
