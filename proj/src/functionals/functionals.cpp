#include "thetapolar/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thetapolar {

namespace {

// Bounds on sum_{|k|>K} (2 pi |k|)^j n e^{-pi alpha k^2} for j = 0..3. Beyond
// K the terms shrink by at least a factor e^{-pi alpha (2K+1)} (K+2)^3/(K+1)^3,
// so a finite stretch doubled covers the remainder.
std::array<Real, 4> frequency_tail(const Real& alpha, long K, long n) {
  constexpr Bits bits = 64;
  const Real pa = Real::pi(bits) * alpha.with_precision(bits);
  const Real two_pi = Real::pi(bits) * 2L;
  std::array<Real, 4> tail = {Real(bits), Real(bits), Real(bits), Real(bits)};
  for (long k = K + 1; k <= K + 12; ++k) {
    const Real w = exp(-(pa * (k * k)));
    Real f = Real::from_int(2 * n, bits);
    for (int j = 0; j < 4; ++j) {
      tail[j] += f * w;
      f *= two_pi * k;
    }
  }
  for (auto& t : tail) t *= 2L;
  return tail;
}

}  // namespace

std::size_t extremum_grid(std::size_t n, long degree) {
  return std::max<std::size_t>(4096, 32 * n * static_cast<std::size_t>(std::max(degree, 1L)));
}

TrigSeries config_series(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx, const Real& target) {
  const Bits bits = ctx.bits();
  const long n = static_cast<long>(c.n());
  const Real alpha = p.alpha.with_precision(bits);
  const long K = tail_cutoff(alpha, target, SeriesKind::gaussian_frequency).cutoff;
  const FourierProfile prof = fourier_profile(c, K, ctx);
  const Real pa = Real::pi(bits) * alpha;
  const Real u = Real::pow2(-static_cast<long>(bits), 64);
  std::vector<Complex> coef;
  std::vector<Real> coef_err;
  coef.reserve(static_cast<size_t>(K));
  coef_err.reserve(static_cast<size_t>(K));
  for (long k = 1; k <= K; ++k) {
    const Real w = exp(-(pa * (k * k)));
    coef.push_back(prof.nonnegative()[static_cast<size_t>(k)] * w);
    // Rounding of the repeated phase products and of the weight.
    coef_err.push_back(w.with_precision(64) * u * (n * (4 * k + 8)));
  }
  return TrigSeries(Real::from_int(n, bits), std::move(coef), std::move(coef_err), frequency_tail(alpha, K, n));
}

TrigSeries config_series(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  return config_series(c, p, ctx, Real::pow2(-2L * static_cast<long>(ctx.bits()), 64));
}

Real config_sum(const Configuration& c, const ThetaParams& p, const Real& x, const PrecisionContext& ctx) {
  const ThetaKernel kernel(p, ctx);
  Real sum(ctx.bits());
  for (const auto& xj : c.points()) sum += kernel.value(x - xj);
  return sum;
}

Real config_sum_fourier(const Configuration& c, const ThetaParams& p, const Real& x, const PrecisionContext& ctx) {
  return config_series(c, p, ctx, series_target(ctx.bits())).eval(x, 0);
}

namespace {

ExtremumCertificate constant_certificate(const TrigSeries& s, ExtremumKind kind) {
  ExtremumCertificate cert;
  cert.kind = kind;
  cert.location = Real(s.bits());
  cert.value = s.mean();
  cert.enclosure = Real(0.5, s.bits());
  cert.extremizers.push_back(cert.location);
  cert.tolerance = s.error_bound(0) * 2L;
  return cert;
}

// Distance from a root to the level set {sigma s > sigma level} found by
// walking the grid outward.
Real walk_radius(const RootScan& scan, const Root& root, double level_scaled, int sigma) {
  const auto m = static_cast<long>(scan.grid);
  const double err = scan.grid_value_error;
  auto above = [&](long i) {
    const double v = scan.grid_value[static_cast<size_t>(((i % m) + m) % m)];
    return sigma * (v - level_scaled) > err;
  };
  const long start = static_cast<long>(std::floor(root.x.to_double() * static_cast<double>(m)));
  long left = start, right = start + 1;
  while (!above(left) && start - left < m) --left;
  while (!above(right) && right - start < m) ++right;
  const double x = root.x.to_double() * static_cast<double>(m);
  const double reach = std::max(x - static_cast<double>(left), static_cast<double>(right) - x) / static_cast<double>(m);
  return Real(std::min(reach, 0.5), root.x.precision()) + root.radius;
}

ExtremumCertificate build_certificate(const TrigSeries& s, const RootScan& scan, const std::vector<Real>& values,
                                      ExtremumKind kind) {
  const int sigma = kind == ExtremumKind::min ? 1 : -1;
  ExtremumCertificate cert;
  cert.kind = kind;
  cert.tolerance = s.error_bound(0) * 2L;
  cert.certified = scan.unresolved.empty();

  std::vector<size_t> idx;
  for (size_t i = 0; i < scan.roots.size(); ++i) {
    const int dir = scan.roots[i].direction;
    if (dir == sigma || dir == 0) idx.push_back(i);
  }
  if (idx.empty()) {
    for (size_t i = 0; i < scan.roots.size(); ++i) idx.push_back(i);
  }
  if (idx.empty()) throw std::logic_error("extremum search found no critical point of a non-constant series");

  size_t best = idx.front();
  for (size_t i : idx) {
    cert.candidates.push_back(LocalExtremum{scan.roots[i].x, values[i]});
    if (sigma * (values[i] - values[best]).sign() < 0) best = i;
    if (!scan.roots[i].certified) cert.certified = false;
  }
  const Real level = values[best] + cert.tolerance * static_cast<long>(sigma);
  const double level_scaled = ((level - s.mean()) / scan.scale).to_double();

  cert.enclosure = Real(s.bits());
  const double m = static_cast<double>(scan.grid);
  for (size_t i : idx) {
    if (sigma * (values[i] - level).sign() > 0) continue;
    const Root& root = scan.roots[i];
    cert.extremizers.push_back(root.x);
    Real radius(s.bits());
    bool have_quad = false;
    if (root.certified && root.slope_bound > 0L) {
      Real gap = abs(level - values[i]);
      Real quad = root.radius + sqrt(gap * 2L / root.slope_bound);
      // Root position in grid units, unwrapped next to its cell.
      double xg = root.x.to_double() * m;
      xg -= m * std::round((xg - (root.cell_lo + root.cell_hi) / 2) / m);
      const double room = std::min(xg - root.cell_lo, root.cell_hi - xg);
      if (quad < room / m) {
        radius = std::move(quad);
        have_quad = true;
      }
    }
    if (!have_quad) radius = walk_radius(scan, root, level_scaled, sigma);
    if (radius > cert.enclosure) cert.enclosure = radius;
  }
  for (const auto& cell : scan.unresolved) {
    // An unresolved cell may hide an extremizer anywhere inside it.
    const Real mid = ldexp(cell.first + cell.second, -1);
    const Real v = s.eval(mid, 0);
    const Real slack = s.abs_sum(1) * (cell.second - cell.first);
    if (sigma * (v - level).sign() <= 0 || abs(v - level) <= slack) {
      cert.extremizers.push_back(frac(mid));
      const Real half = ldexp(cell.second - cell.first, -1);
      if (half > cert.enclosure) cert.enclosure = half;
      cert.certified = false;
    }
  }
  std::sort(cert.extremizers.begin(), cert.extremizers.end(), [](const Real& a, const Real& b) { return a < b; });
  cert.location = cert.extremizers.front();
  cert.value = s.eval(cert.location, 0);

  // Soundness: no grid sample may beat the certified extremum.
  const double bound = ((values[best] - s.mean()) / scan.scale).to_double();
  const double slack = scan.grid_value_error + std::fabs(((cert.tolerance) / scan.scale).to_double());
  for (size_t i = 0; i < scan.grid_value.size(); ++i) {
    if (sigma * (scan.grid_value[i] - bound) < -slack) {
      throw std::logic_error("extremum search missed a basin near grid point " + std::to_string(i));
    }
  }
  return cert;
}

}  // namespace

ExtremaPair certify_series_extrema(const TrigSeries& s, std::size_t grid) {
  if (s.degree() > 0 && s.abs_sum(0) <= s.error_bound(0)) {
    // The oscillation is below the evaluation error at this precision.
    ExtremaPair flat{constant_certificate(s, ExtremumKind::min), constant_certificate(s, ExtremumKind::max)};
    flat.min.certified = flat.max.certified = false;
    return flat;
  }
  RootOptions opt;
  opt.grid = grid;
  const RootScan scan = find_roots(s, 1, opt);
  if (scan.constant) return {constant_certificate(s, ExtremumKind::min), constant_certificate(s, ExtremumKind::max)};
  std::vector<Real> values;
  values.reserve(scan.roots.size());
  for (const auto& r : scan.roots) values.push_back(s.eval(r.x, 0));
  return {build_certificate(s, scan, values, ExtremumKind::min), build_certificate(s, scan, values, ExtremumKind::max)};
}

ExtremaPair certify_extrema(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  const TrigSeries s = config_series(c, p, ctx);
  return certify_series_extrema(s, extremum_grid(c.n(), s.degree()));
}

Real polarization(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  return certify_extrema(c, p, ctx).min.value;
}

Real covering_value(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  return certify_extrema(c, p, ctx).max.value;
}

EnergyValue energy(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  const ThetaKernel kernel(p, ctx);
  const long n = static_cast<long>(c.n());
  Real off(ctx.bits());
  for (size_t j = 0; j < c.n(); ++j) {
    for (size_t k = j + 1; k < c.n(); ++k) off += kernel.value(c[j] - c[k]);
  }
  Real total = kernel.value(ctx.zero()) * n + off * 2L;
  return EnergyValue{total / n, p.alpha, n};
}

MeanMax mean_max_chain(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx) {
  MeanMax r{energy(c, p, ctx).value, covering_value(c, p, ctx)};
  const long n = static_cast<long>(c.n());
  if (r.max < r.energy - ctx.eps() * (16 * n)) {
    throw std::logic_error("mean-max chain violated: max " + r.max.to_string(30) + " < energy " +
                           r.energy.to_string(30));
  }
  return r;
}

Real sampling_worst_case_error(const Configuration& c, const Real& t, const PrecisionContext& ctx) {
  if (!(t > 0L)) throw std::invalid_argument("sampling_worst_case_error: t must be positive");
  const ExtremaPair ex = certify_extrema(c, ThetaParams(t), ctx);
  const long n = static_cast<long>(c.n());
  Real up = ex.max.value - n;
  Real down = n - ex.min.value;
  return max(up, down) / n;
}

std::vector<std::pair<Real, Real>> config_curve(const Configuration& c, const ThetaParams& p, std::size_t m,
                                                const PrecisionContext& ctx) {
  if (m == 0) throw std::invalid_argument("curve needs at least one sample");
  const TrigSeries s = config_series(c, p, ctx, series_target(ctx.bits()));
  std::vector<std::pair<Real, Real>> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Real x = ctx.ratio(static_cast<long>(i), static_cast<long>(m));
    Real v = s.eval(x, 0);
    out.emplace_back(std::move(x), std::move(v));
  }
  return out;
}

}  // namespace thetapolar
