#include "thetapolar/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thetapolar {

namespace {

void sort_points(std::vector<Real>& pts) {
  std::sort(pts.begin(), pts.end(), [](const Real& a, const Real& b) { return a < b; });
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Configuration Configuration::from_points(std::vector<Real> points, const PrecisionContext& ctx) {
  if (points.empty()) throw std::invalid_argument("configuration needs at least one point");
  for (auto& p : points) {
    if (!p.is_finite()) throw std::invalid_argument("configuration point is not finite");
    p = frac(p.with_precision(std::max(p.precision(), ctx.bits())));
  }
  sort_points(points);
  Configuration c(std::move(points));
  if (c.n() > 1) {
    const Real limit = ctx.eps() * 2L;
    for (size_t i = 0; i < c.n(); ++i) {
      Real gap = i + 1 < c.n() ? c.points_[i + 1] - c.points_[i] : c.points_[0] + 1L - c.points_[i];
      if (gap <= limit) {
        throw std::invalid_argument("configuration points " + std::to_string(i) + " and " +
                                    std::to_string((i + 1) % c.n()) + " coincide");
      }
    }
  }
  return c;
}

Configuration Configuration::from_sorted_unchecked(std::vector<Real> points) { return Configuration(std::move(points)); }

Configuration Configuration::translated(const Real& t) const {
  std::vector<Real> pts;
  pts.reserve(n());
  for (const auto& p : points_) pts.push_back(frac(p + t));
  sort_points(pts);
  return Configuration(std::move(pts));
}

Real Configuration::min_gap() const {
  if (n() == 1) return Real::from_int(1, points_[0].precision());
  Real best = points_[0] + 1L - points_.back();
  for (size_t i = 0; i + 1 < n(); ++i) {
    Real gap = points_[i + 1] - points_[i];
    if (gap < best) best = std::move(gap);
  }
  return best;
}

Configuration equispaced(long n, const PrecisionContext& ctx) {
  if (n < 1) throw std::invalid_argument("equispaced: n must be at least 1");
  std::vector<Real> pts;
  pts.reserve(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) pts.push_back(ctx.ratio(j, n));
  return Configuration::from_sorted_unchecked(std::move(pts));
}

Configuration random_configuration(long n, std::mt19937_64& rng, double min_gap, const PrecisionContext& ctx) {
  if (n < 1) throw std::invalid_argument("random_configuration: n must be at least 1");
  if (!(min_gap >= 0.0) || min_gap * static_cast<double>(n) >= 1.0) {
    throw std::invalid_argument("random_configuration: min_gap too large for n");
  }
  std::vector<double> weights(static_cast<size_t>(n));
  double total = 0.0;
  for (auto& w : weights) {
    w = -std::log1p(-unit_uniform(rng));
    total += w;
  }
  const double free_length = 1.0 - min_gap * static_cast<double>(n);
  double x = unit_uniform(rng);
  std::vector<Real> pts;
  pts.reserve(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) {
    pts.push_back(ctx.real(x - std::floor(x)));
    x += min_gap + free_length * weights[static_cast<size_t>(j)] / total;
  }
  return Configuration::from_points(std::move(pts), ctx);
}

Complex FourierProfile::at(long k) const {
  const long a = k < 0 ? -k : k;
  if (a > k_max()) throw std::out_of_range("fourier coefficient index beyond k_max");
  return k < 0 ? coefficients_[static_cast<size_t>(a)].conj() : coefficients_[static_cast<size_t>(a)];
}

FourierProfile fourier_profile(const Configuration& c, long k_max, const PrecisionContext& ctx) {
  if (k_max < 1) throw std::invalid_argument("fourier_profile: k_max must be at least 1");
  const Bits bits = ctx.bits();
  std::vector<Complex> coef(static_cast<size_t>(k_max) + 1, Complex(bits));
  coef[0].re = Real::from_int(static_cast<long>(c.n()), bits);
  for (const auto& x : c.points()) {
    const Complex e = unit_phase(-x.with_precision(bits));
    Complex p = e;
    for (long k = 1; k <= k_max; ++k) {
      coef[static_cast<size_t>(k)] += p;
      if (k < k_max) p *= e;
    }
  }
  return FourierProfile(static_cast<long>(c.n()), std::move(coef));
}

GapTooSmall::GapTooSmall(size_t index, const std::string& gap)
    : std::domain_error("cyclic gap after point " + std::to_string(index) + " is " + gap +
                        ", not above 1/(2n); configuration is outside the perturbative regime"),
      index_(index) {}

PerturbationDecomposition decompose(const Configuration& c, const PrecisionContext& ctx) {
  const long n = static_cast<long>(c.n());
  const Bits bits = ctx.bits();
  const Real half_slot = ctx.ratio(1, 2 * n);
  for (size_t i = 0; i < c.n(); ++i) {
    Real gap = i + 1 < c.n() ? c[i + 1] - c[i] : c[0] + 1L - c[i];
    if (n > 1 && gap <= half_slot) throw GapTooSmall(i, gap.to_string(10));
  }

  // With slot j holding sorted point j the mean offset is z0; rotating the
  // assignment by r moves the mean by r/n, so r = floor(n z0) lands z in [0, 1/n).
  Real z0(bits);
  for (long j = 0; j < n; ++j) z0 += c[static_cast<size_t>(j)] - ctx.ratio(j, n);
  z0 /= n;
  const long r = floor(z0 * n).to_long_floor();

  PerturbationDecomposition d;
  d.permutation.resize(static_cast<size_t>(n));
  std::vector<Real> offsets;
  offsets.reserve(static_cast<size_t>(n));
  Real mean(bits);
  for (long j = 0; j < n; ++j) {
    const long idx = j + r;
    const long wrap = idx >= 0 ? idx / n : -((-idx + n - 1) / n);
    const long slot_point = idx - wrap * n;
    d.permutation[static_cast<size_t>(j)] = static_cast<size_t>(slot_point);
    Real off = c[static_cast<size_t>(slot_point)] + wrap - ctx.ratio(j, n);
    mean += off;
    offsets.push_back(std::move(off));
  }
  mean /= n;
  d.eps.reserve(static_cast<size_t>(n));
  Real ss(bits);
  for (auto& off : offsets) {
    Real e = off - mean;
    ss += square(e);
    d.eps.push_back(std::move(e));
  }
  d.shift = frac(mean);
  d.residual_norm = sqrt(ss);
  return d;
}

std::vector<Real> reconstruct(const PerturbationDecomposition& d) {
  const long n = d.n();
  std::vector<Real> pts;
  pts.reserve(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j) {
    const Real& e = d.eps[static_cast<size_t>(j)];
    Real slot = Real::from_int(j, e.precision()) / n;
    pts.push_back(frac(slot + d.shift + e));
  }
  return pts;
}

Configuration perturbed_equispaced(const std::vector<Real>& eps, const PrecisionContext& ctx) {
  const long n = static_cast<long>(eps.size());
  std::vector<Real> pts;
  pts.reserve(eps.size());
  for (long j = 0; j < n; ++j) pts.push_back(ctx.ratio(j, n) + eps[static_cast<size_t>(j)]);
  return Configuration::from_points(std::move(pts), ctx);
}

}  // namespace thetapolar
