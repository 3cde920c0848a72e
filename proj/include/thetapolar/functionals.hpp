#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "thetapolar/config.hpp"
#include "thetapolar/precision.hpp"
#include "thetapolar/series.hpp"
#include "thetapolar/theta.hpp"

namespace thetapolar {

enum class ExtremumKind { min, max };

struct LocalExtremum {
  Real location;
  Real value;
};

/// Certified global extremum of a trigonometric series on the circle.
struct ExtremumCertificate {
  ExtremumKind kind = ExtremumKind::min;
  /// Smallest global extremizer.
  Real location;
  Real value;
  /// Every global extremizer lies within this distance of one of `extremizers`.
  Real enclosure;
  /// Local extrema whose values tie with the extremal value within `tolerance`.
  std::vector<Real> extremizers;
  /// All local extrema of this kind.
  std::vector<LocalExtremum> candidates;
  /// Tie tolerance: twice the evaluation error bound.
  Real tolerance;
  /// False when a root could not be certified or a cell stayed unresolved.
  bool certified = true;
};

struct ExtremaPair {
  ExtremumCertificate min;
  ExtremumCertificate max;
};

/// f(x) = sum_j theta(x - x_j; alpha) as a truncated Fourier series whose
/// dropped part is below `target`.
TrigSeries config_series(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx, const Real& target);
/// Same with the default target (unit roundoff squared).
TrigSeries config_series(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

/// Grid size used for a configuration sum of degree K: max(4096, 32 n K).
std::size_t extremum_grid(std::size_t n, long degree);

/// Sum of pointwise theta evaluations.
Real config_sum(const Configuration& c, const ThetaParams& p, const Real& x, const PrecisionContext& ctx);
/// Fourier form sum_k e^{-pi alpha k^2} c_k e^{2 pi i k x}.
Real config_sum_fourier(const Configuration& c, const ThetaParams& p, const Real& x, const PrecisionContext& ctx);

/// Global minimum and maximum of a real trigonometric series.
ExtremaPair certify_series_extrema(const TrigSeries& s, std::size_t grid);

ExtremaPair certify_extrema(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

Real polarization(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);
Real covering_value(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

struct EnergyValue {
  Real value;
  Real alpha;
  long n = 0;
};

/// (1/n) sum_j sum_k theta(x_j - x_k; alpha), diagonal included.
EnergyValue energy(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

struct MeanMax {
  Real energy;
  Real max;
};

/// Energy and covering value; throws std::logic_error if max < energy - 16 n eps.
MeanMax mean_max_chain(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

/// max(covering - n, n - polarization) / n at alpha = t.
Real sampling_worst_case_error(const Configuration& c, const Real& t, const PrecisionContext& ctx);

/// (i/m, f(i/m)) for i < m.
std::vector<std::pair<Real, Real>> config_curve(const Configuration& c, const ThetaParams& p, std::size_t m,
                                                const PrecisionContext& ctx);

}  // namespace thetapolar
