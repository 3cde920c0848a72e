#pragma once

#include <vector>

#include "thetapolar/precision.hpp"
#include "thetapolar/real.hpp"

namespace thetapolar {

/// Width parameter of the Gaussian; alpha > 0.
struct ThetaParams {
  Real alpha;

  explicit ThetaParams(Real a);
  Real dual() const { return 1L / alpha; }
};

/// Below this alpha the frequency series is replaced by the space-domain sum
/// at 1/alpha.
inline constexpr double kDualSwitchAlpha = 0.05;

/// Precomputed weights for repeated evaluation of theta(x; alpha) and its
/// derivatives at one (alpha, precision).
class ThetaKernel {
 public:
  ThetaKernel(const ThetaParams& p, const PrecisionContext& ctx);

  /// theta(x; alpha). Uses the space-domain sum when alpha < kDualSwitchAlpha.
  Real value(const Real& x) const;
  /// d^order/dx^order theta(x; alpha) from the frequency series.
  Real derivative(const Real& x, int order) const;

  long cutoff() const { return static_cast<long>(weights_.size()) - 1; }
  /// weights()[k] = e^{-pi alpha k^2}, k = 0..cutoff().
  const std::vector<Real>& weights() const { return weights_; }
  /// Bound on the dropped frequencies |k| > cutoff() of the value series.
  const Real& truncation() const { return truncation_; }
  Bits bits() const { return bits_; }

 private:
  Real frequency_value(const Real& x) const;
  Real space_value(const Real& x) const;

  Bits bits_;
  Real alpha_;
  bool use_space_;
  std::vector<Real> weights_;
  Real truncation_;
  Real inv_alpha_;
  Real sqrt_alpha_;
  long space_cutoff_ = 0;
};

/// theta(x; alpha) = 1 + 2 sum_{k>=1} e^{-pi alpha k^2} cos(2 pi k x).
Real theta_series(const Real& x, const ThetaParams& p, const PrecisionContext& ctx);

/// Frequency series without the small-alpha switch.
Real theta_frequency_sum(const Real& x, const ThetaParams& p, const PrecisionContext& ctx);

/// Jacobi triple product
/// prod_{k>=1} (1 - q^{2k}) (1 + 2 cos(2 pi x) q^{2k-1} + q^{4k-2}), q = e^{-pi alpha}.
Real theta_product(const Real& x, const ThetaParams& p, const PrecisionContext& ctx);

/// sum_{k in Z} e^{-pi alpha (x+k)^2}, summed in the space domain.
Real periodized_gaussian(const Real& x, const Real& alpha, const PrecisionContext& ctx);

/// theta(x; alpha) through the Poisson dual: p_{1/alpha}(x) / sqrt(alpha).
Real theta_dual(const Real& x, const ThetaParams& p, const PrecisionContext& ctx);

/// Composite midpoint rule with 2^12 nodes for the integral of theta over a period.
Real theta_mean_check(const ThetaParams& p, const PrecisionContext& ctx);

/// Truncation target used by every series in the library: 2^-(bits + 8).
Real series_target(Bits bits);

}  // namespace thetapolar
