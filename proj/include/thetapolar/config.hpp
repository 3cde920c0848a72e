#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "thetapolar/precision.hpp"
#include "thetapolar/real.hpp"

namespace thetapolar {

/// n distinct points of [0, 1), sorted increasingly; one period of a
/// 1-periodic configuration.
class Configuration {
 public:
  /// Reduces mod 1 and sorts. Rejects an empty list and points whose
  /// cyclic distance is within 2 eps.
  static Configuration from_points(std::vector<Real> points, const PrecisionContext& ctx);
  /// Skips reduction, sorting and the distinctness check. Multisets allowed.
  static Configuration from_sorted_unchecked(std::vector<Real> points);

  size_t n() const { return points_.size(); }
  const std::vector<Real>& points() const { return points_; }
  const Real& operator[](size_t i) const { return points_[i]; }
  /// Every point translated by t, reduced and re-sorted.
  Configuration translated(const Real& t) const;
  /// Smallest cyclic gap.
  Real min_gap() const;

 private:
  explicit Configuration(std::vector<Real> points) : points_(std::move(points)) {}
  std::vector<Real> points_;
};

Configuration equispaced(long n, const PrecisionContext& ctx);

/// Uniform draw from the sorted simplex with every cyclic gap at least
/// min_gap: gaps are min_gap plus a flat Dirichlet share of the remaining
/// length, and the first point is uniform in [0, 1).
Configuration random_configuration(long n, std::mt19937_64& rng, double min_gap, const PrecisionContext& ctx);

/// c_k = sum_j e^{-2 pi i k x_j} for 0 <= k <= k_max; negative k by conjugation.
class FourierProfile {
 public:
  FourierProfile(long n, std::vector<Complex> coefficients) : n_(n), coefficients_(std::move(coefficients)) {}

  long n() const { return n_; }
  long k_max() const { return static_cast<long>(coefficients_.size()) - 1; }
  Complex at(long k) const;
  const std::vector<Complex>& nonnegative() const { return coefficients_; }

 private:
  long n_;
  std::vector<Complex> coefficients_;
};

FourierProfile fourier_profile(const Configuration& c, long k_max, const PrecisionContext& ctx);

/// x_{perm[j]} = j/n + shift + eps[j] (mod 1), sum eps = 0, shift in [0, 1/n).
struct PerturbationDecomposition {
  Real shift;
  std::vector<size_t> permutation;  // slot j -> index into the sorted points
  std::vector<Real> eps;
  Real residual_norm;

  long n() const { return static_cast<long>(eps.size()); }
};

class GapTooSmall : public std::domain_error {
 public:
  GapTooSmall(size_t index, const std::string& gap);
  size_t index() const { return index_; }

 private:
  size_t index_;
};

/// Splits a near-equispaced configuration into a shift and sum-zero residuals.
/// Throws GapTooSmall when a cyclic gap is <= 1/(2n).
PerturbationDecomposition decompose(const Configuration& c, const PrecisionContext& ctx);

/// Points j/n + shift + eps[j] reduced mod 1, in slot order.
std::vector<Real> reconstruct(const PerturbationDecomposition& d);

/// Points j/n + eps[j] (mod 1); eps need not sum to zero. The result must
/// still have distinct points.
Configuration perturbed_equispaced(const std::vector<Real>& eps, const PrecisionContext& ctx);

}  // namespace thetapolar
