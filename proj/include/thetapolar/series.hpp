#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "thetapolar/real.hpp"

namespace thetapolar {

/// Real trigonometric series s(x) = mean + 2 Re sum_{k=1}^{K} a_k e^{2 pi i k x}
/// with bounds on coefficient error and on the dropped frequencies k > K.
class TrigSeries {
 public:
  /// coef[k-1] = a_k. coef_error[k-1] bounds |a_k - exact a_k| (may be empty).
  /// tail[j] bounds the j-th derivative of the dropped part.
  TrigSeries(Real mean, std::vector<Complex> coef, std::vector<Real> coef_error, std::array<Real, 4> tail);

  Bits bits() const { return mean_.precision(); }
  long degree() const { return static_cast<long>(coef_.size()); }
  const Real& mean() const { return mean_; }
  const std::vector<Complex>& coefficients() const { return coef_; }

  /// d^order/dx^order s(x), order 0..3.
  Real eval(const Real& x, int order = 0) const;
  /// Orders 0..max_order into out[0..max_order].
  void eval_orders(const Real& x, int max_order, Real* out) const;

  /// sum_k (2 pi k)^j 2|a_k| + tail[j]: bound on sup |s^(j) - mean [j = 0]|.
  const Real& abs_sum(int order) const { return abs_sum_[static_cast<size_t>(order)]; }
  /// Bound on |eval(x, order) - s^(order)(x)| from data, truncation and rounding.
  const Real& error_bound(int order) const { return error_[static_cast<size_t>(order)]; }
  /// Largest |a_k| (zero for a constant series).
  const Real& scale() const { return scale_; }
  const Real& tail(int order) const { return tail_[static_cast<size_t>(order)]; }
  const Real& coefficient_error(int order) const { return coef_err_sum_[static_cast<size_t>(order)]; }

  /// Negated series.
  TrigSeries negated() const;

 private:
  static Bits bits_for_bounds();

  Real mean_;
  std::vector<Complex> coef_;
  std::vector<Real> coef_error_;
  std::array<Real, 4> tail_;
  std::array<Real, 4> abs_sum_;
  std::array<Real, 4> coef_err_sum_;
  std::array<Real, 4> error_;
  Real scale_;
};

struct RootOptions {
  std::size_t min_grid = 4096;
  /// Requested grid size; raised to min_grid and rounded up to a multiple of 8.
  std::size_t grid = 0;
  int max_depth = 48;
  /// Multiprecision samples spent on bisection before the remaining
  /// undecided cells are left unresolved.
  std::size_t max_subdivisions = std::size_t{1} << 16;
  int max_newton = 200;
};

struct Root {
  Real x;              // in [0, 1)
  int direction = 0;   // sign of the next derivative at the root
  Real radius;         // distance bound to the exact root
  Real slope_bound;    // lower bound of |next derivative| near the root, 0 if unknown
  double cell_lo = 0;  // grid cell (in grid units) that produced the root
  double cell_hi = 0;
  bool certified = true;
};

struct RootScan {
  std::vector<Root> roots;  // sorted by x
  std::size_t grid = 0;
  /// (s(i/grid) - mean) / scale for every grid point.
  std::vector<double> grid_value;
  /// Bound on the error of grid_value entries.
  double grid_value_error = 0;
  Real scale;
  bool constant = false;
  /// Cells where the subdivision depth ran out, as [lo, hi] pairs.
  std::vector<std::pair<Real, Real>> unresolved;
};

/// All zeros of s^(order) (order 0 or 1) on [0, 1), each refined by
/// safeguarded Newton in multiprecision.
RootScan find_roots(const TrigSeries& s, int order, const RootOptions& options = {});

}  // namespace thetapolar
