#pragma once

#include <vector>

namespace thetapolar {

/// maximize t - 1/2 u' H u
/// subject to t <= a_s + g_s . u for every s, and |u_j| <= 1,
/// where H is the positive semidefinite part of
/// diag(diagonal) + sum_r factors_r factors_r'.
struct MinimaxQp {
  std::vector<std::vector<double>> g;
  std::vector<double> a;
  /// Any sign; empty means zero.
  std::vector<double> diagonal;
  /// Kept as factors: H can be huge across some directions and tiny along
  /// others, and the assembled matrix would lose the small ones.
  std::vector<std::vector<double>> factors;
};

struct MinimaxStep {
  std::vector<double> u;
  double t = 0;
  /// Objective value t - 1/2 u' H u.
  double model = 0;
  /// Multipliers of the t <= a_s + g_s . u rows; they sum to one.
  std::vector<double> weights;
  int iterations = 0;
  bool converged = false;
};

/// Primal-dual interior point method. Throws std::invalid_argument on
/// inconsistent dimensions.
MinimaxStep solve_minimax_qp(const MinimaxQp& qp, int max_iter = 200);

}  // namespace thetapolar
