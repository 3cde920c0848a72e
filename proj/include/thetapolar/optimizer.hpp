#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "thetapolar/config.hpp"
#include "thetapolar/functionals.hpp"
#include "thetapolar/precision.hpp"
#include "thetapolar/theta.hpp"

namespace thetapolar {

/// max_min maximizes the polarization min f; min_max minimizes the covering value max f.
enum class Objective { max_min, min_max };

const char* objective_name(Objective o);
std::optional<Objective> parse_objective(std::string_view text);

struct TracePoint {
  long iteration = 0;
  Real value;
};

struct OptimizationResult {
  Configuration best = Configuration::from_sorted_unchecked({});
  Objective objective = Objective::max_min;
  /// polarization(best) or covering_value(best).
  Real value;
  /// residual_norm of decompose(best); +inf when best is not decomposable.
  Real distance_to_equispaced;
  std::vector<TracePoint> trace;
  long iterations = 0;
  long accepted_steps = 0;
  /// False when max_iter ran out first.
  bool converged = true;
};

struct AscentOptions {
  int max_iter = 500;
  /// Initial and largest trust radius, in units of 1/n.
  double initial_radius = 0.125;
  double max_radius = 0.25;
  /// Stop once the trust radius falls below this; 0 means 2^(-bits/3).
  double step_tol = 0;
  /// Uniform sample count added to the local extrema in the step model; 0 means 16 max(n, 4).
  int model_grid = 0;
};

/// Trust-region ascent on the objective. Each step maximizes the smallest of
/// the models of f at its local extrema of the relevant kind and at uniform
/// samples. Rows at extrema carry the rank-one curvature from the extremum
/// moving with the points. A rejected step gets one second-order correction.
/// The first point stays fixed.
OptimizationResult local_ascent(const Configuration& start, const ThetaParams& p, Objective objective,
                                const PrecisionContext& ctx, const AscentOptions& options = {});

struct MultiStartOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  AscentOptions ascent;
};

struct MultiStartResult {
  OptimizationResult best;
  /// One result per start, in start order.
  std::vector<OptimizationResult> runs;
};

/// Local ascent from `starts` random configurations with every gap at least
/// 1/(4n). Start i draws from instance_rng(seed, i). The best run is chosen
/// by value, then by the lexicographic order of its points.
MultiStartResult multi_start(long n, const ThetaParams& p, Objective objective, const PrecisionContext& ctx,
                             const MultiStartOptions& options = {});

/// Exhaustive search with x_1 = 0 and the other points on the grid
/// {k h} in sorted order. Ranks all candidates in double precision and
/// re-evaluates the best few in multiprecision. Throws std::invalid_argument
/// for n > 4 or h < 1e-4.
OptimizationResult brute_force_oracle(long n, const ThetaParams& p, double grid_step, Objective objective,
                                      const PrecisionContext& ctx, unsigned threads = 1);

struct SweepCurve {
  std::vector<std::pair<Real, Real>> samples;  // (x_1, polarization)
  std::size_t peak_index = 0;
  /// The largest sample sits at the sample nearest 0 mod 1.
  bool peak_at_zero = false;
};

/// x_1 -> polarization({x_1, 1/n, ..., (n-1)/n}) at x_1 = i/m, i < m.
SweepCurve one_point_sweep(long n, const ThetaParams& p, std::size_t m, const PrecisionContext& ctx,
                           unsigned threads = 1);

/// Value of the objective at c: polarization or covering value.
Real objective_value(const Configuration& c, const ThetaParams& p, Objective objective, const PrecisionContext& ctx);

}  // namespace thetapolar
