#include "generators.hpp"
#include "thetapolar/minimax_qp.hpp"
#include "thetapolar/optimizer.hpp"

using namespace thetapolar;
using tp_test::decimal;

namespace {

const PrecisionContext& ctx() {
  static const PrecisionContext c(256);
  return c;
}

}  // namespace

TEST(MinimaxQp, SingleRowGoesToBox) {
  MinimaxQp qp;
  qp.g = {{1.0, -2.0}};
  qp.a = {0.5};
  const MinimaxStep s = solve_minimax_qp(qp);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.u[0], 1.0, 1e-9);
  EXPECT_NEAR(s.u[1], -1.0, 1e-9);
  EXPECT_NEAR(s.t, 3.5, 1e-9);
  EXPECT_NEAR(s.weights[0], 1.0, 1e-9);
}

TEST(MinimaxQp, OpposingRowsBalance) {
  // max min(u, -u) = 0 at u = 0 with equal weights.
  MinimaxQp qp;
  qp.g = {{1.0}, {-1.0}};
  qp.a = {0.0, 0.0};
  const MinimaxStep s = solve_minimax_qp(qp);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.u[0], 0.0, 1e-9);
  EXPECT_NEAR(s.weights[0], 0.5, 1e-9);
  EXPECT_NEAR(s.weights[1], 0.5, 1e-9);
}

TEST(MinimaxQp, CurvatureStopsInside) {
  // max u - u^2 / 2 over |u| <= 1: u = 1 only when curvature allows.
  MinimaxQp qp;
  qp.g = {{1.0}};
  qp.a = {0.0};
  qp.diagonal = {4.0};
  const MinimaxStep s = solve_minimax_qp(qp);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.u[0], 0.25, 1e-9);
  EXPECT_NEAR(s.model, 0.125, 1e-9);
  qp.diagonal.clear();
  qp.factors = {{2.0}};
  EXPECT_NEAR(solve_minimax_qp(qp).u[0], 0.25, 1e-9);
}

TEST(MinimaxQp, NegativeCurvatureIsDropped) {
  MinimaxQp qp;
  qp.g = {{1.0, 0.0}};
  qp.a = {0.0};
  qp.diagonal = {-3.0, 1.0};
  const MinimaxStep s = solve_minimax_qp(qp);
  EXPECT_NEAR(s.u[0], 1.0, 1e-9);
  EXPECT_NEAR(s.u[1], 0.0, 1e-9);
}

TEST(MinimaxQp, BadDimensionsThrow) {
  MinimaxQp qp;
  qp.g = {{1.0, 2.0}, {1.0}};
  qp.a = {0.0, 0.0};
  EXPECT_THROW(solve_minimax_qp(qp), std::invalid_argument);
}

TEST(MinimaxQp, WeightsFormDistribution) {
  tp_test::for_all(100, 81, [&](tp_test::Gen& g) {
    const long m = g.integer(1, 6), rows = g.integer(1, 20);
    MinimaxQp qp;
    for (long s = 0; s < rows; ++s) {
      std::vector<double> row;
      for (long j = 0; j < m; ++j) row.push_back(g.uniform(-1, 1));
      qp.g.push_back(row);
      qp.a.push_back(g.uniform(-1, 1));
    }
    const MinimaxStep st = solve_minimax_qp(qp);
    double sum = 0;
    for (double w : st.weights) {
      EXPECT_GE(w, -1e-12);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-8);
    // The step never does worse than u = 0.
    EXPECT_GE(st.t, *std::min_element(qp.a.begin(), qp.a.end()) - 1e-12);
  });
}

TEST(Objective, Names) {
  EXPECT_EQ(parse_objective("max-min"), Objective::max_min);
  EXPECT_EQ(parse_objective("min_max"), Objective::min_max);
  EXPECT_FALSE(parse_objective("max"));
  EXPECT_STREQ(objective_name(Objective::min_max), "min-max");
}

TEST(LocalAscent, PerturbedEquispacedReturns) {
  const long n = 4;
  tp_test::Gen g(instance_rng(82, 0));
  const Configuration start = perturbed_equispaced(g.sum_zero(n, decimal("1e-6", ctx()), ctx()), ctx());
  const ThetaParams p(ctx().integer(1));
  const OptimizationResult r = local_ascent(start, p, Objective::max_min, ctx());
  EXPECT_LE(r.distance_to_equispaced, decimal("1e-20", ctx()));
  EXPECT_GE(r.value, polarization(start, p, ctx()));
  // The first point is held fixed.
  bool kept = false;
  for (const auto& x : r.best.points()) kept = kept || x == start[0];
  EXPECT_TRUE(kept);
}

TEST(LocalAscent, CoveringFromRandomStart) {
  const ThetaParams p(ctx().integer(1));
  tp_test::for_all(4, 83, [&](tp_test::Gen& g) {
    const Configuration start = g.configuration(3, 1.0 / 12, ctx());
    const OptimizationResult r = local_ascent(start, p, Objective::min_max, ctx());
    EXPECT_LE(r.distance_to_equispaced, decimal("1e-15", ctx()));
    EXPECT_LE(r.value, covering_value(start, p, ctx()));
  });
}

TEST(LocalAscent, TraceIsMonotone) {
  const ThetaParams p(ctx().integer(1));
  tp_test::Gen g(instance_rng(84, 0));
  const OptimizationResult r = local_ascent(g.configuration(5, 0.05, ctx()), p, Objective::max_min, ctx());
  ASSERT_FALSE(r.trace.empty());
  for (size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].value, r.trace[i - 1].value);
}

TEST(MultiStart, IndependentOfThreads) {
  const ThetaParams p(ctx().integer(1));
  MultiStartOptions o;
  o.starts = 4;
  o.seed = 5;
  o.threads = 1;
  const MultiStartResult a = multi_start(3, p, Objective::max_min, ctx(), o);
  o.threads = 3;
  const MultiStartResult b = multi_start(3, p, Objective::max_min, ctx(), o);
  ASSERT_EQ(a.runs.size(), 4u);
  for (size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].value, b.runs[i].value);
    EXPECT_EQ(a.runs[i].iterations, b.runs[i].iterations);
  }
  EXPECT_EQ(a.best.value, b.best.value);
}

TEST(BruteForce, TwoPointsPickHalf) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (auto obj : {Objective::max_min, Objective::min_max}) {
      const OptimizationResult r = brute_force_oracle(2, ThetaParams(ctx().real(alpha)), 1e-3, obj, ctx());
      EXPECT_TRUE(r.best[0].is_zero());
      EXPECT_LE(abs(r.best[1] - ctx().real(0.5)), ctx().real(1e-3 + 1e-12)) << alpha << objective_name(obj);
    }
  }
  EXPECT_THROW(brute_force_oracle(5, ThetaParams(ctx().integer(1)), 0.1, Objective::max_min, ctx()),
               std::invalid_argument);
}

TEST(Sweep, PeakAtZeroAndSymmetric) {
  const ThetaParams p(ctx().integer(1));
  for (long n : {2L, 3L}) {
    const SweepCurve c = one_point_sweep(n, p, 200, ctx());
    EXPECT_TRUE(c.peak_at_zero);
    EXPECT_EQ(c.peak_index, 0u);
    for (size_t i = 1; i < c.samples.size(); ++i) {
      EXPECT_TRUE(tp_test::near(c.samples[i].second, c.samples[c.samples.size() - i].second, ctx().eps() * (32L * n)));
    }
  }
}
