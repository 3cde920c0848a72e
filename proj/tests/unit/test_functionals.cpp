#include "generators.hpp"
#include "thetapolar/functionals.hpp"

using namespace thetapolar;
using tp_test::decimal;
using tp_test::near;

namespace {

const PrecisionContext& ctx() {
  static const PrecisionContext c(256);
  return c;
}

// Independent 70-digit summations.
const char* kTwoThetaHalfFour = "1.999986050630575164018624512781323881749863996797445133096224042636999";
const char* kThreeThetaHalfNine = "2.999999999996846708894396130866866482984675911839938391166721873771521";
const char* kThetaZeroFourMinusOne = "0.000006974684712417991279357455722773386084811819343959670243423623882366267";

Real theta_at(const Real& x, const Real& alpha) { return theta_series(x, ThetaParams(alpha), ctx()); }

}  // namespace

TEST(ConfigSum, EquispacedCompressesToOneTheta) {
  const ThetaParams p(ctx().integer(1));
  const auto c = equispaced(3, ctx());
  tp_test::for_all(20, 51, [&](tp_test::Gen& g) {
    const Real x = g.real(0.0, 1.0, ctx());
    const Real expected = theta_at(x * 3L, ctx().integer(9)) * 3L;
    EXPECT_TRUE(near(config_sum(c, p, x, ctx()), expected, ctx().eps() * 32L));
  });
}

TEST(ConfigSum, FrozenValue) {
  const Real v = config_sum(equispaced(2, ctx()), ThetaParams(ctx().integer(1)), ctx().real(0.25), ctx());
  EXPECT_TRUE(near(v, decimal(kTwoThetaHalfFour, ctx()), decimal("1e-65", ctx())));
}

TEST(ConfigSum, FourierFormAgrees) {
  tp_test::for_all(100, 52, [&](tp_test::Gen& g) {
    const long n = g.integer(1, 8);
    const ThetaParams p(ctx().real(g.log_uniform(0.05, 20.0)));
    const Configuration c = g.configuration(n, 0.0, ctx());
    const Real x = g.real(0.0, 1.0, ctx());
    const Real a = config_sum(c, p, x, ctx());
    EXPECT_TRUE(near(config_sum_fourier(c, p, x, ctx()), a, ctx().eps() * (32L * n) * max(a, ctx().integer(1))));
  });
}

TEST(Extrema, EquispacedMidpointsAndPoints) {
  for (long n = 1; n <= 6; ++n) {
    for (double a : {0.5, 1.0, 2.0}) {
      SCOPED_TRACE("n " + std::to_string(n) + " alpha " + std::to_string(a));
      const PrecisionContext w(tp_test::equispaced_bits(n, a));
      const ThetaParams p(w.real(a));
      const ExtremaPair ex = certify_extrema(equispaced(n, w), p, w);
      EXPECT_TRUE(ex.min.certified);
      EXPECT_TRUE(ex.max.certified);
      ASSERT_EQ(ex.min.extremizers.size(), static_cast<size_t>(n));
      ASSERT_EQ(ex.max.extremizers.size(), static_cast<size_t>(n));
      EXPECT_LE(ex.min.enclosure, decimal("1e-30", w));
      EXPECT_LE(ex.max.enclosure, decimal("1e-30", w));
      for (long k = 0; k < n; ++k) {
        EXPECT_TRUE(near(ex.min.extremizers[static_cast<size_t>(k)], w.ratio(2 * k + 1, 2 * n), decimal("1e-30", w)));
        EXPECT_TRUE(near(ex.max.extremizers[static_cast<size_t>(k)], w.ratio(k, n), decimal("1e-30", w)));
      }
      const Real n2a = w.real(a) * (n * n);
      EXPECT_TRUE(near(ex.min.value, theta_series(w.real(0.5), ThetaParams(n2a), w) * n, decimal("1e-40", w)));
      EXPECT_TRUE(near(ex.max.value, theta_series(w.zero(), ThetaParams(n2a), w) * n, decimal("1e-40", w)));
    }
  }
}

TEST(Extrema, FrozenEquispacedMinimum) {
  const Real v = polarization(equispaced(3, ctx()), ThetaParams(ctx().integer(1)), ctx());
  EXPECT_TRUE(near(v, decimal(kThreeThetaHalfNine, ctx()), decimal("1e-65", ctx())));
}

TEST(Extrema, MovedPointLowersMinimum) {
  const ThetaParams p(ctx().integer(1));
  const auto c = Configuration::from_points({ctx().zero(), decimal("0.4", ctx())}, ctx());
  EXPECT_LT(polarization(c, p, ctx()), polarization(equispaced(2, ctx()), p, ctx()));
}

TEST(Extrema, CandidatesBracketTheGrid) {
  tp_test::for_all(40, 53, [&](tp_test::Gen& g) {
    const long n = g.integer(1, 7);
    const ThetaParams p(ctx().real(g.log_uniform(0.1, 5.0)));
    const Configuration c = g.configuration(n, 0.0, ctx());
    const ExtremaPair ex = certify_extrema(c, p, ctx());
    EXPECT_TRUE(ex.min.certified && ex.max.certified);
    EXPECT_LE(ex.min.value, ex.max.value);
    // No sample falls below the certified minimum or above the maximum.
    for (int i = 0; i < 64; ++i) {
      const Real x = g.real(0.0, 1.0, ctx());
      const Real v = config_sum(c, p, x, ctx());
      EXPECT_GE(v, ex.min.value - ex.min.tolerance);
      EXPECT_LE(v, ex.max.value + ex.max.tolerance);
    }
    for (const auto& cand : ex.min.candidates) EXPECT_GE(cand.value, ex.min.value - ex.min.tolerance);
  });
}

TEST(Energy, EquispacedEqualsCovering) {
  for (long n = 1; n <= 6; ++n) {
    const ThetaParams p(ctx().integer(1));
    const auto c = equispaced(n, ctx());
    const EnergyValue e = energy(c, p, ctx());
    EXPECT_EQ(e.n, n);
    EXPECT_TRUE(near(e.value, covering_value(c, p, ctx()), decimal("1e-40", ctx())));
  }
}

TEST(Energy, EquispacedIsSmallest) {
  tp_test::for_all(1000, 54, [&](tp_test::Gen& g) {
    const long n = g.integer(2, 5);
    const double alphas[] = {0.5, 1.0, 2.0};
    const ThetaParams p(ctx().real(alphas[g.integer(0, 2)]));
    const Configuration c = g.configuration(n, 0.0, ctx());
    EXPECT_GE(energy(c, p, ctx()).value, energy(equispaced(n, ctx()), p, ctx()).value - ctx().eps() * (16L * n));
  });
}

TEST(Energy, MeanMaxChain) {
  tp_test::for_all(200, 55, [&](tp_test::Gen& g) {
    const long n = g.integer(2, 6);
    const ThetaParams p(ctx().real(g.log_uniform(0.2, 5.0)));
    const Configuration c = g.configuration(n, 0.02, ctx());
    const MeanMax mm = mean_max_chain(c, p, ctx());
    // Random configurations sit strictly above the energy.
    EXPECT_GT(mm.max, mm.energy);
  });
}

TEST(SamplingError, EquispacedTwoPoints) {
  const Real e = sampling_worst_case_error(equispaced(2, ctx()), ctx().integer(1), ctx());
  EXPECT_TRUE(near(e, decimal(kThetaZeroFourMinusOne, ctx()), decimal("1e-65", ctx())));
  EXPECT_THROW(sampling_worst_case_error(equispaced(2, ctx()), ctx().zero(), ctx()), std::invalid_argument);
}

TEST(SamplingError, EquispacedIsCoveringExcess) {
  for (long n = 1; n <= 5; ++n) {
    const Real t = ctx().real(0.5);
    const Real e = sampling_worst_case_error(equispaced(n, ctx()), t, ctx());
    EXPECT_TRUE(near(e, theta_at(ctx().zero(), t * (n * n)) - 1L, decimal("1e-40", ctx())));
  }
}

TEST(SamplingError, MaxPlusMinIsDoubledMax) {
  for (long n = 1; n <= 5; ++n) {
    for (double t : {0.5, 1.0, 2.0}) {
      const ThetaParams p(ctx().real(t));
      const ExtremaPair a = certify_extrema(equispaced(n, ctx()), p, ctx());
      const ExtremaPair b = certify_extrema(equispaced(2 * n, ctx()), p, ctx());
      EXPECT_TRUE(near(a.max.value + a.min.value, b.max.value, ctx().eps() * (32L * n)));
      EXPECT_GE(a.max.value - n, n - a.min.value - a.max.tolerance - a.min.tolerance);
    }
  }
}

TEST(Curve, UniformGridWithoutEndpoint) {
  const ThetaParams p(ctx().integer(1));
  const auto c = equispaced(3, ctx());
  const auto curve = config_curve(c, p, 10, ctx());
  ASSERT_EQ(curve.size(), 10u);
  EXPECT_TRUE(curve.front().first.is_zero());
  EXPECT_TRUE(near(curve.back().first, decimal("0.9", ctx()), ctx().eps()));
  for (const auto& [x, v] : curve) EXPECT_TRUE(near(v, config_sum(c, p, x, ctx()), ctx().eps() * 32L));
  EXPECT_THROW(config_curve(c, p, 0, ctx()), std::invalid_argument);
}
