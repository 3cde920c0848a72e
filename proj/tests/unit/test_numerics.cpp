#include <cmath>

#include "generators.hpp"
#include "thetapolar/precision.hpp"
#include "thetapolar/real.hpp"

using namespace thetapolar;
using tp_test::decimal;

TEST(Precision, DigitsToBits) {
  const PrecisionContext ctx = PrecisionContext::from_digits(80);
  EXPECT_EQ(ctx.mantissa_bits(), static_cast<int>(std::ceil(80 * std::log2(10.0))) + 32);
  EXPECT_EQ(ctx.digits(), 80);
  EXPECT_EQ(ctx.eps(), Real::pow2(-(ctx.mantissa_bits() - 32), ctx.bits()));
}

TEST(Precision, WidenedKeepsGuardBits) {
  const PrecisionContext ctx(256, 16);
  const PrecisionContext w = ctx.widened(512);
  EXPECT_EQ(w.mantissa_bits(), 512);
  EXPECT_EQ(w.guard_bits(), 16);
  EXPECT_EQ(ctx.widened(100).mantissa_bits(), 256);
}

TEST(Real, ParseRejectsGarbage) {
  const PrecisionContext ctx(128);
  EXPECT_FALSE(ctx.parse("abc"));
  EXPECT_FALSE(ctx.parse("1.5x"));
  EXPECT_FALSE(ctx.parse(""));
  EXPECT_FALSE(ctx.parse("inf"));
  ASSERT_TRUE(ctx.parse("-2.5e-3"));
  EXPECT_EQ(*ctx.parse("-2.5e-3"), *ctx.parse("-0.0025"));
}

TEST(Real, DecimalFormatting) {
  const PrecisionContext ctx(256);
  EXPECT_EQ(ctx.real(0.5).to_decimal(80), "0.5");
  EXPECT_EQ(ctx.integer(-12).to_decimal(10), "-12");
  EXPECT_EQ(ctx.zero().to_decimal(10), "0");
  EXPECT_EQ(ctx.ratio(1, 3).to_decimal(5), "0.33333");
  EXPECT_EQ(ctx.real(1e-10).to_decimal(3), "1e-10");
}

TEST(Real, RatioRoundsOnce) {
  const PrecisionContext ctx(200);
  EXPECT_EQ(ctx.ratio(1, 4), ctx.real(0.25));
  const Real third = ctx.ratio(1, 3);
  EXPECT_LE(abs(third * 3L - 1L), ctx.unit_roundoff() * 2L);
}

TEST(TailCutoff, FrequencyExamples) {
  const PrecisionContext ctx(256);
  EXPECT_EQ(tail_cutoff(ctx.integer(1), decimal("1e-20", ctx), SeriesKind::gaussian_frequency).cutoff, 4);
  EXPECT_EQ(tail_cutoff(ctx.integer(1), decimal("0.5", ctx), SeriesKind::gaussian_frequency).cutoff, 1);
  EXPECT_EQ(tail_cutoff(ctx.integer(100), decimal("1e-30", ctx), SeriesKind::gaussian_frequency).cutoff, 1);
}

TEST(TailCutoff, RejectsBadArguments) {
  const PrecisionContext ctx(128);
  EXPECT_THROW(tail_cutoff(ctx.zero(), ctx.real(0.1), SeriesKind::gaussian_frequency), std::invalid_argument);
  EXPECT_THROW(tail_cutoff(ctx.integer(1), ctx.zero(), SeriesKind::gaussian_frequency), std::invalid_argument);
}

TEST(TailCutoff, BoundCoversDirectTailSum) {
  const PrecisionContext ctx(160);
  tp_test::for_all(1000, 11, [&](tp_test::Gen& g) {
    const Real alpha = ctx.real(g.log_uniform(0.05, 50.0));
    const long K = g.integer(1, 12);
    const Real bound = tail_estimate(alpha, K, SeriesKind::gaussian_frequency);
    Real direct = ctx.zero();
    const Real pa = ctx.pi() * alpha;
    for (long k = K + 1; k <= K + 200; ++k) direct += exp(-(pa * (k * k))) * 2L;
    EXPECT_LE(direct, bound) << "alpha " << alpha.to_string(10) << " K " << K;
  });
}

TEST(TailCutoff, SpaceBoundCoversDirectTailSum) {
  const PrecisionContext ctx(160);
  tp_test::for_all(300, 12, [&](tp_test::Gen& g) {
    const Real alpha = ctx.real(g.log_uniform(0.05, 50.0));
    const long K = g.integer(1, 12);
    const Real x = ctx.real(g.uniform(-0.5, 0.5));
    const Real bound = tail_estimate(alpha, K, SeriesKind::gaussian_space);
    Real direct = ctx.zero();
    const Real pa = ctx.pi() * alpha;
    for (long k = K + 1; k <= K + 200; ++k) {
      direct += exp(-(pa * square(x + k))) + exp(-(pa * square(x - k)));
    }
    EXPECT_LE(direct, bound);
  });
}

TEST(TailCutoff, ChosenCutoffIsSmallest) {
  const PrecisionContext ctx(128);
  tp_test::for_all(200, 13, [&](tp_test::Gen& g) {
    const Real alpha = ctx.real(g.log_uniform(0.05, 50.0));
    const Real target = ctx.real(std::pow(10.0, -g.uniform(1.0, 60.0)));
    for (auto kind : {SeriesKind::gaussian_frequency, SeriesKind::gaussian_space, SeriesKind::triple_product}) {
      const TailBudget b = tail_cutoff(alpha, target, kind);
      EXPECT_LE(b.tail_bound, target);
      if (b.cutoff > 1) EXPECT_GT(tail_estimate(alpha, b.cutoff - 1, kind), target);
    }
  });
}
