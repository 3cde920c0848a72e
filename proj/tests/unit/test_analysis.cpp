#include "generators.hpp"
#include "thetapolar/analysis.hpp"

using namespace thetapolar;
using tp_test::decimal;
using tp_test::near;

namespace {

const PrecisionContext& ctx() {
  static const PrecisionContext c(256);
  return c;
}

TrigPoly cosine(long k, double amplitude = 1.0) {
  std::map<long, Complex> pos;
  pos.emplace(k, Complex(ctx().real(amplitude), ctx().zero()));
  return TrigPoly::real_from_positive(pos, ctx().bits());
}

}  // namespace

TEST(TrigPoly, RejectsConstantTerm) {
  std::map<long, Complex> c;
  c.emplace(0, Complex(ctx().integer(1), ctx().zero()));
  EXPECT_THROW(TrigPoly(c, false, ctx().bits()), std::invalid_argument);
}

TEST(TrigPoly, ParsevalNorm) {
  const TrigPoly g = cosine(3);  // 2 cos(6 pi x)
  EXPECT_TRUE(near(g.l2_norm(), sqrt(ctx().integer(2)), ctx().eps() * 4L));
  EXPECT_TRUE(near(g.eval_real(ctx().zero()), ctx().integer(2), ctx().eps() * 4L));
}

TEST(L1, TwoCosine) {
  const TrigPoly g = cosine(1);
  const Real four_over_pi = ctx().integer(4) / ctx().pi();
  EXPECT_TRUE(near(l1_norm(g, ctx()), four_over_pi, decimal("1e-60", ctx())));
  const PigeonholeReport r = l1_pigeonhole(g, ctx());
  EXPECT_TRUE(near(r.min_value, ctx().integer(-2), decimal("1e-60", ctx())));
  EXPECT_TRUE(r.holds);
}

TEST(L1, PigeonholeOnRandomPolys) {
  tp_test::for_all(300, 61, [&](tp_test::Gen& g) {
    const TrigPoly f = random_real_poly(g.rng(), 10, ctx().bits());
    if (f.is_zero()) return;
    const PigeonholeReport r = l1_pigeonhole(f, ctx());
    EXPECT_TRUE(r.holds) << r.min_value.to_string(20) << " vs " << r.bound.to_string(20);
  });
}

TEST(Mps, ClosedForm) {
  const TrigPoly g = cosine(1);
  EXPECT_TRUE(near(mps_lower_bound(g), ctx().integer(3) / 400L, ctx().eps() * 4L));
  EXPECT_TRUE(near(elementary_lower_bound(g), ctx().integer(1), ctx().eps() * 4L));
}

TEST(Mps, BoundsBelowL1) {
  tp_test::for_all(200, 62, [&](tp_test::Gen& g) {
    const TrigPoly f = random_real_poly(g.rng(), 20, ctx().bits());
    if (f.is_zero()) return;
    const Real l1 = l1_norm(f, ctx());
    EXPECT_LE(mps_lower_bound(f), l1);
  });
}

TEST(FourierSmallness, EquispacedAndAdversarial) {
  const ThetaParams p(ctx().integer(1));
  const FourierSmallness e = fourier_smallness_bound(equispaced(4, ctx()), p, ctx());
  EXPECT_LE(e.lhs, ctx().eps() * 64L);
  EXPECT_TRUE(e.holds);
  EXPECT_TRUE(near(e.rhs, exp(-(ctx().pi() * 7L)) * 32000L, ctx().eps() * 64L));
  std::vector<Real> pts{ctx().zero(), decimal("0.1", ctx()), decimal("0.2", ctx()), decimal("0.9", ctx())};
  const FourierSmallness a = fourier_smallness_bound(Configuration::from_points(pts, ctx()), p, ctx());
  EXPECT_GT(a.lhs, 1L);
  EXPECT_FALSE(a.strong_holds);
}

TEST(Fejer, KernelValues) {
  for (long n : {1L, 2L, 5L, 8L}) {
    EXPECT_TRUE(near(fejer_kernel(ctx().zero(), n, ctx()), ctx().integer(n), ctx().eps() * 4L));
    for (long k = 1; k < n; ++k) EXPECT_LE(abs(fejer_kernel(ctx().ratio(k, n), n, ctx())), ctx().eps() * 16L);
  }
  EXPECT_TRUE(near(fejer_kernel(ctx().real(0.25), 2, ctx()), ctx().integer(1), ctx().eps() * 8L));
}

TEST(Fejer, ClosedFormMatchesSeries) {
  tp_test::for_all(100, 63, [&](tp_test::Gen& g) {
    const long n = g.integer(1, 20);
    const Real x = g.real(0.0, 1.0, ctx());
    EXPECT_TRUE(near(fejer_kernel(x, n, ctx()), fejer_kernel_series(x, n, ctx()), ctx().eps() * (64L * n)));
  });
}

TEST(Fejer, DoubleSumIdentity) {
  tp_test::for_all(100, 64, [&](tp_test::Gen& g) {
    const Configuration c = g.configuration(g.integer(2, 9), 0.0, ctx());
    EXPECT_TRUE(fejer_double_sum(c, ctx()).holds);
  });
}

TEST(GapRegularity, NearEquispacedCertified) {
  const long n = 5;
  tp_test::Gen g(instance_rng(65, 0));
  const std::vector<Real> eps = g.sum_zero(n, decimal("1e-9", ctx()), ctx());
  const Configuration c = perturbed_equispaced(eps, ctx());
  const Real epsilon = 1L / (ctx().integer(1000) * (n * n * n * n));
  const GapRegularity r = gap_regularity_certificate(c, epsilon, ctx());
  ASSERT_TRUE(std::holds_alternative<GapCertificate>(r));
  const auto& cert = std::get<GapCertificate>(r);
  EXPECT_TRUE(cert.deviation_holds);
  EXPECT_LE(cert.max_deviation, decimal("1e-8", ctx()) * n);
  EXPECT_TRUE(cert.fejer.holds);
}

TEST(GapRegularity, FarConfigurationNotApplicable) {
  std::vector<Real> pts{ctx().zero(), decimal("0.1", ctx()), decimal("0.2", ctx())};
  const Real epsilon = 1L / ctx().integer(81000);
  const GapRegularity r = gap_regularity_certificate(Configuration::from_points(pts, ctx()), epsilon, ctx());
  ASSERT_TRUE(std::holds_alternative<NotApplicable>(r));
  EXPECT_GT(std::get<NotApplicable>(r).coefficient, epsilon);
  EXPECT_THROW(gap_regularity_certificate(equispaced(3, ctx()), ctx().real(0.5), ctx()), std::invalid_argument);
}

TEST(FrequencySplit, EquispacedHasOnlyMultiples) {
  const ThetaParams p(ctx().integer(1));
  const auto c = equispaced(5, ctx());
  const FrequencySplit s(c, p, ctx());
  EXPECT_LE(s.g1().l2_norm(), ctx().eps() * 64L);
  EXPECT_LE(s.g2().l2_norm(), ctx().eps() * 64L);
  for (double xd : {0.0, 0.13, 0.5, 0.77}) {
    const Real x = ctx().real(xd);
    EXPECT_LE(abs(s.h(x)), ctx().eps() * 64L);
    EXPECT_TRUE(near(s.A(x), config_sum(c, p, x, ctx()), ctx().eps() * 64L));
  }
}

TEST(FrequencySplit, ReconstructionOnRandomConfigurations) {
  tp_test::for_all(30, 66, [&](tp_test::Gen& g) {
    const long n = g.integer(2, 9);
    const ThetaParams p(ctx().real(g.log_uniform(0.2, 5.0)));
    const Configuration c = g.configuration(n, 0.0, ctx());
    const FrequencySplit s(c, p, ctx());
    std::vector<Real> xs;
    for (int i = 0; i < 100; ++i) xs.push_back(g.real(0.0, 1.0, ctx()));
    EXPECT_TRUE(check_split(s, c, xs, ctx()).holds);
  });
}

TEST(FrequencySplit, MediumBandSmallNearEquispaced) {
  const long n = 5;
  const ThetaParams p(ctx().integer(1));
  tp_test::for_all(20, 67, [&](tp_test::Gen& g) {
    const Real size = ctx().real(g.log_uniform(1e-12, 1e-6));
    const Configuration c = perturbed_equispaced(g.sum_zero(n, size, ctx()), ctx());
    const FrequencySplit s(c, p, ctx());
    const Real bound = exp(-(ctx().pi() * ctx().real(6.25))) * 20L * pow(sqrt(ctx().integer(n)), 3) * size;
    // Sup norm of g2 is at most the sum of its coefficient magnitudes.
    Real sup = ctx().zero();
    for (const auto& [k, a] : s.g2().coefficients()) sup += a.abs();
    EXPECT_LE(sup, bound);
  });
}

TEST(Dft, PlancherelAndSymmetry) {
  tp_test::for_all(100, 68, [&](tp_test::Gen& g) {
    const long n = g.integer(2, 12);
    const Configuration c = perturbed_equispaced(g.sum_zero(n, ctx().real(g.log_uniform(1e-20, 1e-3)), ctx()), ctx());
    const PlancherelReport r = dft_plancherel_check(decompose(c, ctx()), ctx());
    EXPECT_TRUE(r.equality_holds);
    EXPECT_TRUE(r.symmetric);
    EXPECT_LE(abs(r.lhs - r.rhs), r.lhs * decimal("1e-60", ctx()));
  });
}

TEST(Midpoint, HandExample) {
  const MidpointReport r = midpoint_negativity(cosine(1), 3, ctx());
  EXPECT_TRUE(near(r.min_value, ctx().integer(-2), ctx().eps() * 8L));
  EXPECT_TRUE(near(r.bound, -sqrt(ctx().integer(2)) / 27L, ctx().eps() * 8L));
  EXPECT_EQ(r.argmin, 1);
  EXPECT_TRUE(r.holds);
}

TEST(Midpoint, DegreeTooHighRejected) {
  EXPECT_THROW(midpoint_negativity(cosine(2), 4, ctx()), std::invalid_argument);
}

TEST(Midpoint, RandomPolynomials) {
  tp_test::for_all(300, 69, [&](tp_test::Gen& g) {
    const long ns[] = {5, 9, 15};
    const long n = ns[g.integer(0, 2)];
    const TrigPoly f = random_real_poly(g.rng(), (n - 1) / 2, ctx().bits());
    if (f.is_zero()) return;
    EXPECT_TRUE(midpoint_negativity(f, n, ctx()).holds);
  });
}

TEST(Poincare, ClassicalEquality) {
  std::map<long, Complex> pos;
  pos.emplace(1, Complex(ctx().zero(), ctx().real(-0.5)));  // sin(2 pi x)
  const TrigPoly f = TrigPoly::real_from_positive(pos, ctx().bits());
  const PoincareReport r = modified_poincare_check(f, ctx().zero(), ctx().real(0.5), ctx().zero(), ctx());
  EXPECT_TRUE(near(r.lhs, ctx().real(0.25), decimal("1e-60", ctx())));
  EXPECT_TRUE(near(r.rhs, r.lhs, decimal("1e-60", ctx())));
  EXPECT_TRUE(r.holds);
  EXPECT_THROW(modified_poincare_check(cosine(1), ctx().zero(), ctx().real(0.25), ctx().zero(), ctx()),
               std::invalid_argument);
}

TEST(Poincare, RandomPolynomials) {
  tp_test::for_all(200, 70, [&](tp_test::Gen& g) {
    const TrigPoly f = random_real_poly(g.rng(), 8, ctx().bits());
    if (f.is_zero()) return;
    const Real a = ctx().zero(), b = ctx().real(0.25);
    const Real M = max(abs(f.eval_real(a)), abs(f.eval_real(b)));
    EXPECT_TRUE(modified_poincare_check(f, a, b, M, ctx()).holds);
  });
}

TEST(FinalEstimate, NinePointsTinyPerturbation) {
  const PrecisionContext wide(512);
  const ThetaParams p(wide.integer(1));
  const Real equi = polarization(equispaced(9, wide), p, wide);
  tp_test::for_all(5, 71, [&](tp_test::Gen& g) {
    const Configuration c = perturbed_equispaced(g.sum_zero(9, decimal("1e-30", wide), wide), wide);
    const FinalEstimate r = final_estimate_check(c, p, equi, wide);
    EXPECT_TRUE(r.decrease_holds);
    EXPECT_TRUE(r.g1_holds);
    EXPECT_LT(polarization(c, p, wide), equi);
  });
}

TEST(FinalEstimate, EquispacedIsEqualityRegime) {
  const FinalEstimate r = final_estimate_check(equispaced(6, ctx()), ThetaParams(ctx().integer(1)), ctx());
  EXPECT_TRUE(r.equality_regime);
}

TEST(LemmaSuites, SmallRunsPass) {
  for (const std::string lemma : {"basic", "mps", "fejer", "midpoint", "poincare", "dft"}) {
    const LemmaReport r = run_lemma_suite(lemma, 40, 7, ctx());
    EXPECT_EQ(r.failures, 0) << lemma;
    EXPECT_EQ(r.trials, 40);
    EXPECT_GE(r.worst_margin, 0L) << lemma;
  }
  EXPECT_THROW(run_lemma_suite("nope", 1, 0, ctx()), std::invalid_argument);
}

TEST(LemmaSuites, IndependentOfThreadCount) {
  const LemmaReport a = run_lemma_suite("midpoint", 64, 3, ctx(), 1);
  const LemmaReport b = run_lemma_suite("midpoint", 64, 3, ctx(), 4);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.notes, b.notes);
}
