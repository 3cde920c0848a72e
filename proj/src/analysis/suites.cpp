#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "thetapolar/analysis.hpp"
#include "thetapolar/optimizer.hpp"
#include "thetapolar/parallel.hpp"

namespace thetapolar {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

long pick(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct Trial {
  bool failed = false;
  bool threshold = false;
  Real margin;
  std::string note;
};

// Sum-zero vector with entries uniform in [-1, 1] before centering, scaled to
// the requested l2 norm.
std::vector<Real> sum_zero(std::mt19937_64& rng, long n, const Real& norm, Bits bits) {
  std::vector<Real> e;
  Real mean(bits);
  for (long j = 0; j < n; ++j) {
    e.emplace_back(2 * uniform01(rng) - 1, bits);
    mean += e.back();
  }
  mean /= n;
  Real sq(bits);
  for (auto& v : e) {
    v -= mean;
    sq += square(v);
  }
  const Real scale = norm / sqrt(sq);
  for (auto& v : e) v *= scale;
  return e;
}

Trial trial_basic(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const TrigPoly g = random_real_poly(rng, 10, ctx.bits());
  const PigeonholeReport r = l1_pigeonhole(g, ctx);
  return Trial{!r.holds, false, r.bound - r.min_value, {}};
}

Trial trial_mps(std::mt19937_64& rng, const PrecisionContext& ctx) {
  // Ten distinct positive frequencies in 1..20 and their mirrors: 20 terms.
  std::vector<long> freq(20);
  for (long i = 0; i < 20; ++i) freq[static_cast<size_t>(i)] = i + 1;
  for (size_t i = freq.size() - 1; i > 0; --i) std::swap(freq[i], freq[rng() % (i + 1)]);
  std::map<long, Complex> pos;
  for (size_t i = 0; i < 10; ++i) {
    const double re = 2 * uniform01(rng) - 1;
    const double im = 2 * uniform01(rng) - 1;
    pos.emplace(freq[i], Complex(Real(re, ctx.bits()), Real(im, ctx.bits())));
  }
  const TrigPoly g = TrigPoly::real_from_positive(pos, ctx.bits());
  const Real l1 = l1_norm(g, ctx);
  const Real lower = max(mps_lower_bound(g), elementary_lower_bound(g));
  return Trial{l1 < lower, false, l1 - lower, {}};
}

Trial trial_fourier_small(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const long n = pick(rng, 2, 4);
  const ThetaParams p(ctx.integer(1));
  MultiStartOptions opt;
  opt.starts = 4;
  opt.seed = rng();
  const MultiStartResult ms = multi_start(n, p, Objective::max_min, ctx, opt);
  const FourierSmallness r = fourier_smallness_bound(ms.best.best, p, ctx);
  return Trial{!r.holds, false, r.rhs - r.lhs, {}};
}

Trial trial_fejer(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const long n = pick(rng, 2, 8);
  const Configuration c = random_configuration(n, rng, 0.0, ctx);
  const FejerIdentity r = fejer_double_sum(c, ctx);
  const Real x = ctx.real(uniform01(rng));
  const Real closed = fejer_kernel(x, n, ctx);
  const Real series = fejer_kernel_series(x, n, ctx);
  const bool formulas = abs(closed - series) <= ctx.eps() * 8L * n && closed >= 0L;
  return Trial{!r.holds || !formulas, false, r.tolerance - abs(r.lhs - r.rhs), {}};
}

Trial trial_midpoint(std::mt19937_64& rng, long index, const PrecisionContext& ctx) {
  static constexpr long kSizes[] = {5, 9, 15};
  const long n = kSizes[index % 3];
  const TrigPoly f = random_real_poly(rng, (n - 1) / 2, ctx.bits());
  const MidpointReport r = midpoint_negativity(f, n, ctx);
  return Trial{!r.holds, false, r.bound - r.min_value, {}};
}

Trial trial_poincare(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const TrigPoly f = random_real_poly(rng, 10, ctx.bits());
  const Real a = ctx.zero();
  const Real b = ctx.ratio(1, 4);
  const Real M = max(abs(f.eval_real(a)), abs(f.eval_real(b)));
  const PoincareReport r = modified_poincare_check(f, a, b, M, ctx);
  return Trial{!r.holds, false, r.rhs - r.lhs, {}};
}

Trial trial_dft(std::mt19937_64& rng, const PrecisionContext& ctx) {
  const long n = pick(rng, 2, 16);
  PerturbationDecomposition d;
  d.shift = ctx.zero();
  d.eps = sum_zero(rng, n, ctx.integer(1), ctx.bits());
  for (long j = 0; j < n; ++j) d.permutation.push_back(static_cast<size_t>(j));
  d.residual_norm = ctx.integer(1);
  const PlancherelReport r = dft_plancherel_check(d, ctx);
  const bool ok = r.equality_holds && r.large_coefficient && r.symmetric;
  return Trial{!ok, false, r.tolerance - abs(r.lhs - r.rhs), {}};
}

Trial trial_final(std::mt19937_64& rng, long index, const PrecisionContext& ctx,
                  const std::map<long, Real>& equi_polarization) {
  const long n = 5 + index % 5;
  const Real norm = ctx.real((index / 5) % 2 == 0 ? 1e-30 : 1e-20);
  const ThetaParams p(ctx.integer(1));
  const Configuration c = perturbed_equispaced(sum_zero(rng, n, norm, ctx.bits()), ctx);
  const Real& pol_equi = equi_polarization.at(n);
  const Real pol = polarization(c, p, ctx);
  const FinalEstimate r = final_estimate_check(c, p, pol_equi, ctx);
  Trial t;
  t.margin = r.decrease_bound - r.z;
  const bool decreased = pol < pol_equi;
  if (!decreased) {
    t.failed = true;
    t.note = "n=" + std::to_string(n) + ": perturbation did not decrease the minimum";
  }
  if (r.below_threshold) {
    const std::string what = "n=" + std::to_string(n) + ": final estimate " +
                             (r.decrease_holds ? "" : "decrease ") + (r.g1_holds ? "" : "g1 ") + "failed";
    if (n >= 8) {
      t.failed = true;
    } else {
      t.threshold = true;
    }
    t.note = t.note.empty() ? what : t.note + "; " + what;
  }
  return t;
}

}  // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

const std::vector<std::string>& lemma_names() {
  static const std::vector<std::string> names = {"basic", "mps",      "fourier-small", "fejer",
                                                 "midpoint", "poincare", "dft",           "final"};
  return names;
}

LemmaReport run_lemma_suite(const std::string& lemma, long trials, std::uint64_t seed, const PrecisionContext& ctx,
                            unsigned threads) {
  const auto& names = lemma_names();
  if (std::find(names.begin(), names.end(), lemma) == names.end()) {
    throw std::invalid_argument("unknown lemma '" + lemma + "'");
  }
  if (trials < 1) throw std::invalid_argument("trials must be positive");

  const PrecisionContext work = lemma == "final" ? ctx.widened(512) : ctx;
  std::map<long, Real> equi;
  if (lemma == "final") {
    const ThetaParams p(work.integer(1));
    for (long n = 5; n <= 9; ++n) equi.emplace(n, polarization(equispaced(n, work), p, work));
  }

  std::vector<Trial> results(static_cast<size_t>(trials));
  parallel_for(results.size(), threads, [&](size_t i) {
    std::mt19937_64 rng = instance_rng(seed, i);
    const long idx = static_cast<long>(i);
    if (lemma == "basic") results[i] = trial_basic(rng, work);
    else if (lemma == "mps") results[i] = trial_mps(rng, work);
    else if (lemma == "fourier-small") results[i] = trial_fourier_small(rng, work);
    else if (lemma == "fejer") results[i] = trial_fejer(rng, work);
    else if (lemma == "midpoint") results[i] = trial_midpoint(rng, idx, work);
    else if (lemma == "poincare") results[i] = trial_poincare(rng, work);
    else if (lemma == "dft") results[i] = trial_dft(rng, work);
    else results[i] = trial_final(rng, idx, work, equi);
  });

  LemmaReport report;
  report.lemma = lemma;
  report.trials = trials;
  for (size_t i = 0; i < results.size(); ++i) {
    const Trial& t = results[i];
    if (t.failed) ++report.failures;
    if (t.threshold) ++report.threshold_findings;
    if (i == 0 || t.margin < report.worst_margin) report.worst_margin = t.margin;
    if (!t.note.empty()) report.notes.push_back("trial " + std::to_string(i) + ": " + t.note);
  }
  return report;
}

}  // namespace thetapolar
