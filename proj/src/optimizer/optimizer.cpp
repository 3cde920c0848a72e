#include "thetapolar/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thetapolar/analysis.hpp"
#include "thetapolar/parallel.hpp"
#include "thetapolar/simd/trig_scan.hpp"
#include "thetapolar/minimax_qp.hpp"

namespace thetapolar {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

// e^{-pi alpha k^2} in double for k = 0.. until the weights drop below 1e-20.
std::vector<double> double_weights(const Real& alpha) {
  const double a = alpha.to_double();
  std::vector<double> w{1.0};
  for (long k = 1;; ++k) {
    const double v = std::exp(-M_PI * a * static_cast<double>(k * k));
    if (v < 1e-20 && k > 1) break;
    w.push_back(v);
  }
  return w;
}

// theta'(t) from double weights.
double theta_slope(const std::vector<double>& w, double t) {
  double s = 0;
  for (size_t k = 1; k < w.size(); ++k) s -= 2.0 * kTwoPi * static_cast<double>(k) * w[k] * std::sin(kTwoPi * static_cast<double>(k) * t);
  return s;
}

// theta''(t) from double weights.
double theta_curvature(const std::vector<double>& w, double t) {
  double s = 0;
  for (size_t k = 1; k < w.size(); ++k) {
    const double f = kTwoPi * static_cast<double>(k);
    s -= 2.0 * f * f * w[k] * std::cos(f * t);
  }
  return s;
}

Real infinity(Bits bits) { return Real(std::numeric_limits<double>::infinity(), bits); }

Real distance_to_equispaced(const Configuration& c, const PrecisionContext& ctx) {
  try {
    return decompose(c, ctx).residual_norm;
  } catch (const GapTooSmall&) {
    return infinity(ctx.bits());
  }
}

// Objective value as a quantity to maximize: min f, or -max f.
struct State {
  std::vector<Real> x;  // x[0] is the fixed point
  Configuration c = Configuration::from_sorted_unchecked({});
  TrigSeries series;
  ExtremaPair extrema;
  Real phi;
};

State evaluate(std::vector<Real> x, const ThetaParams& p, int sigma, const PrecisionContext& ctx) {
  // Points may pass through each other during the ascent, so coincident
  // points are allowed here.
  std::vector<Real> reduced;
  reduced.reserve(x.size());
  for (const auto& v : x) reduced.push_back(frac(v));
  std::sort(reduced.begin(), reduced.end(), [](const Real& a, const Real& b) { return a < b; });
  Configuration c = Configuration::from_sorted_unchecked(std::move(reduced));
  TrigSeries s = config_series(c, p, ctx);
  ExtremaPair ex = certify_series_extrema(s, extremum_grid(c.n(), s.degree()));
  Real phi = sigma == 1 ? ex.min.value : -ex.max.value;
  return State{std::move(x), std::move(c), std::move(s), std::move(ex), std::move(phi)};
}

bool lexicographically_less(const Configuration& a, const Configuration& b) {
  return std::lexicographical_compare(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                                      [](const Real& u, const Real& v) { return u < v; });
}

// True when a is the better result.
bool better(const OptimizationResult& a, const OptimizationResult& b) {
  const int s = a.objective == Objective::max_min ? 1 : -1;
  const int cmp = (a.value - b.value).sign() * s;
  if (cmp != 0) return cmp > 0;
  return lexicographically_less(a.best, b.best);
}

}  // namespace

const char* objective_name(Objective o) { return o == Objective::max_min ? "max-min" : "min-max"; }

std::optional<Objective> parse_objective(std::string_view text) {
  if (text == "max-min" || text == "max_min") return Objective::max_min;
  if (text == "min-max" || text == "min_max") return Objective::min_max;
  return std::nullopt;
}

Real objective_value(const Configuration& c, const ThetaParams& p, Objective objective, const PrecisionContext& ctx) {
  const ExtremaPair ex = certify_extrema(c, p, ctx);
  return objective == Objective::max_min ? ex.min.value : ex.max.value;
}

OptimizationResult local_ascent(const Configuration& start, const ThetaParams& p, Objective objective,
                                const PrecisionContext& ctx, const AscentOptions& options) {
  const long n = static_cast<long>(start.n());
  const int sigma = objective == Objective::max_min ? 1 : -1;
  const Bits bits = ctx.bits();
  OptimizationResult result;
  result.objective = objective;

  State cur = evaluate(start.points(), p, sigma, ctx);
  result.trace.push_back(TracePoint{0, cur.phi * static_cast<long>(sigma)});
  if (n >= 2) {
    const std::vector<double> w = double_weights(p.alpha);
    const double accept = (ctx.eps() * (8 * n)).to_double();
    const double step_tol =
        options.step_tol > 0 ? options.step_tol : std::ldexp(1.0, -static_cast<int>(bits) / 3);
    const int grid = options.model_grid > 0 ? options.model_grid : 16 * static_cast<int>(std::max(n, 4L));
    const double rmax = options.max_radius / static_cast<double>(n);
    double radius = options.initial_radius / static_cast<double>(n);
    result.converged = false;

    for (long iter = 1; iter <= options.max_iter; ++iter) {
      result.iterations = iter;
      // Model points: local extrema of the relevant kind plus a uniform grid.
      std::vector<Real> ys;
      const auto& cands = sigma == 1 ? cur.extrema.min.candidates : cur.extrema.max.candidates;
      for (const auto& e : cands) ys.push_back(e.location);
      // Grid rows right next to a tracked extremum are covered by its row,
      // which follows the extremum; their fixed-y models would block steps
      // that move it.
      std::vector<double> near;
      for (const auto& e : cands) near.push_back(e.location.to_double());
      for (int i = 0; i < grid; ++i) {
        const double y = static_cast<double>(i) / grid;
        bool covered = false;
        for (double c : near) {
          const double d = std::fabs(y - c);
          covered = covered || std::min(d, 1.0 - d) < 1.0 / grid;
        }
        if (!covered) ys.push_back(ctx.ratio(i, grid));
      }

      std::vector<double> a(ys.size());
      std::vector<std::vector<double>> g(ys.size(), std::vector<double>(static_cast<size_t>(n - 1)));
      std::vector<double> xd(static_cast<size_t>(n));
      for (long j = 0; j < n; ++j) xd[static_cast<size_t>(j)] = cur.x[static_cast<size_t>(j)].to_double();
      double cap = std::numeric_limits<double>::infinity();
      std::vector<double> l1(ys.size());
      for (size_t s = 0; s < ys.size(); ++s) {
        const Real v = cur.series.eval(ys[s], 0) * static_cast<long>(sigma) - cur.phi;
        a[s] = std::max(0.0, v.to_double()) / radius;
        const double y = ys[s].to_double();
        double norm = 0;
        for (long j = 1; j < n; ++j) {
          const double gj = -sigma * theta_slope(w, y - xd[static_cast<size_t>(j)]);
          g[s][static_cast<size_t>(j - 1)] = gj;
          norm += std::fabs(gj);
        }
        l1[s] = norm;
        cap = std::min(cap, a[s] + norm);
      }
      MinimaxQp qp;
      std::vector<double> rows_y;
      std::vector<const Real*> rows_yr;
      std::vector<bool> rows_extremum;
      for (size_t s = 0; s < ys.size(); ++s) {
        if (a[s] > cap + l1[s]) continue;  // can never bind
        qp.g.push_back(g[s]);
        qp.a.push_back(a[s]);
        rows_y.push_back(ys[s].to_double());
        rows_yr.push_back(&ys[s]);
        rows_extremum.push_back(s < cands.size());
      }
      // The multipliers of one solve weight the curvature used by the next.
      // Rows at local extrema follow the extremum as x moves, which adds the
      // rank-one term b b' / f_yy to the curvature of that row.
      const size_t m = static_cast<size_t>(n - 1);
      MinimaxStep sub = solve_minimax_qp(qp);
      for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> b(m);
        qp.factors.clear();
        for (size_t s = 0; s < rows_y.size(); ++s) {
          const double lam = sub.weights[s];
          if (!(lam > 0)) continue;
          double fyy = sigma * theta_curvature(w, rows_y[s] - xd[0]);
          for (size_t j = 0; j < m; ++j) {
            b[j] = -sigma * theta_curvature(w, rows_y[s] - xd[j + 1]);
            fyy -= b[j];
          }
          if (!rows_extremum[s] || !(fyy > 0)) continue;
          const double scale = std::sqrt(lam * radius / fyy);
          std::vector<double> f(m);
          for (size_t j = 0; j < m; ++j) f[j] = b[j] * scale;
          qp.factors.push_back(std::move(f));
        }
        qp.diagonal.clear();
        sub = solve_minimax_qp(qp);
      }
      const double predicted = sub.model * radius;
      if (predicted <= accept) {
        result.converged = true;
        break;
      }
      double step = 0, umax = 0;
      auto try_step = [&](const std::vector<double>& u) {
        std::vector<Real> trial = cur.x;
        step = 0;
        umax = 0;
        for (size_t j = 0; j < m; ++j) {
          umax = std::max(umax, std::fabs(u[j]));
          step = std::max(step, std::fabs(u[j] * radius));
          trial[j + 1] += Real(u[j] * radius, bits);
        }
        return evaluate(std::move(trial), p, sigma, ctx);
      };
      State next = try_step(sub.u);
      double actual = (next.phi - cur.phi).to_double();
      double rho = actual / predicted;
      if (!(actual > 0 && rho >= 0.1)) {
        // Second-order correction: shift every row by the curvature error it
        // showed at the trial point and solve once more.
        MinimaxQp corrected = qp;
        for (size_t s = 0; s < qp.a.size(); ++s) {
          const double value = (next.series.eval(*rows_yr[s], 0) * static_cast<long>(sigma) - cur.phi).to_double() / radius;
          double linear = qp.a[s];
          for (size_t j = 0; j < m; ++j) linear += qp.g[s][j] * sub.u[j];
          corrected.a[s] = qp.a[s] + (value - linear);
        }
        const MinimaxStep fix = solve_minimax_qp(corrected);
        State again = try_step(fix.u);
        const double actual2 = (again.phi - cur.phi).to_double();
        if (actual2 > actual) {
          next = std::move(again);
          actual = actual2;
          rho = actual / predicted;
        }
      }
      if (actual > 0 && rho >= 0.1) {
        cur = std::move(next);
        ++result.accepted_steps;
        result.trace.push_back(TracePoint{iter, cur.phi * static_cast<long>(sigma)});
        radius = (rho > 0.75 && umax > 0.99) ? 2 * radius : 4 * step;
        radius = std::min(radius, rmax);
      } else {
        radius *= 0.25;
      }
      if (radius < step_tol) {
        result.converged = true;
        break;
      }
    }
  }
  result.best = cur.c;
  result.value = cur.phi * static_cast<long>(sigma);
  result.distance_to_equispaced = distance_to_equispaced(cur.c, ctx);
  return result;
}

MultiStartResult multi_start(long n, const ThetaParams& p, Objective objective, const PrecisionContext& ctx,
                             const MultiStartOptions& options) {
  if (n < 1) throw std::invalid_argument("multi_start: n must be >= 1");
  if (options.starts < 1) throw std::invalid_argument("multi_start: need at least one start");
  MultiStartResult out;
  out.runs.resize(static_cast<size_t>(options.starts));
  parallel_for(out.runs.size(), options.threads, [&](size_t i) {
    std::mt19937_64 rng = instance_rng(options.seed, i);
    const Configuration start = random_configuration(n, rng, 1.0 / (4.0 * static_cast<double>(n)), ctx);
    out.runs[i] = local_ascent(start, p, objective, ctx, options.ascent);
  });
  size_t best = 0;
  for (size_t i = 1; i < out.runs.size(); ++i) {
    if (better(out.runs[i], out.runs[best])) best = i;
  }
  out.best = out.runs[best];
  return out;
}

OptimizationResult brute_force_oracle(long n, const ThetaParams& p, double grid_step, Objective objective,
                                      const PrecisionContext& ctx, unsigned threads) {
  if (n < 1 || n > 4) throw std::invalid_argument("brute_force_oracle: n must be in 1..4");
  if (!(grid_step >= 1e-4) || !(grid_step < 1.0)) throw std::invalid_argument("brute_force_oracle: grid step must be in [1e-4, 1)");
  const int sigma = objective == Objective::max_min ? 1 : -1;
  // Grid points k h for 1 <= k <= L with k h < 1; exact k/N when 1/h is an integer.
  const double inv = 1.0 / grid_step;
  const long N = std::lround(inv);
  const bool exact = std::fabs(inv - static_cast<double>(N)) < 1e-9 * inv;
  const long L = exact ? N - 1 : static_cast<long>(std::ceil(inv)) - 1;
  if (L < n - 1) throw std::invalid_argument("brute_force_oracle: grid step too coarse for n points");
  auto grid_point = [&](long k) { return exact ? static_cast<double>(k) / static_cast<double>(N) : k * grid_step; };
  auto grid_real = [&](long k) { return exact ? ctx.ratio(k, N) : Real(grid_step, ctx.bits()) * k; };

  const std::vector<double> w = double_weights(p.alpha);
  const size_t K = w.size() - 1;
  const size_t M = std::max<size_t>(1024, 64 * K);
  const simd::Isa isa = simd::active_isa();

  struct Candidate {
    double value;  // objective to maximize: min f or -max f
    std::vector<long> idx;
  };
  auto worse = [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.idx > b.idx;
  };
  constexpr size_t kKeep = 32;
  const long outer = n >= 2 ? L : 1;
  std::vector<std::vector<Candidate>> top(static_cast<size_t>(outer));

  parallel_for(static_cast<size_t>(outer), threads, [&](size_t o) {
    std::vector<double> re(K), im(K), val(M), d1(M), d2(M);
    std::vector<Candidate>& keep = top[o];
    std::vector<long> idx(static_cast<size_t>(std::max(n - 1, 0L)));
    auto score = [&]() {
      std::fill(re.begin(), re.end(), 0.0);
      std::fill(im.begin(), im.end(), 0.0);
      std::vector<double> xs{0.0};
      for (long k : idx) xs.push_back(grid_point(k));
      for (size_t k = 1; k <= K; ++k) {
        double cr = 0, ci = 0;
        for (double x : xs) {
          const double ph = kTwoPi * static_cast<double>(k) * x;
          cr += std::cos(ph);
          ci -= std::sin(ph);
        }
        re[k - 1] = w[k] * cr;
        im[k - 1] = w[k] * ci;
      }
      simd::scan_grid(re, im, M, val.data(), d1.data(), d2.data(), isa);
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < M; ++i) {
        const double v = sigma * val[i];
        const double vl = sigma * val[(i + M - 1) % M], vr = sigma * val[(i + 1) % M];
        double refined = v;
        const double c2 = sigma * d2[i];
        if (v <= vl && v <= vr && c2 > 0) refined = v - d1[i] * d1[i] / (2 * c2);
        best = std::min(best, refined);
      }
      Candidate cand{best, idx};
      if (keep.size() < kKeep) {
        keep.push_back(std::move(cand));
        std::push_heap(keep.begin(), keep.end(), [&](const Candidate& a, const Candidate& b) { return worse(b, a); });
      } else if (worse(keep.front(), cand)) {
        std::pop_heap(keep.begin(), keep.end(), [&](const Candidate& a, const Candidate& b) { return worse(b, a); });
        keep.back() = std::move(cand);
        std::push_heap(keep.begin(), keep.end(), [&](const Candidate& a, const Candidate& b) { return worse(b, a); });
      }
    };
    if (n == 1) {
      score();
      return;
    }
    idx[0] = static_cast<long>(o) + 1;
    if (n == 2) {
      score();
    } else {
      for (idx[1] = idx[0] + 1; idx[1] <= L; ++idx[1]) {
        if (n == 3) {
          score();
        } else {
          for (idx[2] = idx[1] + 1; idx[2] <= L; ++idx[2]) score();
        }
      }
    }
  });

  std::vector<Candidate> all;
  for (auto& t : top) all.insert(all.end(), t.begin(), t.end());
  std::sort(all.begin(), all.end(), [&](const Candidate& a, const Candidate& b) { return worse(b, a); });
  if (all.size() > kKeep) all.resize(kKeep);

  std::vector<OptimizationResult> exact_runs(all.size());
  parallel_for(all.size(), threads, [&](size_t i) {
    std::vector<Real> pts{ctx.zero()};
    for (long k : all[i].idx) pts.push_back(grid_real(k));
    OptimizationResult r;
    r.objective = objective;
    r.best = Configuration::from_points(std::move(pts), ctx);
    r.value = objective_value(r.best, p, objective, ctx);
    exact_runs[i] = std::move(r);
  });
  size_t best = 0;
  for (size_t i = 1; i < exact_runs.size(); ++i) {
    if (better(exact_runs[i], exact_runs[best])) best = i;
  }
  OptimizationResult out = std::move(exact_runs[best]);
  out.distance_to_equispaced = distance_to_equispaced(out.best, ctx);
  out.trace.push_back(TracePoint{0, out.value});
  return out;
}

SweepCurve one_point_sweep(long n, const ThetaParams& p, std::size_t m, const PrecisionContext& ctx, unsigned threads) {
  if (n < 2) throw std::invalid_argument("one_point_sweep: n must be >= 2");
  if (m < 1) throw std::invalid_argument("one_point_sweep: need at least one sample");
  SweepCurve curve;
  curve.samples.resize(m);
  parallel_for(m, threads, [&](size_t i) {
    Real x1 = ctx.ratio(static_cast<long>(i), static_cast<long>(m));
    std::vector<Real> pts;
    for (long j = 1; j < n; ++j) pts.push_back(ctx.ratio(j, n));
    pts.push_back(x1);
    std::sort(pts.begin(), pts.end(), [](const Real& a, const Real& b) { return a < b; });
    const Configuration c = Configuration::from_sorted_unchecked(std::move(pts));
    curve.samples[i] = {std::move(x1), polarization(c, p, ctx)};
  });
  for (size_t i = 1; i < m; ++i) {
    if (curve.samples[i].second > curve.samples[curve.peak_index].second) curve.peak_index = i;
  }
  curve.peak_at_zero = curve.peak_index == 0;
  return curve;
}

}  // namespace thetapolar
