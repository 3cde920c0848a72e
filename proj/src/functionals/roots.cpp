#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thetapolar/series.hpp"
#include "thetapolar/simd/trig_scan.hpp"

namespace thetapolar {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;
constexpr double kRel = 0x1.0p-52;

// Scaled samples of F = s^(d) and G = s^(d+1) at one point, with error bounds.
struct Sample {
  double f = 0, fe = 0, g = 0, ge = 0;
  int fsign() const { return std::fabs(f) > fe ? (f > 0 ? 1 : -1) : 0; }
  int gsign() const { return std::fabs(g) > ge ? (g > 0 ? 1 : -1) : 0; }
};

enum class CellKind { root_free, monotone_no_root, monotone_bracket, monotone_endpoint, split };

// A grid or subdivision point where F vanishes within its error bound. The
// monotone cells on either side supply slope bounds and their reach (grid units).
struct PointRoot {
  Real x;
  double half_width;
  double units;
  double slope_left = 0, slope_right = 0;
  double reach_left = 0, reach_right = 0;
};

class RootFinder {
 public:
  RootFinder(const TrigSeries& s, int order, const RootOptions& opt) : s_(s), d_(order), opt_(opt), bits_(s.bits()) {}

  RootScan run();

 private:
  Sample sample_mp(const Real& x) const;
  CellKind classify(const Sample& a, const Sample& b, double h, double& slope) const;
  void process(const Real& a, const Real& b, const Sample& sa, const Sample& sb, int depth, double lo, double hi);
  void note_endpoint_slope(const Real& x, double slope, bool cell_on_right, double reach);
  void refine_bracket(const Real& a, const Real& b, const Sample& sa, const Sample& sb, double slope, double lo,
                      double hi, bool certified);
  void refine_point(const PointRoot& p);
  void add_point_root(const Real& x, double half_width, double units);

  const TrigSeries& s_;
  int d_;
  RootOptions opt_;
  Bits bits_;
  Real unit_f_, unit_g_;
  double mf1_ = 0, mg1_ = 0;
  double fe_mp_ = 0, ge_mp_ = 0;
  std::size_t m_ = 0;
  std::size_t subdivisions_ = 0;
  std::vector<PointRoot> points_;
  RootScan scan_;
};

Sample RootFinder::sample_mp(const Real& x) const {
  Real out[4];
  s_.eval_orders(x, d_ + 1, out);
  Sample r;
  r.f = (out[d_] / unit_f_).to_double();
  r.g = (out[d_ + 1] / unit_g_).to_double();
  r.fe = fe_mp_ + std::fabs(r.f) * kRel;
  r.ge = ge_mp_ + std::fabs(r.g) * kRel;
  return r;
}

CellKind RootFinder::classify(const Sample& a, const Sample& b, double h, double& slope) const {
  const int fa = a.fsign(), fb = b.fsign();
  if (fa != 0 && fa == fb) {
    const double lb = (std::fabs(a.f) - a.fe + std::fabs(b.f) - b.fe - kTwoPi * mf1_ * h) / 2;
    if (lb > 0) return CellKind::root_free;
  }
  const int ga = a.gsign(), gb = b.gsign();
  if (ga != 0 && ga == gb) {
    const double lb = (std::fabs(a.g) - a.ge + std::fabs(b.g) - b.ge - kTwoPi * mg1_ * h) / 2;
    if (lb > 0) {
      slope = lb;
      if (fa * fb < 0) return CellKind::monotone_bracket;
      if (fa == 0 || fb == 0) return CellKind::monotone_endpoint;
      return CellKind::monotone_no_root;
    }
  }
  return CellKind::split;
}

void RootFinder::note_endpoint_slope(const Real& x, double slope, bool cell_on_right, double reach) {
  for (auto& p : points_) {
    if (p.x != x) continue;
    if (cell_on_right) {
      p.slope_right = slope;
      p.reach_right = reach;
    } else {
      p.slope_left = slope;
      p.reach_left = reach;
    }
  }
}

void RootFinder::add_point_root(const Real& x, double half_width, double units) {
  for (const auto& p : points_) {
    if (p.x == x) return;
  }
  PointRoot p{x, half_width, units};
  points_.push_back(std::move(p));
}

void RootFinder::process(const Real& a, const Real& b, const Sample& sa, const Sample& sb, int depth, double lo,
                         double hi) {
  const double h = std::ldexp(1.0, -depth) / static_cast<double>(m_);
  double slope = 0;
  switch (classify(sa, sb, h, slope)) {
    case CellKind::root_free:
    case CellKind::monotone_no_root:
      return;
    case CellKind::monotone_endpoint:
      if (sa.fsign() == 0) note_endpoint_slope(a, slope, true, hi - lo);
      if (sb.fsign() == 0) note_endpoint_slope(b, slope, false, hi - lo);
      return;
    case CellKind::monotone_bracket:
      refine_bracket(a, b, sa, sb, slope, lo, hi, true);
      return;
    case CellKind::split:
      break;
  }
  if (depth >= opt_.max_depth || subdivisions_ >= opt_.max_subdivisions) {
    scan_.unresolved.emplace_back(a, b);
    if (sa.fsign() * sb.fsign() < 0) refine_bracket(a, b, sa, sb, 0.0, lo, hi, false);
    return;
  }
  ++subdivisions_;
  Real mid = ldexp(a + b, -1);
  const Sample sm = sample_mp(mid);
  const double mid_units = (lo + hi) / 2;
  if (sm.fsign() == 0) add_point_root(mid, h / 2, mid_units);
  process(a, mid, sa, sm, depth + 1, lo, mid_units);
  process(mid, b, sm, sb, depth + 1, mid_units, hi);
}

void RootFinder::refine_bracket(const Real& a, const Real& b, const Sample& sa, const Sample& sb, double slope,
                                double lo, double hi, bool certified) {
  const int sign_a = sa.fsign();
  Real left = a, right = b;
  double t = std::fabs(sa.f) / (std::fabs(sa.f) + std::fabs(sb.f));
  if (!(t > 0.0 && t < 1.0)) t = 0.5;
  Real x = a + (b - a) * t;
  const Real& err = s_.error_bound(d_);
  const Real tiny = Real::pow2(-static_cast<long>(bits_) + 2, bits_);
  Real out[4];
  for (int it = 0; it < opt_.max_newton; ++it) {
    s_.eval_orders(x, d_ + 1, out);
    const Real& F = out[d_];
    const Real& G = out[d_ + 1];
    if (abs(F) <= err) break;
    if (F.sign() == sign_a) {
      left = x;
    } else {
      right = x;
    }
    Real next(bits_);
    bool newton_ok = !G.is_zero();
    if (newton_ok) {
      next = x - F / G;
      newton_ok = next > left && next < right;
    }
    if (!newton_ok) next = ldexp(left + right, -1);
    const Real step = abs(next - x);
    x = std::move(next);
    if (step <= tiny) break;
  }
  s_.eval_orders(x, d_ + 1, out);
  Root r;
  r.direction = out[d_ + 1].sign();
  r.certified = certified;
  r.cell_lo = lo;
  r.cell_hi = hi;
  const Real width = b - a;
  if (slope > 0) {
    r.slope_bound = unit_g_ * slope;
    r.radius = min((abs(out[d_]) + err) / r.slope_bound, width);
  } else {
    r.slope_bound = Real(bits_);
    r.radius = width;
  }
  r.x = frac(x);
  scan_.roots.push_back(std::move(r));
}

void RootFinder::refine_point(const PointRoot& p) {
  const Real& err = s_.error_bound(d_);
  const Real h = Real(p.half_width, bits_);
  const Real lo = p.x - h, hi = p.x + h;
  Real x = p.x;
  Real out[4];
  for (int it = 0; it < 64; ++it) {
    s_.eval_orders(x, d_ + 1, out);
    if (abs(out[d_]) <= err || out[d_ + 1].is_zero()) break;
    Real next = x - out[d_] / out[d_ + 1];
    if (next < lo) next = lo;
    if (next > hi) next = hi;
    if (next == x) break;
    x = std::move(next);
  }
  s_.eval_orders(x, d_ + 1, out);
  Root r;
  r.direction = out[d_ + 1].sign();
  r.cell_lo = p.units - p.reach_left;
  r.cell_hi = p.units + p.reach_right;
  if (p.slope_left > 0 && p.slope_right > 0) {
    r.slope_bound = unit_g_ * std::min(p.slope_left, p.slope_right);
    r.radius = min((abs(out[d_]) + err) / r.slope_bound, h * 2L);
    r.certified = true;
  } else {
    r.slope_bound = Real(bits_);
    r.radius = h * 2L;
    r.certified = false;
  }
  r.x = frac(x);
  scan_.roots.push_back(std::move(r));
}

RootScan RootFinder::run() {
  if (d_ < 0 || d_ > 1) throw std::invalid_argument("find_roots: order must be 0 or 1");
  const std::size_t K = static_cast<std::size_t>(s_.degree());
  m_ = std::max(opt_.grid, opt_.min_grid);
  m_ = std::max<std::size_t>(8, (m_ + 7) / 8 * 8);
  scan_.grid = m_;
  scan_.scale = s_.scale();

  if (K == 0 || s_.scale().is_zero()) {
    scan_.constant = true;
    scan_.grid_value.assign(m_, 0.0);
    return std::move(scan_);
  }

  const Real& scale = s_.scale();
  const Real two_pi = Real::pi(bits_) * 2L;
  unit_f_ = scale.with_precision(bits_) * pow(two_pi, d_);
  unit_g_ = unit_f_ * two_pi;

  std::vector<double> re(K), im(K);
  for (std::size_t i = 0; i < K; ++i) {
    re[i] = (s_.coefficients()[i].re / scale).to_double();
    im[i] = (s_.coefficients()[i].im / scale).to_double();
  }
  std::vector<double> v0(m_), v1(m_), v2(m_);
  simd::scan_grid(re, im, m_, v0.data(), v1.data(), v2.data());

  auto scaled = [&](const Real& v, int j) { return (v / (scale * pow(two_pi, j))).to_double(); };
  scan_.grid_value_error = simd::scan_error_bound(re, im, 0) + scaled(s_.coefficient_error(0) + s_.tail(0), 0);

  if (d_ == 0 && abs(s_.mean()) > s_.abs_sum(0) + s_.error_bound(0)) {
    scan_.grid_value = std::move(v0);
    return std::move(scan_);
  }

  fe_mp_ = scaled(s_.error_bound(d_), d_);
  ge_mp_ = scaled(s_.error_bound(d_ + 1), d_ + 1);
  mf1_ = scaled(s_.abs_sum(d_ + 1), d_ + 1);
  mg1_ = scaled(s_.abs_sum(d_ + 2), d_ + 2);
  const double mean_s = d_ == 0 ? scaled(s_.mean(), 0) : 0.0;
  const double fe_grid = simd::scan_error_bound(re, im, d_) + scaled(s_.coefficient_error(d_) + s_.tail(d_), d_) +
                         std::fabs(mean_s) * 4 * kRel;
  const double ge_grid =
      simd::scan_error_bound(re, im, d_ + 1) + scaled(s_.coefficient_error(d_ + 1) + s_.tail(d_ + 1), d_ + 1);
  const std::vector<double>& F = d_ == 0 ? v0 : v1;
  const std::vector<double>& G = d_ == 0 ? v1 : v2;

  auto grid_x = [&](std::size_t i) { return Real::from_int(static_cast<long>(i), bits_) / static_cast<long>(m_); };

  std::vector<Sample> samples(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    Sample& sm = samples[i];
    sm.f = F[i] + mean_s;
    sm.fe = fe_grid;
    sm.g = G[i];
    sm.ge = ge_grid;
    if (sm.fsign() == 0 || sm.gsign() == 0) {
      sm = sample_mp(grid_x(i));
      if (sm.fsign() == 0) add_point_root(grid_x(i), 1.0 / static_cast<double>(m_), double(i));
    }
  }

  const double h0 = 1.0 / static_cast<double>(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const Sample& sa = samples[i];
    const Sample& sb = samples[(i + 1) % m_];
    double slope = 0;
    const CellKind kind = classify(sa, sb, h0, slope);
    if (kind == CellKind::root_free || kind == CellKind::monotone_no_root) continue;
    const Real a = grid_x(i);
    const Real b = grid_x(i + 1);
    if (kind == CellKind::monotone_endpoint) {
      if (sa.fsign() == 0) note_endpoint_slope(a, slope, true, 1.0);
      // The grid point 1 is stored as 0.
      if (sb.fsign() == 0) note_endpoint_slope(i + 1 == m_ ? grid_x(0) : b, slope, false, 1.0);
      continue;
    }
    if (kind == CellKind::monotone_bracket) {
      refine_bracket(a, b, sa, sb, slope, double(i), double(i + 1), true);
      continue;
    }
    if (i + 1 == m_) {
      // Subdivision needs the right endpoint as a point root at 1, not 0.
      for (auto& p : points_) {
        if (p.x.is_zero()) {
          PointRoot copy = p;
          copy.x = b;
          copy.units = static_cast<double>(m_);
          points_.push_back(copy);
          break;
        }
      }
    }
    process(a, b, sa, sb, 0, double(i), double(i + 1));
  }

  // Fold the copy at 1 back into the point root at 0.
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].x != 1L) continue;
    for (auto& p : points_) {
      if (p.x.is_zero()) {
        p.slope_left = points_[i].slope_left;
        p.reach_left = points_[i].reach_left;
      }
    }
    points_.erase(points_.begin() + static_cast<long>(i));
    break;
  }
  for (const auto& p : points_) refine_point(p);

  auto& roots = scan_.roots;
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
  // Merge duplicates (a point root at 1 and at 0, or twin point roots in a monotone cell).
  std::vector<Root> merged;
  for (auto& r : roots) {
    if (!merged.empty()) {
      Root& last = merged.back();
      if (last.direction == r.direction && abs(r.x - last.x) <= last.radius + r.radius) {
        if (r.radius < last.radius) last = std::move(r);
        continue;
      }
    }
    merged.push_back(std::move(r));
  }
  if (merged.size() > 1) {
    Root& first = merged.front();
    Root& last = merged.back();
    if (first.direction == last.direction && abs(first.x + 1L - last.x) <= first.radius + last.radius) {
      if (last.radius < first.radius) first = std::move(last);
      merged.pop_back();
      std::sort(merged.begin(), merged.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
    }
  }
  roots = std::move(merged);
  scan_.grid_value = std::move(v0);
  return std::move(scan_);
}

}  // namespace

RootScan find_roots(const TrigSeries& s, int order, const RootOptions& options) {
  return RootFinder(s, order, options).run();
}

}  // namespace thetapolar
