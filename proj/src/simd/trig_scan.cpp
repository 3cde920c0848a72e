#include "thetapolar/simd/trig_scan.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

namespace thetapolar::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  if (const char* env = std::getenv("THETA_POLAR_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return best;
}

struct Twiddles {
  std::size_t m = 0;
  std::vector<double> cos_tab;
  std::vector<double> sin_tab;
};

const Twiddles& twiddles(std::size_t m) {
  thread_local Twiddles cache[4];
  thread_local std::size_t next = 0;
  for (const auto& t : cache) {
    if (t.m == m) return t;
  }
  Twiddles& t = cache[next];
  next = (next + 1) % 4;
  t.m = m;
  t.cos_tab.resize(m);
  t.sin_tab.resize(m);
  const long double two_pi = 6.283185307179586476925286766559005768L;
  for (std::size_t i = 0; i < m; ++i) {
    const long double arg = two_pi * static_cast<long double>(i) / static_cast<long double>(m);
    t.cos_tab[i] = static_cast<double>(std::cos(arg));
    t.sin_tab[i] = static_cast<double>(std::sin(arg));
  }
  return t;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void scan_grid(std::span<const double> re, std::span<const double> im, std::size_t m, double* value, double* d1,
               double* d2, Isa isa) {
  if (re.size() != im.size()) throw std::invalid_argument("scan_grid: coefficient arrays differ in length");
  if (m == 0) return;
  const Twiddles& t = twiddles(m);
  if (isa == Isa::avx2 && !isa_available(Isa::avx2)) isa = Isa::scalar;
  if (isa == Isa::avx2) {
    detail::scan_avx2(re.data(), im.data(), re.size(), t.cos_tab.data(), t.sin_tab.data(), m, value, d1, d2);
  } else {
    detail::scan_scalar(re.data(), im.data(), re.size(), t.cos_tab.data(), t.sin_tab.data(), m, value, d1, d2);
  }
}

double scan_error_bound(std::span<const double> re, std::span<const double> im, int order) {
  // Per term: twiddle error (about 2 ulp of the angle) amplified k times by
  // the rotation, plus O(1) ulps per rotation step and the running sum.
  const double u = std::numeric_limits<double>::epsilon() / 2.0;
  const double K = static_cast<double>(re.size());
  double bound = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double mag = 2.0 * (std::fabs(re[i]) + std::fabs(im[i]));
    bound += mag * std::pow(k, order) * (12.0 * k + 2.0 * K + 16.0);
  }
  return bound * u;
}

}  // namespace thetapolar::simd
