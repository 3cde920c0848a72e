#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace thetapolar::simd {

enum class Isa { scalar, avx2 };

/// Best instruction set supported by the CPU, unless the environment variable
/// THETA_POLAR_SIMD names another available one ("scalar" or "avx2").
Isa active_isa();
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

/// Samples of s(x) = sum_{k=1}^{K} 2 Re((re_k + i im_k) e^{2 pi i k x}) and
/// its first two derivatives divided by (2 pi)^j, at x_i = i/m for i < m.
///
/// re[k-1], im[k-1] hold the coefficient of frequency k. Any output pointer
/// may be null.
void scan_grid(std::span<const double> re, std::span<const double> im, std::size_t m, double* value, double* d1,
               double* d2, Isa isa);

inline void scan_grid(std::span<const double> re, std::span<const double> im, std::size_t m, double* value,
                      double* d1, double* d2) {
  scan_grid(re, im, m, value, d1, d2, active_isa());
}

/// Bound on the absolute rounding error of scan_grid output `order` (0..3,
/// derivatives divided by (2 pi)^j) for either kernel.
double scan_error_bound(std::span<const double> re, std::span<const double> im, int order);

namespace detail {

/// Kernels. cos_tab[i], sin_tab[i] = cos, sin of 2 pi i / m.
void scan_scalar(const double* re, const double* im, std::size_t K, const double* cos_tab, const double* sin_tab,
                 std::size_t m, double* value, double* d1, double* d2);
void scan_avx2(const double* re, const double* im, std::size_t K, const double* cos_tab, const double* sin_tab,
               std::size_t m, double* value, double* d1, double* d2);

}  // namespace detail

}  // namespace thetapolar::simd
