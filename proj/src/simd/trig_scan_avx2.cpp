#include <immintrin.h>

#include "thetapolar/simd/trig_scan.hpp"

namespace thetapolar::simd::detail {

void scan_avx2(const double* re, const double* im, std::size_t K, const double* cos_tab, const double* sin_tab,
               std::size_t m, double* value, double* d1, double* d2) {
  std::size_t i = 0;
  const __m256d two = _mm256_set1_pd(2.0);
  for (; i + 4 <= m; i += 4) {
    const __m256d c1 = _mm256_loadu_pd(cos_tab + i);
    const __m256d s1 = _mm256_loadu_pd(sin_tab + i);
    __m256d wr = _mm256_set1_pd(1.0);
    __m256d wi = _mm256_setzero_pd();
    __m256d v = _mm256_setzero_pd();
    __m256d g = _mm256_setzero_pd();
    __m256d h = _mm256_setzero_pd();
    for (std::size_t k = 1; k <= K; ++k) {
      const __m256d nr = _mm256_fmsub_pd(wr, c1, _mm256_mul_pd(wi, s1));
      const __m256d ni = _mm256_fmadd_pd(wr, s1, _mm256_mul_pd(wi, c1));
      wr = nr;
      wi = ni;
      const __m256d a = _mm256_set1_pd(re[k - 1]);
      const __m256d b = _mm256_set1_pd(im[k - 1]);
      const __m256d pr = _mm256_fmsub_pd(a, wr, _mm256_mul_pd(b, wi));
      const __m256d pi = _mm256_fmadd_pd(a, wi, _mm256_mul_pd(b, wr));
      const double kd = static_cast<double>(k);
      const __m256d kk = _mm256_set1_pd(kd);
      const __m256d kk2 = _mm256_set1_pd(kd * kd);
      v = _mm256_add_pd(v, pr);
      g = _mm256_fnmadd_pd(kk, pi, g);
      h = _mm256_fnmadd_pd(kk2, pr, h);
    }
    if (value) _mm256_storeu_pd(value + i, _mm256_mul_pd(two, v));
    if (d1) _mm256_storeu_pd(d1 + i, _mm256_mul_pd(two, g));
    if (d2) _mm256_storeu_pd(d2 + i, _mm256_mul_pd(two, h));
  }
  if (i < m) {
    scan_scalar(re, im, K, cos_tab + i, sin_tab + i, m - i, value ? value + i : nullptr, d1 ? d1 + i : nullptr,
                d2 ? d2 + i : nullptr);
  }
}

}  // namespace thetapolar::simd::detail
