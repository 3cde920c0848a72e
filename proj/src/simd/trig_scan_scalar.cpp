#include "thetapolar/simd/trig_scan.hpp"

namespace thetapolar::simd::detail {

void scan_scalar(const double* re, const double* im, std::size_t K, const double* cos_tab, const double* sin_tab,
                 std::size_t m, double* value, double* d1, double* d2) {
  for (std::size_t i = 0; i < m; ++i) {
    const double c1 = cos_tab[i];
    const double s1 = sin_tab[i];
    double wr = 1.0;
    double wi = 0.0;
    double v = 0.0, g = 0.0, h = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
      const double nr = wr * c1 - wi * s1;
      const double ni = wr * s1 + wi * c1;
      wr = nr;
      wi = ni;
      // (a + ib)(wr + i wi): real part pr, imaginary part pi
      const double pr = re[k - 1] * wr - im[k - 1] * wi;
      const double pi = re[k - 1] * wi + im[k - 1] * wr;
      const double kk = static_cast<double>(k);
      v += pr;
      g -= kk * pi;
      h -= kk * kk * pr;
    }
    if (value) value[i] = 2.0 * v;
    if (d1) d1[i] = 2.0 * g;
    if (d2) d2[i] = 2.0 * h;
  }
}

}  // namespace thetapolar::simd::detail
