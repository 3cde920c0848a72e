#include "thetapolar/minimax_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace thetapolar {

namespace {

// Near a solution the active gradients are nearly dependent and double
// normal equations cannot resolve the optimum, so the iteration runs wider.
#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

template <class T>
T wabs(T v) {
  return v < 0 ? -v : v;
}
// Newton iteration from the double square root.
Wide wsqrt(Wide v) {
  if (!(v > 0)) return 0;
  Wide r = std::sqrt(static_cast<double>(v));
  for (int i = 0; i < 3; ++i) r = (r + v / r) / 2;
  return r;
}
template <class T>
bool wfinite(T v) {
  return v == v && wabs(v) <= static_cast<T>(std::numeric_limits<double>::max());
}

// Solves N x = rhs in place by Gaussian elimination with partial pivoting.
template <class T>
void solve_dense(std::vector<T>& N, std::vector<T>& rhs, size_t dim) {
  for (size_t col = 0; col < dim; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < dim; ++r) {
      if (wabs(N[r * dim + col]) > wabs(N[piv * dim + col])) piv = r;
    }
    if (piv != col) {
      for (size_t j = 0; j < dim; ++j) std::swap(N[col * dim + j], N[piv * dim + j]);
      std::swap(rhs[col], rhs[piv]);
    }
    const T d = N[col * dim + col];
    if (d == 0) continue;
    for (size_t r = col + 1; r < dim; ++r) {
      const T f = N[r * dim + col] / d;
      if (f == 0) continue;
      for (size_t j = col; j < dim; ++j) N[r * dim + j] -= f * N[col * dim + j];
      rhs[r] -= f * rhs[col];
    }
  }
  for (size_t col = dim; col-- > 0;) {
    T v = rhs[col];
    for (size_t j = col + 1; j < dim; ++j) v -= N[col * dim + j] * rhs[j];
    const T d = N[col * dim + col];
    rhs[col] = d == 0 ? 0 : v / d;
  }
}

// Cyclic Jacobi eigendecomposition of the assembled matrix; negative
// eigenvalues are dropped.
std::vector<Wide> psd_part(const MinimaxQp& qp, size_t m) {
  std::vector<Wide> A(m * m, 0), V(m * m, 0);
  for (size_t j = 0; j < qp.diagonal.size(); ++j) A[j * m + j] = qp.diagonal[j];
  for (const auto& f : qp.factors) {
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < m; ++k) A[j * m + k] += static_cast<Wide>(f[j]) * static_cast<Wide>(f[k]);
    }
  }
  bool negative = false;
  for (size_t j = 0; j < m; ++j) negative = negative || A[j * m + j] < 0;
  if (!negative && qp.diagonal.empty()) return A;
  for (size_t j = 0; j < m; ++j) V[j * m + j] = 1;
  for (int sweep = 0; sweep < 64; ++sweep) {
    Wide off = 0, total = 0;
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < m; ++k) {
        total += A[j * m + k] * A[j * m + k];
        if (j != k) off += A[j * m + k] * A[j * m + k];
      }
    }
    if (off <= total * static_cast<Wide>(1e-60)) break;
    for (size_t p = 0; p + 1 < m; ++p) {
      for (size_t q = p + 1; q < m; ++q) {
        const Wide apq = A[p * m + q];
        if (apq == 0) continue;
        const Wide theta = (A[q * m + q] - A[p * m + p]) / (2 * apq);
        Wide t = 1 / (wabs(theta) + wsqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        const Wide c = 1 / wsqrt(t * t + 1), sn = t * c;
        for (size_t k = 0; k < m; ++k) {
          const Wide akp = A[k * m + p], akq = A[k * m + q];
          A[k * m + p] = c * akp - sn * akq;
          A[k * m + q] = sn * akp + c * akq;
        }
        for (size_t k = 0; k < m; ++k) {
          const Wide apk = A[p * m + k], aqk = A[q * m + k];
          A[p * m + k] = c * apk - sn * aqk;
          A[q * m + k] = sn * apk + c * aqk;
        }
        for (size_t k = 0; k < m; ++k) {
          const Wide vkp = V[k * m + p], vkq = V[k * m + q];
          V[k * m + p] = c * vkp - sn * vkq;
          V[k * m + q] = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Wide> out(m * m, 0);
  for (size_t e = 0; e < m; ++e) {
    const Wide lambda = A[e * m + e];
    if (!(lambda > 0)) continue;
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < m; ++k) out[j * m + k] += lambda * V[j * m + e] * V[k * m + e];
    }
  }
  return out;
}

// z = (u, t); minimize 1/2 u'Hu - t subject to G z <= h, with slacks sl and
// multipliers lam.
struct Ipm {
  size_t m = 0, dim = 0, M = 0;
  std::vector<Wide> H;
  std::vector<double> G, h;
};

struct Tolerances {
  Wide gap, primal, dual;
};

// Mehrotra predictor-corrector iterations in arithmetic T from the given
// interior point. Returns true once the gap and primal residual tolerances
// are met; `dual_ok` reports the dual residual at that point.
template <class T>
bool ipm_run(const Ipm& p, std::vector<T>& z, std::vector<T>& sl, std::vector<T>& lam, const Tolerances& tol,
             int max_iter, int& iterations, bool& dual_ok) {
  const size_t m = p.m, dim = p.dim, M = p.M;
  std::vector<T> H(p.H.size());
  for (size_t i = 0; i < H.size(); ++i) H[i] = static_cast<T>(p.H[i]);
  auto Gz = [&](const std::vector<T>& v, size_t i) {
    T acc = 0;
    for (size_t j = 0; j < dim; ++j) {
      if (p.G[i * dim + j] != 0.0) acc += static_cast<T>(p.G[i * dim + j]) * v[j];
    }
    return acc;
  };
  std::vector<T> rd(dim), rp(M), rc(M), N(dim * dim), Nf(dim * dim), dz(dim), dl(M), ds(M);
  for (int it = 0; it < max_iter; ++it, ++iterations) {
    T mu = 0;
    for (size_t i = 0; i < M; ++i) mu += sl[i] * lam[i];
    mu /= static_cast<T>(M);
    for (size_t j = 0; j < m; ++j) {
      rd[j] = 0;
      for (size_t k = 0; k < m; ++k) rd[j] += H[j * m + k] * z[k];
    }
    rd[m] = -1;
    for (size_t i = 0; i < M; ++i) {
      for (size_t j = 0; j < dim; ++j) {
        if (p.G[i * dim + j] != 0.0) rd[j] += static_cast<T>(p.G[i * dim + j]) * lam[i];
      }
    }
    T rp_max = 0, rd_max = 0;
    for (size_t i = 0; i < M; ++i) {
      rp[i] = Gz(z, i) + sl[i] - static_cast<T>(p.h[i]);
      rp_max = std::max(rp_max, wabs(rp[i]));
    }
    for (T v : rd) rd_max = std::max(rd_max, wabs(v));
    if (mu * static_cast<T>(M) < static_cast<T>(tol.gap) && rp_max < static_cast<T>(tol.primal)) {
      dual_ok = rd_max < static_cast<T>(tol.dual);
      return true;
    }
    // Normal equations (H + G' W G) dz = rhs with W = diag(lam / sl).
    std::fill(N.begin(), N.end(), T(0));
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < m; ++k) N[j * dim + k] = H[j * m + k];
    }
    for (size_t i = 0; i < M; ++i) {
      const T w = lam[i] / sl[i];
      for (size_t j = 0; j < dim; ++j) {
        if (p.G[i * dim + j] == 0.0) continue;
        const T wg = w * static_cast<T>(p.G[i * dim + j]);
        for (size_t k = j; k < dim; ++k) {
          if (p.G[i * dim + k] != 0.0) N[j * dim + k] += wg * static_cast<T>(p.G[i * dim + k]);
        }
      }
    }
    for (size_t j = 0; j < dim; ++j) {
      for (size_t k = j + 1; k < dim; ++k) N[k * dim + j] = N[j * dim + k];
    }
    // Direction for the complementarity residual rc; returns the largest
    // step keeping sl and lam positive, scaled by `keep`.
    auto direction = [&](T keep) {
      Nf = N;
      for (size_t j = 0; j < dim; ++j) dz[j] = -rd[j];
      for (size_t i = 0; i < M; ++i) {
        const T coef = lam[i] / sl[i] * rp[i] - rc[i] / sl[i];
        for (size_t j = 0; j < dim; ++j) {
          if (p.G[i * dim + j] != 0.0) dz[j] -= static_cast<T>(p.G[i * dim + j]) * coef;
        }
      }
      solve_dense(Nf, dz, dim);
      T step = 1;
      for (size_t i = 0; i < M; ++i) {
        const T gd = Gz(dz, i);
        ds[i] = -rp[i] - gd;
        dl[i] = lam[i] / sl[i] * (gd + rp[i]) - rc[i] / sl[i];
        if (ds[i] < 0) step = std::min(step, -keep * sl[i] / ds[i]);
        if (dl[i] < 0) step = std::min(step, -keep * lam[i] / dl[i]);
      }
      return step;
    };
    // The affine step sets the centering and supplies the second-order
    // complementarity term.
    for (size_t i = 0; i < M; ++i) rc[i] = lam[i] * sl[i];
    const T affine = direction(1);
    if (!std::all_of(dz.begin(), dz.end(), wfinite<T>)) return false;
    T mu_aff = 0;
    for (size_t i = 0; i < M; ++i) mu_aff += (sl[i] + affine * ds[i]) * (lam[i] + affine * dl[i]);
    mu_aff /= static_cast<T>(M);
    T sigma = mu > 0 ? mu_aff / mu : 0;
    sigma = std::min<T>(1, sigma * sigma * sigma);
    for (size_t i = 0; i < M; ++i) rc[i] = lam[i] * sl[i] + ds[i] * dl[i] - sigma * mu;
    const T step = direction(static_cast<T>(0.995));
    if (!std::all_of(dz.begin(), dz.end(), wfinite<T>)) return false;
    if (!(step > 0)) return false;
    for (size_t j = 0; j < dim; ++j) z[j] += step * dz[j];
    for (size_t i = 0; i < M; ++i) {
      sl[i] += step * ds[i];
      lam[i] += step * dl[i];
    }
  }
  return false;
}

template <class To, class From>
std::vector<To> convert(const std::vector<From>& v) {
  return std::vector<To>(v.begin(), v.end());
}

}  // namespace

MinimaxStep solve_minimax_qp(const MinimaxQp& qp, int max_iter) {
  const size_t S = qp.a.size();
  if (qp.g.size() != S) throw std::invalid_argument("solve_minimax_qp: g and a differ in length");
  if (S == 0) throw std::invalid_argument("solve_minimax_qp: no constraints");
  const size_t m = qp.g[0].size();
  for (size_t s = 0; s < S; ++s) {
    if (qp.g[s].size() != m) throw std::invalid_argument("solve_minimax_qp: row " + std::to_string(s) + " has the wrong length");
  }
  if (!qp.diagonal.empty() && qp.diagonal.size() != m) {
    throw std::invalid_argument("solve_minimax_qp: diagonal has the wrong length");
  }
  for (const auto& f : qp.factors) {
    if (f.size() != m) throw std::invalid_argument("solve_minimax_qp: factor has the wrong length");
  }
  Ipm p;
  p.m = m;
  p.dim = m + 1;
  p.M = S + 2 * m;
  p.H = psd_part(qp, m);
  const size_t dim = p.dim, M = p.M;
  p.G.assign(M * dim, 0.0);
  p.h.resize(M);
  for (size_t s = 0; s < S; ++s) {
    for (size_t j = 0; j < m; ++j) p.G[s * dim + j] = -qp.g[s][j];
    p.G[s * dim + m] = 1.0;
    p.h[s] = qp.a[s];
  }
  for (size_t j = 0; j < m; ++j) {
    p.G[(S + 2 * j) * dim + j] = 1.0;
    p.G[(S + 2 * j + 1) * dim + j] = -1.0;
    p.h[S + 2 * j] = 1.0;
    p.h[S + 2 * j + 1] = 1.0;
  }
  double scale = 1.0;
  for (size_t s = 0; s < S; ++s) {
    scale = std::max(scale, std::fabs(qp.a[s]));
    for (double v : qp.g[s]) scale = std::max(scale, std::fabs(v));
  }
  double dual_scale = scale;
  for (Wide v : p.H) dual_scale = std::max(dual_scale, static_cast<double>(wabs(v)));
  const Tolerances fine{static_cast<Wide>(scale) * static_cast<Wide>(1e-28),
                        static_cast<Wide>(scale) * static_cast<Wide>(1e-26),
                        static_cast<Wide>(dual_scale) * static_cast<Wide>(1e-20)};
  // Double arithmetic brings the iterate close to the central path cheaply;
  // the last iterations run wide.
  const Tolerances coarse{static_cast<Wide>(scale * 1e-14), static_cast<Wide>(scale * 1e-13),
                          static_cast<Wide>(dual_scale * 1e-8)};

  std::vector<double> z(dim, 0.0), sl(M), lam(M, 1.0);
  z[m] = *std::min_element(qp.a.begin(), qp.a.end()) - 1;
  for (size_t i = 0; i < M; ++i) {
    double acc = 0;
    for (size_t j = 0; j < dim; ++j) acc += p.G[i * dim + j] * z[j];
    sl[i] = p.h[i] - acc;
  }
  MinimaxStep out;
  bool dual_ok = false;
  std::vector<double> z0 = z, sl0 = sl, lam0 = lam;
  if (!ipm_run(p, z, sl, lam, coarse, max_iter, out.iterations, dual_ok)) {
    // Restart wide from the initial point.
    z = std::move(z0);
    sl = std::move(sl0);
    lam = std::move(lam0);
  }
  std::vector<Wide> zw = convert<Wide>(z), slw = convert<Wide>(sl), lamw = convert<Wide>(lam);
  if (ipm_run(p, zw, slw, lamw, fine, max_iter, out.iterations, dual_ok)) out.converged = dual_ok;
  const std::vector<Wide>& H = p.H;
  auto quad = [&](const auto& u, std::vector<Wide>& Hu) {
    Wide q = 0;
    for (size_t j = 0; j < m; ++j) {
      Hu[j] = 0;
      for (size_t k = 0; k < m; ++k) Hu[j] += H[j * m + k] * static_cast<Wide>(u[k]);
      q += Hu[j] * static_cast<Wide>(u[j]);
    }
    return q;
  };
  out.u.resize(m);
  for (size_t j = 0; j < m; ++j) out.u[j] = std::clamp(static_cast<double>(zw[j]), -1.0, 1.0);
  // Tightest t for the returned u keeps the step feasible.
  out.t = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < S; ++s) {
    double v = qp.a[s];
    for (size_t j = 0; j < m; ++j) v += qp.g[s][j] * out.u[j];
    out.t = std::min(out.t, v);
  }
  std::vector<Wide> Hu(m);
  out.model = static_cast<double>(static_cast<Wide>(out.t) - quad(out.u, Hu) / 2);
  out.weights.resize(S);
  for (size_t s = 0; s < S; ++s) out.weights[s] = static_cast<double>(lamw[s]);
  return out;
}

}  // namespace thetapolar
