#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "thetapolar/config.hpp"
#include "thetapolar/functionals.hpp"
#include "thetapolar/precision.hpp"
#include "thetapolar/series.hpp"
#include "thetapolar/theta.hpp"

namespace thetapolar {

/// Mean-zero trigonometric polynomial sum_{1 <= |j| <= degree} a_j e^{2 pi i j x}.
class TrigPoly {
 public:
  /// Rejects a j = 0 entry. With real_valued set, every a_{-j} must equal
  /// conj(a_j) up to rounding.
  TrigPoly(std::map<long, Complex> coefficients, bool real_valued, Bits precision);
  /// Real-valued polynomial from a_j, j > 0; a_{-j} = conj(a_j) is filled in.
  static TrigPoly real_from_positive(const std::map<long, Complex>& positive, Bits precision);

  long degree() const { return degree_; }
  bool real_valued() const { return real_; }
  Bits bits() const { return bits_; }
  const std::map<long, Complex>& coefficients() const { return coef_; }
  bool is_zero() const;

  Complex eval(const Real& x) const;
  /// Real part of eval; the value itself when real_valued().
  Real eval_real(const Real& x) const;
  /// L2 norm over one period, by Parseval.
  Real l2_norm() const;
  /// Same polynomial as a TrigSeries. Requires real_valued().
  TrigSeries series() const;
  /// Coefficients of the derivative.
  TrigPoly derivative() const;

 private:
  std::map<long, Complex> coef_;
  long degree_ = 0;
  bool real_ = false;
  Bits bits_;
};

/// Random real polynomial of degree <= max_degree with coefficient parts
/// uniform in [-1, 1]; about a quarter of the frequencies are left out.
TrigPoly random_real_poly(std::mt19937_64& rng, long max_degree, Bits precision);

/// ||g||_{L1} over one period. Zeros of g split the period into pieces of
/// constant sign, each integrated through the exact antiderivative.
Real l1_norm(const TrigPoly& g, const PrecisionContext& ctx);

struct PigeonholeReport {
  Real min_value;   // certified minimum of g
  Real l1;
  Real bound;       // -l1 / 2
  Real tolerance;   // evaluation error allowance on min_value
  bool holds = false;
};

/// min g <= -||g||_1 / 2 for real mean-zero g.
PigeonholeReport l1_pigeonhole(const TrigPoly& g, const PrecisionContext& ctx);

/// (1/200) sum_r |a_{lambda_r}| / r with frequencies ranked increasingly
/// over the signed list (rank 1 is the most negative frequency).
Real mps_lower_bound(const TrigPoly& g);
/// Average of |a_j| over the nonzero terms.
Real elementary_lower_bound(const TrigPoly& g);

struct FourierSmallness {
  Real lhs;                      // max_{1<=|k|<=n-1} |c_k|
  Real rhs;                      // 2000 n^2 e^{-pi alpha (2n-1)}
  long worst_k = 0;
  std::vector<Real> magnitude;   // |c_k|, k = 1..n-1
  std::vector<Real> strong_rhs;  // 2000 n^2 e^{-pi alpha (n^2-k^2)}, k = 1..n-1
  bool holds = false;
  bool strong_holds = false;
};

FourierSmallness fourier_smallness_bound(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

/// (1/n) (sin(pi n x) / sin(pi x))^2, equal to n at integers.
Real fejer_kernel(const Real& x, long n, const PrecisionContext& ctx);
/// sum_{|k|<=n} (1 - |k|/n) e^{2 pi i k x}.
Real fejer_kernel_series(const Real& x, long n, const PrecisionContext& ctx);

struct FejerIdentity {
  Real lhs;  // sum_{i,j} F_n(x_i - x_j)
  Real rhs;  // sum_{|k|<=n} (1 - |k|/n) |c_k|^2
  Real tolerance;
  bool holds = false;
};

FejerIdentity fejer_double_sum(const Configuration& c, const PrecisionContext& ctx);

struct NotApplicable {
  long violating_k = 0;
  Real coefficient;  // |c_k| at violating_k
  Real epsilon;
};

struct GapCertificate {
  PerturbationDecomposition decomposition;
  Real max_coefficient;
  Real max_deviation;  // max_j |eps_j|
  FejerIdentity fejer;
  bool deviation_holds = false;
};

using GapRegularity = std::variant<GapCertificate, NotApplicable>;

/// Decomposes c when max_{1<=|k|<=n-1} |c_k| <= epsilon. Throws
/// std::invalid_argument unless 0 < epsilon <= 1/(1000 n^4).
GapRegularity gap_regularity_certificate(const Configuration& c, const Real& epsilon, const PrecisionContext& ctx);

/// Frequencies of the configuration sum split by residue:
/// A on multiples of n (B is its {-n, 0, n} part), g1 on 1 <= |k| <= (n-1)/2,
/// g2 on (n-1)/2 < |k| <= n-1, h on the rest.
class FrequencySplit {
 public:
  FrequencySplit(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);

  long n() const { return n_; }
  const Real& alpha() const { return alpha_; }
  Real A(const Real& x) const { return a_.eval(x, 0); }
  Real B(const Real& x) const { return b_.eval(x, 0); }
  Real h(const Real& x) const { return h_.eval(x, 0); }
  const TrigPoly& g1() const { return g1_; }
  const TrigPoly& g2() const { return g2_; }
  /// A + g1 + g2 + h at x.
  Real sum(const Real& x) const;
  const TrigSeries& full() const { return full_; }
  /// Highest frequency kept.
  long cutoff() const { return full_.degree(); }

 private:
  long n_;
  Real alpha_;
  TrigSeries full_;
  TrigSeries a_;
  TrigSeries b_;
  TrigSeries h_;
  TrigPoly g1_;
  TrigPoly g2_;
};

struct SplitReconstruction {
  Real max_error;  // max over samples of |A + g1 + g2 + h - config_sum|
  Real tolerance;  // 32 n eps
  bool holds = false;
};

/// Compares the split against pointwise theta sums at the given x.
SplitReconstruction check_split(const FrequencySplit& s, const Configuration& c, const std::vector<Real>& xs,
                                const PrecisionContext& ctx);

struct PlancherelReport {
  Real lhs;                // n sum eps_j^2
  Real rhs;                // sum_{k=1}^{n-1} |DFT_k|^2
  std::vector<Real> dft;   // |DFT_k|, k = 0..n-1
  Real max_dft;
  Real l2;                 // ||eps||_2
  Real tolerance;
  bool equality_holds = false;
  bool large_coefficient = false;  // max_k |DFT_k| >= ||eps||_2
  bool symmetric = false;          // |DFT_k| = |DFT_{n-k}|
};

/// DFT_k = sum_j eps_j e^{-2 pi i k j / n}. Throws std::invalid_argument
/// unless sum eps = 0 up to rounding.
PlancherelReport dft_plancherel_check(const PerturbationDecomposition& d, const PrecisionContext& ctx);

struct MidpointReport {
  Real min_value;      // min_k f((k + 1/2)/n)
  Real bound;          // -||f||_2 / (3 n^2)
  Real midpoint_sum;   // sum_k f((k + 1/2)/n), zero for degree <= n-1
  long argmin = 0;
  bool holds = false;
};

/// Throws std::invalid_argument unless f is real, nonzero and of degree <= (n-1)/2.
MidpointReport midpoint_negativity(const TrigPoly& f, long n, const PrecisionContext& ctx);

struct PoincareReport {
  Real lhs;       // int_a^b f^2
  Real rhs;
  Real gradient;  // (b-a)^2/pi^2 int_a^b f'^2
  bool holds = false;
};

/// Both sides of the modified Poincare inequality for f on [a, b]. Throws
/// std::invalid_argument when |f(a)| or |f(b)| exceeds M.
PoincareReport modified_poincare_check(const TrigPoly& f, const Real& a, const Real& b, const Real& M,
                                       const PrecisionContext& ctx);

struct FinalEstimate {
  long n = 0;
  Real z;                  // minimum of the sum over the shifted midpoints
  Real polarization_equi;  // polarization of equispaced(n)
  Real g1_l2;
  Real eps_l2;
  Real decrease_bound;     // polarization_equi - ||g1||_2 / (2 n^{3/2})
  Real g1_bound;           // e^{-pi alpha ((n-1)/2)^2} ||eps||_2 / 2
  bool decrease_holds = false;
  bool g1_holds = false;
  /// ||eps|| = 0: both sides coincide and nothing is asserted.
  bool equality_regime = false;
  /// Either inequality failed; the estimate is only claimed for large n.
  bool below_threshold = false;
};

FinalEstimate final_estimate_check(const Configuration& c, const ThetaParams& p, const PrecisionContext& ctx);
/// Same with the equispaced polarization supplied by the caller.
FinalEstimate final_estimate_check(const Configuration& c, const ThetaParams& p, const Real& equispaced_polarization,
                                   const PrecisionContext& ctx);

/// Outcome of a randomized lemma suite.
struct LemmaReport {
  std::string lemma;
  long trials = 0;
  long failures = 0;
  /// Smallest margin seen; negative when some trial failed.
  Real worst_margin;
  /// Failures in the regime where the estimate is not claimed (final only).
  long threshold_findings = 0;
  std::vector<std::string> notes;
};

/// Names accepted by run_lemma_suite.
const std::vector<std::string>& lemma_names();

/// Runs `trials` random instances of one lemma. Instance i draws from its own
/// generator seeded by (seed, i), so the report does not depend on `threads`.
LemmaReport run_lemma_suite(const std::string& lemma, long trials, std::uint64_t seed, const PrecisionContext& ctx,
                            unsigned threads = 1);

/// Generator for instance `index` of a suite seeded by `seed`.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace thetapolar
