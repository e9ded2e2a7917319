#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsys/core.hpp"
#include "qsys/expsums.hpp"

namespace qsys {

struct LinearizationConfig {
  double c = 0.125;         // U ~ N^{c/R^2}, V ~ U^{c/R}
  int64_t u_floor = 2;
  int64_t v_floor = 2;
  double recurrence_c = 0.25;
  uint64_t full_enumeration_limit = 100'000'000;  // N U V R
  uint64_t samples = 100'000;
  uint64_t seed = 0x5eed;
};

/// Outcome of checking ||phi_i(n+m+k) - phi_i(n+m)|| <= eps*delta over
/// n in [N], m in P, k in Q_n.
struct Certificate {
  bool certified = false;
  Rational eps_delta;
  Rational worst_deviation;
  size_t worst_freq = 0;
  int64_t worst_n = 0;
  int64_t worst_m = 0;
  int64_t worst_k = 0;
  std::vector<Rational> worst_per_freq;
  uint64_t triples_checked = 0;
  bool exhaustive = false;
};

/// P = q[U], Q_n = q r_n [V], with r_n stored for n in [-N, 2N].
class ProgressionFamily {
 public:
  ProgressionFamily() = default;
  ProgressionFamily(Ambient ambient, std::vector<Frequency> freqs, int64_t q,
                    int64_t U, int64_t V, std::vector<int64_t> r_values);

  /// Family with the same r for every n.
  static ProgressionFamily uniform(Ambient ambient,
                                   std::vector<Frequency> freqs, int64_t q,
                                   int64_t U, int64_t V, int64_t r);

  const Ambient& ambient() const noexcept { return ambient_; }
  const std::vector<Frequency>& freqs() const noexcept { return freqs_; }
  int64_t q() const noexcept { return q_; }
  int64_t U() const noexcept { return U_; }
  int64_t V() const noexcept { return V_; }
  int64_t r_lo() const noexcept { return -ambient_.N; }
  int64_t r_hi() const noexcept { return 2 * ambient_.N; }
  const std::vector<int64_t>& r_values() const noexcept { return r_; }

  /// r_n; throws kInvalidParams outside [-N, 2N].
  int64_t r(int64_t n) const;
  /// Common difference q r_n of Q_n.
  int64_t step(int64_t n) const { return q_ * r(n); }

  const Certificate& certificate() const noexcept { return cert_; }
  void set_certificate(Certificate cert) { cert_ = std::move(cert); }

  /// q <= N^{1/4}, P inside [N^{1/2}], r_n [V] inside [U^{1/2}], etc.
  struct SizeChecks {
    bool q_ok = false;
    bool r_ok = false;
    bool P_ok = false;
    bool Q_ok = false;
    bool U_window = false;
    bool V_window = false;
  };
  SizeChecks size_checks(const LinearizationConfig& cfg) const;

 private:
  Ambient ambient_{};
  std::vector<Frequency> freqs_;
  int64_t q_ = 1;
  int64_t U_ = 1;
  int64_t V_ = 1;
  std::vector<int64_t> r_;
  Certificate cert_{};
};

/// Chooses q by quadratic recurrence on the beta_i with X = N^{1/4}, sets U,
/// then picks r_n for each n in [-N, 2N] by Dirichlet on
/// gamma_{i,n} = q(alpha_i + 2 n beta_i) with X = U^{1/4}, and sets V.
ProgressionFamily build_family(std::span<const Frequency> freqs,
                               const Ambient& amb,
                               const LinearizationConfig& cfg = {});

/// Exact phase-deviation check against eps*delta. Exhaustive when
/// N U V R <= cfg.full_enumeration_limit, otherwise a seeded uniform sample
/// plus all boundary triples (m = qU, k = q r_n V).
Certificate certify(const ProgressionFamily& fam, const Rational& eps_delta,
                    const LinearizationConfig& cfg = {});

/// build_family followed by certify with eps*delta. The returned family
/// carries its certificate; an uncertified result is the CertificateFailed
/// signal (see require_certified).
ProgressionFamily linearize(std::span<const Frequency> freqs,
                            const Ambient& amb, const Rational& eps,
                            const Rational& delta,
                            const LinearizationConfig& cfg = {});

/// Throws kCertificateFailed with the worst triple when not certified.
void require_certified(const ProgressionFamily& fam);

/// True iff the asymptotic size precondition N >= (2/(eps delta))^{C R^3}
/// holds for the supplied C.
bool certified_regime(int64_t N, double eps_delta, int64_t R, double C);

/// h~(n) = E_{m in P, k in Q_{n-m}} h(n + k) on [N]; exact when h is.
GridFunction smooth(const GridFunction& h, const ProgressionFamily& fam);

struct SmoothingReport {
  std::vector<double> phase_deviation;  // per frequency
  double average_deviation = 0.0;
  double max_deviation = 0.0;
  double tolerance = 0.0;  // K eps
  bool passed = false;
};

SmoothingReport check_smoothing_approximation(const GridFunction& h,
                                              const ProgressionFamily& fam,
                                              double eps, double K = 8.0);

/// E_{n in [N]} |f~_A(n) / delta|^2.
double l2_of_smoothed_balanced(const DenseSet& A,
                               const ProgressionFamily& fam);

struct IncrementResult {
  Progression progression;
  Rational new_density;
  Rational threshold;  // (1 + nu/2) delta
  double nu = 0.0;
  int64_t R = 0;
  int64_t witness_n = 0;
  int64_t witness_m = 0;
  bool length_ok = false;  // L >= N^{c3/R^3}
};

/// Scans n in E = [1, N - N^{1/2}) for mu~_A(n) >= 1 + nu/2, then m in P
/// for a progression n + Q_{n-m} of density >= (1 + nu/2) delta. Throws
/// kNoWitness with the scan maximum when none exists.
IncrementResult find_increment(const DenseSet& A, const ProgressionFamily& fam,
                               const Rational& nu, const Rational& eps,
                               double c3 = 0.1);

/// n lies in [1, N - N^{1/2}), tested exactly.
bool in_edge_guarded_range(int64_t n, int64_t N);

/// |E_{n in q[N0]} f(n + shift) - E_{n in q[N0]} f(n)|.
double regularity_shift_gap(const GridFunction& f, int64_t q, int64_t N0,
                            int64_t shift);

/// |E_{n in q[N0], n' in P'} f(n + n') - E_{n in q[N0]} f(n)| for
/// P' = q[N1].
double regularity_subaverage_gap(const GridFunction& f, int64_t q, int64_t N0,
                                 int64_t N1);

}  // namespace qsys
