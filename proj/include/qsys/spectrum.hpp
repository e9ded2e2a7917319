#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsys/budget.hpp"
#include "qsys/core.hpp"
#include "qsys/expsums.hpp"

namespace qsys {

// ---------------------------------------------------------------------------
// Even moments of V(alpha, beta) = sum_{n in [N]} e(alpha n + beta n^2)
// ---------------------------------------------------------------------------

/// ||V||_p^p for p in {4, 6}: the number of tuples (a, b) in [N]^{p/2} x
/// [N]^{p/2} with equal sums and equal sums of squares.
int64_t moment_V(int64_t N, int p, const Budgets& budgets = {});

struct MomentRow {
  int64_t N = 0;
  int64_t moment4 = 0;
  int64_t moment6 = 0;
  double ratio4 = 0.0;  // moment4 / N^2
  double ratio6 = 0.0;  // moment6 / (N^3 log N); 0 for N = 1
};

struct MomentEnvelopeReport {
  std::vector<MomentRow> rows;
  double bound4 = 4.0;
  double bound6 = 16.0;
  bool ratio4_increasing = true;
  bool passed = true;
};

MomentEnvelopeReport check_moment_envelopes(std::span<const int64_t> N_grid,
                                            double bound4 = 4.0,
                                            double bound6 = 16.0,
                                            const Budgets& budgets = {});

// ---------------------------------------------------------------------------
// Restriction ratio ||S_f||_p / ||f||_{L^2(M)}
// ---------------------------------------------------------------------------

struct RestrictionSample {
  double norm_S = 0.0;       // (E_z |S_f(z)|^p)^{1/p}
  double norm_S_sum = 0.0;   // (sum_z |S_f(z)|^p)^{1/p}
  double norm_f = 0.0;       // (E_{n in [M]} |f(n)|^2)^{1/2}
  double ratio = 0.0;        // norm_S / norm_f, 0 when f = 0
  double ratio_sum = 0.0;    // norm_S_sum / norm_f
};

RestrictionSample restriction_ratio(const GridFunction& f, const Ambient& amb,
                                    double p, const Budgets& budgets = {});

struct RestrictionRow {
  int64_t N = 0;
  int64_t M = 0;
  int trials = 0;
  double max_ratio = 0.0;
  double max_ratio_sum = 0.0;
};

struct RestrictionReport {
  double p = 0.0;
  std::vector<RestrictionRow> rows;
  double ceiling = 0.0;  // ceiling_factor * first row's max ratio
  bool monotone_growth = false;
  bool passed = false;
};

/// Random +-1 masks, random indicators, and balanced functions of random
/// sets, cycling in that order, `trials` per N.
RestrictionReport check_restriction_ratio(const CoefficientSystem& cs,
                                          double p, int trials,
                                          std::span<const int64_t> N_grid,
                                          uint64_t seed = 1,
                                          double ceiling_factor = 3.0,
                                          const Budgets& budgets = {});

// ---------------------------------------------------------------------------
// Energy pigeonholing
// ---------------------------------------------------------------------------

struct ProfileEntry {
  Frequency z;
  double magnitude = 0.0;
};

/// Non-increasing magnitudes a_1 >= a_2 >= ... (ties by (x, y)). May be a
/// truncation of a longer sequence, in which case sum_s / sum_r hold the
/// power sums of the full sequence.
struct EnergyProfile {
  std::vector<ProfileEntry> entries;
  double r = 6.1;
  int s_exp = 7;
  double sum_s = 0.0;
  double sum_r = 0.0;
  uint64_t full_length = 0;

  /// Profile from explicit magnitudes (frequencies (k, 0) placeholders);
  /// sorts and fills the power sums.
  static EnergyProfile from_magnitudes(std::vector<double> magnitudes,
                                       double r, int s_exp);
};

struct LemmaConstants {
  double C = 4.0;       // Y = C X^{s/(s-r)}
  double theta = 0.25;  // witness threshold a_k >= theta k^{-(1+eta)/s}
  double floor = 0.0;   // required lower bound on sum a_k^s
  std::optional<uint64_t> max_rank;  // optional cap on R
};

struct RestrictedEnergy {
  int64_t R = 0;
  std::vector<Frequency> freqs;
  std::vector<double> magnitudes;
  double value = 0.0;          // sum_{k <= R} a_k^r
  double gain_exponent = 0.0;  // (s - r) / 2s
  double X = 0.0;
  double Y = 0.0;              // truncation C X^{s/(s-r)}
  double lower_bound = 0.0;    // theta^r R^{gain_exponent}
};

/// Y = C X^{s/(s-r)}.
double pigeonhole_truncation(double X, double r, int s, double C);

/// Floor on sum a_k^s under which the scan provably finds a witness with the
/// given C and theta: the tail bound C^{-(s-r)/r} min(1, r/(s-r)) plus
/// theta^s sum_{k<=Y} k^{-1-eta}.
double pigeonhole_guaranteed_floor(double X, double r, int s, double C,
                                   double theta);

/// Constructive energy pigeonholing. Throws kHypothesisViolated when the
/// profile is not non-increasing, X < 1, r outside (0, s), or the power sums
/// miss the hypotheses; kNoWitness when no k <= Y passes the threshold.
RestrictedEnergy pigeonhole(const EnergyProfile& profile, double X,
                            const LemmaConstants& constants);

struct EnergyConfig {
  double r = 6.1;
  /// Required ratio sum_z |S_{f_A/delta}|^s / sum_z |S_{1_[N]}|^s.
  double energy_floor = 0.75;
  LemmaConstants lemma{};
  uint64_t max_rank = 3;
  size_t profile_size = 64;
  Budgets budgets{};
};

struct EnergyExtraction {
  RestrictedEnergy energy;
  EnergyProfile profile;       // normalized magnitudes, top entries
  double energy_ratio = 0.0;   // sum |S_{f_A/delta}|^s / sum |S_{1_[N]}|^s
  double reference_energy = 0.0;
  double scale = 1.0;          // magnitudes = |S| / scale
};

/// Profile of |S_f| over the full group, streamed: power sums of the whole
/// spectrum plus the top `keep` entries, magnitudes divided by `scale`.
EnergyProfile build_profile(const GridFunction& f, const Ambient& amb, int s,
                            double r, size_t keep, double scale,
                            const Budgets& budgets = {});

/// sum_z |S_{1_[N]}(z)|^s.
double reference_energy(const Ambient& amb, int s, const Budgets& budgets = {});

/// Throws kUniformSet when A is empty, full, or its normalized balanced
/// function misses the energy floor.
EnergyExtraction extract_restricted_energy(const DenseSet& A,
                                           const CoefficientSystem& cs,
                                           const EnergyConfig& cfg = {});

}  // namespace qsys
