#include "qsys/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsys/error.hpp"
#include "qsys/parallel.hpp"

namespace qsys {

namespace {

using cd = std::complex<double>;

bool profile_before(const ProfileEntry& a, const ProfileEntry& b) {
  if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
  return a.z < b.z;
}

/// |v|^p from |v|^2 without calling pow for the common exponents.
double power_from_square(double sq, double p) {
  if (p == 2.0) return sq;
  if (p == 4.0) return sq * sq;
  if (p == 6.0) return sq * sq * sq;
  if (p == 7.0) return sq * sq * sq * std::sqrt(sq);
  return std::pow(sq, 0.5 * p);
}

/// sum over the whole group of |S_f|^p, streamed row by row.
long double spectrum_power_sum(const GridFunction& f, const Ambient& amb,
                               double p, const Budgets& budgets) {
  SpectrumRows rows(f, amb);
  constexpr size_t kRowsPerBlock = 64;
  std::vector<long double> partial(
      block_count(static_cast<size_t>(amb.M_squared), kRowsPerBlock), 0.0L);
  for_each_row(
      rows, budgets.spectrum,
      [&](size_t block, int64_t, std::span<const cd> row) {
        double acc = 0.0;
        for (const cd v : row) acc += power_from_square(std::norm(v), p);
        partial[block] += acc;
      },
      kRowsPerBlock);
  long double total = 0.0L;
  for (const long double v : partial) total += v;
  return total;
}

}  // namespace

// --- Moments -----------------------------------------------------------------

int64_t moment_V(int64_t N, int p, const Budgets& budgets) {
  if (p != 4 && p != 6) {
    throw Error(ErrorCode::kInvalidParams, "moment order must be 4 or 6");
  }
  if (N < 0) throw Error(ErrorCode::kInvalidParams, "N must be non-negative");
  const int k = p / 2;
  require_budget(power_estimate(static_cast<long double>(N), k + 1),
                 budgets.enumeration, "moment count");
  // Count half-tuples per (sum, sum of squares); the moment is sum of squares
  // of the multiplicities.
  std::vector<std::pair<int64_t, int64_t>> keys;
  keys.reserve(static_cast<size_t>(power_estimate(static_cast<long double>(N), k)));
  if (k == 2) {
    for (int64_t a = 1; a <= N; ++a)
      for (int64_t b = 1; b <= N; ++b) keys.push_back({a + b, a * a + b * b});
  } else {
    for (int64_t a = 1; a <= N; ++a)
      for (int64_t b = 1; b <= N; ++b)
        for (int64_t c = 1; c <= N; ++c)
          keys.push_back({a + b + c, a * a + b * b + c * c});
  }
  std::sort(keys.begin(), keys.end());
  int64_t total = 0;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    const auto run = static_cast<int64_t>(j - i);
    total += run * run;
    i = j;
  }
  return total;
}

MomentEnvelopeReport check_moment_envelopes(std::span<const int64_t> N_grid,
                                            double bound4, double bound6,
                                            const Budgets& budgets) {
  MomentEnvelopeReport report;
  report.bound4 = bound4;
  report.bound6 = bound6;
  bool bounded = true;
  for (const int64_t N : N_grid) {
    MomentRow row;
    row.N = N;
    row.moment4 = moment_V(N, 4, budgets);
    row.moment6 = moment_V(N, 6, budgets);
    const auto n = static_cast<double>(N);
    row.ratio4 = static_cast<double>(row.moment4) / (n * n);
    row.ratio6 = N > 1 ? static_cast<double>(row.moment6) / (n * n * n * std::log(n)) : 0.0;
    if (!report.rows.empty() && row.ratio4 < report.rows.back().ratio4) {
      report.ratio4_increasing = false;
    }
    if (row.ratio4 > bound4 || row.ratio6 > bound6) bounded = false;
    report.rows.push_back(row);
  }
  report.passed = bounded && report.ratio4_increasing;
  return report;
}

// --- Restriction ------------------------------------------------------------

RestrictionSample restriction_ratio(const GridFunction& f, const Ambient& amb,
                                    double p, const Budgets& budgets) {
  RestrictionSample out;
  const double sq = f.sum_squares();
  out.norm_f = std::sqrt(sq / static_cast<double>(amb.M));
  if (sq == 0.0) return out;
  const long double total = spectrum_power_sum(f, amb, p, budgets);
  const long double group = static_cast<long double>(amb.M) *
                            static_cast<long double>(amb.M_squared);
  out.norm_S = static_cast<double>(std::pow(total / group, 1.0L / p));
  out.norm_S_sum = static_cast<double>(std::pow(total, 1.0L / p));
  out.ratio = out.norm_S / out.norm_f;
  out.ratio_sum = out.norm_S_sum / out.norm_f;
  return out;
}

RestrictionReport check_restriction_ratio(const CoefficientSystem& cs,
                                          double p, int trials,
                                          std::span<const int64_t> N_grid,
                                          uint64_t seed, double ceiling_factor,
                                          const Budgets& budgets) {
  if (!(p > 6.0)) throw Error(ErrorCode::kInvalidParams, "restriction needs p > 6");
  RestrictionReport report;
  report.p = p;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (const int64_t N : N_grid) {
    const Ambient amb = choose_modulus(cs, N);
    RestrictionRow row;
    row.N = N;
    row.M = amb.M;
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      GridFunction f;
      std::vector<int64_t> members;
      switch (t % 3) {
        case 0: {
          std::vector<Complex> v(static_cast<size_t>(N));
          for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
          f = GridFunction(N, std::move(v));
          break;
        }
        default: {
          for (int64_t n = 1; n <= N; ++n)
            if (coin(rng)) members.push_back(n);
          const DenseSet A(amb, members);
          f = (t % 3 == 1) ? GridFunction::indicator(A) : balanced_function(A);
          break;
        }
      }
      const auto sample = restriction_ratio(f, amb, p, budgets);
      row.max_ratio = std::max(row.max_ratio, sample.ratio);
      row.max_ratio_sum = std::max(row.max_ratio_sum, sample.ratio_sum);
    }
    report.rows.push_back(row);
  }
  if (report.rows.empty()) return report;
  report.ceiling = ceiling_factor * report.rows.front().max_ratio;
  bool strictly_up = report.rows.size() >= 2;
  bool below = true;
  for (size_t i = 0; i < report.rows.size(); ++i) {
    if (report.rows[i].max_ratio > report.ceiling) below = false;
    if (i > 0 && !(report.rows[i].max_ratio > report.rows[i - 1].max_ratio)) {
      strictly_up = false;
    }
  }
  report.monotone_growth = strictly_up;
  report.passed = below && !strictly_up;
  return report;
}

// --- Energy pigeonholing ---------------------------------------------------

EnergyProfile EnergyProfile::from_magnitudes(std::vector<double> magnitudes,
                                             double r, int s_exp) {
  EnergyProfile p;
  p.r = r;
  p.s_exp = s_exp;
  std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
  for (size_t k = 0; k < magnitudes.size(); ++k) {
    p.entries.push_back(ProfileEntry{Frequency{static_cast<int64_t>(k), 0}, magnitudes[k]});
    p.sum_s += std::pow(magnitudes[k], s_exp);
    p.sum_r += std::pow(magnitudes[k], r);
  }
  p.full_length = magnitudes.size();
  return p;
}

double pigeonhole_truncation(double X, double r, int s, double C) {
  return C * std::pow(X, static_cast<double>(s) / (static_cast<double>(s) - r));
}

double pigeonhole_guaranteed_floor(double X, double r, int s, double C,
                                   double theta) {
  const double sd = static_cast<double>(s);
  const double eta = (sd - r) / (2.0 * r);
  const double Y = pigeonhole_truncation(X, r, s, C);
  // Tail past Y: a_k <= (X/k)^{1/r} gives sum_{k>Y} a_k^s <= C^{-(s-r)/r}
  // times min(1, r/(s-r)).
  const double tail = std::pow(C, -(sd - r) / r) * std::min(1.0, r / (sd - r));
  // Exact head up to kDirect, integral bound beyond (Y can be astronomically large).
  constexpr double kDirect = 1e5;
  double head = 0.0;
  const double kmax = std::floor(Y);
  const auto kstop = static_cast<int64_t>(std::min(kmax, kDirect));
  for (int64_t k = 1; k <= kstop; ++k) {
    head += std::pow(static_cast<double>(k), -1.0 - eta);
  }
  if (kmax > kDirect) {
    head += (std::pow(kDirect, -eta) - std::pow(kmax, -eta)) / eta;
  }
  return tail + std::pow(theta, sd) * head;
}

RestrictedEnergy pigeonhole(const EnergyProfile& profile, double X,
                            const LemmaConstants& constants) {
  const double r = profile.r;
  const int s = profile.s_exp;
  const double sd = static_cast<double>(s);
  if (!(r > 0.0 && r < sd)) {
    throw Error(ErrorCode::kHypothesisViolated, "need 0 < r < s");
  }
  if (!(X >= 1.0)) throw Error(ErrorCode::kHypothesisViolated, "need X >= 1");
  const auto& e = profile.entries;
  for (size_t k = 1; k < e.size(); ++k) {
    if (e[k].magnitude > e[k - 1].magnitude) {
      throw Error(ErrorCode::kHypothesisViolated, "profile is not non-increasing");
    }
  }
  if (!e.empty() && e.back().magnitude < 0.0) {
    throw Error(ErrorCode::kHypothesisViolated, "negative magnitude");
  }
  if (profile.sum_r > X * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kHypothesisViolated, "sum a_k^r exceeds X");
  }
  if (profile.sum_s < constants.floor) {
    throw Error(ErrorCode::kHypothesisViolated, "sum a_k^s below the floor");
  }
  RestrictedEnergy out;
  out.X = X;
  out.Y = pigeonhole_truncation(X, r, s, constants.C);
  out.gain_exponent = (sd - r) / (2.0 * sd);
  const double eta = (sd - r) / (2.0 * r);
  double limit = std::min(std::floor(out.Y), static_cast<double>(e.size()));
  if (constants.max_rank) limit = std::min(limit, static_cast<double>(*constants.max_rank));
  const auto kmax = static_cast<int64_t>(limit);
  for (int64_t k = 1; k <= kmax; ++k) {
    const double threshold =
        constants.theta * std::pow(static_cast<double>(k), -(1.0 + eta) / sd);
    if (e[static_cast<size_t>(k - 1)].magnitude >= threshold) out.R = k;
  }
  if (out.R == 0) {
    throw Error(ErrorCode::kNoWitness, "no rank k <= Y passes the threshold");
  }
  for (int64_t k = 0; k < out.R; ++k) {
    const auto& entry = e[static_cast<size_t>(k)];
    out.freqs.push_back(entry.z);
    out.magnitudes.push_back(entry.magnitude);
    out.value += std::pow(entry.magnitude, r);
  }
  out.lower_bound = std::pow(constants.theta, r) *
                    std::pow(static_cast<double>(out.R), out.gain_exponent);
  return out;
}

EnergyProfile build_profile(const GridFunction& f, const Ambient& amb, int s,
                            double r, size_t keep, double scale,
                            const Budgets& budgets) {
  SpectrumRows rows(f, amb);
  constexpr size_t kRowsPerBlock = 64;
  const size_t blocks = block_count(static_cast<size_t>(amb.M_squared), kRowsPerBlock);
  struct Partial {
    long double sum_s = 0.0L;
    long double sum_r = 0.0L;
    std::vector<ProfileEntry> top;
  };
  std::vector<Partial> partial(blocks);
  const double inv = 1.0 / scale;
  for_each_row(
      rows, budgets.spectrum,
      [&](size_t block, int64_t y, std::span<const cd> row) {
        auto& p = partial[block];
        double ss = 0.0;
        double sr = 0.0;
        for (int64_t x = 0; x < amb.M; ++x) {
          const double a = std::abs(row[static_cast<size_t>(x)]) * inv;
          const double sq = a * a;
          ss += power_from_square(sq, s);
          sr += power_from_square(sq, r);
          p.top.push_back(ProfileEntry{Frequency{x, y}, a});
        }
        p.sum_s += ss;
        p.sum_r += sr;
        if (p.top.size() > 2 * keep + 256) {
          std::nth_element(p.top.begin(), p.top.begin() + static_cast<std::ptrdiff_t>(keep),
                           p.top.end(), profile_before);
          p.top.resize(keep);
        }
      },
      kRowsPerBlock);
  EnergyProfile out;
  out.r = r;
  out.s_exp = s;
  long double ss = 0.0L;
  long double sr = 0.0L;
  for (auto& p : partial) {
    ss += p.sum_s;
    sr += p.sum_r;
    out.entries.insert(out.entries.end(), p.top.begin(), p.top.end());
  }
  std::sort(out.entries.begin(), out.entries.end(), profile_before);
  if (out.entries.size() > keep) out.entries.resize(keep);
  out.sum_s = static_cast<double>(ss);
  out.sum_r = static_cast<double>(sr);
  out.full_length = static_cast<uint64_t>(amb.M) * static_cast<uint64_t>(amb.M_squared);
  return out;
}

double reference_energy(const Ambient& amb, int s, const Budgets& budgets) {
  return static_cast<double>(
      spectrum_power_sum(GridFunction::interval(amb.N), amb, s, budgets));
}

EnergyExtraction extract_restricted_energy(const DenseSet& A,
                                           const CoefficientSystem& cs,
                                           const EnergyConfig& cfg) {
  const int s = static_cast<int>(cs.size());
  if (!(cfg.r > 6.0 && cfg.r < s)) {
    throw Error(ErrorCode::kInvalidParams, "energy exponent r must satisfy 6 < r < s");
  }
  if (A.empty() || A.size() == A.N()) {
    throw Error(ErrorCode::kUniformSet,
                A.empty() ? "empty set has zero balanced function"
                          : "full interval has zero balanced function");
  }
  const Ambient& amb = A.ambient();
  EnergyExtraction out;
  out.reference_energy = reference_energy(amb, s, cfg.budgets);
  out.scale = std::pow(out.reference_energy, 1.0 / s);
  const GridFunction f = normalized_balanced_function(A);
  out.profile = build_profile(f, amb, s, cfg.r, cfg.profile_size, out.scale, cfg.budgets);
  out.energy_ratio = out.profile.sum_s;
  if (out.energy_ratio < cfg.energy_floor) {
    throw Error(ErrorCode::kUniformSet,
                "energy ratio " + std::to_string(out.energy_ratio) +
                    " below floor " + std::to_string(cfg.energy_floor));
  }
  LemmaConstants lemma = cfg.lemma;
  lemma.floor = cfg.energy_floor;
  lemma.max_rank = cfg.max_rank;
  const double X = std::max(1.0, out.profile.sum_r);
  out.energy = pigeonhole(out.profile, X, lemma);
  return out;
}

}  // namespace qsys
