#include "qsys/increment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsys/diophantine.hpp"
#include "qsys/error.hpp"
#include "qsys/parallel.hpp"

namespace qsys {

namespace {

using cd = std::complex<double>;

bool pow_le(int64_t base, int e, int64_t bound) {
  int128 p = 1;
  for (int i = 0; i < e; ++i) {
    p *= base;
    if (p > bound) return false;
  }
  return true;
}

/// Largest violation-relevant quantity: residue distance numerator over M^2.
int64_t distance_residue(int64_t v, int64_t m2) { return std::min(v, m2 - v); }

}  // namespace

// --- Family ------------------------------------------------------------------

ProgressionFamily::ProgressionFamily(Ambient ambient,
                                     std::vector<Frequency> freqs, int64_t q,
                                     int64_t U, int64_t V,
                                     std::vector<int64_t> r_values)
    : ambient_(ambient),
      freqs_(std::move(freqs)),
      q_(q),
      U_(U),
      V_(V),
      r_(std::move(r_values)) {
  if (q_ < 1 || U_ < 1 || V_ < 1) {
    throw Error(ErrorCode::kInvalidParams, "family needs q, U, V >= 1");
  }
  if (r_.size() != static_cast<size_t>(3 * ambient_.N + 1)) {
    throw Error(ErrorCode::kInvalidParams, "r map must cover [-N, 2N]");
  }
  for (const int64_t r : r_) {
    if (r < 1) throw Error(ErrorCode::kInvalidParams, "r_n must be positive");
  }
}

ProgressionFamily ProgressionFamily::uniform(Ambient ambient,
                                             std::vector<Frequency> freqs,
                                             int64_t q, int64_t U, int64_t V,
                                             int64_t r) {
  return ProgressionFamily(ambient, std::move(freqs), q, U, V,
                           std::vector<int64_t>(static_cast<size_t>(3 * ambient.N + 1), r));
}

int64_t ProgressionFamily::r(int64_t n) const {
  if (n < r_lo() || n > r_hi()) {
    throw Error(ErrorCode::kInvalidParams,
                "r_n requested outside [-N, 2N]: n = " + std::to_string(n));
  }
  return r_[static_cast<size_t>(n - r_lo())];
}

ProgressionFamily::SizeChecks ProgressionFamily::size_checks(
    const LinearizationConfig& cfg) const {
  SizeChecks c;
  const int64_t N = ambient_.N;
  const auto R = static_cast<double>(std::max<size_t>(freqs_.size(), 1));
  c.q_ok = pow_le(q_, 4, N);
  const int64_t r_max = r_.empty() ? 1 : *std::max_element(r_.begin(), r_.end());
  c.r_ok = pow_le(r_max, 4, U_);
  c.P_ok = pow_le(q_ * U_, 2, N);
  c.Q_ok = pow_le(r_max * V_, 2, U_);
  const double u_target = std::pow(static_cast<double>(N), cfg.c / (R * R));
  const double v_target = std::pow(static_cast<double>(U_), cfg.c / R);
  c.U_window = U_ >= u_target && U_ <= 2.0 * u_target;
  c.V_window = V_ >= v_target && V_ <= 2.0 * v_target;
  return c;
}

ProgressionFamily build_family(std::span<const Frequency> freqs,
                               const Ambient& amb,
                               const LinearizationConfig& cfg) {
  if (freqs.empty()) throw Error(ErrorCode::kInvalidParams, "need at least one frequency");
  if (amb.N < 1) throw Error(ErrorCode::kInvalidParams, "N must be positive");
  const auto R = static_cast<double>(freqs.size());
  const int64_t M2 = amb.M_squared;

  std::vector<Rational> betas;
  for (const auto& z : freqs) betas.emplace_back(mod_floor(z.y, M2), M2);
  const int64_t q =
      quadratic_recurrence_search(betas, std::max<int64_t>(1, integer_root(amb.N, 4)),
                                  cfg.recurrence_c)
          .q;
  const auto U = std::max<int64_t>(
      cfg.u_floor, static_cast<int64_t>(std::floor(std::pow(static_cast<double>(amb.N), cfg.c / (R * R)))));
  const auto V = std::max<int64_t>(
      cfg.v_floor, static_cast<int64_t>(std::floor(std::pow(static_cast<double>(U), cfg.c / R))));
  const int64_t Xr = std::max<int64_t>(1, integer_root(U, 4));

  // gamma_{i,n} = q (alpha_i + 2 n beta_i) = q (x_i M + 2 n y_i) / M^2.
  const size_t count = static_cast<size_t>(3 * amb.N + 1);
  std::vector<int64_t> r(count, 1);
  parallel_blocks(count, 256, [&](size_t, size_t begin, size_t end) {
    std::vector<Rational> gammas(freqs.size());
    for (size_t idx = begin; idx < end; ++idx) {
      const int64_t n = static_cast<int64_t>(idx) - amb.N;
      for (size_t i = 0; i < freqs.size(); ++i) {
        const int128 v = static_cast<int128>(q) *
                         (static_cast<int128>(freqs[i].x) * amb.M + 2 * static_cast<int128>(n) * freqs[i].y);
        gammas[i] = Rational(mod_floor(v, M2), M2);
      }
      r[idx] = dirichlet_search(gammas, Xr).q;
    }
  });
  return ProgressionFamily(amb, std::vector<Frequency>(freqs.begin(), freqs.end()),
                           q, U, V, std::move(r));
}

Certificate certify(const ProgressionFamily& fam, const Rational& eps_delta,
                    const LinearizationConfig& cfg) {
  const Ambient& amb = fam.ambient();
  const int64_t N = amb.N;
  const int64_t M2 = amb.M_squared;
  const auto& freqs = fam.freqs();
  const size_t R = freqs.size();
  const int64_t q = fam.q();
  const int64_t U = fam.U();
  const int64_t V = fam.V();

  struct Worst {
    int64_t dist = -1;
    size_t freq = 0;
    int64_t n = 0, m = 0, k = 0;
  };
  struct Partial {
    Worst worst;
    std::vector<int64_t> per_freq;
    uint64_t checked = 0;
  };
  auto check = [&](Partial& p, int64_t n, int64_t a, int64_t b) {
    const int64_t m = q * a;
    const int64_t k = fam.step(n) * b;
    for (size_t i = 0; i < R; ++i) {
      const int64_t v0 = phase_residue(amb, freqs[i], n + m);
      const int64_t v1 = phase_residue(amb, freqs[i], n + m + k);
      const int64_t d = distance_residue(mod_floor(static_cast<int128>(v1) - v0, M2), M2);
      if (d > p.per_freq[i]) p.per_freq[i] = d;
      if (d > p.worst.dist) p.worst = Worst{d, i, n, m, k};
    }
    ++p.checked;
  };

  Certificate cert;
  cert.eps_delta = eps_delta;
  const long double work = static_cast<long double>(N) * U * V * static_cast<long double>(R);
  cert.exhaustive = work <= static_cast<long double>(cfg.full_enumeration_limit);

  std::vector<Partial> partial;
  if (cert.exhaustive) {
    constexpr size_t kBlock = 64;
    partial.resize(block_count(static_cast<size_t>(N), kBlock));
    for (auto& p : partial) p.per_freq.assign(R, 0);
    parallel_blocks(static_cast<size_t>(N), kBlock, [&](size_t block, size_t begin, size_t end) {
      for (size_t idx = begin; idx < end; ++idx) {
        const auto n = static_cast<int64_t>(idx) + 1;
        for (int64_t a = 1; a <= U; ++a)
          for (int64_t b = 1; b <= V; ++b) check(partial[block], n, a, b);
      }
    });
  } else {
    partial.resize(2);
    for (auto& p : partial) p.per_freq.assign(R, 0);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int64_t> dn(1, N), da(1, U), db(1, V);
    for (uint64_t t = 0; t < cfg.samples; ++t) {
      const int64_t n = dn(rng);
      const int64_t a = da(rng);
      const int64_t b = db(rng);
      check(partial[0], n, a, b);
    }
    // Boundary triples: largest m and largest k for every n.
    for (int64_t n = 1; n <= N; ++n) check(partial[1], n, U, V);
  }

  std::vector<int64_t> per_freq(R, 0);
  Worst worst;
  for (const auto& p : partial) {
    cert.triples_checked += p.checked;
    for (size_t i = 0; i < R; ++i) per_freq[i] = std::max(per_freq[i], p.per_freq[i]);
    if (p.worst.dist > worst.dist) worst = p.worst;
  }
  worst.dist = std::max<int64_t>(worst.dist, 0);
  cert.worst_deviation = Rational(worst.dist, M2);
  cert.worst_freq = worst.freq;
  cert.worst_n = worst.n;
  cert.worst_m = worst.m;
  cert.worst_k = worst.k;
  for (const int64_t d : per_freq) cert.worst_per_freq.emplace_back(d, M2);
  cert.certified = cert.worst_deviation <= eps_delta;
  return cert;
}

ProgressionFamily linearize(std::span<const Frequency> freqs,
                            const Ambient& amb, const Rational& eps,
                            const Rational& delta,
                            const LinearizationConfig& cfg) {
  if (eps <= Rational(0) || delta <= Rational(0)) {
    throw Error(ErrorCode::kInvalidParams, "eps and delta must be positive");
  }
  ProgressionFamily fam = build_family(freqs, amb, cfg);
  fam.set_certificate(certify(fam, eps * delta, cfg));
  return fam;
}

void require_certified(const ProgressionFamily& fam) {
  const auto& c = fam.certificate();
  if (c.certified) return;
  throw Error(ErrorCode::kCertificateFailed,
              "phase deviation " + c.worst_deviation.str() + " > " +
                  c.eps_delta.str() + " at freq " + std::to_string(c.worst_freq) +
                  ", n=" + std::to_string(c.worst_n) + ", m=" +
                  std::to_string(c.worst_m) + ", k=" + std::to_string(c.worst_k));
}

bool certified_regime(int64_t N, double eps_delta, int64_t R, double C) {
  if (N < 2 || eps_delta <= 0.0) return false;
  const double r3 = static_cast<double>(R) * static_cast<double>(R) * static_cast<double>(R);
  return std::log(static_cast<double>(N)) >= C * r3 * std::log(2.0 / eps_delta);
}

// --- Smoothing -------------------------------------------------------------

GridFunction smooth(const GridFunction& h, const ProgressionFamily& fam) {
  const int64_t N = fam.ambient().N;
  const int64_t q = fam.q();
  const int64_t U = fam.U();
  const int64_t V = fam.V();
  const auto& exact = h.exact();
  if (exact) {
    std::vector<int64_t> num(static_cast<size_t>(N), 0);
    const auto hN = h.N();
    parallel_blocks(static_cast<size_t>(N), 256, [&](size_t, size_t begin, size_t end) {
      for (size_t idx = begin; idx < end; ++idx) {
        const auto n = static_cast<int64_t>(idx) + 1;
        int64_t acc = 0;
        for (int64_t a = 1; a <= U; ++a) {
          const int64_t step = fam.step(n - q * a);
          for (int64_t b = 1; b <= V; ++b) {
            const int64_t t = n + step * b;
            if (t >= 1 && t <= hN) acc += exact->numerators[static_cast<size_t>(t - 1)];
          }
        }
        num[idx] = acc;
      }
    });
    return GridFunction::from_exact(N, std::move(num), exact->denominator * U * V);
  }
  std::vector<Complex> out(static_cast<size_t>(N));
  const double inv = 1.0 / (static_cast<double>(U) * static_cast<double>(V));
  parallel_blocks(static_cast<size_t>(N), 256, [&](size_t, size_t begin, size_t end) {
    for (size_t idx = begin; idx < end; ++idx) {
      const auto n = static_cast<int64_t>(idx) + 1;
      cd acc{};
      for (int64_t a = 1; a <= U; ++a) {
        const int64_t step = fam.step(n - q * a);
        for (int64_t b = 1; b <= V; ++b) acc += h.at(n + step * b);
      }
      out[idx] = acc * inv;
    }
  });
  return GridFunction(N, std::move(out));
}

SmoothingReport check_smoothing_approximation(const GridFunction& h,
                                              const ProgressionFamily& fam,
                                              double eps, double K) {
  SmoothingReport rep;
  rep.tolerance = K * eps;
  const Ambient& amb = fam.ambient();
  const int64_t N = amb.N;
  const GridFunction ht = smooth(h, fam);
  const double invN = 1.0 / static_cast<double>(N);
  cd plain_a{}, plain_b{};
  for (int64_t n = 1; n <= N; ++n) {
    plain_a += h.at(n);
    plain_b += ht.at(n);
  }
  rep.average_deviation = std::abs(plain_a - plain_b) * invN;
  rep.max_deviation = rep.average_deviation;
  for (const auto& z : fam.freqs()) {
    std::complex<long double> lhs{}, rhs{};
    for (int64_t n = 1; n <= N; ++n) {
      const auto e = std::complex<long double>(unit_root(phase_residue(amb, z, n), amb.M_squared));
      lhs += std::complex<long double>(h.at(n)) * e;
      rhs += std::complex<long double>(ht.at(n)) * e;
    }
    const double dev = static_cast<double>(std::abs(lhs - rhs)) * invN;
    rep.phase_deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  rep.passed = rep.max_deviation <= rep.tolerance;
  return rep;
}

double l2_of_smoothed_balanced(const DenseSet& A,
                               const ProgressionFamily& fam) {
  const int64_t N = fam.ambient().N;
  if (N < 1) return 0.0;
  const GridFunction ft = smooth(normalized_balanced_function(A), fam);
  long double acc = 0.0L;
  for (int64_t n = 1; n <= N; ++n) acc += std::norm(ft.at(n));
  return static_cast<double>(acc / static_cast<long double>(N));
}

// --- Increment -------------------------------------------------------------

bool in_edge_guarded_range(int64_t n, int64_t N) {
  return n >= 1 && n < N &&
         static_cast<int128>(N - n) * (N - n) > static_cast<int128>(N);
}

IncrementResult find_increment(const DenseSet& A, const ProgressionFamily& fam,
                               const Rational& nu, const Rational& eps,
                               double c3) {
  if (eps <= Rational(0)) throw Error(ErrorCode::kInvalidParams, "eps must be positive");
  const int64_t N = A.N();
  if (fam.ambient().N != N) {
    throw Error(ErrorCode::kInvalidParams, "family and set live on different [N]");
  }
  if (A.empty()) throw Error(ErrorCode::kNoWitness, "empty set has no increment");
  const Rational delta = A.density();
  const Rational threshold = (Rational(1) + nu / Rational(2)) * delta;
  const int64_t q = fam.q();
  const int64_t U = fam.U();
  const int64_t V = fam.V();
  const GridFunction mass = smooth(GridFunction::indicator(A), fam);
  Rational best_avg(0);
  for (int64_t n = 1; n <= N; ++n) {
    if (!in_edge_guarded_range(n, N)) continue;
    const Rational avg = *mass.exact_at(n);
    if (avg > best_avg) best_avg = avg;
    if (avg < threshold) continue;
    for (int64_t a = 1; a <= U; ++a) {
      const int64_t step = fam.step(n - q * a);
      const Progression prog{n, step, V};
      if (prog.first() < 1 || prog.last() > N) continue;
      int64_t hits = 0;
      for (int64_t j = 1; j <= V; ++j) hits += A.contains(prog.element(j)) ? 1 : 0;
      const Rational density(hits, V);
      if (density < threshold) continue;
      IncrementResult res;
      res.progression = prog;
      res.new_density = density;
      res.threshold = threshold;
      res.nu = nu.to_double();
      res.R = static_cast<int64_t>(fam.freqs().size());
      res.witness_n = n;
      res.witness_m = q * a;
      const double r3 = std::pow(static_cast<double>(res.R), 3);
      res.length_ok = static_cast<double>(V) >= std::pow(static_cast<double>(N), c3 / r3);
      return res;
    }
  }
  throw Error(ErrorCode::kNoWitness,
              "no progression reaches density " + threshold.str() +
                  "; best smoothed density on E was " + best_avg.str());
}

// --- Regularity calculus ---------------------------------------------------

double regularity_shift_gap(const GridFunction& f, int64_t q, int64_t N0,
                            int64_t shift) {
  cd a{}, b{};
  for (int64_t j = 1; j <= N0; ++j) {
    a += f.at(q * j + shift);
    b += f.at(q * j);
  }
  return std::abs(a - b) / static_cast<double>(N0);
}

double regularity_subaverage_gap(const GridFunction& f, int64_t q, int64_t N0,
                                 int64_t N1) {
  cd inner{}, base{};
  for (int64_t j = 1; j <= N0; ++j) {
    base += f.at(q * j);
    for (int64_t k = 1; k <= N1; ++k) inner += f.at(q * j + q * k);
  }
  return std::abs(inner / static_cast<double>(N1) - base) / static_cast<double>(N0);
}

}  // namespace qsys
