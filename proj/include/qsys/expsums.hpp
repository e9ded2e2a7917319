#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "qsys/core.hpp"
#include "qsys/fft.hpp"

namespace qsys {

/// z = (x, y) in Z_M x Z_{M^2}.
struct Frequency {
  int64_t x = 0;
  int64_t y = 0;

  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

/// Frequency reduced into canonical range for `amb`.
Frequency normalize_frequency(const Ambient& amb, int64_t x, int64_t y);

/// lambda * z.
Frequency scale_frequency(const Ambient& amb, Frequency z, int64_t lambda);

/// Residue v with phi_z(n) = v / M^2 mod 1, where phi_z(n) = xn/M + yn^2/M^2.
int64_t phase_residue(const Ambient& amb, Frequency z, int64_t n);

/// Exact phase value phi_z(n) mod 1 in [0, 1).
Rational phase_value(const Ambient& amb, Frequency z, int64_t n);

/// e(v / m) for an exact residue v.
std::complex<double> unit_root(int64_t v, int64_t m);

/// Quadratic phase n -> phi_z(n) attached to an ambient.
struct QuadraticPhase {
  Frequency freq;
  Ambient ambient;

  int64_t residue(int64_t n) const { return phase_residue(ambient, freq, n); }
  Rational value(int64_t n) const { return phase_value(ambient, freq, n); }
  Rational alpha() const { return Rational(freq.x, ambient.M); }
  Rational beta() const { return Rational(freq.y, ambient.M_squared); }
};

/// S_f(z) = E_{n in [M]} f(n) e(xn/M + yn^2/M^2).
std::complex<double> eval_S(const GridFunction& f, const Ambient& amb,
                            Frequency z);

/// V_f(alpha, beta) = sum_n f(n) e(alpha n + beta n^2), unnormalized.
std::complex<double> eval_V(const GridFunction& f, const Rational& alpha,
                            const Rational& beta);

/// ||phi_z(n1) - phi_z(n2)||, exact.
Rational phase_distance(const Ambient& amb, Frequency z, int64_t n1,
                        int64_t n2);

enum class RowMethod { kAuto, kDirect, kChirp };

/// Computes rows x -> S_f(x, y) of the transform for fixed y. Phase tables
/// are built once and shared; row() is const and thread-safe.
class SpectrumRows {
 public:
  SpectrumRows(const GridFunction& f, const Ambient& amb,
               RowMethod method = RowMethod::kAuto);
  ~SpectrumRows();
  SpectrumRows(SpectrumRows&&) noexcept;

  const Ambient& ambient() const noexcept { return amb_; }
  RowMethod method() const noexcept { return method_; }

  /// out has length M; out[x] = S_f(x, y).
  void row(int64_t y, std::span<std::complex<double>> out) const;

 private:
  std::complex<double> quad_unit(int64_t v) const;

  Ambient amb_;
  RowMethod method_;
  std::vector<std::complex<double>> f_;        // f(1..N)
  std::vector<std::complex<double>> lin_;      // e(k/M)
  std::vector<std::complex<double>> quad_;     // e(k/M^2), may be empty
  std::unique_ptr<ChirpDft> chirp_;
};

/// Visits every row y in [0, M^2) in parallel; visit(y, row) must only touch
/// per-row or per-block state. Throws kBudgetExceeded if M^3 > budget.
void for_each_row(const SpectrumRows& rows, uint64_t budget,
                  const std::function<void(size_t block, int64_t y,
                                           std::span<const std::complex<double>>)>&
                      visit,
                  size_t rows_per_block = 64);

struct SpectrumEntry {
  Frequency z;
  std::complex<double> value;
  double magnitude = 0.0;
};

/// Either the full table (M * M^2 entries, index y*M + x) or a top-K list
/// sorted by non-increasing magnitude, ties broken by (x, y).
struct Spectrum {
  Ambient ambient;
  std::vector<std::complex<double>> entries;
  std::vector<SpectrumEntry> top;

  bool is_full() const noexcept {
    return !entries.empty() &&
           entries.size() == static_cast<size_t>(ambient.M * ambient.M_squared);
  }
  std::complex<double> at(Frequency z) const {
    return entries[static_cast<size_t>(z.y * ambient.M + z.x)];
  }
};

Spectrum full_spectrum(const GridFunction& f, const Ambient& amb,
                       uint64_t budget, RowMethod method = RowMethod::kAuto);

Spectrum top_spectrum(const GridFunction& f, const Ambient& amb, size_t k,
                      uint64_t budget);

/// CSV rows (x, y, re, im, magnitude); full spectra dump top-K by default.
void write_spectrum_csv(std::ostream& out, const Spectrum& spec,
                        size_t top_k = 100);

}  // namespace qsys
