#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qsys/rational.hpp"

namespace qsys {

using Complex = std::complex<double>;

/// Coefficients of the translation-invariant pair of equations
///   sum lambda_i n_i = 0,   sum lambda_i n_i^2 = 0.
struct CoefficientSystem {
  std::vector<int64_t> lambdas;
  int64_t abs_sum = 0;

  size_t size() const noexcept { return lambdas.size(); }
};

/// Validates nonzero entries, zero sum, and at least two coefficients of
/// each sign. Throws Error with kZeroCoefficient / kNonzeroSum /
/// kSignConditionViolated.
CoefficientSystem validate_coefficients(std::span<const int64_t> lambdas);

/// Additionally requires s >= 7, the range in which the full iteration applies.
void require_full_theorem_range(const CoefficientSystem& cs);

/// Interval [N] = {1..N} embedded in Z_M with M prime.
struct Ambient {
  int64_t N = 0;
  int64_t M = 0;
  int64_t M_squared = 0;
};

bool is_prime(int64_t n);

/// M = smallest prime >= 2 * abs_sum * N.
Ambient choose_modulus(const CoefficientSystem& cs, int64_t N);

/// Arithmetic progression {offset + step * j : j = 1..length}.
struct Progression {
  int64_t offset = 0;
  int64_t step = 1;
  int64_t length = 0;

  int64_t element(int64_t j) const { return offset + step * j; }
  int64_t first() const { return element(1); }
  int64_t last() const { return element(length); }
};

/// Subset of [N] stored as a membership bitmap.
class DenseSet {
 public:
  DenseSet() = default;
  DenseSet(Ambient ambient, std::span<const int64_t> members);

  static DenseSet interval(Ambient ambient);

  const Ambient& ambient() const noexcept { return ambient_; }
  int64_t N() const noexcept { return ambient_.N; }
  int64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool contains(int64_t n) const noexcept {
    return n >= 1 && n <= ambient_.N && member_[static_cast<size_t>(n)] != 0;
  }
  /// |A| / N; zero for N = 0.
  Rational density() const;
  std::vector<int64_t> members() const;

  friend bool operator==(const DenseSet& a, const DenseSet& b) {
    return a.ambient_.N == b.ambient_.N && a.member_ == b.member_;
  }

 private:
  Ambient ambient_{};
  std::vector<uint8_t> member_;  // index 0 unused
  int64_t size_ = 0;
};

/// A' = { n in [L] : u + q n in A } for Q = u + q[L] inside [N].
DenseSet affine_rescale(const DenseSet& A, const CoefficientSystem& cs,
                        const Progression& Q);

/// Function on Z supported in [N]. Floating values are always present; when
/// the function is real-rational the exact numerators over a common
/// denominator are kept as well.
class GridFunction {
 public:
  struct Exact {
    std::vector<int64_t> numerators;  // index n - 1
    int64_t denominator = 1;
  };

  GridFunction() = default;
  GridFunction(int64_t N, std::vector<Complex> values);
  static GridFunction from_exact(int64_t N, std::vector<int64_t> numerators,
                                 int64_t denominator);
  static GridFunction zero(int64_t N);
  static GridFunction indicator(const DenseSet& A);
  static GridFunction interval(int64_t N);

  int64_t N() const noexcept { return N_; }
  Complex at(int64_t n) const noexcept {
    return (n >= 1 && n <= N_) ? values_[static_cast<size_t>(n - 1)]
                               : Complex{};
  }
  std::span<const Complex> values() const noexcept { return values_; }
  const std::optional<Exact>& exact() const noexcept { return exact_; }
  std::optional<Rational> exact_at(int64_t n) const;

  double sup_norm() const;
  /// sum over [N] of |f|^2.
  double sum_squares() const;
  GridFunction scaled(double factor) const;
  GridFunction conjugate() const;

 private:
  int64_t N_ = 0;
  std::vector<Complex> values_;
  std::optional<Exact> exact_;
};

/// f_A = 1_A - delta 1_[N], with exact numerators over denominator N.
GridFunction balanced_function(const DenseSet& A);

/// f_A / delta; the zero function when A is empty.
GridFunction normalized_balanced_function(const DenseSet& A);

/// Set files: a JSON header line {"N": .., "lambdas": [..]} followed by one
/// member per line.
struct SetFile {
  CoefficientSystem cs;
  DenseSet set;
};

void write_set_file(std::ostream& out, const CoefficientSystem& cs,
                    const DenseSet& A);
SetFile read_set_file(std::istream& in);

}  // namespace qsys
