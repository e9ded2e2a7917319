#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qsys/budget.hpp"
#include "qsys/core.hpp"

namespace qsys {

struct SolutionCount {
  int64_t total = 0;
  int64_t nontrivial = 0;
  /// M^{-(s-3)} * total.
  double normalized_T = 0.0;
};

/// Exhaustive count over A^s (last coordinate solved from the linear
/// equation, so the work is |A|^{s-1}). Solutions are over Z.
SolutionCount count_bruteforce(const CoefficientSystem& cs, const DenseSet& A,
                               const Budgets& budgets = {});

/// Same quantity by meet-in-the-middle on the key (sum lambda n,
/// sum lambda n^2). `split` is the size of the first half (default ceil(s/2),
/// larger |lambda| first). Non-trivial solutions come from Moebius inversion
/// over set partitions of the coordinates.
SolutionCount count_mitm(const CoefficientSystem& cs, const DenseSet& A,
                         std::optional<size_t> split = std::nullopt,
                         const Budgets& budgets = {});

/// Total solutions in A^k of sum c_i n_i = 0 = sum c_i n_i^2 where the c_i
/// may be zero (free coordinates). Building block of count_mitm.
int64_t count_total_mitm(std::span<const int64_t> coeffs, const DenseSet& A,
                         std::optional<size_t> split = std::nullopt,
                         const Budgets& budgets = {});

/// Solutions of the congruence form (mod M, mod M^2) over A^s, by brute force.
int64_t count_congruence_bruteforce(const CoefficientSystem& cs,
                                    const DenseSet& A,
                                    const Budgets& budgets = {});

/// T(f_1..f_s) = M^{-(s-3)} sum over integer solutions of prod f_i(n_i).
std::complex<double> T_operator(const CoefficientSystem& cs,
                                std::span<const GridFunction> fs,
                                const Ambient& amb,
                                const Budgets& budgets = {});

/// sum_z prod_i S_{f_i}(lambda_i z), the harmonic side of T.
std::complex<double> T_spectral(const CoefficientSystem& cs,
                                std::span<const GridFunction> fs,
                                const Ambient& amb,
                                const Budgets& budgets = {});

struct FourierIdentityReport {
  std::complex<double> enumeration;
  std::complex<double> spectral;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

FourierIdentityReport verify_fourier_identity(const CoefficientSystem& cs,
                                              std::span<const GridFunction> fs,
                                              const Ambient& amb, double tol,
                                              const Budgets& budgets = {});

/// First tuple (in lexicographic search order) with pairwise distinct
/// coordinates in A solving the system, if any.
std::optional<std::vector<int64_t>> has_nontrivial_solution(
    const CoefficientSystem& cs, const DenseSet& A,
    const Budgets& budgets = {});

bool is_solution(const CoefficientSystem& cs, std::span<const int64_t> tuple);
bool is_nontrivial_solution(const CoefficientSystem& cs,
                            std::span<const int64_t> tuple);

/// Adds n = 1..N in order whenever the set stays free of non-trivial
/// solutions.
DenseSet greedy_solution_free(const CoefficientSystem& cs, int64_t N,
                              const Budgets& budgets = {});

struct TrivialBoundRow {
  int64_t N = 0;
  int64_t M = 0;
  int64_t set_size = 0;
  int64_t solutions = 0;
  double T = 0.0;
  double ratio = 0.0;  // T * N / log N
};

struct TrivialBoundReport {
  std::vector<TrivialBoundRow> rows;
  double max_ratio = 0.0;
  double bound = 0.0;
  bool informational = false;  // s < 7: the envelope is not claimed
  bool passed = true;
};

/// For each N, uses [N] when it is already solution-free and otherwise the
/// greedy solution-free subset, then reports T(1_A,..,1_A) N / log N.
TrivialBoundReport trivial_solution_bound_check(
    const CoefficientSystem& cs, std::span<const int64_t> N_grid,
    double bound = 1.0, const Budgets& budgets = {});

}  // namespace qsys
