#include "qsys/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "qsys/error.hpp"
#include "qsys/expsums.hpp"
#include "qsys/parallel.hpp"

namespace qsys {

namespace {

using Key = std::pair<int64_t, int64_t>;

template <class W>
using Domain = std::vector<std::pair<int64_t, W>>;

template <class W>
std::vector<std::pair<Key, W>> half_table(std::span<const size_t> coords,
                                          std::span<const int64_t> coeffs,
                                          const std::vector<Domain<W>>& domains,
                                          bool negate) {
  std::vector<std::pair<Key, W>> table;
  if (coords.empty()) {
    table.push_back({Key{0, 0}, W{1}});
    return table;
  }
  size_t expected = 1;
  for (const size_t c : coords) expected *= std::max<size_t>(domains[c].size(), 1);
  table.reserve(expected);
  // Odometer over the product of domains.
  std::vector<size_t> idx(coords.size(), 0);
  for (const size_t c : coords) {
    if (domains[c].empty()) return {};
  }
  while (true) {
    int64_t lin = 0;
    int64_t quad = 0;
    W w{1};
    for (size_t t = 0; t < coords.size(); ++t) {
      const auto& [n, weight] = domains[coords[t]][idx[t]];
      const int64_t c = coeffs[coords[t]];
      lin += c * n;
      quad += c * n * n;
      w *= weight;
    }
    table.push_back(negate ? std::pair<Key, W>{Key{-lin, -quad}, w}
                           : std::pair<Key, W>{Key{lin, quad}, w});
    size_t t = 0;
    while (t < coords.size()) {
      if (++idx[t] < domains[coords[t]].size()) break;
      idx[t] = 0;
      ++t;
    }
    if (t == coords.size()) break;
  }
  std::sort(table.begin(), table.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Aggregate equal keys.
  size_t out = 0;
  for (size_t i = 0; i < table.size();) {
    size_t j = i;
    W acc{};
    while (j < table.size() && table[j].first == table[i].first) acc += table[j++].second;
    table[out++] = {table[i].first, acc};
    i = j;
  }
  table.resize(out);
  return table;
}

/// sum over solutions of prod w_i(n_i), keyed join of two half tables.
template <class W>
W mitm_weighted_sum(std::span<const int64_t> coeffs,
                    const std::vector<Domain<W>>& domains,
                    std::optional<size_t> split, const Budgets& budgets) {
  std::vector<size_t> active;
  W free_factor{1};
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) {
      active.push_back(i);
    } else {
      W total{};
      for (const auto& [n, w] : domains[i]) total += w;
      free_factor *= total;
    }
  }
  if (active.empty()) return free_factor;
  std::stable_sort(active.begin(), active.end(), [&](size_t a, size_t b) {
    return std::abs(coeffs[a]) > std::abs(coeffs[b]);
  });
  size_t left = split.value_or((active.size() + 1) / 2);
  left = std::min(left, active.size());
  const std::span<const size_t> lhs(active.data(), left);
  const std::span<const size_t> rhs(active.data() + left, active.size() - left);
  auto half_cost = [&](std::span<const size_t> part) {
    long double c = 1;
    for (const size_t i : part) c *= static_cast<long double>(std::max<size_t>(domains[i].size(), 1));
    return c;
  };
  require_budget(half_cost(lhs) + half_cost(rhs), budgets.enumeration,
                 "meet-in-the-middle half tables");
  const auto L = half_table<W>(lhs, coeffs, domains, false);
  const auto R = half_table<W>(rhs, coeffs, domains, true);
  W acc{};
  size_t i = 0;
  size_t j = 0;
  while (i < L.size() && j < R.size()) {
    if (L[i].first < R[j].first) {
      ++i;
    } else if (R[j].first < L[i].first) {
      ++j;
    } else {
      acc += L[i].second * R[j].second;
      ++i;
      ++j;
    }
  }
  return acc * free_factor;
}

Domain<int64_t> set_domain(const DenseSet& A) {
  Domain<int64_t> d;
  for (const int64_t n : A.members()) d.push_back({n, 1});
  return d;
}

/// Calls fn(blocks) for every set partition of {0..s-1} as a vector of
/// blocks (restricted growth strings).
template <class Fn>
void for_each_partition(size_t s, Fn&& fn) {
  std::vector<size_t> a(s, 0);
  std::vector<size_t> maxes(s, 0);
  while (true) {
    size_t nblocks = 0;
    for (const size_t v : a) nblocks = std::max(nblocks, v + 1);
    std::vector<std::vector<size_t>> blocks(nblocks);
    for (size_t i = 0; i < s; ++i) blocks[a[i]].push_back(i);
    fn(blocks);
    // Next restricted growth string: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    size_t i = s;
    while (i-- > 1) {
      const size_t bound = maxes[i - 1] + 1;
      if (a[i] < bound) {
        ++a[i];
        maxes[i] = std::max(maxes[i - 1], a[i]);
        for (size_t k = i + 1; k < s; ++k) {
          a[k] = 0;
          maxes[k] = maxes[i];
        }
        break;
      }
    }
    if (i == 0 || s <= 1) break;
  }
}

double normalization(const CoefficientSystem& cs, const Ambient& amb) {
  return std::pow(static_cast<double>(amb.M),
                  -(static_cast<double>(cs.size()) - 3.0));
}

}  // namespace

bool is_solution(const CoefficientSystem& cs, std::span<const int64_t> tuple) {
  if (tuple.size() != cs.size()) return false;
  int128 lin = 0;
  int128 quad = 0;
  for (size_t i = 0; i < tuple.size(); ++i) {
    lin += static_cast<int128>(cs.lambdas[i]) * tuple[i];
    quad += static_cast<int128>(cs.lambdas[i]) * tuple[i] * tuple[i];
  }
  return lin == 0 && quad == 0;
}

bool is_nontrivial_solution(const CoefficientSystem& cs,
                            std::span<const int64_t> tuple) {
  if (!is_solution(cs, tuple)) return false;
  for (size_t i = 0; i < tuple.size(); ++i) {
    for (size_t j = i + 1; j < tuple.size(); ++j) {
      if (tuple[i] == tuple[j]) return false;
    }
  }
  return true;
}

SolutionCount count_bruteforce(const CoefficientSystem& cs, const DenseSet& A,
                               const Budgets& budgets) {
  const size_t s = cs.size();
  const auto members = A.members();
  require_budget(power_estimate(static_cast<long double>(members.size()),
                                static_cast<int>(s) - 1),
                 budgets.enumeration, "brute-force count (|A|^{s-1})");
  SolutionCount out;
  if (!members.empty() && s >= 1) {
    std::vector<int64_t> tuple(s, 0);
    const int64_t last = cs.lambdas[s - 1];
    auto rec = [&](auto&& self, size_t depth, int64_t lin, int64_t quad) -> void {
      if (depth == s - 1) {
        if (lin % last != 0) return;
        const int64_t n = -lin / last;
        if (!A.contains(n)) return;
        if (quad + last * n * n != 0) return;
        tuple[s - 1] = n;
        ++out.total;
        bool distinct = true;
        for (size_t i = 0; i < s && distinct; ++i) {
          for (size_t j = i + 1; j < s; ++j) {
            if (tuple[i] == tuple[j]) {
              distinct = false;
              break;
            }
          }
        }
        if (distinct) ++out.nontrivial;
        return;
      }
      const int64_t l = cs.lambdas[depth];
      for (const int64_t n : members) {
        tuple[depth] = n;
        self(self, depth + 1, lin + l * n, quad + l * n * n);
      }
    };
    rec(rec, 0, 0, 0);
  }
  out.normalized_T = static_cast<double>(out.total) *
                     normalization(cs, choose_modulus(cs, std::max<int64_t>(A.N(), 1)));
  return out;
}

int64_t count_total_mitm(std::span<const int64_t> coeffs, const DenseSet& A,
                         std::optional<size_t> split, const Budgets& budgets) {
  const auto domain = set_domain(A);
  std::vector<Domain<int64_t>> domains(coeffs.size(), domain);
  return mitm_weighted_sum<int64_t>(coeffs, domains, split, budgets);
}

SolutionCount count_mitm(const CoefficientSystem& cs, const DenseSet& A,
                         std::optional<size_t> split, const Budgets& budgets) {
  SolutionCount out;
  out.total = count_total_mitm(cs.lambdas, A, split, budgets);
  // Moebius inversion on the partition lattice:
  //   #distinct = sum_pi mu(pi) #(tuples constant on the blocks of pi),
  //   mu(pi) = prod_B (-1)^{|B|-1} (|B|-1)!.
  int64_t nontrivial = 0;
  for_each_partition(cs.size(), [&](const std::vector<std::vector<size_t>>& blocks) {
    int64_t mu = 1;
    std::vector<int64_t> merged;
    merged.reserve(blocks.size());
    for (const auto& b : blocks) {
      int64_t c = 0;
      for (const size_t i : b) c += cs.lambdas[i];
      merged.push_back(c);
      int64_t f = 1;
      for (size_t k = 2; k < b.size(); ++k) f *= static_cast<int64_t>(k);
      mu *= (b.size() % 2 == 1 ? 1 : -1) * f;
    }
    const int64_t count = blocks.size() == cs.size()
                              ? out.total
                              : count_total_mitm(merged, A, std::nullopt, budgets);
    nontrivial += mu * count;
  });
  out.nontrivial = nontrivial;
  out.normalized_T = static_cast<double>(out.total) *
                     normalization(cs, choose_modulus(cs, std::max<int64_t>(A.N(), 1)));
  return out;
}

int64_t count_congruence_bruteforce(const CoefficientSystem& cs,
                                    const DenseSet& A, const Budgets& budgets) {
  const size_t s = cs.size();
  const Ambient amb = choose_modulus(cs, A.N());
  const int64_t M = amb.M;
  const int64_t M2 = amb.M_squared;
  const auto members = A.members();
  require_budget(power_estimate(static_cast<long double>(members.size()),
                                static_cast<int>(s) - 1),
                 budgets.enumeration, "congruence count");
  // Inverse of lambda_s mod M (M prime, |lambda_s| < M).
  const int64_t last = mod_floor(cs.lambdas[s - 1], M);
  int64_t inv = 1;
  for (int64_t e = M - 2, b = last; e > 0; e >>= 1) {
    if (e & 1) inv = static_cast<int64_t>(static_cast<int128>(inv) * b % M);
    b = static_cast<int64_t>(static_cast<int128>(b) * b % M);
  }
  int64_t total = 0;
  if (members.empty()) return 0;
  auto rec = [&](auto&& self, size_t depth, int64_t lin, int64_t quad) -> void {
    if (depth == s - 1) {
      const int64_t n = mod_floor(static_cast<int128>(-lin) * inv, M);
      if (!A.contains(n)) return;
      if (mod_floor(static_cast<int128>(quad) + static_cast<int128>(cs.lambdas[s - 1]) * n * n, M2) == 0) {
        ++total;
      }
      return;
    }
    const int64_t l = cs.lambdas[depth];
    for (const int64_t n : members) {
      self(self, depth + 1, mod_floor(static_cast<int128>(lin) + l * n, M),
           mod_floor(static_cast<int128>(quad) + static_cast<int128>(l) * n * n, M2));
    }
  };
  rec(rec, 0, 0, 0);
  return total;
}

std::complex<double> T_operator(const CoefficientSystem& cs,
                                std::span<const GridFunction> fs,
                                const Ambient& amb, const Budgets& budgets) {
  if (fs.size() != cs.size()) {
    throw Error(ErrorCode::kInvalidParams, "need one function per coefficient");
  }
  std::vector<Domain<std::complex<double>>> domains(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].N() > amb.N) {
      throw Error(ErrorCode::kInvalidParams, "function support exceeds [N]");
    }
    for (int64_t n = 1; n <= fs[i].N(); ++n) {
      const auto v = fs[i].at(n);
      if (v != std::complex<double>{}) domains[i].push_back({n, v});
    }
  }
  const auto sum = mitm_weighted_sum<std::complex<double>>(cs.lambdas, domains,
                                                           std::nullopt, budgets);
  return sum * normalization(cs, amb);
}

namespace {

double T_mass(const CoefficientSystem& cs, std::span<const GridFunction> fs,
              const Ambient& amb, const Budgets& budgets) {
  std::vector<Domain<double>> domains(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) {
    for (int64_t n = 1; n <= fs[i].N(); ++n) {
      const double v = std::abs(fs[i].at(n));
      if (v != 0.0) domains[i].push_back({n, v});
    }
  }
  return mitm_weighted_sum<double>(cs.lambdas, domains, std::nullopt, budgets) *
         normalization(cs, amb);
}

bool same_function(const GridFunction& a, const GridFunction& b) {
  return a.N() == b.N() && std::equal(a.values().begin(), a.values().end(),
                                      b.values().begin());
}

}  // namespace

std::complex<double> T_spectral(const CoefficientSystem& cs,
                                std::span<const GridFunction> fs,
                                const Ambient& amb, const Budgets& budgets) {
  const size_t s = cs.size();
  if (fs.size() != s) {
    throw Error(ErrorCode::kInvalidParams, "need one function per coefficient");
  }
  require_budget(power_estimate(static_cast<long double>(amb.M), 3) *
                     static_cast<long double>(s),
                 budgets.spectrum, "spectral side of the counting identity");
  // Distinct functions share one row engine.
  std::vector<size_t> fidx(s);
  std::vector<const GridFunction*> uniq;
  for (size_t i = 0; i < s; ++i) {
    size_t k = 0;
    while (k < uniq.size() && !same_function(*uniq[k], fs[i])) ++k;
    if (k == uniq.size()) uniq.push_back(&fs[i]);
    fidx[i] = k;
  }
  std::vector<SpectrumRows> engines;
  engines.reserve(uniq.size());
  for (const auto* f : uniq) engines.emplace_back(*f, amb);

  const int64_t M = amb.M;
  const int64_t M2 = amb.M_squared;
  std::vector<int64_t> lam_x(s);
  for (size_t i = 0; i < s; ++i) lam_x[i] = mod_floor(cs.lambdas[i], M);
  // x_i index table: lambda_i x mod M for every x.
  std::vector<std::vector<int32_t>> xmap(s, std::vector<int32_t>(static_cast<size_t>(M)));
  for (size_t i = 0; i < s; ++i) {
    for (int64_t x = 0; x < M; ++x) {
      xmap[i][static_cast<size_t>(x)] = static_cast<int32_t>(lam_x[i] * x % M);
    }
  }
  constexpr size_t kRowsPerBlock = 32;
  const auto rows_total = static_cast<size_t>(M2);
  std::vector<std::complex<long double>> partial(block_count(rows_total, kRowsPerBlock));
  parallel_blocks(rows_total, kRowsPerBlock, [&](size_t block, size_t begin, size_t end) {
    std::vector<std::vector<std::complex<double>>> rows(s, std::vector<std::complex<double>>(static_cast<size_t>(M)));
    std::vector<std::pair<size_t, int64_t>> computed(s);
    std::complex<long double> acc{};
    for (size_t y = begin; y < end; ++y) {
      std::vector<size_t> source(s);
      for (size_t i = 0; i < s; ++i) {
        const int64_t yi = mod_floor(static_cast<int128>(cs.lambdas[i]) * static_cast<int64_t>(y), M2);
        computed[i] = {fidx[i], yi};
        size_t k = 0;
        while (k < i && computed[k] != computed[i]) ++k;
        if (k == i) engines[fidx[i]].row(yi, rows[i]);
        source[i] = k;
      }
      std::complex<double> row_acc{};
      for (int64_t x = 0; x < M; ++x) {
        std::complex<double> prod = 1.0;
        for (size_t i = 0; i < s; ++i) {
          prod *= rows[source[i]][static_cast<size_t>(xmap[i][static_cast<size_t>(x)])];
        }
        row_acc += prod;
      }
      acc += std::complex<long double>(row_acc);
    }
    partial[block] = acc;
  });
  std::complex<long double> total{};
  for (const auto& p : partial) total += p;
  return std::complex<double>(total);
}

FourierIdentityReport verify_fourier_identity(const CoefficientSystem& cs,
                                              std::span<const GridFunction> fs,
                                              const Ambient& amb, double tol,
                                              const Budgets& budgets) {
  FourierIdentityReport r;
  r.tolerance = tol;
  r.enumeration = T_operator(cs, fs, amb, budgets);
  r.spectral = T_spectral(cs, fs, amb, budgets);
  r.abs_deviation = std::abs(r.enumeration - r.spectral);
  double denom = std::max(std::abs(r.enumeration), std::abs(r.spectral));
  // Exact cancellation on the enumeration side leaves only rounding noise on
  // the spectral side; measure it against the absolute solution mass.
  const double mass = T_mass(cs, fs, amb, budgets);
  if (denom < 1e-12 * mass) denom = mass;
  r.rel_deviation = denom > 0.0 ? r.abs_deviation / denom : 0.0;
  r.passed = r.rel_deviation <= tol;
  return r;
}

std::optional<std::vector<int64_t>> has_nontrivial_solution(
    const CoefficientSystem& cs, const DenseSet& A, const Budgets& budgets) {
  const size_t s = cs.size();
  const auto members = A.members();
  if (members.size() < s) return std::nullopt;
  long double work = 1;
  for (size_t i = 0; i + 1 < s; ++i) work *= static_cast<long double>(members.size() - i);
  require_budget(work, budgets.enumeration, "non-trivial solution search");
  std::vector<int64_t> tuple(s, 0);
  std::vector<uint8_t> used(static_cast<size_t>(A.N()) + 1, 0);
  const int64_t last = cs.lambdas[s - 1];
  auto rec = [&](auto&& self, size_t depth, int64_t lin, int64_t quad) -> bool {
    if (depth == s - 1) {
      if (lin % last != 0) return false;
      const int64_t n = -lin / last;
      if (!A.contains(n) || used[static_cast<size_t>(n)]) return false;
      if (quad + last * n * n != 0) return false;
      tuple[s - 1] = n;
      return true;
    }
    const int64_t l = cs.lambdas[depth];
    for (const int64_t n : members) {
      if (used[static_cast<size_t>(n)]) continue;
      used[static_cast<size_t>(n)] = 1;
      tuple[depth] = n;
      const bool found = self(self, depth + 1, lin + l * n, quad + l * n * n);
      used[static_cast<size_t>(n)] = 0;
      if (found) return true;
    }
    return false;
  };
  if (rec(rec, 0, 0, 0)) return tuple;
  return std::nullopt;
}

DenseSet greedy_solution_free(const CoefficientSystem& cs, int64_t N,
                              const Budgets& budgets) {
  const Ambient amb = choose_modulus(cs, N);
  std::vector<int64_t> members;
  for (int64_t n = 1; n <= N; ++n) {
    members.push_back(n);
    if (has_nontrivial_solution(cs, DenseSet(amb, members), budgets)) {
      members.pop_back();
    }
  }
  return DenseSet(amb, members);
}

TrivialBoundReport trivial_solution_bound_check(const CoefficientSystem& cs,
                                                std::span<const int64_t> N_grid,
                                                double bound,
                                                const Budgets& budgets) {
  TrivialBoundReport report;
  report.bound = bound;
  report.informational = cs.size() < 7;
  for (const int64_t N : N_grid) {
    const Ambient amb = choose_modulus(cs, N);
    DenseSet A = DenseSet::interval(amb);
    if (has_nontrivial_solution(cs, A, budgets)) {
      A = greedy_solution_free(cs, N, budgets);
    }
    TrivialBoundRow row;
    row.N = N;
    row.M = amb.M;
    row.set_size = A.size();
    row.solutions = count_total_mitm(cs.lambdas, A, std::nullopt, budgets);
    row.T = static_cast<double>(row.solutions) * normalization(cs, amb);
    row.ratio = N >= 2 ? row.T * static_cast<double>(N) / std::log(static_cast<double>(N))
                       : 0.0;
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    report.rows.push_back(row);
  }
  report.passed = report.informational || report.max_ratio <= bound;
  return report;
}

}  // namespace qsys
