// Independent reference implementations used by the tests. They share no
// code with the library beyond the basic value types.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "qsys/core.hpp"

namespace oracle {

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// S_f(x, y) by direct summation, phases reduced in long double.
inline std::complex<double> S(const std::vector<std::complex<double>>& f, int64_t M,
                              int64_t x, int64_t y) {
  const long double M2 = static_cast<long double>(M) * M;
  std::complex<long double> acc{};
  for (size_t i = 0; i < f.size(); ++i) {
    const auto n = static_cast<long double>(i + 1);
    long double t = std::fmod(x * n * M + std::fmod(static_cast<long double>(y) * std::fmod(n * n, M2), M2), M2) / M2;
    const long double a = 2.0L * std::numbers::pi_v<long double> * t;
    acc += std::complex<long double>(f[i]) * std::complex<long double>(std::cos(a), std::sin(a));
  }
  return std::complex<double>(acc / static_cast<long double>(M));
}

/// Full s-fold enumeration over A^s.
struct Counts {
  int64_t total = 0;
  int64_t nontrivial = 0;
};

inline Counts count(const std::vector<int64_t>& lambdas, const std::vector<int64_t>& A) {
  Counts c;
  const size_t s = lambdas.size();
  if (A.empty()) return c;
  std::vector<size_t> idx(s, 0);
  while (true) {
    int64_t lin = 0, quad = 0;
    for (size_t i = 0; i < s; ++i) {
      const int64_t n = A[idx[i]];
      lin += lambdas[i] * n;
      quad += lambdas[i] * n * n;
    }
    if (lin == 0 && quad == 0) {
      ++c.total;
      bool distinct = true;
      for (size_t i = 0; i < s; ++i)
        for (size_t j = i + 1; j < s; ++j)
          if (idx[i] == idx[j]) distinct = false;
      if (distinct) ++c.nontrivial;
    }
    size_t t = 0;
    while (t < s && ++idx[t] == A.size()) idx[t++] = 0;
    if (t == s) break;
  }
  return c;
}

/// Weighted sum over integer solutions of prod f_i(n_i), full enumeration.
inline std::complex<double> weighted(const std::vector<int64_t>& lambdas,
                                     const std::vector<std::vector<std::complex<double>>>& fs) {
  const size_t s = lambdas.size();
  const size_t N = fs[0].size();
  std::vector<size_t> idx(s, 0);
  std::complex<long double> acc{};
  while (true) {
    int64_t lin = 0, quad = 0;
    for (size_t i = 0; i < s; ++i) {
      const auto n = static_cast<int64_t>(idx[i] + 1);
      lin += lambdas[i] * n;
      quad += lambdas[i] * n * n;
    }
    if (lin == 0 && quad == 0) {
      std::complex<long double> w = 1;
      for (size_t i = 0; i < s; ++i) w *= std::complex<long double>(fs[i][idx[i]]);
      acc += w;
    }
    size_t t = 0;
    while (t < s && ++idx[t] == N) idx[t++] = 0;
    if (t == s) break;
  }
  return std::complex<double>(acc);
}

/// ||V||_p^p by brute force over [N]^p.
inline int64_t moment(int64_t N, int p) {
  const int k = p / 2;
  std::map<std::pair<int64_t, int64_t>, int64_t> counts;
  std::vector<int64_t> t(static_cast<size_t>(k), 1);
  while (true) {
    int64_t a = 0, b = 0;
    for (const int64_t v : t) {
      a += v;
      b += v * v;
    }
    ++counts[{a, b}];
    size_t i = 0;
    while (i < t.size() && ++t[i] > N) t[i++] = 1;
    if (i == t.size()) break;
  }
  int64_t total = 0;
  for (const auto& [key, c] : counts) total += c * c;
  return total;
}

/// ||k * a / b|| as an exact fraction (num, den) with den = b.
inline std::pair<__int128, __int128> dist(__int128 k, int64_t a, int64_t b) {
  __int128 v = ((k % b) * (a % b)) % b;
  if (v < 0) v += b;
  return {std::min(v, static_cast<__int128>(b) - v), b};
}

/// Argmin (smallest q) of max_i ||mult(q) * g_i|| over q in [1, X]; the
/// result is reported as (q, num, den) with num/den in lowest terms.
template <class Mult>
inline std::tuple<int64_t, int64_t, int64_t> recur(const std::vector<std::pair<int64_t, int64_t>>& g,
                                                   int64_t X, Mult mult) {
  int64_t best_q = 0;
  __int128 bn = 0, bd = 1;
  for (int64_t q = 1; q <= X; ++q) {
    __int128 wn = 0, wd = 1;
    for (const auto& [a, b] : g) {
      const auto [n, d] = dist(mult(q), a, b);
      if (n * wd > wn * d) {
        wn = n;
        wd = d;
      }
    }
    if (best_q == 0 || wn * bd < bn * wd) {
      best_q = q;
      bn = wn;
      bd = wd;
    }
  }
  const int64_t g0 = std::gcd(static_cast<int64_t>(bn), static_cast<int64_t>(bd));
  return {best_q, static_cast<int64_t>(bn) / g0, static_cast<int64_t>(bd) / g0};
}

inline std::vector<int64_t> random_subset(int64_t N, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<int64_t> out;
  for (int64_t n = 1; n <= N; ++n)
    if (coin(rng)) out.push_back(n);
  return out;
}

}  // namespace oracle
