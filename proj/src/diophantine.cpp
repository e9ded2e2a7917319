#include "qsys/diophantine.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsys/error.hpp"

namespace qsys {

namespace {

/// Distance to the nearest integer of (k * num / den), as a fraction
/// dist_num / den with 0 <= dist_num <= den / 2.
struct Dist {
  int128 num = 0;
  int128 den = 1;
};

bool less(const Dist& a, const Dist& b) { return a.num * b.den < b.num * a.den; }

Dist dist_of(int128 k, const Rational& g) {
  const int128 den = g.den();
  int128 v = (k % den) * (static_cast<int128>(g.num()) % den) % den;
  if (v < 0) v += den;
  return Dist{std::min(v, den - v), den};
}

template <class Multiplier>
RecurrenceResult search(std::span<const Rational> gammas, int64_t X,
                        Multiplier&& multiplier) {
  if (X < 1) throw Error(ErrorCode::kInvalidParams, "search range X must be >= 1");
  if (gammas.empty()) throw Error(ErrorCode::kInvalidParams, "need at least one value");
  int64_t best_q = 0;
  Dist best{1, 1};
  for (int64_t q = 1; q <= X; ++q) {
    const int128 k = multiplier(q);
    Dist worst{0, 1};
    for (const auto& g : gammas) {
      const Dist d = dist_of(k, g);
      if (less(worst, d)) worst = d;
      if (best_q != 0 && !less(worst, best)) break;
    }
    if (best_q == 0 || less(worst, best)) {
      best = worst;
      best_q = q;
      if (best.num == 0) break;
    }
  }
  RecurrenceResult out;
  out.q = best_q;
  out.achieved = Rational(static_cast<int64_t>(best.num), static_cast<int64_t>(best.den));
  return out;
}

}  // namespace

int64_t integer_root(int64_t X, int d) {
  if (X < 0 || d < 1) throw Error(ErrorCode::kInvalidParams, "integer_root needs X >= 0, d >= 1");
  if (d == 1) return X;
  auto pow_le = [&](int64_t k) {
    int128 p = 1;
    for (int i = 0; i < d; ++i) {
      p *= k;
      if (p > X) return false;
    }
    return true;
  };
  auto k = static_cast<int64_t>(std::pow(static_cast<long double>(X), 1.0L / d));
  while (k > 0 && !pow_le(k)) --k;
  while (pow_le(k + 1)) ++k;
  return k;
}

RecurrenceResult dirichlet_search(std::span<const Rational> gammas, int64_t X) {
  auto out = search(gammas, X, [](int64_t q) { return static_cast<int128>(q); });
  const int64_t Q = integer_root(X, static_cast<int>(gammas.size()));
  out.bound = 1.0 / static_cast<double>(Q);
  // Dirichlet: some q <= Q^d <= X has all ||q gamma_i|| <= 1/Q.
  if (out.achieved > Rational(1, Q)) {
    throw std::logic_error("Dirichlet guarantee violated: " + out.achieved.str());
  }
  return out;
}

RecurrenceResult quadratic_recurrence_search(std::span<const Rational> thetas,
                                             int64_t X, double c) {
  auto out = search(thetas, X, [](int64_t q) { return static_cast<int128>(q) * q; });
  const auto d = static_cast<double>(thetas.size());
  out.bound = d * std::pow(static_cast<double>(X), -c / (d * d));
  return out;
}

}  // namespace qsys
