#pragma once

#include <cstdint>
#include <span>

#include "qsys/rational.hpp"

namespace qsys {

struct RecurrenceResult {
  int64_t q = 1;
  Rational achieved;   // max_i ||q gamma_i|| (or ||q^2 theta_i||)
  double bound = 0.0;  // theoretical envelope
};

/// floor(X^{1/d}) computed exactly.
int64_t integer_root(int64_t X, int d);

/// Smallest q in [1, X] minimizing max_i ||q gamma_i||. The result always
/// satisfies achieved <= 1 / floor(X^{1/d}); a violation throws
/// std::logic_error since it can only come from broken arithmetic.
RecurrenceResult dirichlet_search(std::span<const Rational> gammas, int64_t X);

/// Smallest q in [1, X] minimizing max_i ||q^2 theta_i||. `bound` reports
/// d X^{-c/d^2}, informational only.
RecurrenceResult quadratic_recurrence_search(std::span<const Rational> thetas,
                                             int64_t X, double c = 0.25);

}  // namespace qsys
