#pragma once

#include <cstdint>
#include <string_view>

namespace qsys {

/// Operation ceilings for the exhaustive routines. Each guarded routine
/// estimates its elementary-operation count up front and refuses to start
/// (ErrorCode::kBudgetExceeded) when the estimate is above the ceiling.
struct Budgets {
  uint64_t enumeration = 4'000'000'000ULL;
  uint64_t spectrum = 1ULL << 31;  // bound on M^3

  /// Applies the QS_BUDGET environment variable, when set, to every ceiling.
  static Budgets from_env();
  static Budgets from_env(Budgets base);
};

/// Throws kBudgetExceeded if `ops` > `limit`.
void require_budget(long double ops, uint64_t limit, std::string_view what);

/// Saturating integer power used for budget estimates.
long double power_estimate(long double base, int exponent);

}  // namespace qsys
