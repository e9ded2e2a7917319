#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsys/budget.hpp"
#include "qsys/core.hpp"
#include "qsys/increment.hpp"
#include "qsys/spectrum.hpp"

namespace qsys {

enum class RunMode { kCertified, kDemo };

enum class Verdict {
  kSolutionFound,
  kIncrement,
  kUniformStop,
  kBudgetStop,
  kCertificateFailed,
  kNoWitness,
  kGuardStop,
};

std::string_view verdict_name(Verdict v);

/// Process exit code for a terminal verdict.
int exit_code(Verdict v);

struct IterationConfig {
  double c1 = 0.1;
  double c2 = 0.1;
  double c3 = 0.1;
  double D = 10.0;
  double kappa = 0.0;          // filled by finalize()
  Rational eps_c{1, 10};       // eps = min(c delta/R, c/R, c nu delta)
  double size_C = 1.0;         // exponent constant in N >= (2/eps delta)^{C R^3}
  RunMode mode = RunMode::kDemo;
  int max_steps = 16;
  EnergyConfig energy{};
  LinearizationConfig linearization{};
  Budgets budgets{};

  /// Validates positivity and computes kappa; throws kInvalidParams.
  void finalize();
};

/// Largest kappa <= min(c2/6, 1/D) with (1 + c1 R^{c2}) / (R^3/c3)^kappa >= 1
/// for every R >= 1.
double compute_kappa(double c1, double c2, double c3, double D);

/// Applies "key = value" lines (# comments allowed). Unknown keys throw
/// kParseError.
void apply_config_text(IterationConfig& cfg, std::istream& in);
void apply_config_value(IterationConfig& cfg, std::string_view key,
                        std::string_view value);

struct StepOutcome {
  Verdict verdict = Verdict::kBudgetStop;
  std::string detail;
  std::optional<std::vector<int64_t>> witness;
  std::optional<RestrictedEnergy> energy;
  double energy_ratio = 0.0;
  std::optional<ProgressionFamily> family;
  double l2 = 0.0;
  Rational nu;
  Rational eps;
  std::optional<IncrementResult> increment;
};

/// One pass of the dichotomy: solution search, restricted energy,
/// linearization, smoothing, L^2 check and increment search.
StepOutcome increment_step(const DenseSet& A, const CoefficientSystem& cs,
                           const IterationConfig& cfg);

struct StepRecord {
  int index = 0;
  int64_t N = 0;
  int64_t M = 0;
  int64_t size = 0;
  Rational density;
  double guard_value = 0.0;  // delta (log N)^{1/D}
  int64_t R = 0;
  Verdict verdict = Verdict::kBudgetStop;
  std::string detail;
  std::optional<std::vector<int64_t>> witness;
  std::optional<Progression> progression;
  std::optional<Rational> new_density;
  double energy_ratio = 0.0;
  double l2 = 0.0;
  double nu = 0.0;
  Rational eps;
  std::optional<Rational> worst_deviation;
  bool meets_theorem_increment = false;  // delta' >= (1 + c1 R^{c2}) delta
  bool meets_theorem_length = false;     // N' >= N^{c3/R^3}
  double millis = 0.0;
};

struct IterationTrace {
  std::vector<StepRecord> steps;
  Verdict final_verdict = Verdict::kBudgetStop;
  double kappa = 0.0;
  int increment_cap = 0;
};

IterationTrace iterate(const DenseSet& A, const CoefficientSystem& cs,
                       const IterationConfig& cfg);

/// interval | evens | random:<delta>:<seed> | ap:<a>:<d>:<L>[+...] | greedy
struct SetSpec {
  enum class Kind { kInterval, kEvens, kRandom, kApUnion, kGreedy };
  Kind kind = Kind::kInterval;
  Rational density{1, 2};
  uint64_t seed = 1;
  std::vector<Progression> aps;
};

SetSpec parse_set_spec(std::string_view text);

DenseSet generate_set(const SetSpec& spec, const CoefficientSystem& cs,
                      int64_t N, const Budgets& budgets = {});

}  // namespace qsys
