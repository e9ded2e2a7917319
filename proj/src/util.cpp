#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "qsys/budget.hpp"
#include "qsys/error.hpp"
#include "qsys/parallel.hpp"
#include "qsys/rational.hpp"

namespace qsys {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroCoefficient: return "ZeroCoefficient";
    case ErrorCode::kNonzeroSum: return "NonzeroSum";
    case ErrorCode::kSignConditionViolated: return "SignConditionViolated";
    case ErrorCode::kProgressionOutOfRange: return "ProgressionOutOfRange";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kHypothesisViolated: return "HypothesisViolated";
    case ErrorCode::kNoWitness: return "NoWitness";
    case ErrorCode::kUniformSet: return "UniformSet";
    case ErrorCode::kCertificateFailed: return "CertificateFailed";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

// --- Rational --------------------------------------------------------------

namespace {

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr int128 kMax64 = std::numeric_limits<int64_t>::max();

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(int128 num, int128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kMax64 || num < -kMax64 || den > kMax64) {
    throw std::overflow_error("Rational: value exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<int64_t>(num);
  r.den_ = static_cast<int64_t>(den);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(
      static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
      static_cast<int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<int128>(a.num_) * b.num_,
                             static_cast<int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return Rational::from_wide(static_cast<int128>(a.num_) * b.den_,
                             static_cast<int128>(a.den_) * b.num_);
}

Rational Rational::mod1() const { return Rational(mod_floor(num_, den_), den_); }

Rational Rational::dist_to_int() const {
  return residue_distance(mod_floor(num_, den_), den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  const std::string s(text);
  const auto slash = s.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      const int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    const std::string a = s.substr(0, slash);
    const std::string b = s.substr(slash + 1);
    const int64_t n = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const int64_t d = std::stoll(b, &used);
    if (used != b.size() || d <= 0) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kParseError, "not a rational: '" + s + "'");
  }
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

Rational residue_distance(int64_t v, int64_t m) {
  v = mod_floor(v, m);
  return Rational(std::min(v, m - v), m);
}

// --- Budgets ---------------------------------------------------------------

Budgets Budgets::from_env() { return from_env(Budgets{}); }

Budgets Budgets::from_env(Budgets base) {
  if (const char* env = std::getenv("QS_BUDGET"); env != nullptr && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      base.enumeration = v;
      base.spectrum = v;
    }
  }
  return base;
}

void require_budget(long double ops, uint64_t limit, std::string_view what) {
  if (ops > static_cast<long double>(limit)) {
    std::ostringstream msg;
    msg << what << " needs ~" << static_cast<double>(ops)
        << " operations, budget is " << limit;
    throw Error(ErrorCode::kBudgetExceeded, msg.str());
  }
}

long double power_estimate(long double base, int exponent) {
  long double r = 1;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

// --- Threads ---------------------------------------------------------------

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned threads) { g_threads = threads; }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  if (t != 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qsys
