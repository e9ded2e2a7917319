#include "qsys/core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qsys/error.hpp"

namespace qsys {

CoefficientSystem validate_coefficients(std::span<const int64_t> lambdas) {
  if (lambdas.empty()) {
    throw Error(ErrorCode::kInvalidParams, "empty coefficient list");
  }
  CoefficientSystem cs;
  int64_t sum = 0;
  int positive = 0;
  int negative = 0;
  for (size_t i = 0; i < lambdas.size(); ++i) {
    const int64_t l = lambdas[i];
    if (l == 0) {
      throw Error(ErrorCode::kZeroCoefficient,
                  "lambda_" + std::to_string(i + 1) + " is zero");
    }
    sum += l;
    cs.abs_sum += l < 0 ? -l : l;
    (l > 0 ? positive : negative)++;
  }
  if (sum != 0) {
    throw Error(ErrorCode::kNonzeroSum,
                "coefficients sum to " + std::to_string(sum));
  }
  if (positive < 2 || negative < 2) {
    throw Error(ErrorCode::kSignConditionViolated,
                "need two positive and two negative coefficients, got " +
                    std::to_string(positive) + " and " +
                    std::to_string(negative));
  }
  cs.lambdas.assign(lambdas.begin(), lambdas.end());
  return cs;
}

void require_full_theorem_range(const CoefficientSystem& cs) {
  if (cs.size() < 7) {
    throw Error(ErrorCode::kInvalidParams,
                "the iteration needs s >= 7, got s = " +
                    std::to_string(cs.size()));
  }
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Ambient choose_modulus(const CoefficientSystem& cs, int64_t N) {
  if (N < 1) throw Error(ErrorCode::kInvalidParams, "N must be >= 1");
  const int64_t lo = 2 * cs.abs_sum * N;
  int64_t M = lo;
  while (!is_prime(M)) ++M;
  if (M > 2 * lo) {
    throw std::logic_error("prime outside the Bertrand window");
  }
  return Ambient{N, M, M * M};
}

// --- DenseSet --------------------------------------------------------------

DenseSet::DenseSet(Ambient ambient, std::span<const int64_t> members)
    : ambient_(ambient), member_(static_cast<size_t>(ambient.N) + 1, 0) {
  for (const int64_t n : members) {
    if (n < 1 || n > ambient.N) {
      throw Error(ErrorCode::kInvalidSpec,
                  "member " + std::to_string(n) + " outside [1, " +
                      std::to_string(ambient.N) + "]");
    }
    auto& slot = member_[static_cast<size_t>(n)];
    if (!slot) {
      slot = 1;
      ++size_;
    }
  }
}

DenseSet DenseSet::interval(Ambient ambient) {
  std::vector<int64_t> all(static_cast<size_t>(ambient.N));
  for (int64_t n = 1; n <= ambient.N; ++n) all[static_cast<size_t>(n - 1)] = n;
  return DenseSet(ambient, all);
}

Rational DenseSet::density() const {
  if (ambient_.N == 0) return Rational(0);
  return Rational(size_, ambient_.N);
}

std::vector<int64_t> DenseSet::members() const {
  std::vector<int64_t> out;
  out.reserve(static_cast<size_t>(size_));
  for (int64_t n = 1; n <= ambient_.N; ++n) {
    if (member_[static_cast<size_t>(n)]) out.push_back(n);
  }
  return out;
}

DenseSet affine_rescale(const DenseSet& A, const CoefficientSystem& cs,
                        const Progression& Q) {
  if (Q.step < 1 || Q.length < 1 || Q.first() < 1 || Q.last() > A.N()) {
    throw Error(ErrorCode::kProgressionOutOfRange,
                std::to_string(Q.offset) + " + " + std::to_string(Q.step) +
                    "[" + std::to_string(Q.length) + "] is not inside [1, " +
                    std::to_string(A.N()) + "]");
  }
  const Ambient amb = choose_modulus(cs, Q.length);
  std::vector<int64_t> members;
  for (int64_t j = 1; j <= Q.length; ++j) {
    if (A.contains(Q.element(j))) members.push_back(j);
  }
  return DenseSet(amb, members);
}

// --- GridFunction ----------------------------------------------------------

GridFunction::GridFunction(int64_t N, std::vector<Complex> values)
    : N_(N), values_(std::move(values)) {
  if (values_.size() != static_cast<size_t>(N)) {
    throw Error(ErrorCode::kInvalidParams, "grid function length mismatch");
  }
}

GridFunction GridFunction::from_exact(int64_t N,
                                      std::vector<int64_t> numerators,
                                      int64_t denominator) {
  if (denominator <= 0) {
    throw Error(ErrorCode::kInvalidParams, "denominator must be positive");
  }
  std::vector<Complex> values(numerators.size());
  for (size_t i = 0; i < numerators.size(); ++i) {
    values[i] = static_cast<double>(numerators[i]) /
                static_cast<double>(denominator);
  }
  GridFunction f(N, std::move(values));
  f.exact_ = Exact{std::move(numerators), denominator};
  return f;
}

GridFunction GridFunction::zero(int64_t N) {
  return from_exact(N, std::vector<int64_t>(static_cast<size_t>(N), 0), 1);
}

GridFunction GridFunction::indicator(const DenseSet& A) {
  std::vector<int64_t> num(static_cast<size_t>(A.N()), 0);
  for (int64_t n = 1; n <= A.N(); ++n) num[static_cast<size_t>(n - 1)] = A.contains(n);
  return from_exact(A.N(), std::move(num), 1);
}

GridFunction GridFunction::interval(int64_t N) {
  return from_exact(N, std::vector<int64_t>(static_cast<size_t>(N), 1), 1);
}

std::optional<Rational> GridFunction::exact_at(int64_t n) const {
  if (!exact_) return std::nullopt;
  if (n < 1 || n > N_) return Rational(0);
  return Rational(exact_->numerators[static_cast<size_t>(n - 1)],
                  exact_->denominator);
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::sum_squares() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<Complex> v(values_);
  for (auto& x : v) x *= factor;
  return GridFunction(N_, std::move(v));
}

GridFunction GridFunction::conjugate() const {
  std::vector<Complex> v(values_);
  for (auto& x : v) x = std::conj(x);
  GridFunction out(N_, std::move(v));
  out.exact_ = exact_;
  return out;
}

GridFunction balanced_function(const DenseSet& A) {
  // f_A(n) = 1_A(n) - |A|/N = (N 1_A(n) - |A|) / N.
  const int64_t N = A.N();
  std::vector<int64_t> num(static_cast<size_t>(N));
  for (int64_t n = 1; n <= N; ++n) {
    num[static_cast<size_t>(n - 1)] = (A.contains(n) ? N : 0) - A.size();
  }
  return GridFunction::from_exact(N, std::move(num), std::max<int64_t>(N, 1));
}

GridFunction normalized_balanced_function(const DenseSet& A) {
  // f_A / delta = (N 1_A(n) - |A|) / |A|.
  if (A.empty()) return GridFunction::zero(A.N());
  const int64_t N = A.N();
  std::vector<int64_t> num(static_cast<size_t>(N));
  for (int64_t n = 1; n <= N; ++n) {
    num[static_cast<size_t>(n - 1)] = (A.contains(n) ? N : 0) - A.size();
  }
  return GridFunction::from_exact(N, std::move(num), A.size());
}

// --- Set files -------------------------------------------------------------

void write_set_file(std::ostream& out, const CoefficientSystem& cs,
                    const DenseSet& A) {
  nlohmann::json header = {{"N", A.N()}, {"lambdas", cs.lambdas}};
  out << header.dump() << '\n';
  for (const int64_t n : A.members()) out << n << '\n';
}

SetFile read_set_file(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParseError, "set file is empty");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad header: ") + e.what());
  }
  if (!header.contains("N") || !header.contains("lambdas")) {
    throw Error(ErrorCode::kParseError, "header needs N and lambdas");
  }
  const auto lambdas = header.at("lambdas").get<std::vector<int64_t>>();
  SetFile file;
  file.cs = validate_coefficients(lambdas);
  const Ambient amb = choose_modulus(file.cs, header.at("N").get<int64_t>());
  std::vector<int64_t> members;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream ls(line);
    int64_t n = 0;
    if (!(ls >> n)) {
      throw Error(ErrorCode::kParseError, "bad member line '" + line + "'");
    }
    members.push_back(n);
  }
  file.set = DenseSet(amb, members);
  return file;
}

}  // namespace qsys
