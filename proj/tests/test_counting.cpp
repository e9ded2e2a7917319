#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsys/counting.hpp"
#include "qsys/error.hpp"

using namespace qsys;

namespace {

using cd = std::complex<double>;

CoefficientSystem sys(std::vector<int64_t> l) { return validate_coefficients(l); }
const CoefficientSystem& s7() {
  static const auto cs = sys({1, 1, 1, 1, -2, -1, -1});
  return cs;
}

DenseSet interval(const CoefficientSystem& cs, int64_t N) {
  return DenseSet::interval(choose_modulus(cs, N));
}

CoefficientSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ds(4, 7), dc(-3, 3);
  while (true) {
    const int s = ds(rng);
    std::vector<int64_t> l;
    int64_t sum = 0;
    for (int i = 0; i + 1 < s; ++i) {
      int c = 0;
      while (c == 0) c = dc(rng);
      l.push_back(c);
      sum += c;
    }
    if (sum == 0 || std::abs(sum) > 6) continue;
    l.push_back(-sum);
    try {
      return validate_coefficients(l);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST(Count, BruteForceExamples) {
  const auto cs = sys({1, 1, -1, -1});
  const auto c = count_bruteforce(cs, interval(cs, 5));
  EXPECT_EQ(c.total, 45);
  EXPECT_EQ(c.nontrivial, 0);
  EXPECT_NEAR(c.normalized_T, 45.0 / 41.0, 1e-15);

  const auto cs6 = sys({1, 1, 1, -1, -1, -1});
  const auto c6 = count_bruteforce(cs6, interval(cs6, 7));
  EXPECT_GE(c6.nontrivial, 6);
  const auto ref = oracle::count(cs6.lambdas, interval(cs6, 7).members());
  EXPECT_EQ(c6.total, ref.total);
  EXPECT_EQ(c6.nontrivial, ref.nontrivial);

  const DenseSet empty(choose_modulus(s7(), 9), std::vector<int64_t>{});
  EXPECT_EQ(count_bruteforce(s7(), empty).total, 0);
  EXPECT_EQ(count_mitm(s7(), empty).total, 0);
  EXPECT_EQ(count_mitm(s7(), empty).nontrivial, 0);
}

TEST(Count, MitmExamples) {
  const auto cs = sys({1, 1, -1, -1});
  const auto c = count_mitm(cs, interval(cs, 5), 2);
  EXPECT_EQ(c.total, 45);
  EXPECT_EQ(c.nontrivial, 0);
  const auto A = interval(s7(), 20);
  const auto m = count_mitm(s7(), A, 4);
  const auto b = count_bruteforce(s7(), A);
  EXPECT_EQ(m.total, b.total);
  EXPECT_EQ(m.nontrivial, b.nontrivial);
  EXPECT_GT(m.nontrivial, 0);
}

TEST(Count, OraclesAgreeOnRandomInstances) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 120; ++trial) {
    const auto cs = random_system(rng);
    std::uniform_int_distribution<int64_t> dN(1, 12);
    const int64_t N = dN(rng);
    const auto amb = choose_modulus(cs, N);
    const DenseSet A(amb, oracle::random_subset(N, 0.7, rng));
    const auto b = count_bruteforce(cs, A);
    std::uniform_int_distribution<size_t> dsplit(0, cs.size());
    const auto m = count_mitm(cs, A, dsplit(rng));
    ASSERT_EQ(m.total, b.total) << "trial " << trial;
    ASSERT_EQ(m.nontrivial, b.nontrivial) << "trial " << trial;
    ASSERT_LE(b.nontrivial, b.total);
    if (std::pow(static_cast<double>(A.size()), static_cast<double>(cs.size())) <= 2e6) {
      const auto o = oracle::count(cs.lambdas, A.members());
      ASSERT_EQ(b.total, o.total);
      ASSERT_EQ(b.nontrivial, o.nontrivial);
    }
  }
}

TEST(Count, CongruenceCountMatchesIntegerCount) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const auto cs = random_system(rng);
    const int64_t N = 1 + trial % 12;
    const DenseSet A(choose_modulus(cs, N), oracle::random_subset(N, 0.8, rng));
    ASSERT_EQ(count_congruence_bruteforce(cs, A), count_bruteforce(cs, A).total);
  }
}

TEST(Count, BudgetGuard) {
  Budgets tiny;
  tiny.enumeration = 1000;
  try {
    count_bruteforce(s7(), interval(s7(), 20), tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExceeded);
  }
  EXPECT_THROW(count_mitm(s7(), interval(s7(), 40), std::nullopt, tiny), Error);
}

TEST(TOperator, Examples) {
  const auto cs = sys({1, 1, -1, -1});
  const auto amb = choose_modulus(cs, 5);
  std::vector<GridFunction> ones(4, GridFunction::interval(5));
  EXPECT_NEAR(std::abs(T_operator(cs, ones, amb) - cd(45.0 / 41.0)), 0.0, 1e-14);
  std::vector<GridFunction> zeros(4, GridFunction::zero(5));
  EXPECT_EQ(T_operator(cs, zeros, amb), cd(0.0));
  std::vector<GridFunction> bal(4, balanced_function(DenseSet::interval(amb)));
  EXPECT_EQ(T_operator(cs, bal, amb), cd(0.0));
}

TEST(TOperator, MatchesFullEnumerationWithWeights) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const auto cs = sys({2, 1, -1, -2});
  const int64_t N = 7;
  const auto amb = choose_modulus(cs, N);
  std::vector<std::vector<cd>> raw(4, std::vector<cd>(N));
  std::vector<GridFunction> fs;
  for (auto& v : raw) {
    for (auto& x : v) x = cd(g(rng), g(rng));
    fs.emplace_back(N, v);
  }
  const cd ref = oracle::weighted(cs.lambdas, raw) / static_cast<double>(amb.M);
  EXPECT_LT(std::abs(T_operator(cs, fs, amb) - ref), 1e-12 * std::max(1.0, std::abs(ref)));
}

TEST(TOperator, IntegralForIndicators) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cs = random_system(rng);
    const int64_t N = 3 + trial % 8;
    const auto amb = choose_modulus(cs, N);
    const DenseSet A(amb, oracle::random_subset(N, 0.6, rng));
    std::vector<GridFunction> fs(cs.size(), GridFunction::indicator(A));
    const double scaled = T_operator(cs, fs, amb).real() *
                          std::pow(static_cast<double>(amb.M), static_cast<double>(cs.size()) - 3);
    ASSERT_NEAR(scaled, std::round(scaled), 1e-9 * std::max(1.0, scaled));
    ASSERT_GE(std::round(scaled), 0.0);
    ASSERT_EQ(static_cast<int64_t>(std::llround(scaled)), count_bruteforce(cs, A).total);
  }
}

TEST(FourierIdentity, IndicatorsFourVariables) {
  const auto cs = sys({1, 1, -1, -1});
  const auto amb = choose_modulus(cs, 6);
  std::vector<GridFunction> fs(4, GridFunction::interval(6));
  const auto r = verify_fourier_identity(cs, fs, amb, 1e-9);
  EXPECT_TRUE(r.passed) << r.rel_deviation;
  EXPECT_LT(r.rel_deviation, 1e-9);
}

TEST(FourierIdentity, ZeroFunctions) {
  const auto cs = sys({1, 1, -1, -1});
  const auto amb = choose_modulus(cs, 4);
  std::vector<GridFunction> fs(4, GridFunction::zero(4));
  const auto r = verify_fourier_identity(cs, fs, amb, 1e-9);
  EXPECT_EQ(r.enumeration, cd(0.0));
  EXPECT_LT(std::abs(r.spectral), 1e-15);
  EXPECT_TRUE(r.passed);
}

TEST(FourierIdentity, RandomSignsSevenVariables) {
  std::mt19937_64 rng(25);
  std::bernoulli_distribution coin(0.5);
  const int64_t N = 8;
  const auto amb = choose_modulus(s7(), N);
  std::vector<GridFunction> fs;
  for (int i = 0; i < 7; ++i) {
    std::vector<cd> v(N);
    for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
    fs.emplace_back(N, v);
  }
  const auto r = verify_fourier_identity(s7(), fs, amb, 1e-8);
  EXPECT_TRUE(r.passed) << r.rel_deviation;
}

TEST(FourierIdentity, MixedComplexFunctions) {
  std::mt19937_64 rng(26);
  std::normal_distribution<double> g;
  const auto cs = sys({2, 1, -1, -2});
  const int64_t N = 5;
  const auto amb = choose_modulus(cs, N);
  std::vector<GridFunction> fs;
  for (int i = 0; i < 4; ++i) {
    std::vector<cd> v(N);
    for (auto& x : v) x = cd(g(rng), g(rng));
    fs.emplace_back(N, v);
  }
  const auto r = verify_fourier_identity(cs, fs, amb, 1e-9);
  EXPECT_TRUE(r.passed) << r.rel_deviation;
}

TEST(Solutions, Witnesses) {
  const auto cs6 = sys({1, 1, 1, -1, -1, -1});
  const auto w = has_nontrivial_solution(cs6, interval(cs6, 7));
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (std::vector<int64_t>{1, 5, 6, 2, 3, 7}));

  const auto cs4 = sys({1, 1, -1, -1});
  for (int64_t N = 1; N <= 30; ++N) EXPECT_FALSE(has_nontrivial_solution(cs4, interval(cs4, N)));
  const DenseSet empty(choose_modulus(cs6, 5), std::vector<int64_t>{});
  EXPECT_FALSE(has_nontrivial_solution(cs6, empty));

  for (const int64_t N : {7, 8, 9}) EXPECT_FALSE(has_nontrivial_solution(s7(), interval(s7(), N)));
  for (const int64_t N : {10, 12, 16, 20}) {
    const auto v = has_nontrivial_solution(s7(), interval(s7(), N));
    ASSERT_TRUE(v) << N;
    EXPECT_TRUE(is_nontrivial_solution(s7(), *v));
  }
  EXPECT_TRUE(is_nontrivial_solution(s7(), std::vector<int64_t>{1, 4, 6, 10, 2, 8, 9}));
  EXPECT_FALSE(is_nontrivial_solution(s7(), std::vector<int64_t>{1, 1, 1, 1, 1, 1, 1}));
  EXPECT_TRUE(is_solution(s7(), std::vector<int64_t>{1, 1, 1, 1, 1, 1, 1}));
}

TEST(Solutions, GreedySetIsSolutionFreeAndMaximal) {
  const auto G = greedy_solution_free(s7(), 30);
  EXPECT_EQ(count_mitm(s7(), G).nontrivial, 0);
  EXPECT_GT(G.size(), 7);
  for (int64_t n = 1; n <= 30; ++n) {
    if (G.contains(n)) continue;
    auto m = G.members();
    m.push_back(n);
    EXPECT_TRUE(has_nontrivial_solution(s7(), DenseSet(G.ambient(), m))) << n;
  }
}

TEST(TrivialBound, Reports) {
  const auto cs4 = sys({1, 1, -1, -1});
  const std::vector<int64_t> grid{10, 20, 40};
  const auto r = trivial_solution_bound_check(cs4, grid);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_TRUE(r.informational);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.solutions, 2 * row.N * row.N - row.N);
    EXPECT_EQ(row.set_size, row.N);
  }
  EXPECT_TRUE(trivial_solution_bound_check(cs4, std::vector<int64_t>{}).rows.empty());

  const auto r7 = trivial_solution_bound_check(s7(), std::vector<int64_t>{30});
  ASSERT_EQ(r7.rows.size(), 1u);
  EXPECT_TRUE(std::isfinite(r7.rows[0].ratio));
  EXPECT_GT(r7.rows[0].ratio, 0.0);
  EXPECT_FALSE(r7.informational);
}
