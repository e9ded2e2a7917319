#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qsys/diophantine.hpp"

using namespace qsys;

namespace {

std::vector<Rational> rats(std::initializer_list<std::pair<int64_t, int64_t>> v) {
  std::vector<Rational> out;
  for (const auto& [a, b] : v) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<int64_t, int64_t>> pairs(const std::vector<Rational>& v) {
  std::vector<std::pair<int64_t, int64_t>> out;
  for (const auto& r : v) out.emplace_back(r.num(), r.den());
  return out;
}

}  // namespace

TEST(IntegerRoot, Exact) {
  EXPECT_EQ(integer_root(10000, 4), 10);
  EXPECT_EQ(integer_root(9999, 4), 9);
  EXPECT_EQ(integer_root(1, 3), 1);
  EXPECT_EQ(integer_root(26, 3), 2);
  EXPECT_EQ(integer_root(27, 3), 3);
  EXPECT_EQ(integer_root(12, 1), 12);
}

TEST(Dirichlet, Examples) {
  auto r = dirichlet_search(rats({{1, 2}}), 10);
  EXPECT_EQ(r.q, 2);
  EXPECT_EQ(r.achieved, Rational(0));
  r = dirichlet_search(rats({{1, 3}, {1, 4}}), 12);
  EXPECT_EQ(r.q, 12);
  EXPECT_EQ(r.achieved, Rational(0));
  const auto g = rats({{5, 8}});
  r = dirichlet_search(g, 6);
  const auto [q, n, d] = oracle::recur(pairs(g), 6, [](int64_t k) { return k; });
  EXPECT_EQ(r.q, q);
  EXPECT_EQ(r.achieved, Rational(n, d));
  EXPECT_EQ(r.q, 3);
  EXPECT_EQ(r.achieved, Rational(1, 8));
}

TEST(Quadratic, Examples) {
  auto r = quadratic_recurrence_search(rats({{1, 7}}), 7);
  EXPECT_EQ(r.q, 7);
  EXPECT_EQ(r.achieved, Rational(0));
  r = quadratic_recurrence_search(rats({{1, 4}}), 2);
  EXPECT_EQ(r.q, 2);
  EXPECT_EQ(r.achieved, Rational(0));
  const auto t = rats({{3, 16}, {5, 9}});
  r = quadratic_recurrence_search(t, 20);
  const auto [q, n, d] = oracle::recur(pairs(t), 20, [](int64_t k) { return k * k; });
  EXPECT_EQ(r.q, q);
  EXPECT_EQ(r.achieved, Rational(n, d));
}

TEST(Dirichlet, GuaranteeAndOracleAgreement) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> dd(1, 4);
  std::uniform_int_distribution<int64_t> dden(1, 10000), dX(1, 2000);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Rational> g;
    const int d = dd(rng);
    for (int i = 0; i < d; ++i) {
      const int64_t b = dden(rng);
      g.emplace_back(std::uniform_int_distribution<int64_t>(0, b - 1)(rng), b);
    }
    const int64_t X = dX(rng);
    const auto r = dirichlet_search(g, X);
    ASSERT_LE(r.achieved, Rational(1, integer_root(X, d)));
    const auto [q, n, den] = oracle::recur(pairs(g), X, [](int64_t k) { return k; });
    ASSERT_EQ(r.q, q);
    ASSERT_EQ(r.achieved, Rational(n, den));
  }
}

TEST(Quadratic, MatchesOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> t;
    for (int i = 0; i < 3; ++i) {
      const int64_t b = std::uniform_int_distribution<int64_t>(1, 5000)(rng);
      t.emplace_back(std::uniform_int_distribution<int64_t>(0, b - 1)(rng), b);
    }
    const int64_t X = std::uniform_int_distribution<int64_t>(1, 500)(rng);
    const auto r = quadratic_recurrence_search(t, X);
    const auto [q, n, d] = oracle::recur(pairs(t), X, [](int64_t k) { return k * k; });
    ASSERT_EQ(r.q, q);
    ASSERT_EQ(r.achieved, Rational(n, d));
  }
}

TEST(Recurrence, MonotoneInX) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> g;
    for (int i = 0; i < 2; ++i) {
      const int64_t b = std::uniform_int_distribution<int64_t>(2, 3000)(rng);
      g.emplace_back(std::uniform_int_distribution<int64_t>(0, b - 1)(rng), b);
    }
    Rational prev_l(1), prev_q(1);
    for (int64_t X = 1; X <= 60; ++X) {
      const auto l = dirichlet_search(g, X).achieved;
      const auto q = quadratic_recurrence_search(g, X).achieved;
      ASSERT_LE(l, prev_l);
      ASSERT_LE(q, prev_q);
      prev_l = l;
      prev_q = q;
    }
  }
}

TEST(Recurrence, DenominatorsDivideInputs) {
  const auto g = rats({{7, 30}, {11, 45}});
  const auto r = dirichlet_search(g, 50);
  EXPECT_EQ(90 % r.achieved.den(), 0);
  EXPECT_EQ(dirichlet_search(g, 50).q, r.q);
}
