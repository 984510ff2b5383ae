#include "ultrajet/linalg.hpp"
#include "ultrajet/parallel.hpp"
#include "ultrajet/rational.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>

using namespace ultrajet;

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(parse_rational("0.4"), Rational(2, 5));
  EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
  EXPECT_EQ(parse_rational("3/7"), Rational(3, 7));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_EQ(parse_rational(".5"), Rational(1, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, DoubleRoundTripIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    double x = u(rng);
    EXPECT_EQ(to_double(to_rational(x)), x);
  }
}

TEST(Rational, LogOfHugeValues) {
  Integer big = factorial(400);
  EXPECT_NEAR(log_positive(big), std::lgamma(401.0), 1e-9 * std::lgamma(401.0));
  EXPECT_NEAR(log_positive(Rational(1, big)), -std::lgamma(401.0), 1e-9 * std::lgamma(401.0));
}

TEST(Rational, FactorialAndBinomial) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(10), 3628800);
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(4, 5), 0);
  EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
}

TEST(Linalg, ExactInverseAndDeterminant) {
  Matrix<Rational> a{{Rational(2), Rational(1)}, {Rational(1), Rational(1)}};
  EXPECT_EQ(determinant(a), Rational(1));
  auto inv = inverse(a);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(mat_mul(a, *inv), identity_matrix<Rational>(2));
  Matrix<Rational> s{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  EXPECT_EQ(determinant(s), Rational(0));
  EXPECT_FALSE(inverse(s).has_value());
}

TEST(Linalg, JacobiEigenvaluesMatchClosedForm) {
  // [[2,1],[1,2]] has eigenvalues 1 and 3.
  auto ev = symmetric_eigenvalues({{2, 1}, {1, 2}});
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], 3.0, 1e-14);
  EXPECT_NEAR(spectral_norm({{3, 0}, {4, 5}}), std::sqrt(45.0), 1e-12);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  set_thread_count(4);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 3) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  set_thread_count(0);
}
