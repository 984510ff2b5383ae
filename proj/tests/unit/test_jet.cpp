#include "ultrajet/jet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ultrajet;

namespace {

using RJet = Jet<Rational>;

RJet poly1(std::vector<Rational> c, Rational base = 0) { return univariate(base, std::move(c)); }

Rational random_rational(std::mt19937_64& rng, int range = 5, int den = 4) {
  std::uniform_int_distribution<int> num(-range, range), d(1, den);
  return Rational(num(rng), d(rng));
}

RJet random_jet(std::mt19937_64& rng, std::vector<Rational> base, int m, int K) {
  RJet j(std::move(base), m, K);
  for (int c = 0; c < m; ++c)
    for (std::size_t p = 0; p < j.size(); ++p) j.at(c, p) = random_rational(rng);
  return j;
}

}  // namespace

TEST(MultiIndex, GradedLexOrder) {
  auto idx = multi_indices_up_to(2, 2);
  std::vector<MultiIndex> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(idx, expect);
  for (std::size_t i = 1; i < idx.size(); ++i) EXPECT_LT(idx[i - 1], idx[i]);
  EXPECT_EQ((MultiIndex{2, 3}).factorial(), 12);
  EXPECT_EQ((MultiIndex{2, 3}).order(), 5);
  auto basis = MonomialBasis::get(3, 4);
  EXPECT_EQ(basis->size(), 35u);
  for (std::size_t p = 0; p < basis->size(); ++p) EXPECT_EQ(basis->position(basis->index(p)), p);
  EXPECT_EQ(basis->position(MultiIndex{5, 0, 0}), MonomialBasis::npos);
}

TEST(JetRing, AddMulScale) {
  RJet x = RJet::variable({0}, 0, 2);
  RJet one = RJet::constant({0}, {Rational(1)}, 2);
  RJet sum = x + (one - x);
  EXPECT_EQ(sum, one);

  RJet onepx = one + x;
  RJet sq = mul(onepx, onepx);
  EXPECT_EQ(sq.at(0, 0), 1);
  EXPECT_EQ(sq.at(0, 1), 2);
  EXPECT_EQ(sq.at(0, 2), 1);

  RJet x2 = mul(x, x);
  EXPECT_TRUE(scale(x2, Rational(0)).is_zero());
}

TEST(JetRing, MismatchErrors) {
  RJet a = RJet::variable({0}, 0, 2);
  EXPECT_THROW(a + RJet::variable({0}, 0, 3), OrderMismatch);
  EXPECT_THROW(a + RJet::variable({1}, 0, 2), BasePointMismatch);
  EXPECT_THROW(a + RJet::variable({0, 0}, 0, 2), DimensionMismatch);
  RJet v2({0}, 2, 2), v3({0}, 3, 2);
  EXPECT_THROW(mul(v2, v3), DimensionMismatch);
}

TEST(JetCompose, Examples) {
  // f(u) = u^2 expanded at u0 = 1, g(x) = 1 + x at 0.
  RJet f = poly1({Rational(1), Rational(2), Rational(1)}, Rational(1));
  RJet g = poly1({Rational(1), Rational(1), Rational(0)});
  RJet h = compose(f, g);
  EXPECT_EQ(h.at(0, 0), 1);
  EXPECT_EQ(h.at(0, 1), 2);
  EXPECT_EQ(h.at(0, 2), 1);

  RJet e = poly1({Rational(1), Rational(1), Rational(1, 2), Rational(1, 6)});
  RJet u = poly1({Rational(0), Rational(1), Rational(1), Rational(0)});
  RJet eu = compose(e, u);
  std::vector<Rational> expect{Rational(1), Rational(1), Rational(3, 2), Rational(7, 6)};
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(eu.at(0, k), expect[k]) << k;

  std::mt19937_64 rng(11);
  RJet g2 = random_jet(rng, {Rational(1), Rational(-2)}, 3, 4);
  RJet id = RJet::identity(g2.value(), 4);
  EXPECT_EQ(compose(id, g2), g2);
}

TEST(JetCompose, BasePointMismatch) {
  RJet f = poly1({Rational(1), Rational(2)}, Rational(1));
  RJet g = poly1({Rational(0), Rational(1)});
  EXPECT_THROW(compose(f, g), BasePointMismatch);
  Jet<double> fd = univariate(1.0, {1.0, 2.0});
  Jet<double> gd = univariate(0.0, {1.0 + 1e-14, 1.0});
  EXPECT_NO_THROW(compose(fd, gd));
}

TEST(JetCompose, TruncatesToMinimumOrder) {
  RJet f = poly1({Rational(0), Rational(1), Rational(1), Rational(1), Rational(1)});
  RJet g = poly1({Rational(0), Rational(1), Rational(1)});
  EXPECT_EQ(compose(f, g).order(), 2);
}

TEST(JetCompose, AssociativeOnRandomPolynomials) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 3), ord(1, 6);
  for (int trial = 0; trial < 40; ++trial) {
    int n1 = dim(rng), n2 = dim(rng), n3 = dim(rng), n4 = dim(rng);
    int K = ord(rng);
    if (n1 * n2 * n3 * n4 > 24 && K > 4) K = 4;
    std::vector<Rational> x0;
    for (int i = 0; i < n1; ++i) x0.push_back(random_rational(rng));
    RJet h = random_jet(rng, x0, n2, K);
    RJet g = random_jet(rng, h.value(), n3, K);
    RJet f = random_jet(rng, g.value(), n4, K);
    EXPECT_EQ(compose(f, compose(g, h)), compose(compose(f, g), h)) << "trial " << trial;
  }
}

TEST(FdbPartitionSum, Examples) {
  std::vector<Rational> fac;
  for (int j = 0; j <= 12; ++j) fac.push_back(Rational(factorial(j)));
  EXPECT_EQ(fdb_partition_sum(fac, fac, 3), 4);
  // 2^(k-1) compositions, each contributing 1.
  EXPECT_EQ(fdb_partition_sum(fac, fac, 12), 2048);
  std::vector<Rational> f{Rational(0), Rational(3), Rational(0)}, g{Rational(0), Rational(5), Rational(0)};
  EXPECT_EQ(fdb_partition_sum(f, g, 1), 15);
  std::vector<Rational> big(14, Rational(1));
  EXPECT_THROW(fdb_partition_sum(big, big, 13), HorizonExceeded);
}

TEST(FdbPartitionSum, MatchesComposeOnRandomJets) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    int K = 1 + trial % 8;
    RJet g = random_jet(rng, {random_rational(rng)}, 1, K);
    RJet f = random_jet(rng, g.value(), 1, K);
    RJet h = compose(f, g);
    std::vector<Rational> fd(K + 1), gd(K + 1);
    for (int j = 0; j <= K; ++j) {
      fd[j] = f.derivative(0, MultiIndex{j});
      gd[j] = g.derivative(0, MultiIndex{j});
    }
    for (int k = 1; k <= K; ++k) {
      Rational s = fdb_partition_sum(fd, gd, k);
      EXPECT_EQ(s, h.at(0, k));
      EXPECT_EQ(s * Rational(factorial(k)), h.derivative(0, MultiIndex{k}));
    }
  }
}

TEST(JetInvert, LinearAndCatalan) {
  RJet F = poly1({Rational(0), Rational(2), Rational(0)});
  RJet G = invert(F);
  EXPECT_EQ(G.at(0, 1), Rational(1, 2));
  EXPECT_EQ(G.at(0, 2), 0);

  RJet Q = poly1({Rational(0), Rational(1), Rational(1), Rational(0), Rational(0), Rational(0)});
  RJet Gi = invert(Q);
  std::vector<Rational> expect{0, 1, -1, 2, -5, 14};
  for (int k = 0; k <= 5; ++k) EXPECT_EQ(Gi.at(0, k), expect[k]) << k;
}

TEST(JetInvert, TwoDimensionalAlgebraicInverse) {
  // F(x, y) = (x + y^2, y); inverse (u - v^2, v).
  RJet F({Rational(0), Rational(0)}, 2, 4);
  F.set_coeff(0, {1, 0}, 1);
  F.set_coeff(0, {0, 2}, 1);
  F.set_coeff(1, {0, 1}, 1);
  RJet G = invert(F);
  RJet expect({Rational(0), Rational(0)}, 2, 4);
  expect.set_coeff(0, {1, 0}, 1);
  expect.set_coeff(0, {0, 2}, -1);
  expect.set_coeff(1, {0, 1}, 1);
  EXPECT_EQ(G, expect);
}

TEST(JetInvert, SingularDerivative) {
  RJet F = poly1({Rational(0), Rational(0), Rational(1)});
  EXPECT_THROW(invert(F), SingularDerivative);
  Jet<double> Fd = univariate(0.0, {0.0, 1e-12, 1.0});
  EXPECT_THROW(invert(Fd), SingularDerivative);
}

TEST(JetInvert, RoundTripOnRandomPerturbations) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 3;
    int K = n == 3 ? 4 : 6;
    std::vector<Rational> x0;
    for (int i = 0; i < n; ++i) x0.push_back(random_rational(rng));
    RJet f = random_jet(rng, x0, n, K);
    // keep the linear part of f small so Id + f stays invertible
    for (int c = 0; c < n; ++c)
      for (int j = 0; j < n; ++j) f.at(c, f.basis().position(MultiIndex::unit(n, j))) /= 10 * n;
    RJet F = RJet::identity(x0, K) + f;
    RJet G = invert(F);
    EXPECT_EQ(compose(F, G), RJet::identity(F.value(), K)) << trial;
    EXPECT_EQ(compose(G, F), RJet::identity(x0, K)) << trial;
  }
}

TEST(DirectionalDerivative, Examples) {
  Jet<double> xy({0.0, 0.0}, 1, 2);
  xy.set_coeff(0, {1, 1}, 1.0);
  double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(directional_derivative(xy, {s, s}, 2)[0], 1.0, 1e-15);

  RJet cube = poly1({Rational(0), Rational(0), Rational(0), Rational(1)});
  EXPECT_EQ(directional_derivative(cube, {Rational(1)}, 3)[0], 6);
  EXPECT_EQ(directional_derivative(cube, {Rational(1)}, 0)[0], 0);
  EXPECT_THROW(directional_derivative(cube, {Rational(1)}, 4), OrderMismatch);
}

TEST(DirectionalDerivative, PolarizationBound) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 3, K = 5;
    Jet<double> f(std::vector<double>(n, 0.0), 1, K);
    for (std::size_t p = 0; p < f.size(); ++p) f.at(0, p) = nd(rng);
    for (int k = 0; k <= K; ++k) {
      double bound = 0;
      for (std::size_t p = f.basis().degree_begin(k); p < f.basis().degree_begin(k + 1); ++p)
        bound += std::tgamma(k + 1.0) * std::abs(f.at(0, p));
      for (int d = 0; d < 50; ++d) {
        std::vector<double> v(n);
        double norm = 0;
        for (auto& x : v) {
          x = nd(rng);
          norm += x * x;
        }
        for (auto& x : v) x /= std::sqrt(norm);
        EXPECT_LE(std::abs(directional_derivative(f, v, k)[0]), bound * (1 + 1e-12));
      }
    }
  }
}

TEST(JetCalculus, PartialDerivativeAndPolynomial) {
  RJet f({Rational(0), Rational(0)}, 1, 3);
  f.set_coeff(0, {2, 1}, 3);  // 3 x^2 y
  RJet dx = partial_derivative(f, 0);
  EXPECT_EQ(dx.order(), 2);
  EXPECT_EQ(dx.coeff(0, {1, 1}), 6);
  EXPECT_EQ(evaluate_polynomial(f, {Rational(2), Rational(1, 3)})[0], 4);
  Jet<double> fd = f.convert<double>();
  EXPECT_EQ(fd.coeff(0, {2, 1}), 3.0);
}
