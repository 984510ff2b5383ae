#include "ultrajet/diffgroup.hpp"
#include "ultrajet/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ultrajet;

namespace {

DiffMap map1(const std::string& f, const std::string& grid = "-6:6:241", int tag = -1) {
  return make_diffmap(Expr::parse(f, 1), GridSpec::parse(grid), tag);
}

SampledFunction sampled(const std::string& text, int arity, const std::string& grid, int K) {
  return sample(Expr::parse(text, arity), GridSpec::parse(grid), K);
}

}  // namespace

TEST(DiffMap, ZeroIsIdentity) {
  DiffMap F = map1("0");
  EXPECT_EQ(F.inf_det_estimate, 1.0);
  EXPECT_EQ(F.apply({0.3})[0], 0.3);
}

TEST(DiffMap, InfDetMatchesCalculus) {
  // min of 1 + 0.4 (1 - 2x^2) e^{-x^2} sits at x^2 = 3/2.
  DiffMap F = map1("0.4*x*exp(-x^2)");
  double exact = 1 - 0.8 * std::exp(-1.5);
  EXPECT_GE(F.inf_det_estimate, exact - 1e-15);
  EXPECT_NEAR(F.inf_det_estimate, exact, 1e-3);
}

TEST(DiffMap, RejectsOrientationReversal) {
  try {
    map1("-2*x", "-1:1:5");
    FAIL();
  } catch (const NotADiffeo& e) {
    EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
  }
  EXPECT_THROW(make_diffmap(Expr::parse("[x, x]", 1), GridSpec::parse("0:1:3")), DimensionMismatch);
}

TEST(DiffMap, ParseWithIdPrefix) {
  DiffMap F = parse_diffmap("id+[0.1*x2, 0]", 2, GridSpec::parse("-1:1:5,-1:1:5"));
  EXPECT_EQ(F.n(), 2);
  EXPECT_DOUBLE_EQ(F.inf_det_estimate, 1.0);
}

TEST(Compose, IdentityElement) {
  DiffMap F = map1("0.4*x*exp(-x^2)");
  DiffMap H = compose_diff(F, map1("0"));
  for (double x : {-1.3, 0.0, 0.7, 4.0}) EXPECT_NEAR(H.apply({x})[0], F.apply({x})[0], 1e-15);
}

TEST(Compose, PointwiseIdentityAndTags) {
  const char* f = "0.1*x*exp(-x^2)";
  DiffMap F = map1(f, "-6:6:241", 2), G = map1(f, "-6:6:241", 2);
  ASSERT_TRUE(F.class_tag && F.class_tag->schwartz);
  DiffMap H = compose_diff(F, G);
  const GridSpec& grid = H.report_grid;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    auto x = grid.coordinates(i);
    double direct = F.apply(G.apply(x))[0] - x[0];
    EXPECT_NEAR(evaluate_value(H.f, x)[0], direct, 1e-14);
  }
  ASSERT_TRUE(H.class_tag.has_value());
  EXPECT_TRUE(H.class_tag->schwartz);
  EXPECT_TRUE(H.class_tag->bounded);
}

TEST(Compose, AssociativePointwise) {
  GridSpec grid = GridSpec::parse("-2:2:9,-2:2:9");
  DiffMap A = make_diffmap(Expr::parse("[0.2*sin(x2), 0.1*x1*exp(-x1^2)]", 2), grid);
  DiffMap B = make_diffmap(Expr::parse("[0.1*cos(x1+x2), 0.2*exp(-x2^2)]", 2), grid);
  DiffMap C = make_diffmap(Expr::parse("[0.1*x1*x2*exp(-x1^2-x2^2), 0]", 2), grid);
  DiffMap L = compose_diff(compose_diff(A, B), C), R = compose_diff(A, compose_diff(B, C));
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    auto x = grid.coordinates(i);
    auto l = L.apply(x), r = R.apply(x);
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(l[c], r[c], 1e-12);
  }
}

TEST(Invert, IdentityGivesZero) {
  InverseResult r = invert_diff(map1("0", "-1:1:11"));
  for (const auto& g : r.g) EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(Invert, GaussianPerturbation) {
  DiffMap F = map1("0.4*x*exp(-x^2)");
  InverseResult r = invert_diff(F);
  ASSERT_EQ(r.g.size(), 241u);
  EXPECT_LE(r.max_residual, 1e-10);
  EXPECT_LE(decay_outside(r, F.report_grid, 5.0), 1e-8);
  EXPECT_LE(r.max_det_identity_error, 1e-9);
  EXPECT_LE(r.max_roundtrip_error, 1e-9);
  // F(x + g(x)) = x, so the composite with the inverse values is the identity.
  const GridSpec& grid = F.report_grid;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    auto x = grid.coordinates(i);
    EXPECT_NEAR(F.apply({x[0] + r.g[i][0]})[0], x[0], 1e-10);
  }
}

TEST(Invert, DecayInheritedFromF) {
  // g(y) = -f(x) at y = x + f(x), so |g| beyond R is bounded by |f| beyond R - sup|f|.
  // x e^{-x^2} peaks at 1/sqrt(2) and decreases after it, so that sup is f(R - sup|f|).
  DiffMap F = map1("0.4*x*exp(-x^2)");
  InverseResult r = invert_diff(F);
  auto f = [](double x) { return 0.4 * x * std::exp(-x * x); };
  double fsup = f(1 / std::sqrt(2.0));
  for (double radius : {3.0, 4.0, 5.0})
    EXPECT_LE(decay_outside(r, F.report_grid, radius), f(radius - fsup) + 1e-12) << radius;
}

TEST(Invert, LinearClosedForm) {
  DiffMap F = map1("x", "-3:3:13");
  InverseResult r = invert_diff(F);
  const GridSpec& grid = F.report_grid;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    double y = grid.coordinates(i)[0];
    EXPECT_NEAR(r.g[i][0], -y / 2, 1e-15);
    EXPECT_NEAR(r.G_jets[i].coeff(0, MultiIndex{1}), 0.5, 1e-15);
  }
  EXPECT_TRUE(r.newton_used[0]);
}

TEST(Invert, TwoDimensional) {
  GridSpec grid = GridSpec::parse("-2:2:9,-2:2:9");
  DiffMap F = make_diffmap(Expr::parse("[0.3*sin(x2), 0.2*x1*exp(-x1^2)]", 2), grid);
  InverseResult r = invert_diff(F);
  EXPECT_LE(r.max_residual, 1e-12);
  EXPECT_LE(r.max_det_identity_error, 1e-9);
  EXPECT_LE(r.max_roundtrip_error, 1e-9);
}

TEST(MatrixBound, DiagonalClosedForms) {
  auto I = matrix_inverse_bound({{1, 0}, {0, 1}});
  EXPECT_NEAR(I.lhs, 1, 1e-12);
  EXPECT_NEAR(I.rhs, 1, 1e-12);
  EXPECT_TRUE(I.holds);
  auto two = matrix_inverse_bound({{2, 0}, {0, 2}});
  EXPECT_NEAR(two.lhs, 0.5, 1e-12);
  EXPECT_NEAR(two.rhs, 0.5, 1e-12);
  EXPECT_TRUE(two.holds);
  auto d = matrix_inverse_bound({{1, 0}, {0, 4}});
  EXPECT_NEAR(d.lhs, 1, 1e-12);
  EXPECT_NEAR(d.rhs, 1, 1e-12);
  EXPECT_TRUE(d.holds);
  EXPECT_THROW(matrix_inverse_bound({{1, 2}, {2, 4}}), SingularMatrix);
}

TEST(MatrixBound, RandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  int checked = 0;
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 1000; ++trial) {
      Matrix<double> A(n, std::vector<double>(n));
      for (auto& row : A)
        for (auto& v : row) v = u(rng);
      if (std::abs(determinant(A)) < 1e-3) continue;
      EXPECT_TRUE(matrix_inverse_bound(A).holds);
      ++checked;
    }
  EXPECT_GT(checked, 2900);
}

TEST(Certificate, PolynomialUsesFiniteJet) {
  SampledFunction f = sampled("x^2", 1, "-0.05:0.05:11", 8);
  BoundCertificate c = certificate_estimate(f, WeightSequence::constant_one(), 1, 8);
  // sup |f'| = 0.1 and f''/2! = 1, so the first order binds at rho = 10.
  EXPECT_NEAR(c.rho, 10, 1e-9);
  EXPECT_NEAR(c.C, 0.01, 1e-12);
  EXPECT_LE(c.worst_ratio, 1 + 1e-12);
}

TEST(Certificate, GaussianWithinCauchyEstimate) {
  SampledFunction f = sampled("exp(-x^2)", 1, "-6:6:241", 12);
  BoundCertificate c = certificate_estimate(f, WeightSequence::constant_one(), 0, 12);
  EXPECT_TRUE(std::isfinite(c.C));
  EXPECT_GT(c.C, 0);
  EXPECT_LE(c.worst_ratio, 1 + 1e-12);
  EXPECT_LE(certificate_ratio(c, f), 1 + 1e-12);
  // |f^(k)(x)|/k! <= e^{r^2} r^-k on circles of radius r = 1/rho.
  EXPECT_LE(c.C, std::exp(1 / (c.rho * c.rho)) * (1 + 1e-12));
}

TEST(Certificate, SuperExponentialSurrogateDiverges) {
  GridSpec grid = GridSpec::parse("0:1:3");
  std::vector<Jet<double>> jets;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    Jet<double> j(grid.coordinates(i), 1, 12);
    for (int k = 0; k <= 12; ++k) j.at(0, k) = std::ldexp(1.0, k * k);
    jets.push_back(j);
  }
  SampledFunction f(grid, 12, 1, jets);
  EXPECT_THROW(certificate_estimate(f, WeightSequence::gevrey(1), 1, 12), DivergentAtHorizon);
}

TEST(ComposeBound, DisplayedValues) {
  EXPECT_EQ(compose_bound_value(1, 1, 1, 1, 1, 3), 4.0);
  EXPECT_EQ(compose_bound_value(2, 1, 1, 1, 1, 2), 6.0);
  EXPECT_EQ(compose_bound_value(3, 2, 5, 0.5, 0.25, 1), 3 * 2 * 5 * 0.5 * 0.25);
}

TEST(ComposeBound, MajorizesComposite) {
  const int K = 8;
  WeightSequence one = WeightSequence::constant_one();
  SampledFunction f = sampled("exp(x)", 1, "-1:1:41", K);
  SampledFunction g = sampled("0.5*sin(x)", 1, "-2:2:41", K);
  SampledFunction h = sampled("exp(0.5*sin(x))", 1, "-2:2:41", K);
  BoundCertificate cf = certificate_at(f, one, 1, K, 1), cg = certificate_at(g, one, 1, K, 1);
  CompositionSources src{&f, &g, &h};
  ComposedCertificate r = propagate_compose(cf, cg, ComposeMode::roumieu, 0, src);
  ASSERT_TRUE(r.majorizes.has_value());
  EXPECT_TRUE(*r.majorizes);
  EXPECT_NEAR(r.cert.C, cf.C * cg.C, 1e-15);
  EXPECT_NEAR(r.cert.rho, 1 + cg.C, 1e-15);
  ASSERT_TRUE(r.projective.has_value());

  ComposedCertificate b = propagate_compose(cf, cg, ComposeMode::beurling, 0.5, src);
  EXPECT_NEAR(b.cert.rho, 0.5, 1e-12);
  EXPECT_NEAR(*b.sigma + std::sqrt(*b.sigma), 0.5, 1e-15);
  EXPECT_TRUE(*b.majorizes);
}

TEST(ComposeBound, Preconditions) {
  SampledFunction f = sampled("exp(x)", 1, "-1:1:21", 6);
  BoundCertificate a = certificate_at(f, WeightSequence::constant_one(), 1, 6, 1);
  BoundCertificate b = certificate_at(f, WeightSequence::gevrey(1), 1, 6, 1);
  EXPECT_THROW(propagate_compose(a, b, ComposeMode::roumieu), IncompatibleWeightSequences);
  EXPECT_THROW(propagate_compose(a, a, ComposeMode::beurling, 1.0), PreconditionFailed);
}

TEST(InverseTable, IdentityMap) {
  BoundCertificate c;
  c.C = 0;
  c.rho = 1;
  c.K = 6;
  InverseBoundTable t = propagate_inverse(c, 1.0, 3, 6);
  EXPECT_EQ(t.b[1], 1.0);
  for (int k = 2; k <= 6; ++k) EXPECT_EQ(t.b[k], 0.0);
}

TEST(InverseTable, MajorizesCatalanCoefficients) {
  const int K = 8;
  SampledFunction f = sampled("x^2", 1, "-0.05:0.05:11", K);
  BoundCertificate c = certificate_estimate(f, WeightSequence::constant_one(), 1, K);
  InverseBoundTable t = propagate_inverse(c, 0.9, 1, K);  // 1 + 2x >= 0.9 on the box
  EXPECT_LT(t.theta, 1);

  Jet<Rational> F(std::vector<Rational>{Rational(0)}, 1, K);
  F.at(0, 1) = 1;
  F.at(0, 2) = 1;
  Jet<Rational> G = invert(F);
  for (int k = 1; k <= K; ++k) EXPECT_LE(std::abs(to_double(G.at(0, k))), t.b[k]) << k;

  DiffMap Fm = map1("x^2", "-0.02:0.02:5");
  InverseResult r = invert_diff(Fm, {1e-14, 200, K});
  EXPECT_LE(inverse_table_ratio(t, WeightSequence::constant_one(), r.G_jets), 1.0);
}

TEST(InverseTable, DegenerateDeterminantFails) {
  SampledFunction f = sampled("x^2", 1, "-0.05:0.05:11", 8);
  BoundCertificate c = certificate_estimate(f, WeightSequence::constant_one(), 1, 8);
  try {
    propagate_inverse(c, 0.01, 1, 8);
    FAIL();
  } catch (const ContractionFailure& e) {
    EXPECT_EQ(e.order(), 2);
    EXPECT_GE(e.factor(), 1);
  }
}
