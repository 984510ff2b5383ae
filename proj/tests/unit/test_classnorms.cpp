#include "ultrajet/classnorms.hpp"
#include "ultrajet/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ultrajet;

namespace {

SampledFunction sampled(const std::string& text, int arity, const std::string& grid, int K) {
  return sample(Expr::parse(text, arity), GridSpec::parse(grid), K);
}

constexpr const char* kPi = "3.14159265358979323846";

}  // namespace

TEST(Grid, ParseAndIndexing) {
  auto g = GridSpec::parse("-1:1:5,0:2:3");
  EXPECT_EQ(g.dims(), 2);
  EXPECT_EQ(g.node_count(), 15u);
  EXPECT_EQ(g.flatten(g.unflatten(7)), 7u);
  auto x = g.coordinates(7);
  EXPECT_DOUBLE_EQ(x[0], 0.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  EXPECT_TRUE(g.on_boundary(0));
  EXPECT_FALSE(g.on_boundary(7));
  EXPECT_EQ(GridSpec::parse(g.to_string()), g);
  EXPECT_THROW(GridSpec::parse("0:1:4"), InvalidGrid);
  EXPECT_THROW(GridSpec::parse("1:0:5"), InvalidGrid);
  EXPECT_THROW(GridSpec::parse("0:1"), InvalidGrid);
}

TEST(Grid, SimpsonIntegratesCubicsExactly) {
  auto g = GridSpec::parse("0:2:5");
  double s = 0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    double x = g.coordinates(i)[0];
    s += g.simpson_weight(i) * x * x * x;
  }
  EXPECT_NEAR(s, 4.0, 1e-14);
}

TEST(Sample, ArityMismatchAndSpotCheck) {
  EXPECT_THROW(sample(Expr::parse("x1*x2", 2), GridSpec::parse("0:1:3"), 2), ArityError);
  auto f = sampled("sin(x1)*x2", 2, "-1:1:5,-1:1:5", 3);
  EXPECT_EQ(f.jets().size(), 25u);
  EXPECT_TRUE(f.spot_check(42));
}

TEST(Opnorm, BilinearProductBracket) {
  auto j = eval_jet<double>(Expr::parse("x1*x2", 2), {0.0, 0.0}, 2);
  auto b = opnorm_bracket(j, 2, sample_directions(2));
  EXPECT_DOUBLE_EQ(b.upper, 2.0);
  EXPECT_GE(b.lower, 1.0 - 1e-12);
  EXPECT_LE(b.lower, b.upper);
}

TEST(Opnorm, DirectionsAreUnitAndDeterministic) {
  auto d = sample_directions(3);
  EXPECT_EQ(d.size(), 64u);
  for (const auto& v : d) {
    double s = 0;
    for (double x : v) s += x * x;
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
  EXPECT_EQ(d, sample_directions(3));
  EXPECT_EQ(sample_directions(40).size(), 80u);
}

TEST(Opnorm, LowerNeverExceedsUpperOnRandomPoints) {
  auto e = Expr::parse("exp(x1 - x2/2)*cos(x3) + x1*x2*x3", 3);
  auto dirs = sample_directions(3);
  for (double t : {-0.7, 0.0, 0.4, 1.3}) {
    auto j = eval_jet<double>(e, {t, 0.5 * t, -t}, 4);
    for (int k = 0; k <= 4; ++k) {
      auto b = opnorm_bracket(j, k, dirs);
      EXPECT_LE(b.lower, b.upper * (1 + 1e-12));
      EXPECT_GE(b.lower, 0);
    }
  }
}

TEST(Seminorm, SineBoundedFamily) {
  auto f = sampled("sin(x1)", 1, "-6.283185307179586:6.283185307179586:401", 6);
  auto r = seminorm(f, ClassSpec::plain(Family::B));
  ASSERT_EQ(r.entries.size(), 7u);
  for (const auto& e : r.entries) {
    EXPECT_GE(e.value.lower, 0.99);
    EXPECT_LE(e.value.upper, 1.01);
  }
  EXPECT_TRUE(r.finite_at_truncation);
  EXPECT_FALSE(r.norm.has_value());
}

TEST(Seminorm, SchwartzWeightOnGaussian) {
  // sup (1+|x|) exp(-x^2) is attained at x = (sqrt 3 - 1)/2
  auto f = sampled("exp(-x1^2)", 1, "-3:3:601", 2);
  auto r = seminorm(f, ClassSpec::plain(Family::S), {{1, 0}});
  double x = (std::sqrt(3.0) - 1) / 2;
  EXPECT_NEAR(r.entries[0].value.upper, (1 + x) * std::exp(-x * x), 1e-3);
  EXPECT_NEAR(r.entries[0].value.upper, 1.1947, 1e-3);
}

TEST(Seminorm, GaussianL2) {
  auto f = sampled("exp(-x1^2)", 1, "-6:6:241", 1);
  EXPECT_NEAR(lp_norm(f, MultiIndex{0}, 2), std::pow(std::numbers::pi / 2, 0.25), 1e-6);
  auto r = seminorm(f, ClassSpec::plain(Family::Wp, 2.0), {{0}});
  EXPECT_NEAR(r.entries[0].value.upper, std::pow(std::numbers::pi / 2, 0.25), 1e-6);
  // int |2x e^{-x^2}| dx = 2
  EXPECT_NEAR(lp_norm(f, MultiIndex{1}, 1), 2.0, 1e-4);
}

TEST(Seminorm, BoundaryGuard) {
  auto f = sampled("exp(-x1^2)", 1, "-2:2:41", 0);
  EXPECT_THROW(seminorm(f, ClassSpec::plain(Family::Wp, 2.0)), QuadratureBoxTooSmall);
}

TEST(Seminorm, WeightedMonotoneInRhoAndHomogeneous) {
  auto f = sampled("exp(-x1^2)*cos(x2)", 2, "-2:2:9,-2:2:9", 8);
  auto M = WeightSequence::gevrey(1);
  double prev = std::numeric_limits<double>::infinity();
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    auto r = seminorm(f, ClassSpec::weighted(Family::BM, ClassType::roumieu, M, rho));
    ASSERT_TRUE(r.norm);
    EXPECT_LE(r.norm->upper, prev);
    prev = r.norm->upper;
  }
  auto g = sampled("-3*exp(-x1^2)*cos(x2)", 2, "-2:2:9,-2:2:9", 8);
  auto spec = ClassSpec::weighted(Family::BM, ClassType::beurling, M, 1.0);
  auto a = seminorm(f, spec), b = seminorm(g, spec);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_NEAR(b.entries[i].value.upper, 3 * a.entries[i].value.upper, 1e-12 * (1 + a.entries[i].value.upper));
    EXPECT_NEAR(b.entries[i].value.lower, 3 * a.entries[i].value.lower, 1e-12 * (1 + a.entries[i].value.lower));
  }
}

TEST(Seminorm, SLMAndWMpEntries) {
  auto f = sampled("exp(-x1^2)", 1, "-7:7:281", 3);
  auto one = WeightSequence::constant_one();
  auto slm = seminorm(f, ClassSpec::weighted(Family::SLM, ClassType::roumieu, one, 1.0, one), {{1, 0}, {0, 2}});
  ASSERT_EQ(slm.entries.size(), 2u);
  auto s = seminorm(f, ClassSpec::plain(Family::S), {{1, 0}, {0, 2}});
  EXPECT_DOUBLE_EQ(slm.entries[0].value.upper, s.entries[0].value.upper);
  EXPECT_NEAR(slm.entries[1].value.upper, s.entries[1].value.upper / 2, 1e-14);
  auto w = seminorm(f, ClassSpec::weighted(Family::WMp, ClassType::roumieu, WeightSequence::gevrey(1), 2.0, {}, 2.0),
                    {{2}});
  EXPECT_NEAR(w.entries[0].value.upper, lp_norm(f, MultiIndex{2}, 2) / (4 * 2 * 2), 1e-12);
}

TEST(Seminorm, IndexAndSpecValidation) {
  auto f = sampled("x1", 1, "0:1:3", 2);
  EXPECT_THROW(seminorm(f, ClassSpec::plain(Family::B), {{3}}), UnsupportedIndices);
  EXPECT_THROW(seminorm(f, ClassSpec::plain(Family::S), {{1}}), UnsupportedIndices);
  EXPECT_THROW(seminorm(f, ClassSpec::plain(Family::B), {{-1}}), UnsupportedIndices);
  EXPECT_THROW(ClassSpec::plain(Family::BM), InvalidClassSpec);
  EXPECT_THROW(ClassSpec::plain(Family::Wp), InvalidClassSpec);
  EXPECT_THROW(ClassSpec::plain(Family::Wp, 0.5), InvalidClassSpec);
  EXPECT_THROW(ClassSpec::weighted(Family::BM, ClassType::roumieu, WeightSequence::gevrey(1), -1), InvalidClassSpec);
  EXPECT_THROW(ClassSpec::weighted(Family::SLM, ClassType::roumieu, WeightSequence::gevrey(1), 1), InvalidClassSpec);
  EXPECT_EQ(parse_family("wmp"), Family::WMp);
  EXPECT_THROW(parse_family("Q"), InvalidClassSpec);
}

TEST(Support, BumpRadii) {
  auto wide = sampled("bump(x1/2)", 1, "-3:3:61", 2);
  ASSERT_TRUE(wide.support());
  EXPECT_NEAR(wide.support()->radius, 2.0, 1e-12);
  auto unit = sampled("bump(x1)", 1, "-3:3:61", 2);
  ASSERT_TRUE(unit.support());
  EXPECT_NEAR(unit.support()->radius, 1.0, 1e-12);
  auto zero = sampled("0*x1", 1, "-3:3:61", 2);
  ASSERT_TRUE(zero.support());
  EXPECT_EQ(zero.support()->radius, 0.0);
  auto edge = sampled("bump(x1/3)", 1, "-3:3:61", 2);
  EXPECT_FALSE(edge.support());
  auto d = seminorm(edge, ClassSpec::plain(Family::D));
  EXPECT_EQ(d.support_ok, false);
  auto dm = seminorm(wide, ClassSpec::weighted(Family::DM, ClassType::roumieu, WeightSequence::gevrey(2), 1.0));
  EXPECT_EQ(dm.support_ok, true);
  EXPECT_NEAR(*dm.support_radius, 2.0, 1e-12);
}

TEST(TypeRadius, ExponentialIsRoumieuLike) {
  auto f = sampled("exp(x1)", 1, "0:1:11", 12);
  auto r = type_radius(f, WeightSequence::constant_one(), 12);
  EXPECT_EQ(r.classification, TypeClass::roumieu_like);
  EXPECT_EQ(r.roots.size(), 12u);
  // sup_k (e/k!)^(1/k) over the last half is attained at k = 7
  EXPECT_NEAR(r.rho_star, std::pow(std::exp(1.0) / 5040.0, 1.0 / 7), 1e-12);
  EXPECT_THROW(type_radius(f, WeightSequence::constant_one(), 5), PreconditionFailed);
}

TEST(TypeRadius, PolynomialIsBeurlingLikeAndGevreyGapIsOutside) {
  auto p = sampled("x1^3 - x1", 1, "-1:1:9", 12);
  EXPECT_EQ(type_radius(p, WeightSequence::gevrey(1), 12).classification, TypeClass::beurling_like);
  // bump derivatives grow like a Gevrey-2 sequence, so against M = 1 the roots keep growing
  auto r = sampled("bump(x1)", 1, "-1.5:1.5:31", 16);
  EXPECT_EQ(type_radius(r, WeightSequence::constant_one(), 16).classification, TypeClass::outside);
  EXPECT_EQ(type_radius(r, WeightSequence::gevrey(2), 16).classification, TypeClass::roumieu_like);
}

TEST(Trace, GaussianWithinProofConstant) {
  auto f = sampled("exp(-x1^2 - x2^2)", 2, "-6:6:121,-6:6:121", 1);
  for (double p : {1.0, 2.0, 3.0}) {
    auto t = trace_check(f, 0.3, p);
    EXPECT_GT(t.lhs, 0);
    EXPECT_TRUE(t.within_proof_constant) << p;
    EXPECT_NEAR(t.proof_constant, std::pow(std::max(1.0, p - 1), 1 / p), 1e-15);
  }
  // slice L^2 norm of exp(-0.09 - y^2): e^{-0.09} (pi/2)^{1/4}
  EXPECT_NEAR(trace_check(f, 0.3, 2).lhs, std::exp(-0.09) * std::pow(std::numbers::pi / 2, 0.25), 1e-6);
}

TEST(Tensor, SinglePairEqualsDirectNorm) {
  auto f = sampled("exp(-x1^2)", 1, "-6:6:121", 1);
  auto g = sampled("exp(-2*x1^2)*(1+x1)", 1, "-6:6:121", 1);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    auto r = tensor_seminorm({{f, g}}, 1, 0, p);
    EXPECT_NEAR(r.value, r.direct_norm, 1e-10 * r.direct_norm) << p;
    EXPECT_TRUE(r.majorizes);
    EXPECT_FALSE(r.strict);
  }
}

TEST(Tensor, TwoOrthogonalPairsStrictForL2) {
  auto f1 = sampled("exp(-x1^2)", 1, "-6:6:121", 0);
  auto f2 = sampled("x1*exp(-x1^2)", 1, "-6:6:121", 0);
  auto g1 = sampled("exp(-x1^2)", 1, "-6:6:121", 0);
  auto g2 = sampled("x1*exp(-x1^2)", 1, "-6:6:121", 0);
  auto r = tensor_seminorm({{f1, g1}, {f2, g2}}, 0, 0, 2);
  EXPECT_TRUE(r.sup_exact);
  EXPECT_TRUE(r.majorizes);
  EXPECT_TRUE(r.strict);
  for (double p : {1.0, 1.5, 3.0}) EXPECT_TRUE(tensor_seminorm({{f1, g1}, {f2, g2}}, 0, 0, p).majorizes) << p;
  EXPECT_THROW(tensor_seminorm({}, 0, 0, 2), EmptyRepresentation);
}

TEST(Fourier, GaussianIsSelfDual) {
  auto f = sampled(std::string("exp(-") + kPi + "*x1^2)", 1, "-6:6:241", 0);
  auto xi = GridSpec::parse("-2:2:41");
  auto F = fourier_1d(f, xi);
  for (std::size_t a = 0; a < xi.node_count(); ++a) {
    double x = xi.coordinates(a)[0];
    EXPECT_NEAR(F.jet(a).at(0, 0), std::exp(-std::numbers::pi * x * x), 1e-6);
    EXPECT_NEAR(F.jet(a).at(1, 0), 0.0, 1e-6);
  }
  auto slow = sampled("exp(-x1^2/4)", 1, "-3:3:61", 0);
  EXPECT_THROW(fourier_1d(slow, xi), QuadratureBoxTooSmall);
}

TEST(Fourier, IteratedMatchesJoint) {
  auto f = sampled("exp(-x1^2 - 2*x2^2)*(1 + x1*x2)", 2, "-6:6:61,-6:6:61", 0);
  auto rep = factorization_check(f, GridSpec::parse("-1:1:9,-1:1:9"));
  EXPECT_LT(rep.max_discrepancy, 1e-12);
  EXPECT_EQ(rep.iterated.size(), 81u);
}
