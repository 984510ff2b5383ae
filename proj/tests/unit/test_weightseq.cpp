#include "ultrajet/errors.hpp"
#include "ultrajet/weightseq.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ultrajet;

namespace {

// Brute-force moderate-growth supremum from log-factorials, independent of the library.
double mg_oracle_gevrey(double s, int K) {
  double best = 1;
  for (int n = 2; n <= K; ++n)
    for (int j = 1; j < n; ++j) {
      double lb = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
      best = std::max(best, std::exp(s * lb / n));
    }
  return best;
}

}  // namespace

TEST(WeightSequence, Construction) {
  auto g0 = WeightSequence::gevrey(0);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(g0.exact_value(k), 1);
  EXPECT_EQ(WeightSequence::gevrey(1).exact_value(4), 24);
  EXPECT_EQ(WeightSequence::gevrey(2).exact_value(3), 36);
  EXPECT_THROW(WeightSequence::table({Rational(1), Rational(1, 2)}), InvalidSequence);
  EXPECT_THROW(WeightSequence::table({Rational(2), Rational(3)}), InvalidSequence);
  EXPECT_THROW(WeightSequence::table({Rational(1), Rational(0)}), InvalidSequence);
  EXPECT_THROW(WeightSequence::qsquare(1), InvalidSequence);
  EXPECT_THROW(WeightSequence::gevrey(-1), InvalidSequence);
  EXPECT_FALSE(WeightSequence::qsquare(2).exact());
  EXPECT_NEAR(WeightSequence::qsquare(2).log_value(3), 9 * std::log(2.0), 1e-12);
}

TEST(WeightSequence, ParsesCliStrings) {
  EXPECT_EQ(WeightSequence::parse("gevrey:2").kind(), SequenceKind::gevrey);
  EXPECT_EQ(WeightSequence::parse("qsquare:2").parameter(), 2.0);
  EXPECT_EQ(WeightSequence::parse("one").kind(), SequenceKind::constant_one);
  auto t = WeightSequence::parse("table:1,1,2,2");
  EXPECT_EQ(t.exact_value(3), 2);
  EXPECT_EQ(t.exact_value(10), 2);
  EXPECT_EQ(WeightSequence::parse("table:1,1.5").exact_value(1), Rational(3, 2));
  EXPECT_THROW(WeightSequence::parse("bogus:1"), InvalidSequence);
  EXPECT_THROW(WeightSequence::parse("gevrey:x"), InvalidSequence);
  EXPECT_EQ(WeightSequence::parse(WeightSequence::gevrey(1.5).to_string()).parameter(), 1.5);
}

TEST(CheckProperty, GevreyOneIsLogConvex) {
  auto v = check_property(WeightSequence::gevrey(1), Property::log_convex, 30);
  EXPECT_TRUE(v.holds_up_to_K);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(CheckProperty, TableLogConvexWitness) {
  auto v = check_property(WeightSequence::parse("table:1,1,2,2"), Property::log_convex, 3);
  EXPECT_FALSE(v.holds_up_to_K);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->k, 2);
}

TEST(CheckProperty, GevreyTwoModerateGrowth) {
  auto v = check_property(WeightSequence::gevrey(2), Property::moderate_growth, 30);
  ASSERT_TRUE(v.constant_estimate.has_value());
  EXPECT_LE(*v.constant_estimate, 4.0 + 1e-9);
  EXPECT_NEAR(*v.constant_estimate, mg_oracle_gevrey(2, 30), 1e-12);
  EXPECT_TRUE(v.stabilized);
  EXPECT_TRUE(v.holds_up_to_K);
  EXPECT_FALSE(v.witness.has_value());
}

TEST(CheckProperty, QSquareIsNotModerate) {
  auto v = check_property(WeightSequence::qsquare(2), Property::moderate_growth, 20);
  ASSERT_TRUE(v.constant_estimate.has_value());
  // 2^(2jk/(j+k)) is maximal at j = k = 10.
  EXPECT_NEAR(*v.constant_estimate, 1024.0, 1e-9 * 1024);
  EXPECT_FALSE(v.stabilized);
  EXPECT_FALSE(v.holds_up_to_K);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->j, 10);
  EXPECT_EQ(v.witness->k, 10);
}

TEST(CheckProperty, QSquareIsDerivationClosed) {
  // (q^(2k+1))^(1/k) decreases, so the supremum q^3 sits at k = 1.
  auto v = check_property(WeightSequence::qsquare(2), Property::derivation_closed, 20);
  EXPECT_TRUE(v.holds_up_to_K);
  EXPECT_NEAR(*v.constant_estimate, 8.0, 1e-12);
}

TEST(CheckProperty, WitnessPresentIffFails) {
  for (auto seq : {"gevrey:0", "gevrey:1", "gevrey:2", "gevrey:0.5", "qsquare:2", "qsquare:1.5", "one",
                   "table:1,1,2,2", "table:1,2,8,64"}) {
    auto m = WeightSequence::parse(seq);
    for (auto p : {Property::log_convex, Property::weakly_log_convex, Property::derivation_closed,
                   Property::moderate_growth}) {
      auto v = check_property(m, p, 24);
      EXPECT_EQ(v.witness.has_value(), !v.holds_up_to_K) << seq << " " << to_string(p);
    }
  }
}

TEST(CheckProperty, SupremumEstimatesAreMonotoneInK) {
  for (auto seq : {"gevrey:1", "gevrey:2.5", "qsquare:1.3", "one", "table:1,3,4,20"}) {
    auto m = WeightSequence::parse(seq);
    for (auto p : {Property::derivation_closed, Property::moderate_growth}) {
      double prev = 0;
      for (int K = 2; K <= 30; ++K) {
        double e = *check_property(m, p, K).constant_estimate;
        EXPECT_GE(e, prev) << seq;
        prev = e;
      }
    }
  }
}

TEST(CheckProperty, FailuresPersistWhenHorizonGrows) {
  for (auto seq : {"table:1,1,2,2", "table:1,2,3", "table:1,1,1,5,5", "gevrey:1"}) {
    auto m = WeightSequence::parse(seq);
    for (auto p : {Property::log_convex, Property::weakly_log_convex}) {
      bool failed = false;
      for (int K = 2; K <= 20; ++K) {
        bool holds = check_property(m, p, K).holds_up_to_K;
        if (failed) EXPECT_FALSE(holds) << seq << " K=" << K;
        failed = failed || !holds;
      }
    }
  }
}

TEST(CheckProperty, ModerateGrowthImpliesDerivationClosed) {
  for (auto seq : {"gevrey:0", "gevrey:1", "gevrey:2", "gevrey:3", "gevrey:0.5", "one", "qsquare:2"}) {
    auto m = WeightSequence::parse(seq);
    for (int K : {10, 20, 30}) {
      if (check_property(m, Property::moderate_growth, K).holds_up_to_K)
        EXPECT_TRUE(check_property(m, Property::derivation_closed, K - 1).holds_up_to_K) << seq;
    }
  }
}

TEST(PartialSums, ConstantOneDiverges) {
  auto r = quasianalytic_partial_sums(WeightSequence::constant_one(), 100);
  double oracle = 0;
  for (int k = 1; k <= 100; ++k) oracle += std::exp(-std::lgamma(k + 1.0) / k);
  ASSERT_EQ(r.partial_sums.size(), 100u);
  EXPECT_NEAR(r.partial_sums.back(), oracle, 1e-12);
  EXPECT_GE(r.partial_sums.back(), 10.0);
  EXPECT_EQ(r.trend, Trend::diverging);
}

TEST(PartialSums, GevreyConverges) {
  for (double s : {1.0, 2.0, 3.0}) {
    auto r = quasianalytic_partial_sums(WeightSequence::gevrey(s), 100);
    EXPECT_EQ(r.trend, Trend::converging) << s;
  }
}

TEST(PartialSums, MonotoneSmallHorizon) {
  auto r = quasianalytic_partial_sums(WeightSequence::gevrey(0), 10);
  double s = 0;
  for (int k = 1; k <= 10; ++k) {
    s += std::exp(-std::lgamma(k + 1.0) / k);
    EXPECT_NEAR(r.partial_sums[k - 1], s, 1e-14);
    if (k > 1) EXPECT_GT(r.partial_sums[k - 1], r.partial_sums[k - 2]);
  }
  EXPECT_THROW(quasianalytic_partial_sums(WeightSequence::gevrey(0), 9), PreconditionFailed);
}

TEST(DerivedInequalities, GevreyOne) {
  auto d = verify_derived_inequalities(WeightSequence::gevrey(1), 12);
  EXPECT_TRUE(d.algebra_ok);
  EXPECT_TRUE(d.composition_ok);
  EXPECT_EQ(d.composition_horizon, 12);
}

TEST(DerivedInequalities, ConstantOneDerivationConstant) {
  auto d = verify_derived_inequalities(WeightSequence::constant_one(), 12);
  EXPECT_GE(d.derivation_constant, std::pow(2.0, 0.25));
  // Brute-force minimal C over k >= 0, j >= 1, j + k <= 12.
  double oracle = 1;
  for (int k = 0; k <= 12; ++k)
    for (int j = 1; j + k <= 12; ++j)
      oracle = std::max(oracle, std::exp((std::lgamma(k + j + 1.0) - std::lgamma(k + 1.0)) / (j * (k + j))));
  EXPECT_NEAR(d.derivation_constant, oracle, 1e-12);
  EXPECT_NEAR(oracle, std::cbrt(3.0), 1e-12);
}

TEST(DerivedInequalities, LogConvexSequencesPassBoth) {
  for (auto seq : {"gevrey:0", "gevrey:1", "gevrey:2", "gevrey:1.5", "qsquare:2", "table:1,1,1"}) {
    auto d = verify_derived_inequalities(WeightSequence::parse(seq), 12);
    EXPECT_TRUE(d.algebra_ok) << seq;
    EXPECT_TRUE(d.composition_ok) << seq;
  }
}

TEST(DerivedInequalities, RejectsNonLogConvex) {
  EXPECT_THROW(verify_derived_inequalities(WeightSequence::parse("table:1,1,2,2"), 5), PreconditionFailed);
}

TEST(RateMembership, FactorialDecay) {
  auto v = rate_membership(RateSequence::factorial_decay(1), 40, {1, 2, 4, 8});
  EXPECT_TRUE(v.in_R);
  EXPECT_TRUE(v.in_R_prime);
}

TEST(RateMembership, GeometricFailsForLargeSigma) {
  auto v = rate_membership(RateSequence::geometric(2), 40, {4});
  EXPECT_FALSE(v.in_R);
  EXPECT_FALSE(v.in_R_prime);
  EXPECT_EQ(*v.failing_sigma, 4.0);
}

TEST(RateMembership, Superexponential) {
  auto v = rate_membership(RateSequence::superexp(0.5), 20, {1, 2, 4, 8});
  EXPECT_TRUE(v.in_R);
  EXPECT_TRUE(v.in_R_prime);
  EXPECT_EQ(RateSequence::superexp(0.5).value(3), Rational(1, 512));
  EXPECT_EQ(RateSequence::factorial_decay(2).value(2), Rational(1, 8));
}

TEST(ProjectiveProbe, ClosedForms) {
  std::vector<std::pair<int, double>> ones, twos, facts;
  for (int k = 0; k <= 12; ++k) {
    ones.push_back({k, 1.0});
    twos.push_back({k, std::pow(2.0, k)});
    facts.push_back({k, std::tgamma(k + 1.0)});
  }
  auto r = RateSequence::factorial_decay(1);
  EXPECT_NEAR(projective_probe(ones, r).sigma_star, 1.0, 1e-14);
  EXPECT_NEAR(projective_probe(twos, r).sigma_star, 2.0, 1e-14);
  auto p = projective_probe(facts, r);
  EXPECT_NEAR(p.bound_by_rate, 1.0, 1e-12);
  EXPECT_GE(p.delta_star, 1.0);
  EXPECT_TRUE(p.implications_ok);
  EXPECT_THROW(projective_probe({{0, 0.0}, {3, 0.0}}, r), EmptyInput);
  EXPECT_THROW(projective_probe(ones, RateSequence::geometric(2)), PreconditionFailed);
}
