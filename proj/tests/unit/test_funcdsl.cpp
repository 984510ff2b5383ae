#include "ultrajet/funcdsl.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ultrajet;

namespace {

std::vector<Rational> rpoint(std::initializer_list<int> v) {
  std::vector<Rational> p;
  for (int x : v) p.emplace_back(x);
  return p;
}

}  // namespace

TEST(Parse, WellFormed) {
  Expr e = Expr::parse("exp(-x1^2 - x2^2)", 2);
  EXPECT_EQ(e.target_dim(), 1);
  EXPECT_EQ(e.arity(), 2);
  Expr v = Expr::parse("[x1 + x2^2, x2]", 2);
  EXPECT_EQ(v.target_dim(), 2);
  EXPECT_EQ(Expr::parse("  x  *  2 ", 1).to_string(), "x1*2");
}

TEST(Parse, TruncatedInput) {
  try {
    Expr::parse("x1 +", 1);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(Expr::parse("x3", 2), ArityError);
  EXPECT_THROW(Expr::parse("x0", 2), ArityError);
  EXPECT_THROW(Expr::parse("y", 2), SyntaxError);
  EXPECT_THROW(Expr::parse("exp x1", 1), SyntaxError);
  EXPECT_THROW(Expr::parse("(x1", 1), SyntaxError);
  EXPECT_THROW(Expr::parse("x1^1.5", 1), SyntaxError);
  EXPECT_THROW(Expr::parse("x1 x1", 1), SyntaxError);
  EXPECT_THROW(Expr::parse("1 + [x1]", 1), SyntaxError);
  try {
    Expr::parse("x1 * )", 1);
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
}

TEST(Parse, UnaryMinusBindsLooserThanPower) {
  // -x^2 at x = 3 is -9.
  EXPECT_EQ(evaluate_value(Expr::parse("-x1^2", 1), {3.0})[0], -9.0);
  EXPECT_EQ(evaluate_value(Expr::parse("(-x1)^2", 1), {3.0})[0], 9.0);
  EXPECT_EQ(evaluate_value(Expr::parse("2^-2", 1), {0.0})[0], 0.25);
  EXPECT_EQ(evaluate_value(Expr::parse("1 - 2 - 3", 1), {0.0})[0], -4.0);
  EXPECT_EQ(evaluate_value(Expr::parse("12 / 3 / 2", 1), {0.0})[0], 2.0);
}

TEST(Parse, PrintRoundTrip) {
  for (auto text : {"exp(-x1^2 - x2^2)", "(x1 + x2)^2*bump(x1/3)*bump(x2/3)", "[x1 + x2^2, x2]",
                    "0.4*x1*exp(-x1^2)", "1 - (x1 - x2)", "x1/(x2*3)", "sqrt1p(x1^2) - cos(x2)/sin(x1 + 1)",
                    "-(x1 + 1)^-2"}) {
    Expr e = Expr::parse(text, 2);
    Expr again = Expr::parse(e.to_string(), 2);
    EXPECT_EQ(again.to_string(), e.to_string()) << text;
    std::vector<double> p{0.3, -0.7};
    EXPECT_EQ(evaluate_value(again, p), evaluate_value(e, p)) << text;
  }
}

TEST(EvalJet, ExpSeriesExact) {
  auto j = eval_jet<Rational>(Expr::parse("exp(x1)", 1), rpoint({0}), 3);
  std::vector<Rational> expect{Rational(1), Rational(1), Rational(1, 2), Rational(1, 6)};
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(j.at(0, k), expect[k]);
}

TEST(EvalJet, BumpOutsideSupport) {
  auto j = eval_jet<double>(Expr::parse("bump(x1)", 1), {1.5}, 4);
  EXPECT_TRUE(j.is_zero());
  auto r = eval_jet<Rational>(Expr::parse("bump(x1)", 1), rpoint({-2}), 4);
  EXPECT_TRUE(r.is_zero());
}

TEST(EvalJet, ProductOfVariables) {
  auto j = eval_jet<Rational>(Expr::parse("x1*x2", 2), rpoint({1, 2}), 2);
  EXPECT_EQ(j.coeff(0, {0, 0}), 2);
  EXPECT_EQ(j.coeff(0, {1, 0}), 2);
  EXPECT_EQ(j.coeff(0, {0, 1}), 1);
  EXPECT_EQ(j.coeff(0, {1, 1}), 1);
  EXPECT_EQ(j.coeff(0, {2, 0}), 0);
}

TEST(EvalJet, ExactBuiltinsAtZero) {
  auto s = eval_jet<Rational>(Expr::parse("sin(x1)", 1), rpoint({0}), 5);
  EXPECT_EQ(s.at(0, 1), 1);
  EXPECT_EQ(s.at(0, 3), Rational(-1, 6));
  EXPECT_EQ(s.at(0, 5), Rational(1, 120));
  auto c = eval_jet<Rational>(Expr::parse("cos(x1)", 1), rpoint({0}), 4);
  EXPECT_EQ(c.at(0, 2), Rational(-1, 2));
  EXPECT_EQ(c.at(0, 4), Rational(1, 24));
  auto q = eval_jet<Rational>(Expr::parse("sqrt1p(x1)", 1), rpoint({0}), 3);
  EXPECT_EQ(q.at(0, 1), Rational(1, 2));
  EXPECT_EQ(q.at(0, 2), Rational(-1, 8));
  EXPECT_EQ(q.at(0, 3), Rational(1, 16));
  // (sqrt(1+x))^2 = 1 + x exactly.
  auto sq = eval_jet<Rational>(Expr::parse("sqrt1p(x1)^2", 1), rpoint({0}), 6);
  auto lin = eval_jet<Rational>(Expr::parse("1 + x1", 1), rpoint({0}), 6);
  EXPECT_EQ(sq, lin);
}

TEST(EvalJet, Errors) {
  EXPECT_THROW(eval_jet<double>(Expr::parse("1/x1", 1), {0.0}, 2), EvaluationError);
  EXPECT_THROW(eval_jet<double>(Expr::parse("sqrt1p(x1)", 1), {-1.0}, 2), EvaluationError);
  EXPECT_THROW(eval_jet<double>(Expr::parse("x1^-1", 1), {0.0}, 2), EvaluationError);
  EXPECT_THROW(eval_jet<double>(Expr::parse("x1", 1), {0.0, 1.0}, 2), ArityError);
}

TEST(Evaluate, RationalDegradesWithWarning) {
  auto e = Expr::parse("exp(x1)", 1);
  auto exact = evaluate(e, rpoint({0}), 3, ScalarMode::rational);
  EXPECT_TRUE(exact.exact());
  EXPECT_FALSE(exact.degraded);
  auto deg = evaluate(e, rpoint({1}), 3, ScalarMode::rational);
  EXPECT_FALSE(deg.exact());
  EXPECT_TRUE(deg.degraded);
  EXPECT_FALSE(deg.warning.empty());
  EXPECT_NEAR(deg.as_float().at(0, 2), std::exp(1.0) / 2, 1e-15);
  auto b = evaluate(Expr::parse("bump(x1)", 1), rpoint({0}), 2, ScalarMode::rational);
  EXPECT_TRUE(b.degraded);
  EXPECT_NEAR(b.as_float().at(0, 0), std::exp(-1.0), 1e-15);
}

TEST(EvalJet, CommutesWithCompose) {
  // exp(sin(x1) + x1^2) written literally versus composed jets; exact at 0.
  auto outer = Expr::parse("exp(x1)", 1);
  auto inner = Expr::parse("sin(x1) + x1^2", 1);
  auto literal = Expr::parse("exp(sin(x1) + x1^2)", 1);
  auto gj = eval_jet<Rational>(inner, rpoint({0}), 7);
  auto fj = eval_jet<Rational>(outer, gj.value(), 7);
  EXPECT_EQ(eval_jet<Rational>(literal, rpoint({0}), 7), compose(fj, gj));
  auto sub = substitute(outer, {inner});
  EXPECT_EQ(eval_jet<Rational>(sub, rpoint({0}), 7), compose(fj, gj));

  auto f2 = Expr::parse("[x1*x2 + 1, x2^3 - x1]", 2);
  auto g2 = Expr::parse("[x1 - 2*x2, x1^2/3 + x3]", 3);
  auto gj2 = eval_jet<Rational>(g2, rpoint({1, 2, -1}), 5);
  auto fj2 = eval_jet<Rational>(f2, gj2.value(), 5);
  auto lit2 = substitute(f2, {g2.component(0), g2.component(1)});
  EXPECT_EQ(lit2.arity(), 3);
  EXPECT_EQ(eval_jet<Rational>(lit2, rpoint({1, 2, -1}), 5), compose(fj2, gj2));
}

TEST(EvalJet, FirstOrderMatchesCentralDifferences) {
  const char* corpus[] = {"exp(-x1^2 - x2^2)", "sin(x1*x2) + cos(x2)", "sqrt1p(x1^2 + x2^2)",
                          "bump(x1/2)*bump(x2/2)", "(x1 + x2)^3/(1 + x1^2)", "x1*exp(x2)^2 - 0.5*x2"};
  std::vector<double> p{0.37, -0.61};
  const double h = 1e-5;
  for (auto text : corpus) {
    Expr e = Expr::parse(text, 2);
    auto j = eval_jet<double>(e, p, 1);
    for (int i = 0; i < 2; ++i) {
      auto plus = p, minus = p;
      plus[i] += h;
      minus[i] -= h;
      double fd = (evaluate_value(e, plus)[0] - evaluate_value(e, minus)[0]) / (2 * h);
      double coef = j.coeff(0, MultiIndex::unit(2, i));
      EXPECT_NEAR(coef, fd, 1e-7 * std::max(1.0, std::abs(fd))) << text << " axis " << i;
    }
    EXPECT_NEAR(j.at(0, 0), evaluate_value(e, p)[0], 1e-14) << text;
  }
}

TEST(EvalJet, BumpFlattensAtBoundary) {
  Expr e = Expr::parse("bump(x1)", 1);
  double prev = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    auto j = eval_jet<double>(e, {1 - eps}, 4);
    double mx = 0;
    for (int k = 0; k <= 4; ++k) mx = std::max(mx, std::abs(j.at(0, k)));
    EXPECT_LT(mx, prev);
    prev = mx;
  }
  EXPECT_LT(prev, 1e-100);
}

TEST(EvalJet, HigherOrderBumpMatchesValueBranch) {
  Expr e = Expr::parse("bump(x1)", 1);
  auto j = eval_jet<double>(e, {0.3}, 2);
  double u = 0.3, w = 1 - u * u;
  double f = std::exp(-1 / w);
  // f' = f * (-2u / w^2)
  EXPECT_NEAR(j.at(0, 0), f, 1e-15);
  EXPECT_NEAR(j.at(0, 1), f * (-2 * u / (w * w)), 1e-14);
}
