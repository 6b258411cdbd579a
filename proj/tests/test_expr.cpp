#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "curveq/errors.hpp"
#include "curveq/expr.hpp"
#include "curveq/jet.hpp"
#include "support.hpp"

namespace curveq {
namespace {

using testing::fd_derivative;

TEST(Parse, SingleFunction) {
  const ExprAst ast = parse_expression("cos(t)");
  EXPECT_EQ(ast.root().kind, ExprKind::cos);
  EXPECT_EQ(ast.root().lhs->kind, ExprKind::variable);
}

TEST(Parse, PowerBindsTighterThanProduct) {
  const ExprAst ast = parse_expression("3*cos(t) + t^2");
  const ExprNode& r = ast.root();
  ASSERT_EQ(r.kind, ExprKind::add);
  ASSERT_EQ(r.lhs->kind, ExprKind::multiply);
  EXPECT_EQ(r.lhs->lhs->kind, ExprKind::constant);
  EXPECT_EQ(r.lhs->lhs->value, 3.0);
  EXPECT_EQ(r.lhs->rhs->kind, ExprKind::cos);
  ASSERT_EQ(r.rhs->kind, ExprKind::power);
  EXPECT_EQ(r.rhs->value, 2.0);
}

TEST(Parse, UnbalancedParenReportsOffset) {
  try {
    parse_expression("cos(");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::syntax);
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Parse, UnknownIdentifier) {
  try {
    parse_expression("2*foo(t)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::unknown_identifier);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Parse, VariableExponentRejected) { EXPECT_THROW(parse_expression("2^t"), ParseError); }

TEST(Parse, CustomParameterName) {
  const ExprAst ast = parse_expression("theta*2", "theta");
  EXPECT_DOUBLE_EQ(eval(ast, 1.5), 3.0);
  EXPECT_THROW(parse_expression("t*2", "theta"), ParseError);
}

TEST(Parse, PiConstant) { EXPECT_DOUBLE_EQ(eval(parse_expression("2*pi"), 0.0), 2.0 * std::numbers::pi); }

TEST(Parse, UnaryMinusBelowPower) { EXPECT_DOUBLE_EQ(eval(parse_expression("-t^2"), 3.0), -9.0); }

TEST(EvalJet, Square) {
  const Jet4 j = eval_jet(parse_expression("t^2"), 3.0);
  const double expected[] = {9, 6, 2, 0, 0};
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(j.derivative(k), expected[k], 1e-14) << "k=" << k;
}

TEST(EvalJet, SineAtZero) {
  const Jet4 j = eval_jet(parse_expression("sin(t)"), 0.0);
  const double expected[] = {0, 1, 0, -1, 0};
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(j.derivative(k), expected[k], 1e-15) << "k=" << k;
}

// Derivatives of t e^t are (t + k) e^t; the oracle is independent of that.
TEST(EvalJet, MatchesFiniteDifferences) {
  const ExprAst ast = parse_expression("t*exp(t)");
  const Jet4 j = eval_jet(ast, 1.0);
  auto f = [&](double x) { return eval(ast, x); };
  const double steps[] = {1e-3, 1e-2, 2e-2, 5e-2, 5e-2};
  for (int k = 0; k <= 4; ++k) {
    const double fd = fd_derivative(f, 1.0, k, steps[k]);
    EXPECT_NEAR(j.derivative(k), fd, 1e-7 * std::abs(fd)) << "k=" << k;
    EXPECT_NEAR(j.derivative(k), (1.0 + k) * std::exp(1.0), 1e-13 * (1.0 + k) * std::exp(1.0));
  }
}

TEST(EvalJet, DomainErrorsCarryOffset) {
  try {
    eval(parse_expression("1 + log(t - 2)"), 1.0);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(eval(parse_expression("1/(t-1)"), 1.0), EvaluationError);
  EXPECT_THROW(eval_jet(parse_expression("sqrt(t)"), 0.0), EvaluationError);
}

// Random polynomial of degree <= 4 against its closed-form derivatives.
TEST(EvalJet, RandomPolynomialsExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double c[5];
    ExprPtr sum = expr::constant(c[0] = coef(rng));
    for (int p = 1; p <= 4; ++p) {
      c[p] = coef(rng);
      sum = expr::binary(ExprKind::add, sum,
                         expr::binary(ExprKind::multiply, expr::constant(c[p]), expr::power(expr::variable(), p)));
    }
    const ExprAst ast(sum, "t");
    const double t = coef(rng);
    const Jet4 j = eval_jet(ast, t);
    // d^k/dt^k of sum c_p t^p
    for (int k = 0; k <= 4; ++k) {
      double expected = 0.0, scale = 0.0;
      for (int p = k; p <= 4; ++p) {
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= p - i;
        expected += c[p] * falling * std::pow(t, p - k);
        scale += std::abs(c[p] * falling * std::pow(t, p - k));
      }
      EXPECT_NEAR(j.derivative(k), expected, 1e-13 * std::max(1.0, scale)) << "trial " << trial << " k=" << k;
    }
  }
}

ExprPtr random_smooth_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_real_distribution<double> literal(0.5, 2.0);
  switch (pick(rng)) {
    case 0: return expr::constant(literal(rng));
    case 1: return expr::variable();
    case 2: return expr::unary(ExprKind::sin, random_smooth_tree(rng, depth - 1));
    case 3: return expr::unary(ExprKind::cos, random_smooth_tree(rng, depth - 1));
    case 4:
      return expr::unary(ExprKind::exp, expr::binary(ExprKind::multiply, expr::constant(0.3),
                                                     random_smooth_tree(rng, depth - 1)));
    case 5: return expr::binary(ExprKind::add, random_smooth_tree(rng, depth - 1), random_smooth_tree(rng, depth - 1));
    case 6:
      return expr::binary(ExprKind::multiply, random_smooth_tree(rng, depth - 1), random_smooth_tree(rng, depth - 1));
    default: {
      // 1 / (2 + cos(.)) stays smooth everywhere.
      auto denom = expr::binary(ExprKind::add, expr::constant(2.0),
                                expr::unary(ExprKind::cos, random_smooth_tree(rng, depth - 1)));
      return expr::binary(ExprKind::divide, expr::constant(1.0), denom);
    }
  }
}

// Central-difference error should fall about 4x per step halving.
TEST(EvalJet, RandomSmoothTreesConvergeAtSecondOrder) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const ExprAst ast(random_smooth_tree(rng, 3), "t");
    const double t = 0.37;
    const Jet4 j = eval_jet(ast, t);
    auto f = [&](double x) { return eval(ast, x); };
    for (int k = 1; k <= 4; ++k) {
      auto fd = [&](double h) {
        switch (k) {
          case 1: return (f(t + h) - f(t - h)) / (2 * h);
          case 2: return (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
          case 3: return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h * h * h);
          default: return (f(t + 2 * h) - 4 * f(t + h) + 6 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / (h * h * h * h);
        }
      };
      const double e1 = std::abs(fd(0.04) - j.derivative(k));
      const double e2 = std::abs(fd(0.02) - j.derivative(k));
      if (e1 < 1e-9) continue;  // locally polynomial, nothing to measure
      ++checked;
      EXPECT_LE(e2, 0.35 * e1) << print(ast) << " k=" << k;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(Print, RoundTripsStructurally) {
  const char* sources[] = {"3*cos(t) + t^2", "-t^2", "sqrt(1 + t^2)/(2 - sin(t))", "exp(-t)*log(t+3)", "tan(t/4)^3",
                           "1.5e-3*t - -t", "2*pi*t"};
  for (const char* src : sources) {
    const ExprAst a = parse_expression(src);
    const ExprAst b = parse_expression(print(a));
    EXPECT_TRUE(structurally_equal(a, b)) << src << " -> " << print(a);
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const ExprAst a(random_smooth_tree(rng, 4), "t");
    EXPECT_TRUE(structurally_equal(a, parse_expression(print(a)))) << print(a);
  }
}

TEST(Jet, ComposeAndRevertAreInverse) {
  // y = sin(x) around 0, then x(y) = asin(y) = y + y^3/6 + ...
  const Jet4 y = sin(Jet4::variable(0.0));
  const Jet4 x = revert(y);
  EXPECT_NEAR(x.coefficient(1), 1.0, 1e-15);
  EXPECT_NEAR(x.coefficient(2), 0.0, 1e-15);
  EXPECT_NEAR(x.coefficient(3), 1.0 / 6.0, 1e-15);
  const Jet4 id = compose(y, x);
  EXPECT_NEAR(id.coefficient(1), 1.0, 1e-15);
  for (int k = 2; k <= 4; ++k) EXPECT_NEAR(id.coefficient(k), 0.0, 1e-15);
}

TEST(Jet, LeibnizProduct) {
  const Jet4 a = exp(Jet4::variable(0.2));
  const Jet4 b = cos(Jet4::variable(0.2));
  const Jet4 p = a * b;
  // (e^t cos t)'' = -2 e^t sin t
  EXPECT_NEAR(p.derivative(2), -2.0 * std::exp(0.2) * std::sin(0.2), 1e-14);
  EXPECT_NEAR(differentiate(p).derivative(1), p.derivative(2), 1e-14);
  EXPECT_NEAR(integrate(differentiate(p)).coefficient(1), p.coefficient(1), 1e-15);
}

}  // namespace
}  // namespace curveq
