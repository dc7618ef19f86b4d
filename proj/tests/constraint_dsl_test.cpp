// Copyright 2026 The oddcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oddcov/constraint_dsl.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oddcov/errors.hpp"
#include "random_expr.hpp"
#include "support.hpp"

namespace oddcov::dsl {
namespace {

const std::vector<std::string> kNames = {"h", "tau", "x"};

bool eval(std::string_view text, EvalEnvironment env = {}) {
  return eval_expr(*parse_expr(text), env);
}

double num(std::string_view text, EvalEnvironment env = {}) {
  return eval_numeric(*parse_expr(text), env);
}

TEST(ConstraintDslTest, Precedence) {
  EXPECT_EQ(num("1 + 2 * 3"), 7);
  EXPECT_EQ(num("(1 + 2) * 3"), 9);
  EXPECT_EQ(num("8 / 4 / 2"), 1);
  EXPECT_EQ(num("10 - 4 - 3"), 3);
  EXPECT_EQ(num("-2 * 3"), -6);
  EXPECT_EQ(num("--2"), 2);
  EXPECT_TRUE(eval("1 < 2 && 3 > 2 || 1 > 5"));
  EXPECT_FALSE(eval("!(1 < 2)"));
  EXPECT_TRUE(eval("1 + 1 == 2"));
  EXPECT_TRUE(eval("2 != 3"));
}

TEST(ConstraintDslTest, Functions) {
  EXPECT_EQ(num("abs(-3)"), 3);
  EXPECT_EQ(num("min(2, 5)"), 2);
  EXPECT_EQ(num("max(2, 5)"), 5);
  EXPECT_EQ(num("ln(1)"), 0);
  EXPECT_EQ(num("log(exp(0))"), 0);
  EXPECT_DOUBLE_EQ(num("exp(ln(7))"), 7);
}

TEST(ConstraintDslTest, Numbers) {
  EXPECT_EQ(num("1e3"), 1000);
  EXPECT_EQ(num("2.5E-1"), 0.25);
  EXPECT_EQ(num(".5"), 0.5);
  EXPECT_EQ(num("3."), 3);
}

TEST(ConstraintDslTest, ParseErrorsCarryOffsets) {
  auto offset_of = [](std::string_view text) -> std::size_t {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::string::npos;
  };
  EXPECT_EQ(offset_of("h <="), 4u);
  EXPECT_EQ(offset_of("h $ 3"), 2u);
  EXPECT_EQ(offset_of("foo(1)"), 0u);
  EXPECT_EQ(offset_of("min(1)"), 0u);
  EXPECT_EQ(offset_of("(1 + 2"), 6u);
  EXPECT_EQ(offset_of("1 < 2 < 3"), 6u);
  EXPECT_EQ(offset_of("1 2"), 2u);
  EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(ConstraintDslTest, TypeChecking) {
  EXPECT_TRUE(check_expr(*parse_expr("h < 3 && !(tau > 1)"), kNames).empty());
  EXPECT_FALSE(check_expr(*parse_expr("h + 1"), kNames).empty());
  EXPECT_FALSE(check_expr(*parse_expr("h && tau"), kNames).empty());
  EXPECT_FALSE(check_expr(*parse_expr("(h < 1) + 2 > 0"), kNames).empty());
  EXPECT_FALSE(check_expr(*parse_expr("!h"), kNames).empty());
  EXPECT_FALSE(check_expr(*parse_expr("abs(h < 1) > 0"), kNames).empty());
  const auto unknown = check_expr(*parse_expr("speed > 3"), kNames);
  ASSERT_EQ(unknown.size(), 1u);
  EXPECT_EQ(unknown[0].message, "unknown identifier 'speed'");
  EXPECT_EQ(unknown[0].path, "offset 0");
}

TEST(ConstraintDslTest, DomainErrorsAreNotFalse) {
  EXPECT_THROW(eval("1 / 0 > 1"), EvalError);
  EXPECT_THROW(eval("ln(0) < 1"), EvalError);
  EXPECT_THROW(eval("ln(-1) < 1"), EvalError);
  EXPECT_THROW(eval("exp(1000) > 1"), EvalError);
  EXPECT_THROW(eval("missing > 1"), SpecError);
}

TEST(ConstraintDslTest, ShortCircuit) {
  EXPECT_FALSE(eval("1 > 2 && 1 / 0 > 1"));
  EXPECT_TRUE(eval("1 < 2 || ln(0) > 1"));
}

TEST(ConstraintDslTest, BoundMatchesTreeWalk) {
  const std::vector<std::string> exprs = {
      "abs(h) <= (1200/ln(61))*ln(tau+1) + 300",
      "!((h > 0 && x < 0) || (h < 0 && x > 0))",
      "max(h, tau) - min(x, 2) >= exp(0) * -1",
      "h * tau / 3 != x",
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (const auto& text : exprs) {
    const ExprPtr e = parse_expr(text);
    const BoundExpr bound(*e, kNames);
    for (int i = 0; i < 200; ++i) {
      const double h = u(rng), tau = std::fabs(u(rng)), x = u(rng);
      const EvalEnvironment env{{"h", h}, {"tau", tau}, {"x", x}};
      const std::vector<double> values{h, tau, x};
      EXPECT_EQ(bound.test(values), eval_expr(*e, env)) << text;
    }
  }
  const BoundExpr numeric(*parse_expr("h * 2 + tau"), kNames, ValueType::numeric);
  const std::vector<double> values{1.5, 2, 0};
  EXPECT_EQ(numeric.number(values), 5);
  EXPECT_THROW(BoundExpr(*parse_expr("h + 1"), kNames), SpecError);
  EXPECT_THROW(BoundExpr(*parse_expr("q > 1"), kNames), SpecError);
  const BoundExpr div(*parse_expr("1 / h > 0"), kNames);
  const std::vector<double> zero{0, 0, 0};
  EXPECT_THROW(div.test(zero), EvalError);
}

TEST(ConstraintDslTest, PrettyPrintMinimalParens) {
  EXPECT_EQ(pretty_print(*parse_expr("((a + b)) * c")), "(a + b) * c");
  EXPECT_EQ(pretty_print(*parse_expr("a - (b - c)")), "a - (b - c)");
  EXPECT_EQ(pretty_print(*parse_expr("(a - b) - c")), "a - b - c");
  EXPECT_EQ(pretty_print(*parse_expr("!(a < b)")), "!(a < b)");
  EXPECT_EQ(pretty_print(*parse_expr("log(x)")), "ln(x)");
  EXPECT_EQ(pretty_print(*parse_expr("(a < b) == (c < d)")), "(a < b) == (c < d)");
}

TEST(ConstraintDslTest, RoundTripRandomTrees) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const ExprPtr e = testing::random_expr(rng, 5);
    const std::string text = pretty_print(*e);
    const ExprPtr back = parse_expr(text);
    ASSERT_TRUE(*back == *e) << text;
  }
}

TEST(ConstraintDslTest, Identifiers) {
  const auto ids = identifiers(*parse_expr("a + b * a > c"));
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(ConstraintDslTest, BundledConstraintsCheck) {
  const OddSpec spec = testing::verticalcas();
  const EffectiveDimensions dims = build_dimensions(spec);
  for (const auto& c : spec.constraints) {
    EXPECT_TRUE(check_expr(*parse_expr(c.expression), dims).empty()) << c.expression;
  }
}

}  // namespace
}  // namespace oddcov::dsl
