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

#pragma once

// Boolean constraint expressions over dimension values.
//
//   or    := and ('||' and)*
//   and   := cmp ('&&' cmp)*
//   cmp   := sum (('<'|'<='|'>'|'>='|'=='|'!=') sum)?
//   sum   := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := ('-'|'!') unary | atom
//   atom  := number | ident | func '(' args ')' | '(' or ')'
//
// Functions: ln (alias log), exp, abs, min, max.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oddcov/grouping.hpp"
#include "oddcov/odd_spec.hpp"

namespace oddcov::dsl {

enum class UnaryOp { negate, logical_not };

enum class BinaryOp {
  add, sub, mul, div,
  lt, le, gt, ge, eq, ne,
  logical_and, logical_or,
};

enum class Function { ln, exp, abs, min, max };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Number {
  double value = 0.0;
};
struct Identifier {
  std::string name;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Function fn;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<Number, Identifier, Unary, Binary, Call> node;
  std::size_t offset = 0;  // byte offset of the node's first token
};

// Structural equality; source offsets are ignored.
bool operator==(const Expr& a, const Expr& b);

ExprPtr make_number(double value);
ExprPtr make_identifier(std::string name);
ExprPtr make_unary(UnaryOp op, ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_call(Function fn, std::vector<ExprPtr> args);

// Throws ParseError (lexical error, unexpected token, unknown function,
// arity mismatch) carrying the byte offset.
ExprPtr parse_expr(std::string_view text);

// Minimal-parenthesis rendering; parse_expr(pretty_print(e)) == e.
std::string pretty_print(const Expr& expr);

std::string_view function_name(Function fn);
std::size_t function_arity(Function fn);

enum class ValueType { numeric, boolean };

// Unknown identifiers and type errors; empty iff the expression is a
// type-correct boolean over `names`.
std::vector<Diagnostic> check_expr(const Expr& expr,
                                   std::span<const std::string> names);
std::vector<Diagnostic> check_expr(const Expr& expr,
                                   const EffectiveDimensions& dims);

std::vector<std::string> identifiers(const Expr& expr);

using EvalEnvironment = std::map<std::string, double, std::less<>>;

// Tree-walking evaluation against a name->value map (short-circuiting
// && and ||). Throws EvalError on domain errors and SpecError for a missing
// identifier.
bool eval_expr(const Expr& expr, const EvalEnvironment& env);
double eval_numeric(const Expr& expr, const EvalEnvironment& env);

// Expression with identifiers resolved to slots of a value vector. Same
// semantics as eval_expr; immutable and safe to share across threads.
class BoundExpr {
 public:
  // Throws SpecError unless the expression checks against slot_names with
  // result type `expected`.
  BoundExpr(const Expr& expr, std::span<const std::string> slot_names,
            ValueType expected = ValueType::boolean);

  bool test(std::span<const double> values) const;
  double number(std::span<const double> values) const;

 private:
  enum class Op : std::uint8_t {
    constant, slot, neg, lnot,
    add, sub, mul, div,
    lt, le, gt, ge, eq, ne, land, lor,
    ln, exp, abs, min, max,
  };
  struct Node {
    Op op;
    std::uint32_t a = 0;  // child node or slot
    std::uint32_t b = 0;
    double constant = 0.0;
  };

  std::uint32_t compile(const Expr& expr, std::span<const std::string> names);
  double eval(std::uint32_t node, std::span<const double> values) const;

  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
};

}  // namespace oddcov::dsl
