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

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "oddcov/errors.hpp"
#include "oddcov/format.hpp"

namespace oddcov::dsl {

namespace {

enum class Tok {
  number, ident, lparen, rparen, comma,
  plus, minus, star, slash, bang,
  lt, le, gt, ge, eq, ne, andand, oror,
  end,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::end, start, {}};
    const char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return number(start);
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      return {Tok::ident, start, src_.substr(start, pos_ - start)};
    }
    auto two = [&](char second) {
      return pos_ + 1 < src_.size() && src_[pos_ + 1] == second;
    };
    auto emit = [&](Tok kind, std::size_t len) {
      pos_ += len;
      return Token{kind, start, src_.substr(start, len)};
    };
    switch (ch) {
      case '(': return emit(Tok::lparen, 1);
      case ')': return emit(Tok::rparen, 1);
      case ',': return emit(Tok::comma, 1);
      case '+': return emit(Tok::plus, 1);
      case '-': return emit(Tok::minus, 1);
      case '*': return emit(Tok::star, 1);
      case '/': return emit(Tok::slash, 1);
      case '<': return two('=') ? emit(Tok::le, 2) : emit(Tok::lt, 1);
      case '>': return two('=') ? emit(Tok::ge, 2) : emit(Tok::gt, 1);
      case '!': return two('=') ? emit(Tok::ne, 2) : emit(Tok::bang, 1);
      case '=':
        if (two('=')) return emit(Tok::eq, 2);
        break;
      case '&':
        if (two('&')) return emit(Tok::andand, 2);
        break;
      case '|':
        if (two('|')) return emit(Tok::oror, 2);
        break;
      default:
        break;
    }
    throw ParseError("unexpected character '" + std::string(1, ch) + "'", start);
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw ParseError("invalid number '" + std::string(text) + "'", start);
    }
    return {Tok::number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprPtr parse() {
    ExprPtr e = parse_or();
    if (tok_.kind != Tok::end) throw ParseError("unexpected token " + describe(tok_), tok_.offset);
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  static ExprPtr at(ExprPtr e, std::size_t offset) {
    auto copy = std::make_shared<Expr>(*e);
    copy->offset = offset;
    return copy;
  }

  ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    const std::size_t offset = lhs->offset;
    return at(make_binary(op, std::move(lhs), std::move(rhs)), offset);
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (tok_.kind == Tok::oror) {
      advance();
      lhs = binary(BinaryOp::logical_or, lhs, parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_cmp();
    while (tok_.kind == Tok::andand) {
      advance();
      lhs = binary(BinaryOp::logical_and, lhs, parse_cmp());
    }
    return lhs;
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_sum();
    std::optional<BinaryOp> op;
    switch (tok_.kind) {
      case Tok::lt: op = BinaryOp::lt; break;
      case Tok::le: op = BinaryOp::le; break;
      case Tok::gt: op = BinaryOp::gt; break;
      case Tok::ge: op = BinaryOp::ge; break;
      case Tok::eq: op = BinaryOp::eq; break;
      case Tok::ne: op = BinaryOp::ne; break;
      default: return lhs;
    }
    advance();
    return binary(*op, lhs, parse_sum());
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const BinaryOp op = tok_.kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
      advance();
      lhs = binary(op, lhs, parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const BinaryOp op = tok_.kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
      advance();
      lhs = binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (tok_.kind == Tok::minus || tok_.kind == Tok::bang) {
      const UnaryOp op = tok_.kind == Tok::minus ? UnaryOp::negate : UnaryOp::logical_not;
      const std::size_t offset = tok_.offset;
      advance();
      return at(make_unary(op, parse_unary()), offset);
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::number:
        advance();
        return at(make_number(t.value), t.offset);
      case Tok::lparen: {
        advance();
        ExprPtr inner = parse_or();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident: {
        advance();
        if (tok_.kind != Tok::lparen) return at(make_identifier(std::string(t.text)), t.offset);
        const Function fn = resolve(t);
        advance();
        std::vector<ExprPtr> args;
        if (tok_.kind != Tok::rparen) {
          args.push_back(parse_or());
          while (tok_.kind == Tok::comma) {
            advance();
            args.push_back(parse_or());
          }
        }
        expect(Tok::rparen, "')'");
        if (args.size() != function_arity(fn)) {
          throw ParseError(std::string(t.text) + "() takes " + std::to_string(function_arity(fn)) +
                               " argument(s), got " + std::to_string(args.size()),
                           t.offset);
        }
        return at(make_call(fn, std::move(args)), t.offset);
      }
      default:
        throw ParseError("unexpected " + describe(t), t.offset);
    }
  }

  static Function resolve(const Token& t) {
    if (t.text == "ln" || t.text == "log") return Function::ln;
    if (t.text == "exp") return Function::exp;
    if (t.text == "abs") return Function::abs;
    if (t.text == "min") return Function::min;
    if (t.text == "max") return Function::max;
    throw ParseError("unknown function '" + std::string(t.text) + "'", t.offset);
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      throw ParseError(std::string("expected ") + what + ", found " + describe(tok_), tok_.offset);
    }
    advance();
  }

  Lexer lexer_;
  Token tok_{Tok::end, 0, {}};
};

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::logical_or: return 1;
    case BinaryOp::logical_and: return 2;
    case BinaryOp::lt: case BinaryOp::le: case BinaryOp::gt:
    case BinaryOp::ge: case BinaryOp::eq: case BinaryOp::ne: return 3;
    case BinaryOp::add: case BinaryOp::sub: return 4;
    case BinaryOp::mul: case BinaryOp::div: return 5;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 6;

std::string_view symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "!=";
    case BinaryOp::logical_and: return "&&";
    case BinaryOp::logical_or: return "||";
  }
  return "?";
}

bool is_comparison(BinaryOp op) { return precedence(op) == 3; }
bool is_logical(BinaryOp op) { return precedence(op) <= 2; }

void print(const Expr& e, int min_prec, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Number>) {
          out += format_real(n.value);
        } else if constexpr (std::is_same_v<N, Identifier>) {
          out += n.name;
        } else if constexpr (std::is_same_v<N, Unary>) {
          const bool wrap = kUnaryPrecedence < min_prec;
          if (wrap) out += '(';
          out += n.op == UnaryOp::negate ? '-' : '!';
          print(*n.operand, kUnaryPrecedence, out);
          if (wrap) out += ')';
        } else if constexpr (std::is_same_v<N, Binary>) {
          const int p = precedence(n.op);
          const bool wrap = p < min_prec;
          if (wrap) out += '(';
          // Comparisons do not chain, so both sides bind tighter.
          print(*n.lhs, is_comparison(n.op) ? p + 1 : p, out);
          out += ' ';
          out += symbol(n.op);
          out += ' ';
          print(*n.rhs, p + 1, out);
          if (wrap) out += ')';
        } else if constexpr (std::is_same_v<N, Call>) {
          out += function_name(n.fn);
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) out += ", ";
            print(*n.args[i], 1, out);
          }
          out += ')';
        }
      },
      e.node);
}

// Shared scalar semantics for both evaluators.
double checked(double value, std::size_t offset) {
  if (!std::isfinite(value)) {
    throw EvalError("non-finite intermediate result at offset " + std::to_string(offset));
  }
  return value;
}

double apply_div(double a, double b, std::size_t offset) {
  if (b == 0.0) throw EvalError("division by zero at offset " + std::to_string(offset));
  return checked(a / b, offset);
}

double apply_ln(double x, std::size_t offset) {
  if (!(x > 0.0)) {
    throw EvalError("ln of non-positive value " + format_real(x) + " at offset " +
                    std::to_string(offset));
  }
  return checked(std::log(x), offset);
}

std::optional<ValueType> infer(const Expr& e, const std::set<std::string, std::less<>>& names,
                               std::vector<Diagnostic>& diags) {
  auto report = [&](std::string message) {
    diags.push_back({Severity::error, std::move(message), "offset " + std::to_string(e.offset)});
  };
  return std::visit(
      [&](const auto& n) -> std::optional<ValueType> {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Number>) {
          return ValueType::numeric;
        } else if constexpr (std::is_same_v<N, Identifier>) {
          if (!names.contains(n.name)) {
            report("unknown identifier '" + n.name + "'");
            return std::nullopt;
          }
          return ValueType::numeric;
        } else if constexpr (std::is_same_v<N, Unary>) {
          const auto t = infer(*n.operand, names, diags);
          const ValueType want =
              n.op == UnaryOp::negate ? ValueType::numeric : ValueType::boolean;
          if (t && *t != want) {
            report(n.op == UnaryOp::negate ? "unary '-' expects a numeric operand"
                                           : "'!' expects a boolean operand");
            return std::nullopt;
          }
          return t ? std::optional(want) : std::nullopt;
        } else if constexpr (std::is_same_v<N, Binary>) {
          const auto l = infer(*n.lhs, names, diags);
          const auto r = infer(*n.rhs, names, diags);
          const ValueType operand = is_logical(n.op) ? ValueType::boolean : ValueType::numeric;
          const ValueType result =
              (is_logical(n.op) || is_comparison(n.op)) ? ValueType::boolean : ValueType::numeric;
          if ((l && *l != operand) || (r && *r != operand)) {
            report("operator '" + std::string(symbol(n.op)) + "' expects " +
                   (operand == ValueType::boolean ? "boolean" : "numeric") + " operands");
            return std::nullopt;
          }
          return (l && r) ? std::optional(result) : std::nullopt;
        } else {
          bool ok = true;
          for (const auto& arg : n.args) {
            const auto t = infer(*arg, names, diags);
            if (!t) {
              ok = false;
            } else if (*t != ValueType::numeric) {
              report(std::string(function_name(n.fn)) + "() expects numeric arguments");
              ok = false;
            }
          }
          return ok ? std::optional(ValueType::numeric) : std::nullopt;
        }
      },
      e.node);
}

void collect_identifiers(const Expr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Identifier>) {
          if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
        } else if constexpr (std::is_same_v<N, Unary>) {
          collect_identifiers(*n.operand, out);
        } else if constexpr (std::is_same_v<N, Binary>) {
          collect_identifiers(*n.lhs, out);
          collect_identifiers(*n.rhs, out);
        } else if constexpr (std::is_same_v<N, Call>) {
          for (const auto& a : n.args) collect_identifiers(*a, out);
        }
      },
      e.node);
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const auto& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<N, Identifier>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<N, Unary>) {
          return x.op == y.op && *x.operand == *y.operand;
        } else if constexpr (std::is_same_v<N, Binary>) {
          return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else {
          if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!(*x.args[i] == *y.args[i])) return false;
          }
          return true;
        }
      },
      a.node);
}

ExprPtr make_number(double value) { return std::make_shared<Expr>(Expr{Number{value}}); }
ExprPtr make_identifier(std::string name) {
  return std::make_shared<Expr>(Expr{Identifier{std::move(name)}});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<Expr>(Expr{Unary{op, std::move(operand)}});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_call(Function fn, std::vector<ExprPtr> args) {
  return std::make_shared<Expr>(Expr{Call{fn, std::move(args)}});
}

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string pretty_print(const Expr& expr) {
  std::string out;
  print(expr, 1, out);
  return out;
}

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::ln: return "ln";
    case Function::exp: return "exp";
    case Function::abs: return "abs";
    case Function::min: return "min";
    case Function::max: return "max";
  }
  return "?";
}

std::size_t function_arity(Function fn) {
  return (fn == Function::min || fn == Function::max) ? 2 : 1;
}

namespace {

std::vector<Diagnostic> check_typed(const Expr& expr, std::span<const std::string> names,
                                    ValueType expected) {
  const std::set<std::string, std::less<>> known(names.begin(), names.end());
  std::vector<Diagnostic> diags;
  const auto t = infer(expr, known, diags);
  if (t && *t != expected) {
    diags.push_back({Severity::error,
                     expected == ValueType::boolean ? "constraint must be a boolean expression"
                                                    : "expected a numeric expression",
                     "offset 0"});
  }
  return diags;
}

}  // namespace

std::vector<Diagnostic> check_expr(const Expr& expr, std::span<const std::string> names) {
  return check_typed(expr, names, ValueType::boolean);
}

std::vector<Diagnostic> check_expr(const Expr& expr, const EffectiveDimensions& dims) {
  const auto names = dims.names();
  return check_expr(expr, names);
}

std::vector<std::string> identifiers(const Expr& expr) {
  std::vector<std::string> out;
  collect_identifiers(expr, out);
  return out;
}

double eval_numeric(const Expr& expr, const EvalEnvironment& env) {
  return std::visit(
      [&](const auto& n) -> double {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, Identifier>) {
          auto it = env.find(n.name);
          if (it == env.end()) throw SpecError("unbound identifier '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<N, Unary>) {
          if (n.op != UnaryOp::negate) throw SpecError("boolean used as a number");
          return -eval_numeric(*n.operand, env);
        } else if constexpr (std::is_same_v<N, Binary>) {
          const double a = eval_numeric(*n.lhs, env);
          const double b = eval_numeric(*n.rhs, env);
          switch (n.op) {
            case BinaryOp::add: return checked(a + b, expr.offset);
            case BinaryOp::sub: return checked(a - b, expr.offset);
            case BinaryOp::mul: return checked(a * b, expr.offset);
            case BinaryOp::div: return apply_div(a, b, expr.offset);
            default: throw SpecError("boolean used as a number");
          }
        } else {
          const double x = eval_numeric(*n.args[0], env);
          switch (n.fn) {
            case Function::ln: return apply_ln(x, expr.offset);
            case Function::exp: return checked(std::exp(x), expr.offset);
            case Function::abs: return std::fabs(x);
            case Function::min: return std::min(x, eval_numeric(*n.args[1], env));
            case Function::max: return std::max(x, eval_numeric(*n.args[1], env));
          }
          return x;
        }
      },
      expr.node);
}

bool eval_expr(const Expr& expr, const EvalEnvironment& env) {
  if (const auto* u = std::get_if<Unary>(&expr.node)) {
    if (u->op != UnaryOp::logical_not) throw SpecError("number used as a boolean");
    return !eval_expr(*u->operand, env);
  }
  const auto* b = std::get_if<Binary>(&expr.node);
  if (b == nullptr) throw SpecError("number used as a boolean");
  switch (b->op) {
    case BinaryOp::logical_and: return eval_expr(*b->lhs, env) && eval_expr(*b->rhs, env);
    case BinaryOp::logical_or: return eval_expr(*b->lhs, env) || eval_expr(*b->rhs, env);
    default: break;
  }
  if (!is_comparison(b->op)) throw SpecError("number used as a boolean");
  const double x = eval_numeric(*b->lhs, env);
  const double y = eval_numeric(*b->rhs, env);
  switch (b->op) {
    case BinaryOp::lt: return x < y;
    case BinaryOp::le: return x <= y;
    case BinaryOp::gt: return x > y;
    case BinaryOp::ge: return x >= y;
    case BinaryOp::eq: return x == y;
    default: return x != y;
  }
}

BoundExpr::BoundExpr(const Expr& expr, std::span<const std::string> slot_names,
                     ValueType expected) {
  const auto diags = check_typed(expr, slot_names, expected);
  if (!diags.empty()) throw SpecError(diags.front().path + ": " + diags.front().message);
  root_ = compile(expr, slot_names);
}

std::uint32_t BoundExpr::compile(const Expr& expr, std::span<const std::string> names) {
  Node node{Op::constant};
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Number>) {
          node.op = Op::constant;
          node.constant = n.value;
        } else if constexpr (std::is_same_v<N, Identifier>) {
          node.op = Op::slot;
          node.a = static_cast<std::uint32_t>(
              std::find(names.begin(), names.end(), n.name) - names.begin());
        } else if constexpr (std::is_same_v<N, Unary>) {
          node.op = n.op == UnaryOp::negate ? Op::neg : Op::lnot;
          node.a = compile(*n.operand, names);
        } else if constexpr (std::is_same_v<N, Binary>) {
          static constexpr Op kOps[] = {Op::add, Op::sub, Op::mul, Op::div, Op::lt, Op::le,
                                        Op::gt,  Op::ge,  Op::eq,  Op::ne,  Op::land, Op::lor};
          node.op = kOps[static_cast<int>(n.op)];
          node.a = compile(*n.lhs, names);
          node.b = compile(*n.rhs, names);
        } else {
          static constexpr Op kOps[] = {Op::ln, Op::exp, Op::abs, Op::min, Op::max};
          node.op = kOps[static_cast<int>(n.fn)];
          node.a = compile(*n.args[0], names);
          if (n.args.size() > 1) node.b = compile(*n.args[1], names);
        }
      },
      expr.node);
  node.constant = node.op == Op::constant ? node.constant : static_cast<double>(expr.offset);
  nodes_.push_back(node);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

double BoundExpr::eval(std::uint32_t index, std::span<const double> v) const {
  const Node& n = nodes_[index];
  // Non-constant nodes stash their source offset in `constant`.
  const auto offset = static_cast<std::size_t>(n.constant);
  switch (n.op) {
    case Op::constant: return n.constant;
    case Op::slot: return v[n.a];
    case Op::neg: return -eval(n.a, v);
    case Op::lnot: return eval(n.a, v) != 0.0 ? 0.0 : 1.0;
    case Op::add: return checked(eval(n.a, v) + eval(n.b, v), offset);
    case Op::sub: return checked(eval(n.a, v) - eval(n.b, v), offset);
    case Op::mul: return checked(eval(n.a, v) * eval(n.b, v), offset);
    case Op::div: {
      const double a = eval(n.a, v);
      return apply_div(a, eval(n.b, v), offset);
    }
    case Op::lt: { const double a = eval(n.a, v); return a < eval(n.b, v) ? 1.0 : 0.0; }
    case Op::le: { const double a = eval(n.a, v); return a <= eval(n.b, v) ? 1.0 : 0.0; }
    case Op::gt: { const double a = eval(n.a, v); return a > eval(n.b, v) ? 1.0 : 0.0; }
    case Op::ge: { const double a = eval(n.a, v); return a >= eval(n.b, v) ? 1.0 : 0.0; }
    case Op::eq: { const double a = eval(n.a, v); return a == eval(n.b, v) ? 1.0 : 0.0; }
    case Op::ne: { const double a = eval(n.a, v); return a != eval(n.b, v) ? 1.0 : 0.0; }
    case Op::land: return (eval(n.a, v) != 0.0 && eval(n.b, v) != 0.0) ? 1.0 : 0.0;
    case Op::lor: return (eval(n.a, v) != 0.0 || eval(n.b, v) != 0.0) ? 1.0 : 0.0;
    case Op::ln: return apply_ln(eval(n.a, v), offset);
    case Op::exp: return checked(std::exp(eval(n.a, v)), offset);
    case Op::abs: return std::fabs(eval(n.a, v));
    case Op::min: { const double a = eval(n.a, v); return std::min(a, eval(n.b, v)); }
    case Op::max: { const double a = eval(n.a, v); return std::max(a, eval(n.b, v)); }
  }
  return 0.0;
}

bool BoundExpr::test(std::span<const double> values) const {
  return eval(root_, values) != 0.0;
}

double BoundExpr::number(std::span<const double> values) const {
  return eval(root_, values);
}

}  // namespace oddcov::dsl
