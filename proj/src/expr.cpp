// Copyright 2026 The cvpol Authors
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

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "cvpol/errors.hpp"
#include "cvpol/scenario.hpp"

namespace cvpol {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | primary
// primary:= NUMBER | 'pi' | '$' IDENT | 'sqrt' '(' expr ')' | '(' expr ')'
class ExprParser {
 public:
  ExprParser(std::string_view text, int line) : text_(text), line_(line) {}

  Expr parse() {
    if (text_.empty()) fail("empty expression");
    Expr e = expr();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, what + " in expression '" + std::string(text_) + "'");
  }

  bool eat(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr binary(Expr::Op op, Expr lhs, Expr rhs) { return Expr{op, 0.0, {}, {std::move(lhs), std::move(rhs)}}; }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = binary(Expr::Op::Add, std::move(lhs), term());
      else if (eat('-'))
        lhs = binary(Expr::Op::Sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = binary(Expr::Op::Mul, std::move(lhs), unary());
      else if (eat('/'))
        lhs = binary(Expr::Op::Div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (eat('-')) return Expr{Expr::Op::Neg, 0.0, {}, {unary()}};
    return primary();
  }

  std::string identifier() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected an identifier");
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr primary() {
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (eat('(')) {
      Expr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (eat('$')) return Expr{Expr::Op::Param, 0.0, identifier(), {}};
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) {
      const std::string id = identifier();
      if (id == "pi") return Expr{Expr::Op::Pi, 0.0, {}, {}};
      if (id == "sqrt") {
        if (!eat('(')) fail("expected '(' after sqrt");
        Expr arg = expr();
        if (!eat(')')) fail("missing ')'");
        return Expr{Expr::Op::Sqrt, 0.0, {}, {std::move(arg)}};
      }
      fail("unknown name '" + id + "' (parameters are written $name)");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
    if (ec != std::errc() || !std::isfinite(v)) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return Expr::constant(v);
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Add:
    case Expr::Op::Sub: return 1;
    case Expr::Op::Mul:
    case Expr::Op::Div: return 2;
    case Expr::Op::Neg: return 3;
    default: return 4;
  }
}

std::string render_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Expr parse_expr(std::string_view text, int line) { return ExprParser(text, line).parse(); }

std::string render_expr(const Expr& e) {
  auto wrap = [](const Expr& child, bool parens) {
    const std::string s = render_expr(child);
    return parens ? "(" + s + ")" : s;
  };
  switch (e.op) {
    case Expr::Op::Number:
      // Negative literals only arise programmatically; keep them parseable.
      return e.number < 0 ? "(-" + render_number(-e.number) + ")" : render_number(e.number);
    case Expr::Op::Pi: return "pi";
    case Expr::Op::Param: return "$" + e.name;
    case Expr::Op::Sqrt: return "sqrt(" + render_expr(e.args[0]) + ")";
    case Expr::Op::Neg: return "-" + wrap(e.args[0], precedence(e.args[0]) < 3);
    default: break;
  }
  static constexpr char symbols[] = {'+', '-', '*', '/'};
  const char sym = symbols[static_cast<int>(e.op) - static_cast<int>(Expr::Op::Add)];
  const int p = precedence(e);
  // Left-associative: the right operand needs parentheses at equal precedence.
  return wrap(e.args[0], precedence(e.args[0]) < p) + sym + wrap(e.args[1], precedence(e.args[1]) <= p);
}

double eval_expr(const Expr& e, const ParamValues& params) {
  double v = 0.0;
  switch (e.op) {
    case Expr::Op::Number: v = e.number; break;
    case Expr::Op::Pi: v = std::numbers::pi; break;
    case Expr::Op::Param: {
      auto it = params.find(e.name);
      if (it == params.end()) throw std::invalid_argument("undefined parameter $" + e.name);
      v = it->second;
      break;
    }
    case Expr::Op::Neg: v = -eval_expr(e.args[0], params); break;
    case Expr::Op::Add: v = eval_expr(e.args[0], params) + eval_expr(e.args[1], params); break;
    case Expr::Op::Sub: v = eval_expr(e.args[0], params) - eval_expr(e.args[1], params); break;
    case Expr::Op::Mul: v = eval_expr(e.args[0], params) * eval_expr(e.args[1], params); break;
    case Expr::Op::Div: v = eval_expr(e.args[0], params) / eval_expr(e.args[1], params); break;
    case Expr::Op::Sqrt: {
      const double a = eval_expr(e.args[0], params);
      if (a < 0.0) throw PhysicsError("sqrt of a negative value");
      v = std::sqrt(a);
      break;
    }
  }
  if (!std::isfinite(v)) throw PhysicsError("expression evaluates to a non-finite value");
  return v;
}

void collect_params(const Expr& e, std::vector<std::string>& out) {
  if (e.op == Expr::Op::Param) out.push_back(e.name);
  for (const auto& a : e.args) collect_params(a, out);
}

}  // namespace cvpol
