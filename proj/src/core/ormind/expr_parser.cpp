// Copyright 2026 The ORMind Authors
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

// Recursive-descent parser for linear expressions and constraints.
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := unary (('*' unary) | implicit)*      implicit: 2x, 2(x + y)
//   unary   := ('+'|'-') unary | primary
//   primary := number | ident ('[' int ']')* | '(' expr ')'
//
// A product is accepted only while at most one factor is non-constant.

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "ormind/model_ir.hpp"

namespace ormind {
namespace {

enum class Tok {
  kNumber,
  kIdent,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kRelation,
  kEnd,
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
  Sense sense = Sense::kLE;
};

[[noreturn]] void syntax_error(std::size_t pos, const std::string& message) {
  throw Error(ErrorCode::kSyntaxError,
              "syntax error at position " + std::to_string(pos) + ": " +
                  message,
              {}, {}, pos);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) ||
              text[i] == '.')) {
        ++i;
      }
      // Exponent, only when followed by digits so that "2e" stays 2*e.
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
          }
        }
      }
      Token t{Tok::kNumber, start, std::string(text.substr(start, i - start))};
      auto [ptr, ec] =
          std::from_chars(t.text.data(), t.text.data() + t.text.size(),
                          t.number);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        syntax_error(start, "malformed number '" + t.text + "'");
      }
      out.push_back(std::move(t));
      continue;
    }
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) ++i;
      out.push_back(
          {Tok::kIdent, start, std::string(text.substr(start, i - start))});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('<', '=') || two('=', '<')) {
      out.push_back({Tok::kRelation, start, "<=", 0.0, Sense::kLE});
      i += 2;
      continue;
    }
    if (two('>', '=') || two('=', '>')) {
      out.push_back({Tok::kRelation, start, ">=", 0.0, Sense::kGE});
      i += 2;
      continue;
    }
    if (two('=', '=')) {
      out.push_back({Tok::kRelation, start, "=", 0.0, Sense::kEQ});
      i += 2;
      continue;
    }
    switch (c) {
      case '=':
        out.push_back({Tok::kRelation, start, "=", 0.0, Sense::kEQ});
        break;
      case '<':
      case '>':
        syntax_error(start,
                     "strict inequality '" + std::string(1, c) +
                         "' is not supported; over integers write "
                         "lhs <= rhs - 1");
      case '+':
        out.push_back({Tok::kPlus, start, "+"});
        break;
      case '-':
        out.push_back({Tok::kMinus, start, "-"});
        break;
      case '*':
        out.push_back({Tok::kStar, start, "*"});
        break;
      case '/':
        out.push_back({Tok::kSlash, start, "/"});
        break;
      case '(':
        out.push_back({Tok::kLParen, start, "("});
        break;
      case ')':
        out.push_back({Tok::kRParen, start, ")"});
        break;
      case '[':
        out.push_back({Tok::kLBracket, start, "["});
        break;
      case ']':
        out.push_back({Tok::kRBracket, start, "]"});
        break;
      default:
        syntax_error(start, "unexpected character '" + std::string(1, c) + "'");
    }
    ++i;
  }
  out.push_back({Tok::kEnd, text.size(), ""});
  return out;
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t begin, std::size_t end,
         const std::set<std::string>& vars, const ParameterMap* params)
      : toks_(tokens), i_(begin), end_(end), vars_(vars), params_(params) {}

  LinExpr parse_all() {
    if (i_ >= end_) syntax_error(position(), "empty expression");
    LinExpr e = expr();
    if (i_ < end_) {
      syntax_error(toks_[i_].pos, "unexpected '" + toks_[i_].text + "'");
    }
    return e;
  }

 private:
  Tok peek() const { return i_ < end_ ? toks_[i_].kind : Tok::kEnd; }
  std::size_t position() const {
    return i_ < toks_.size() ? toks_[i_].pos : 0;
  }

  LinExpr expr() {
    LinExpr acc = term();
    while (peek() == Tok::kPlus || peek() == Tok::kMinus) {
      const double sign = peek() == Tok::kPlus ? 1.0 : -1.0;
      ++i_;
      acc.add(term(), sign);
    }
    return acc;
  }

  LinExpr term() {
    LinExpr acc = unary();
    for (;;) {
      const Tok k = peek();
      if (k == Tok::kStar) {
        ++i_;
        acc = multiply(std::move(acc), unary());
      } else if (k == Tok::kSlash) {
        syntax_error(toks_[i_].pos,
                     "division is not supported; multiply by the reciprocal "
                     "coefficient instead");
      } else if ((k == Tok::kIdent || k == Tok::kLParen) &&
                 toks_[i_ - 1].kind == Tok::kNumber) {
        // Implicit multiplication directly after a numeric literal.
        acc = multiply(std::move(acc), unary());
      } else {
        return acc;
      }
    }
  }

  LinExpr unary() {
    if (peek() == Tok::kPlus) {
      ++i_;
      return unary();
    }
    if (peek() == Tok::kMinus) {
      ++i_;
      LinExpr e = unary();
      e.scale(-1.0);
      return e;
    }
    return primary();
  }

  LinExpr primary() {
    if (i_ >= end_) syntax_error(position(), "unexpected end of expression");
    const Token& t = toks_[i_];
    switch (t.kind) {
      case Tok::kNumber: {
        ++i_;
        LinExpr e;
        e.constant = t.number;
        return e;
      }
      case Tok::kIdent:
        ++i_;
        return identifier(t);
      case Tok::kLParen: {
        ++i_;
        LinExpr inner = expr();
        if (peek() != Tok::kRParen) syntax_error(position(), "expected ')'");
        ++i_;
        return inner;
      }
      default:
        syntax_error(t.pos, "unexpected '" + t.text + "'");
    }
  }

  LinExpr identifier(const Token& t) {
    std::vector<std::size_t> indices;
    while (peek() == Tok::kLBracket) {
      ++i_;
      if (peek() != Tok::kNumber) syntax_error(position(), "expected index");
      const double idx = toks_[i_].number;
      if (idx < 0 || std::floor(idx) != idx) {
        syntax_error(toks_[i_].pos, "index must be a nonnegative integer");
      }
      indices.push_back(static_cast<std::size_t>(idx));
      ++i_;
      if (peek() != Tok::kRBracket) syntax_error(position(), "expected ']'");
      ++i_;
    }
    if (vars_.count(t.text) != 0) {
      if (!indices.empty()) {
        syntax_error(t.pos, "variable '" + t.text + "' cannot be indexed");
      }
      LinExpr e;
      e.add_term(t.text, 1.0);
      return e;
    }
    if (params_ != nullptr) {
      auto it = params_->find(t.text);
      if (it != params_->end()) {
        const nlohmann::json* v = &it->second;
        for (std::size_t idx : indices) {
          if (!v->is_array() || idx >= v->size()) {
            syntax_error(t.pos, "index out of range for parameter '" +
                                    t.text + "'");
          }
          v = &(*v)[idx];
        }
        if (!v->is_number()) {
          syntax_error(t.pos, "parameter '" + t.text +
                                  "' does not resolve to a number");
        }
        LinExpr e;
        e.constant = v->get<double>();
        return e;
      }
    }
    throw Error(ErrorCode::kUnknownVariable,
                "unknown variable '" + t.text + "'", {}, t.text, t.pos);
  }

  LinExpr multiply(LinExpr a, LinExpr b) {
    if (!a.is_constant() && !b.is_constant()) {
      syntax_error(toks_[i_ - 1].pos,
                   "nonlinear term: product of two variable expressions");
    }
    if (a.is_constant()) std::swap(a, b);
    // b is constant here.
    a.scale(b.constant);
    return a;
  }

  const std::vector<Token>& toks_;
  std::size_t i_;
  std::size_t end_;
  const std::set<std::string>& vars_;
  const ParameterMap* params_;
};

void require_finite(const LinExpr& e, std::size_t pos) {
  if (!std::isfinite(e.constant)) syntax_error(pos, "non-finite constant");
  for (const auto& [name, coef] : e.terms) {
    if (!std::isfinite(coef)) {
      syntax_error(pos, "non-finite coefficient for '" + name + "'");
    }
  }
}

}  // namespace

LinExpr parse_linear_expr(std::string_view text,
                          const std::set<std::string>& vars,
                          const ParameterMap* params) {
  const auto tokens = tokenize(text);
  for (const Token& t : tokens) {
    if (t.kind == Tok::kRelation) {
      syntax_error(t.pos, "relation '" + t.text + "' in expression");
    }
  }
  LinExpr e = Parser(tokens, 0, tokens.size() - 1, vars, params).parse_all();
  e.normalize();
  require_finite(e, 0);
  return e;
}

Constraint parse_constraint(std::string_view text,
                            const std::set<std::string>& vars,
                            const ParameterMap* params, std::string name) {
  const auto tokens = tokenize(text);
  std::vector<std::size_t> relations;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].kind == Tok::kRelation) relations.push_back(k);
  }
  if (relations.empty()) {
    syntax_error(0, "constraint has no relation symbol (<=, >=, =)");
  }
  if (relations.size() > 1) {
    throw Error(ErrorCode::kMultipleRelations,
                "constraint has " + std::to_string(relations.size()) +
                    " relation symbols; exactly one is allowed",
                {}, {}, tokens[relations[1]].pos);
  }
  const std::size_t rel = relations.front();
  LinExpr left = Parser(tokens, 0, rel, vars, params).parse_all();
  LinExpr right =
      Parser(tokens, rel + 1, tokens.size() - 1, vars, params).parse_all();

  Constraint c;
  c.name = std::move(name);
  c.sense = tokens[rel].sense;
  c.lhs = std::move(left);
  c.lhs.add(right, -1.0);
  c.lhs.normalize();
  c.rhs = c.lhs.constant == 0.0 ? 0.0 : -c.lhs.constant;
  c.lhs.constant = 0.0;
  require_finite(c.lhs, 0);
  if (!std::isfinite(c.rhs)) syntax_error(0, "non-finite right-hand side");
  return c;
}

}  // namespace ormind
