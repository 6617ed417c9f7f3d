#pragma once

// Text syntax for formulas:
//
//   formula  := "true" | atom | "not" formula | formula ("and"|"or"|"implies") formula
//             | ("F"|"G") interval "(" formula ")"
//             | "(" formula ")" "U" interval "(" formula ")" | "(" formula ")"
//   interval := ("["|"(") bound "," bound ("]"|")")
//   bound    := number | "$" ident
//   atom     := ident ("<"|">"|"<="|">=") (number | "$" ident)
//
// Precedence: not > and > or > implies; binary operators associate left.

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stlmine/formula.hpp"

namespace stlmine {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : src_(text) { advance(); }

  Formula parse_all() {
    Formula f = implies_expr();
    if (tok_.kind != Tok::End) fail("unexpected '" + tok_.text + "'");
    return f;
  }

 private:
  enum class Tok { End, Ident, Number, Param, LParen, RParen, LBracket, RBracket, Comma, Cmp };
  struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0;
    int line = 1, col = 1;
  };

  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, tok_.line, tok_.col); }
  [[noreturn]] void fail_at(const std::string& msg, int line, int col) const {
    throw parse_error(msg, line, col);
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  char peek_char(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    const std::size_t start = pos_;
    auto single = [&](Tok k) {
      tok_.kind = k;
      tok_.text = std::string(1, c);
      bump();
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '<':
      case '>':
        tok_.kind = Tok::Cmp;
        bump();
        if (peek_char() == '=') bump();
        tok_.text = std::string(src_.substr(start, pos_ - start));
        return;
      case '$':
        bump();
        if (!ident_start(peek_char())) fail("expected parameter name after '$'");
        while (ident_char(peek_char())) bump();
        tok_.kind = Tok::Param;
        tok_.text = std::string(src_.substr(start + 1, pos_ - start - 1));
        return;
      default: break;
    }
    if (ident_start(c)) {
      while (ident_char(peek_char())) bump();
      tok_.kind = Tok::Ident;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      const char* first = src_.data() + pos_;
      const char* last = src_.data() + src_.size();
      if (*first == '+') ++first;  // from_chars rejects a leading '+'
      double v = 0;
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || !std::isfinite(v)) fail("malformed number");
      while (src_.data() + pos_ < res.ptr) bump();
      tok_.kind = Tok::Number;
      tok_.number = v;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  bool at_keyword(std::string_view kw) const { return tok_.kind == Tok::Ident && tok_.text == kw; }

  static bool is_reserved(std::string_view s) {
    return s == "true" || s == "not" || s == "and" || s == "or" || s == "implies" || s == "F" ||
           s == "G" || s == "U";
  }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    advance();
  }

  Formula implies_expr() {
    Formula f = or_expr();
    if (!at_keyword("implies")) return f;
    advance();
    return Formula::implication(f, implies_expr());
  }

  Formula or_expr() {
    Formula f = and_expr();
    while (at_keyword("or")) {
      advance();
      f = Formula::disjunction(f, and_expr());
    }
    return f;
  }

  Formula and_expr() {
    Formula f = unary();
    while (at_keyword("and")) {
      advance();
      f = Formula::conjunction(f, unary());
    }
    return f;
  }

  Formula unary() {
    if (at_keyword("not")) {
      advance();
      return Formula::negation(unary());
    }
    return primary();
  }

  Bound bound() {
    if (tok_.kind == Tok::Number) {
      double v = tok_.number;
      advance();
      return v;
    }
    // a bare identifier in a bound position also names a parameter
    if (tok_.kind == Tok::Param || (tok_.kind == Tok::Ident && !is_reserved(tok_.text))) {
      auto id = tok_.text;
      advance();
      return Bound::param(std::move(id));
    }
    fail("expected number or parameter");
  }

  Interval interval() {
    const int line = tok_.line, col = tok_.col;
    Interval iv;
    if (tok_.kind == Tok::LBracket) {
      iv.lo_closed = true;
    } else if (tok_.kind == Tok::LParen) {
      iv.lo_closed = false;
    } else {
      fail("expected interval");
    }
    advance();
    iv.lo = bound();
    expect(Tok::Comma, "','");
    iv.hi = bound();
    if (tok_.kind == Tok::RBracket) {
      iv.hi_closed = true;
    } else if (tok_.kind == Tok::RParen) {
      iv.hi_closed = false;
    } else {
      fail("expected ']' or ')'");
    }
    advance();
    try {
      check_interval(iv);
    } catch (const std::invalid_argument& e) {
      fail_at(e.what(), line, col);
    }
    return iv;
  }

  Formula parenthesized() {
    expect(Tok::LParen, "'('");
    Formula f = implies_expr();
    expect(Tok::RParen, "')'");
    return f;
  }

  Formula primary() {
    if (tok_.kind == Tok::LParen) {
      Formula f = parenthesized();
      if (at_keyword("U")) {
        advance();
        Interval iv = interval();
        return Formula::until(std::move(iv), std::move(f), parenthesized());
      }
      return f;
    }
    if (tok_.kind != Tok::Ident) fail("expected formula");
    if (tok_.text == "true") {
      advance();
      return Formula::truth();
    }
    if (tok_.text == "F" || tok_.text == "G") {
      const bool ev = tok_.text == "F";
      advance();
      Interval iv = interval();
      Formula body = parenthesized();
      return ev ? Formula::eventually(std::move(iv), std::move(body))
                : Formula::always(std::move(iv), std::move(body));
    }
    if (is_reserved(tok_.text)) fail("unexpected keyword '" + tok_.text + "'");
    std::string signal = tok_.text;
    advance();
    if (tok_.kind != Tok::Cmp) fail("expected comparison after signal '" + signal + "'");
    Comparison cmp = tok_.text == "<"    ? Comparison::Less
                     : tok_.text == ">"  ? Comparison::Greater
                     : tok_.text == "<=" ? Comparison::LessEqual
                                         : Comparison::GreaterEqual;
    advance();
    return Formula::atom(std::move(signal), cmp, bound());
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

}  // namespace detail

/// Parses formula text. Throws parse_error on malformed input or when a
/// parameter name is used more than once.
inline Formula parse(std::string_view text) {
  Formula f = detail::Parser(text).parse_all();
  try {
    (void)parameters(f);
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what(), 1, 1);
  }
  return f;
}

}  // namespace stlmine
