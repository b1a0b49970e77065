#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "qmk/expression.hpp"

namespace qmk::detail {

enum class Tok { end, ident, integer, punct };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int column = 1;
};

/// Whitespace-insensitive tokenizer shared by the expression and document
/// parsers. `#` starts a comment running to the end of the line.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  bool accept(std::string_view punct) {
    if (tok_.kind == Tok::punct && tok_.text == punct) {
      advance();
      return true;
    }
    return false;
  }

  Token expect(std::string_view punct) {
    if (tok_.kind != Tok::punct || tok_.text != punct) fail("expected '" + std::string(punct) + "'");
    return next();
  }

  Token expect_ident() {
    if (tok_.kind != Tok::ident) fail("expected identifier");
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(tok_, msg); }

  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + " (found " + found + ")", t.line, t.column);
  }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= src_.size()) return;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok_.kind = Tok::ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        take();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_.kind = Tok::integer;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) take();
    } else {
      tok_.kind = Tok::punct;
      take();
    }
  }

  void take() {
    tok_.text += src_[pos_++];
    ++col_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

/// Parses one expression, stopping before any token that cannot continue it.
Polynomial parse_expression(Lexer& lex, const ContextPtr& ctx);

}  // namespace qmk::detail
