#include "qmk/expression.hpp"

#include "lexer.hpp"

namespace qmk {
namespace detail {
namespace {

class ExpressionParser {
 public:
  ExpressionParser(Lexer& lex, const ContextPtr& ctx) : lex_(lex), ctx_(ctx) {}

  Polynomial sum() {
    Polynomial acc = product();
    for (;;) {
      if (lex_.accept("+")) {
        acc += product();
      } else if (lex_.accept("-")) {
        acc -= product();
      } else {
        return acc;
      }
    }
  }

 private:
  Polynomial product() {
    Polynomial acc = unary();
    while (lex_.accept("*")) acc = acc * unary();
    return acc;
  }

  Polynomial unary() {
    if (lex_.accept("-")) return -unary();
    if (lex_.accept("+")) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (!lex_.accept("^")) return base;
    const Token t = lex_.peek();
    if (t.kind != Tok::integer) lex_.fail("exponent must be a non-negative integer literal");
    lex_.next();
    unsigned long e = 0;
    try {
      e = std::stoul(t.text);
    } catch (const std::exception&) {
      Lexer::fail_at(t, "exponent out of range");
    }
    if (e > 1000) Lexer::fail_at(t, "exponent out of range");
    Polynomial out = Polynomial::constant(ctx_, 1);
    for (unsigned long i = 0; i < e && !out.is_zero(); ++i) out = out * base;
    return out;
  }

  Polynomial primary() {
    const Token t = lex_.peek();
    if (t.kind == Tok::integer) {
      lex_.next();
      mpz_class num(t.text);
      mpz_class den = 1;
      if (lex_.accept("/")) {
        const Token d = lex_.peek();
        if (d.kind != Tok::integer) lex_.fail("expected integer denominator after '/'");
        lex_.next();
        den = mpz_class(d.text);
        if (den == 0) Lexer::fail_at(d, "division by zero in rational literal");
      }
      Rational q(num, den);
      q.canonicalize();
      return Polynomial::constant(ctx_, q);
    }
    if (t.kind == Tok::ident) {
      lex_.next();
      auto idx = ctx_->find(t.text);
      if (!idx) Lexer::fail_at(t, "unknown identifier '" + t.text + "'");
      return Polynomial::variable(ctx_, *idx);
    }
    if (lex_.accept("(")) {
      Polynomial inner = sum();
      lex_.expect(")");
      return inner;
    }
    lex_.fail("expected expression");
  }

  Lexer& lex_;
  const ContextPtr& ctx_;
};

}  // namespace

Polynomial parse_expression(Lexer& lex, const ContextPtr& ctx) {
  return ExpressionParser(lex, ctx).sum();
}

}  // namespace detail

Polynomial parse_expression(std::string_view text, const ContextPtr& ctx) {
  detail::Lexer lex(text);
  Polynomial p = detail::parse_expression(lex, ctx);
  if (lex.peek().kind != detail::Tok::end) lex.fail("unexpected trailing input");
  return p;
}

}  // namespace qmk
