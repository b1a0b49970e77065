#include "qmk/document.hpp"

#include <set>

#include "lexer.hpp"

namespace qmk {

using detail::Lexer;
using detail::Tok;
using detail::Token;

const VectorField& ChartDocument::field(std::string_view name) const {
  for (const auto& [n, f] : fields)
    if (n == name) return f;
  throw InvalidArgument("no field named '" + std::string(name) + "'");
}

const Substitution& ChartDocument::map(std::string_view name) const {
  for (const auto& [n, m] : maps)
    if (n == name) return m;
  throw InvalidArgument("no map named '" + std::string(name) + "'");
}

namespace {

bool is_keyword(const Token& t, std::string_view word) {
  return t.kind == Tok::ident && t.text == word;
}

// parity=<even|odd> weight=<int>
Coordinate parse_coord(Lexer& lex) {
  Coordinate c;
  const Token name = lex.expect_ident();
  c.name = name.text;
  bool have_parity = false, have_weight = false;
  while (!lex.accept(";")) {
    const Token key = lex.expect_ident();
    lex.expect("=");
    if (key.text == "parity" && !have_parity) {
      const Token v = lex.peek();
      if (is_keyword(v, "even")) c.parity = Parity::even;
      else if (is_keyword(v, "odd")) c.parity = Parity::odd;
      else lex.fail("parity must be 'even' or 'odd'");
      lex.next();
      have_parity = true;
    } else if (key.text == "weight" && !have_weight) {
      const bool negative = lex.accept("-");
      const Token v = lex.peek();
      if (v.kind != Tok::integer || v.text.size() > 6) lex.fail("weight must be an integer");
      lex.next();
      c.weight = std::stoi(v.text) * (negative ? -1 : 1);
      have_weight = true;
    } else {
      Lexer::fail_at(key, "unexpected or repeated attribute");
    }
  }
  if (!have_parity || !have_weight)
    Lexer::fail_at(name, "coordinate needs both parity= and weight=");
  return c;
}

// { <key> = <expr>; ... } with keys checked by `resolve`.
template <typename Resolve, typename Store>
void parse_block(Lexer& lex, const ContextPtr& ctx, Resolve&& resolve, Store&& store) {
  lex.expect("{");
  std::set<std::string> seen;
  while (!lex.accept("}")) {
    const Token key = lex.expect_ident();
    const auto idx = resolve(key);
    if (!seen.insert(key.text).second) Lexer::fail_at(key, "duplicate entry '" + key.text + "'");
    lex.expect("=");
    const Token start = lex.peek();
    Polynomial value = detail::parse_expression(lex, ctx);
    lex.expect(";");
    try {
      store(idx, std::move(value));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      Lexer::fail_at(start, e.what());
    }
  }
}

std::size_t coordinate_index(const GradedContext& ctx, const Token& t) {
  auto i = ctx.find(t.text);
  if (!i) Lexer::fail_at(t, "unknown coordinate '" + t.text + "'");
  return *i;
}

ContextPtr parse_coordinates(Lexer& lex) {
  std::vector<Coordinate> coords;
  std::set<std::string> names;
  while (is_keyword(lex.peek(), "coord")) {
    lex.next();
    const Token at = lex.peek();
    Coordinate c = parse_coord(lex);
    if (!names.insert(c.name).second) Lexer::fail_at(at, "duplicate coordinate '" + c.name + "'");
    coords.push_back(std::move(c));
  }
  if (coords.empty()) lex.fail("expected at least one 'coord' declaration");
  return GradedContext::make(std::move(coords));
}

}  // namespace

ChartDocument parse_document(std::string_view text) {
  Lexer lex(text);
  ChartDocument doc;
  doc.context = parse_coordinates(lex);
  const ContextPtr& ctx = doc.context;
  std::set<std::string> names;
  while (lex.peek().kind != Tok::end) {
    const Token kw = lex.peek();
    if (is_keyword(kw, "coord")) lex.fail("coordinates must be declared before fields and maps");
    if (!is_keyword(kw, "field") && !is_keyword(kw, "map"))
      lex.fail("expected 'field' or 'map'");
    lex.next();
    const Token name = lex.expect_ident();
    if (!names.insert(name.text).second)
      Lexer::fail_at(name, "duplicate name '" + name.text + "'");
    auto resolve = [&](const Token& t) { return coordinate_index(*ctx, t); };
    if (kw.text == "field") {
      VectorField x(ctx);
      parse_block(lex, ctx, resolve, [&](std::size_t i, Polynomial p) { x.set(i, std::move(p)); });
      doc.fields.emplace_back(name.text, std::move(x));
    } else {
      Substitution s = Substitution::identity(ctx);
      parse_block(lex, ctx, resolve,
                  [&](std::size_t i, Polynomial p) { s.assign(i, std::move(p)); });
      doc.maps.emplace_back(name.text, std::move(s));
    }
  }
  return doc;
}

std::string print_coordinates(const GradedContext& ctx) {
  std::string out;
  for (const auto& c : ctx.coordinates())
    out += "coord " + c.name + " parity=" + std::string(to_string(c.parity)) +
           " weight=" + std::to_string(c.weight) + ";\n";
  return out;
}

std::string print_field(std::string_view name, const VectorField& x) {
  std::string out = "field " + std::string(name) + " {\n";
  for (std::size_t c = 0; c < x.size(); ++c)
    if (!x[c].is_zero())
      out += "  " + (*x.context())[c].name + " = " + to_string(x[c]) + ";\n";
  return out + "}\n";
}

std::string print_document(const ChartDocument& doc) {
  std::string out = print_coordinates(*doc.context);
  for (const auto& [name, x] : doc.fields) out += print_field(name, x);
  for (const auto& [name, s] : doc.maps) {
    out += "map " + name + " {\n";
    for (std::size_t i = 0; i < doc.context->size(); ++i) {
      if (s.image(i) == Polynomial::variable(doc.context, i)) continue;
      out += "  " + (*doc.context)[i].name + " = " + to_string(s.image(i)) + ";\n";
    }
    out += "}\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// tables files

namespace {

std::string print_coefficients(const NegativeBasis& basis, const Coefficients& c) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) out += " " + basis[k].label + " = " + to_string(c[k]) + ";";
  return out;
}

}  // namespace

std::string print_tables(const TablesDocument& doc) {
  const TwoLayerStructure& t = doc.tables;
  const NegativeBasis& basis = t.basis;
  const GradedContext& ctx = *t.context();
  std::string out = print_coordinates(ctx);
  out += "source " + doc.source + ";\n";
  for (std::size_t i = 0; i < basis.size(); ++i)
    out += "basis " + basis[i].label + " { " + ctx[basis[i].target].name + " = " +
           to_string(ctx, basis[i].monomial) + "; }\n";
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      out += "bracket " + basis[i].label + " " + basis[j].label + " {" +
             print_coefficients(basis, t.bracket[i][j]) + " }\n";
  for (std::size_t i = 0; i < basis.size(); ++i)
    out += "d " + basis[i].label + " {" + print_coefficients(basis, t.differential[i]) + " }\n";
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      out += "newbracket " + basis[i].label + " " + basis[j].label + " {" +
             print_coefficients(basis, t.derived[i][j]) + " }\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out += "anchor " + basis[i].label + " {";
    for (std::size_t a = 0; a < ctx.size(); ++a)
      if (!t.anchor[i][a].is_zero())
        out += " " + ctx[a].name + " = " + to_string(t.anchor[i][a]) + ";";
    out += " }\n";
  }
  return out;
}

TablesDocument parse_tables(std::string_view text) {
  Lexer lex(text);
  const ContextPtr ctx = parse_coordinates(lex);
  if (!ctx->nonnegatively_graded()) lex.fail("tables need a non-negatively graded chart");
  TablesDocument doc{"Q", TwoLayerStructure{NegativeBasis(ctx), {}, {}, {}, {}}};
  TwoLayerStructure& t = doc.tables;
  const NegativeBasis& basis = t.basis;
  const std::size_t n = basis.size();
  t.bracket.assign(n, std::vector<Coefficients>(n, basis.zero()));
  t.derived.assign(n, std::vector<Coefficients>(n, basis.zero()));
  t.differential.assign(n, basis.zero());
  t.anchor.assign(n, VectorField(ctx));

  auto label = [&](const Token& tok) {
    auto i = basis.find(tok.text);
    if (!i) Lexer::fail_at(tok, "unknown basis label '" + tok.text + "'");
    return *i;
  };
  auto coefficients = [&](Coefficients& into) {
    parse_block(lex, ctx, label, [&](std::size_t k, Polynomial p) {
      if (!p.has_weight(0)) throw InvalidArgument("table coefficients must have weight 0");
      into[k] = std::move(p);
    });
  };

  std::size_t next_basis = 0;
  std::set<std::string> seen;
  if (is_keyword(lex.peek(), "source")) {
    lex.next();
    doc.source = lex.expect_ident().text;
    lex.expect(";");
  }
  while (lex.peek().kind != Tok::end) {
    const Token kw = lex.expect_ident();
    if (kw.text == "basis") {
      const Token l = lex.expect_ident();
      if (next_basis >= n || basis[next_basis].label != l.text)
        Lexer::fail_at(l, "basis does not match the canonical basis of the chart");
      VectorField x(ctx);
      parse_block(lex, ctx, [&](const Token& tok) { return coordinate_index(*ctx, tok); },
                  [&](std::size_t i, Polynomial p) { x.set(i, std::move(p)); });
      if (x != basis[next_basis].field)
        Lexer::fail_at(l, "basis element '" + l.text + "' has the wrong field");
      ++next_basis;
      continue;
    }
    std::string key = kw.text;
    if (kw.text == "bracket" || kw.text == "newbracket") {
      const Token a = lex.expect_ident();
      const Token b = lex.expect_ident();
      const std::size_t i = label(a), j = label(b);
      key += " " + a.text + " " + b.text;
      if (!seen.insert(key).second) Lexer::fail_at(kw, "duplicate table entry '" + key + "'");
      coefficients(kw.text == "bracket" ? t.bracket[i][j] : t.derived[i][j]);
    } else if (kw.text == "d" || kw.text == "anchor") {
      const Token a = lex.expect_ident();
      const std::size_t i = label(a);
      key += " " + a.text;
      if (!seen.insert(key).second) Lexer::fail_at(kw, "duplicate table entry '" + key + "'");
      if (kw.text == "d") {
        coefficients(t.differential[i]);
      } else {
        parse_block(lex, ctx,
                    [&](const Token& tok) {
                      const std::size_t c = coordinate_index(*ctx, tok);
                      if ((*ctx)[c].weight != 0)
                        Lexer::fail_at(tok, "anchor components live on weight-0 coordinates");
                      return c;
                    },
                    [&](std::size_t c, Polynomial p) { t.anchor[i].set(c, std::move(p)); });
      }
    } else {
      Lexer::fail_at(kw, "expected 'basis', 'bracket', 'd', 'newbracket' or 'anchor'");
    }
  }
  if (next_basis != 0 && next_basis != n) lex.fail("basis list is incomplete");
  return doc;
}

}  // namespace qmk
