#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qmk/algebroid.hpp"

using namespace qmk;
using qmk::testing::load_chart;
using qmk::testing::load_q;
using qmk::testing::poly;

namespace {

Section section(const AlgebroidChart& c, std::vector<std::string> comps) {
  Section s = zero_section(c);
  for (std::size_t k = 0; k < comps.size(); ++k) s.components[k] = poly(c.context(), comps[k]);
  return s;
}

}  // namespace

TEST(Chart, Shape) {
  AlgebroidChart c(load_q("action"));
  EXPECT_EQ(c.base(), std::vector<std::size_t>{0});
  EXPECT_EQ(c.fiber(), (std::vector<std::size_t>{1, 2}));
  EXPECT_THROW(AlgebroidChart(load_q("mixed")), InvalidArgument);
  EXPECT_THROW(AlgebroidChart(VectorField::partial(load_q("action").context(), "x")), InvalidArgument);
}

TEST(Sections, EmbedExtract) {
  AlgebroidChart c(load_q("action"));
  const auto& ctx = c.context();
  auto u = basis_section(c, 1, poly(ctx, "x^2"));
  EXPECT_EQ(u.parity, Parity::even);
  EXPECT_EQ(embed_section(c, u), poly(ctx, "x^2") * VectorField::partial(ctx, "xi2"));
  EXPECT_EQ(extract_section(c, embed_section(c, u)), u);
  EXPECT_THROW(extract_section(c, VectorField::partial(ctx, "x")), InvalidArgument);
  EXPECT_EQ(to_string(c, u), "{e_xi2: x^2}");
}

TEST(Bracket, ChevalleyEilenberg) {
  AlgebroidChart c(load_q("ce2"));
  auto e1 = basis_section(c, 0), e2 = basis_section(c, 1);
  // [Q, d_y1] = y2 d_y1, [y2 d_y1, d_y2] = -d_y1
  EXPECT_EQ(algebroid_bracket(c, e1, e2), section(c, {"-1", "0"}));
  EXPECT_EQ(algebroid_bracket(c, e2, e1), section(c, {"1", "0"}));
  EXPECT_EQ(algebroid_bracket(c, e1, e1), zero_section(c));
  EXPECT_EQ(algebroid_bracket(c, e2, e2), zero_section(c));
}

TEST(Bracket, ActionAlgebroid) {
  AlgebroidChart c(load_q("action"));
  const auto& ctx = c.context();
  auto e1 = basis_section(c, 0), e2 = basis_section(c, 1);
  EXPECT_EQ(algebroid_anchor(c, e1), VectorField::partial(ctx, "x"));
  EXPECT_EQ(algebroid_anchor(c, e2), poly(ctx, "x") * VectorField::partial(ctx, "x"));
  EXPECT_EQ(algebroid_bracket(c, e1, e2), e1);
  // Leibniz: [e1, x e2] = x [e1, e2] + a(e1)(x) e2
  EXPECT_EQ(algebroid_bracket(c, e1, basis_section(c, 1, poly(ctx, "x"))), section(c, {"x", "1"}));
}

TEST(Bracket, AgreesWithDerivedBracketUpToSign) {
  for (const char* name : {"action", "ce3_base", "ce2", "tangent"}) {
    AlgebroidChart c(load_q(name));
    const auto& ctx = c.context();
    std::vector<Section> secs;
    for (std::size_t k = 0; k < c.fiber().size(); ++k) {
      secs.push_back(basis_section(c, k));
      for (std::size_t b : c.base()) secs.push_back(basis_section(c, k, Polynomial::variable(ctx, b)));
    }
    for (const auto& u : secs)
      for (const auto& v : secs) {
        auto lhs = embed_section(c, algebroid_bracket(c, u, v));
        auto rhs = commutator(commutator(c.q(), embed_section(c, u)), embed_section(c, v));
        if (is_odd(u.parity)) rhs = -rhs;
        EXPECT_EQ(lhs, rhs) << name;
      }
  }
}

TEST(Anchor, IsHomomorphism) {
  for (const char* name : {"action", "ce3_base", "tangent"}) {
    AlgebroidChart c(load_q(name));
    for (std::size_t i = 0; i < c.fiber().size(); ++i)
      for (std::size_t j = 0; j < c.fiber().size(); ++j) {
        auto u = basis_section(c, i), v = basis_section(c, j);
        EXPECT_EQ(algebroid_anchor(c, algebroid_bracket(c, u, v)),
                  commutator(algebroid_anchor(c, u), algebroid_anchor(c, v)))
            << name;
      }
  }
}

TEST(Axioms, HoldWhenHomological) {
  for (const char* name : {"tangent", "ce2", "abelian", "action", "ce3_base"}) {
    auto r = verify_algebroid_axioms(AlgebroidChart(load_q(name)));
    EXPECT_TRUE(r.ok()) << name << "\n" << format_report(r);
    EXPECT_EQ(r.axioms.size(), 4u);
  }
}

TEST(Axioms, FailWithQ2) {
  for (auto [file, field] : {std::pair{"ce3_corrupt", "Q"}, std::pair{"action", "Qbad"}}) {
    auto q = load_chart(file).field(field);
    auto r = verify_algebroid_axioms(AlgebroidChart(q));
    EXPECT_FALSE(r.homological) << file;
    EXPECT_FALSE(r.axioms_ok()) << file;
    const auto text = format_report(r);
    EXPECT_NE(text.find("AXIOM jacobi FAIL"), std::string::npos) << text;
    EXPECT_NE(text.find("Q2 FAIL"), std::string::npos) << text;
  }
}

TEST(Morphism, ScalingsOfChevalleyEilenberg) {
  auto doc = load_chart("ce2");
  AlgebroidChart c(doc.field("Q"));
  EXPECT_TRUE(check_algebroid_morphism(c, c, Substitution::identity(doc.context)).related);
  EXPECT_TRUE(check_algebroid_morphism(c, c, doc.map("scale1")).related);
  auto r = check_algebroid_morphism(c, c, doc.map("scale2"));
  EXPECT_FALSE(r.related);
  EXPECT_FALSE(r.residuals[0].is_zero());
}

TEST(Morphism, WeightMustBePreserved) {
  auto q = load_q("action");
  AlgebroidChart c(q);
  auto bad = Substitution::identity(q.context());
  bad.assign("x", poly(q.context(), "xi1*xi2"));
  EXPECT_THROW(check_algebroid_morphism(c, c, bad), InvalidArgument);
}
