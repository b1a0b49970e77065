#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qmk/vector_fields.hpp"

using namespace qmk;
using qmk::testing::load_q;
using qmk::testing::poly;

namespace {

ContextPtr yz() { return GradedContext::make({{"y", Parity::odd, 1}, {"z", Parity::even, 2}}); }

ContextPtr tangent() {
  return GradedContext::make({{"x", Parity::even, 0}, {"xi", Parity::odd, 1}});
}

VectorField field(const ContextPtr& c, std::vector<std::pair<std::string, std::string>> comps) {
  VectorField x(c);
  for (auto& [k, v] : comps) x.set(k, poly(c, v));
  return x;
}

}  // namespace

TEST(Apply, Oracles) {
  auto c = GradedContext::make({{"x", Parity::even, 0}, {"xi", Parity::odd, 1}});
  auto dx = VectorField::partial(c, "x");
  EXPECT_EQ(apply(dx, poly(c, "x^2")), poly(c, "2*x"));
  auto q = field(c, {{"x", "xi"}});
  EXPECT_EQ(apply(q, poly(c, "x")), poly(c, "xi"));
  // derivation property as the oracle: Q(xi x) = Q(xi) x - xi Q(x) = -xi xi = 0
  EXPECT_TRUE(apply(q, poly(c, "xi*x")).is_zero());
}

TEST(Commutator, EvenPartialsCommute) {
  auto c = GradedContext::make({{"x", Parity::even, 0}, {"y", Parity::even, 0}});
  EXPECT_TRUE(commutator(VectorField::partial(c, "x"), VectorField::partial(c, "y")).is_zero());
}

TEST(Commutator, ModelBasis) {
  auto c = qmk::testing::load_chart("toy").context;
  auto e_i = VectorField::partial(c, "y");
  auto e_mu_i = field(c, {{"z", "y"}});
  EXPECT_EQ(commutator(e_i, e_mu_i), VectorField::partial(c, "z"));
}

TEST(Commutator, NonHomologicalSquare) {
  auto c = yz();
  auto q = field(c, {{"y", "z"}, {"z", "y*z"}});
  // Q(Q(y)) = Q(z) = yz, Q(Q(z)) = Q(yz) = z*z - y*yz = z^2
  auto sq = commutator(q, q);
  EXPECT_EQ(sq[0], poly(c, "2*y*z"));
  EXPECT_EQ(sq[1], poly(c, "2*z^2"));
}

TEST(Commutator, InhomogeneousDecomposesBilinearly) {
  auto c = tangent();
  auto x = field(c, {{"x", "1"}, {"xi", "1"}});  // mixed parity
  auto y = field(c, {{"x", "x*xi"}});
  auto lhs = commutator(x, y);
  auto rhs = commutator(parity_part(x, Parity::even), y) + commutator(parity_part(x, Parity::odd), y);
  EXPECT_EQ(lhs, rhs);
  EXPECT_FALSE(x.parity().has_value());
}

TEST(Commutator, ContextMismatch) {
  EXPECT_THROW(commutator(VectorField::partial(yz(), 0), VectorField::partial(tangent(), 0)),
               ContextMismatch);
}

TEST(Homological, Oracles) {
  auto c = tangent();
  EXPECT_TRUE(is_homological(field(c, {{"x", "xi"}})).homological);
  EXPECT_TRUE(is_homological(load_q("ce2")).homological);
  auto bad = is_homological(field(yz(), {{"y", "z"}, {"z", "y*z"}}));
  EXPECT_FALSE(bad.homological);
  // first nonzero component in declaration order; the z component is nonzero too
  EXPECT_EQ(bad.witness, 0u);
  EXPECT_FALSE(bad.square[1].is_zero());
  EXPECT_THROW(is_homological(VectorField::partial(c, "x")), InvalidArgument);
}

TEST(Homological, AgreesWithBruteForce) {
  for (const char* name : {"tangent", "ce2", "mixed", "nonhom", "model_general", "ce3_corrupt"}) {
    auto q = load_q(name);
    bool brute = true;
    for (std::size_t c = 0; c < q.size(); ++c)
      if (!apply(q, apply(q, Polynomial::variable(q.context(), c))).is_zero()) brute = false;
    EXPECT_EQ(is_homological(q).homological, brute) << name;
  }
}

TEST(Weights, Decompose) {
  auto c = yz();
  auto x = field(c, {{"y", "1"}, {"z", "y"}});
  auto parts = weight_decompose(x);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts.begin()->first, -1);
  EXPECT_EQ(negative_part(x), x);
  auto q = field(c, {{"y", "z"}});
  EXPECT_TRUE(negative_part(q).is_zero());
  EXPECT_EQ(weight_decompose(q).begin()->first, 1);
  auto mixed = x + q;
  EXPECT_EQ(negative_part(mixed) + nonnegative_part(mixed), mixed);
}

TEST(Relatedness, IdentityMap) {
  auto q = load_q("mixed");
  auto r = check_f_related(Substitution::identity(q.context()), q, q);
  EXPECT_TRUE(r.related);
}

TEST(Relatedness, ZeroSectionMap) {
  // positive-weight coordinates sent to 0, base kept, Q2 = 0: the residual at
  // a base coordinate is -Q1^a, and zero elsewhere
  for (const char* name : {"tangent", "mixed", "toy", "abelian"}) {
    auto q = load_q(name);
    const auto& c = q.context();
    Substitution s(c, c);
    bool base_vanishes = true;
    for (std::size_t i = 0; i < c->size(); ++i) {
      const bool positive = (*c)[i].weight > 0;
      s.assign(i, positive ? Polynomial(c) : Polynomial::variable(c, i));
      if (!positive && !q[i].is_zero()) base_vanishes = false;
    }
    EXPECT_EQ(check_f_related(s, q, VectorField(c)).related, base_vanishes) << name;
  }
}

TEST(Relatedness, TautologicalMap) {
  for (const char* name : {"tangent", "ce2", "mixed", "nonhom", "ce3_corrupt"}) {
    auto q = load_q(name);
    auto shifted = shifted_tangent_context(q.context());
    auto r = check_f_related(tautological_map(q, shifted), q, de_rham_field(shifted));
    EXPECT_EQ(r.related, is_homological(q).homological) << name;
  }
}

TEST(CoordinateChange, IdentityAndInverse) {
  auto c = yz();
  auto id = Substitution::identity(c);
  CoordinateChange change(id, id);
  auto x = field(c, {{"y", "1"}, {"z", "y"}});
  EXPECT_EQ(pushforward(x, change), x);
  Substitution half(c, c);
  half.assign("y", poly(c, "y"));
  half.assign("z", poly(c, "2*z"));
  EXPECT_THROW(CoordinateChange(half, id), InvalidArgument);
}

TEST(CoordinateChange, ConstantFieldOfZScales) {
  // z = 2 z', so d/dz' = 2 d/dz
  auto a = GradedContext::make({{"yp", Parity::odd, 1}, {"zp", Parity::even, 2}});
  auto b = yz();
  Substitution a_in_b(a, b), b_in_a(b, a);
  a_in_b.assign("yp", poly(b, "y"));
  a_in_b.assign("zp", poly(b, "1/2*z"));
  b_in_a.assign("y", poly(a, "yp"));
  b_in_a.assign("z", poly(a, "2*zp"));
  CoordinateChange change(a_in_b, b_in_a);
  EXPECT_TRUE(change.preserves_weight());
  EXPECT_EQ(pushforward(VectorField::partial(a, "zp"), change), field(b, {{"z", "2"}}));
  EXPECT_EQ(pushforward(pushforward(VectorField::partial(a, "zp"), change), change.inverse()),
            VectorField::partial(a, "zp"));
}

TEST(Printing, FieldFormat) {
  auto c = yz();
  EXPECT_EQ(to_string(field(c, {{"y", "z"}, {"z", "-y*z"}})), "{y: z, z: -y*z}");
  EXPECT_EQ(to_string(VectorField(c)), "{}");
}
