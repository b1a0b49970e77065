#pragma once

// Graded vector fields X = sum_c X^c d/dc on a chart.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmk/graded_algebra.hpp"

namespace qmk {

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(ContextPtr ctx);
  VectorField(ContextPtr ctx, std::vector<Polynomial> components);

  /// The coordinate field d/dc.
  static VectorField partial(ContextPtr ctx, std::size_t index);
  static VectorField partial(ContextPtr ctx, std::string_view name);

  const ContextPtr& context() const { return ctx_; }
  std::size_t size() const { return components_.size(); }
  const Polynomial& operator[](std::size_t c) const { return components_[c]; }
  const std::vector<Polynomial>& components() const { return components_; }
  void set(std::size_t c, Polynomial value);
  void set(std::string_view name, Polynomial value);

  bool is_zero() const;
  /// Common parity of all terms (component parity + coordinate parity);
  /// nullopt for zero or mixed fields.
  std::optional<Parity> parity() const;
  /// Common weight (component weight - coordinate weight); nullopt for zero or
  /// mixed fields.
  std::optional<int> weight() const;
  bool has_parity(Parity p) const;  // true for zero
  bool has_weight(int w) const;     // true for zero

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(const Rational& c);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const Rational& c, VectorField a) { return a *= c; }
  VectorField operator-() const;
  /// Left multiplication by a function: (f X)^c = f X^c.
  friend VectorField operator*(const Polynomial& f, const VectorField& x);

  bool operator==(const VectorField& other) const;

 private:
  ContextPtr ctx_;
  std::vector<Polynomial> components_;
};

/// X(f) = sum_c X^c d_c f.
Polynomial apply(const VectorField& x, const Polynomial& f);

/// Part of X whose terms have parity p.
VectorField parity_part(const VectorField& x, Parity p);

/// Super commutator [X,Y]^c = X(Y^c) - (-1)^{p(X)p(Y)} Y(X^c), extended
/// bilinearly over the parity decomposition of X and Y.
VectorField commutator(const VectorField& x, const VectorField& y);

struct HomologicalCheck {
  bool homological = false;
  VectorField square;                 // [Q,Q]
  std::optional<std::size_t> witness;  // first coordinate with nonzero [Q,Q]^c
};

/// Q is homological iff [Q,Q] = 0. Throws InvalidArgument unless Q is odd.
HomologicalCheck is_homological(const VectorField& q);

/// Weight-homogeneous parts, keyed by weight; zero parts are omitted.
std::map<int, VectorField> weight_decompose(const VectorField& x);
/// Projection onto strictly negative weights.
VectorField negative_part(const VectorField& x);
VectorField nonnegative_part(const VectorField& x);

/// Components evaluated with the flagged coordinates set to zero.
VectorField evaluate_at_zero(const VectorField& x, const std::vector<bool>& vanishing);

struct RelatednessCheck {
  bool related = false;
  /// One residual per coordinate of Q2's chart:
  /// substitute(Q2^i, sigma) - Q1(sigma(i)).
  std::vector<Polynomial> residuals;
};

/// sigma sends each coordinate of Q2's chart to a polynomial over Q1's chart.
RelatednessCheck check_f_related(const Substitution& sigma, const VectorField& q1,
                                 const VectorField& q2);

/// The parity-shifted tangent chart: each coordinate z gets a partner `d<z>`
/// of opposite parity and weight w(z)+1.
ContextPtr shifted_tangent_context(const ContextPtr& ctx);
/// The de Rham field sum_z dz d/dz on the shifted tangent chart.
VectorField de_rham_field(const ContextPtr& shifted);
/// z -> z, dz -> Q^z, from the shifted tangent chart into Q's chart.
Substitution tautological_map(const VectorField& q, const ContextPtr& shifted);

/// An invertible change of coordinates between two charts, given by formulas
/// in both directions.
class CoordinateChange {
 public:
  /// `a_in_b` expresses chart A's coordinates through chart B's, `b_in_a` the
  /// converse. Throws InvalidArgument unless the two compose to the identity
  /// both ways.
  CoordinateChange(Substitution a_in_b, Substitution b_in_a);

  const ContextPtr& from() const { return a_in_b_.source(); }
  const ContextPtr& to() const { return b_in_a_.source(); }
  const Substitution& from_in_to() const { return a_in_b_; }
  const Substitution& to_in_from() const { return b_in_a_; }
  bool preserves_weight() const;
  CoordinateChange inverse() const;

 private:
  Substitution a_in_b_;
  Substitution b_in_a_;
};

/// Expresses a field on chart `change.from()` in the coordinates of
/// `change.to()`.
VectorField pushforward(const VectorField& x, const CoordinateChange& change);

/// `{a: expr, b: expr}` listing nonzero components in declaration order.
std::string to_string(const VectorField& x);

}  // namespace qmk
