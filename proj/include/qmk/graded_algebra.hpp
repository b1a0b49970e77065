#pragma once

// Exact supercommutative polynomial arithmetic over a graded coordinate chart.
//
// Every coordinate carries a parity (even/odd) and an integer weight. Monomials
// are stored as dense exponent vectors in the chart's declaration order; any
// reordering of odd factors needed to reach that order contributes a Koszul
// sign. Coefficients are arbitrary-precision rationals.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qmk {

using Rational = mpq_class;

/// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContextMismatch : public Error {
 public:
  ContextMismatch() : Error("operands live in different coordinate charts") {}
};

class UnknownCoordinate : public Error {
 public:
  using Error::Error;
};

class ParityMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class TermLimitExceeded : public Error {
 public:
  explicit TermLimitExceeded(std::size_t limit)
      : Error("polynomial exceeds the term limit of " + std::to_string(limit) + " terms"),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

/// Resource guard on the number of terms of any polynomial produced by the
/// kernel. Zero disables the guard.
void set_term_limit(std::size_t limit);
std::size_t term_limit();

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
constexpr bool is_odd(Parity p) { return p == Parity::odd; }
constexpr Parity parity_of(bool odd) { return odd ? Parity::odd : Parity::even; }
/// (-1)^(a*b)
constexpr int koszul(Parity a, Parity b) { return (is_odd(a) && is_odd(b)) ? -1 : 1; }
/// (-1)^a
constexpr int sign(Parity a) { return is_odd(a) ? -1 : 1; }

std::string_view to_string(Parity p);

struct Coordinate {
  std::string name;
  Parity parity = Parity::even;
  int weight = 0;

  bool operator==(const Coordinate&) const = default;
};

class GradedContext;
using ContextPtr = std::shared_ptr<const GradedContext>;

/// An ordered chart of named coordinates. Declaration order is the canonical
/// monomial order.
class GradedContext {
 public:
  /// Throws InvalidArgument on duplicate or empty names.
  static ContextPtr make(std::vector<Coordinate> coordinates);

  std::size_t size() const { return coordinates_.size(); }
  const Coordinate& operator[](std::size_t i) const { return coordinates_[i]; }
  const std::vector<Coordinate>& coordinates() const { return coordinates_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownCoordinate.
  std::size_t index_of(std::string_view name) const;

  bool nonnegatively_graded() const;
  /// Maximal coordinate weight; defined only when all weights are >= 0.
  std::optional<int> degree() const;

  bool operator==(const GradedContext& other) const { return coordinates_ == other.coordinates_; }

 private:
  explicit GradedContext(std::vector<Coordinate> coordinates);

  std::vector<Coordinate> coordinates_;
  std::unordered_map<std::string, std::size_t> index_;
};

bool same_context(const ContextPtr& a, const ContextPtr& b);

/// A product of coordinates in canonical order. Odd exponents are 0 or 1.
class Monomial {
 public:
  Monomial() = default;
  /// The constant monomial 1 over a chart of the given size.
  explicit Monomial(std::size_t n) : exponents_(n, 0) {}
  /// Throws InvalidArgument if an odd coordinate has exponent > 1.
  Monomial(const GradedContext& ctx, std::vector<std::uint16_t> exponents);

  static Monomial variable(const GradedContext& ctx, std::size_t index);

  std::size_t size() const { return exponents_.size(); }
  std::uint16_t operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<std::uint16_t>& exponents() const { return exponents_; }
  int weight() const { return weight_; }
  Parity parity() const { return parity_; }
  unsigned degree() const;
  bool is_one() const { return degree() == 0; }

  bool operator==(const Monomial& other) const { return exponents_ == other.exponents_; }

  /// Product of two monomials. Returns nullopt when an odd coordinate would be
  /// squared; otherwise the normalized monomial and its Koszul sign.
  friend std::optional<std::pair<Monomial, int>> multiply(const GradedContext& ctx,
                                                          const Monomial& a,
                                                          const Monomial& b);

 private:
  std::vector<std::uint16_t> exponents_;
  int weight_ = 0;
  Parity parity_ = Parity::even;

  void recompute(const GradedContext& ctx);
  friend class Polynomial;
  friend Monomial without_variable(const GradedContext&, const Monomial&, std::size_t);
};

/// Terms are ordered by weight, then lexicographically with higher exponents
/// of earlier coordinates first.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  Polynomial() = default;  // detached zero; only useful as a placeholder
  explicit Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Polynomial constant(ContextPtr ctx, const Rational& c);
  static Polynomial variable(ContextPtr ctx, std::size_t index);
  static Polynomial variable(ContextPtr ctx, std::string_view name);
  static Polynomial term(ContextPtr ctx, const Monomial& m, const Rational& c);

  const ContextPtr& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Parity shared by every term; nullopt for zero or mixed-parity input.
  std::optional<Parity> parity() const;
  /// Weight shared by every term; nullopt for zero or mixed-weight input.
  std::optional<int> weight() const;
  bool has_parity(Parity p) const;  // true for zero
  bool has_weight(int w) const;     // true for zero
  /// Coefficient of the constant monomial.
  Rational constant_term() const;
  /// Highest total polynomial degree of any term, or -1 for zero.
  int degree() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  bool operator==(const Polynomial& other) const;

  /// Internal mutation; keeps the no-zero-coefficient invariant.
  void add_term(const Monomial& m, const Rational& c);

 private:
  ContextPtr ctx_;
  Terms terms_;

  void check_limit() const;
};

/// Supercommutative product.
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);

/// Left partial derivative with respect to coordinate `index`.
Polynomial partial_derivative(const Polynomial& f, std::size_t index);
Polynomial partial_derivative(const Polynomial& f, std::string_view name);

/// Sum of the terms of weight w.
Polynomial homogeneous_component(const Polynomial& f, int w);
/// Sum of the terms of parity p.
Polynomial parity_component(const Polynomial& f, Parity p);

struct ParityWeight {
  Parity parity;
  int weight;
  bool operator==(const ParityWeight&) const = default;
};
/// nullopt when f is zero or its terms disagree in parity or weight.
std::optional<ParityWeight> parity_weight(const Polynomial& f);

/// Sets every listed coordinate to zero.
Polynomial evaluate_at_zero(const Polynomial& f, const std::vector<bool>& vanishing);

/// An algebra morphism: each coordinate of `source` is sent to a polynomial
/// over `target`. Unassigned coordinates may not appear in substituted input.
class Substitution {
 public:
  Substitution(ContextPtr source, ContextPtr target);
  static Substitution identity(ContextPtr ctx);

  /// Throws ParityMismatch if the image is not of the coordinate's parity and
  /// ContextMismatch if it is not over the target chart.
  Substitution& assign(std::size_t index, Polynomial image);
  Substitution& assign(std::string_view name, Polynomial image);

  const ContextPtr& source() const { return source_; }
  const ContextPtr& target() const { return target_; }
  bool defined(std::size_t index) const { return images_[index].has_value(); }
  /// Throws UnknownCoordinate when unassigned.
  const Polynomial& image(std::size_t index) const;

  /// True when every assigned image is homogeneous of its coordinate's weight.
  bool preserves_weight() const;

 private:
  ContextPtr source_;
  ContextPtr target_;
  std::vector<std::optional<Polynomial>> images_;
};

Polynomial substitute(const Polynomial& f, const Substitution& sigma);

/// Normalized printing, e.g. `x^2 - 3/2*y*z`.
std::string to_string(const Polynomial& f);
std::string to_string(const GradedContext& ctx, const Monomial& m);

}  // namespace qmk
