#pragma once

// Derived operations of a weight +1 homological field on the negatively
// graded vector fields of a non-negatively graded chart.
//
// With P the projection onto negative weights:
//   d u         = P[Q,u]
//   {u,v}       = [[Q,u],v]
//   {u1,...,uk} = P[...[[Q,u1],u2],...,uk]
//   a(u) f      = [[Q,u],f]
//   delta_f(u)  = d(f u) - (-1)^{f} f d(u)

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qmk/vector_fields.hpp"

namespace qmk {

enum class Validation {
  homological,  // reject fields with [Q,Q] != 0
  shape_only,   // only parity, weight and grading checks
};

class HigherAlgebroid {
 public:
  /// Throws InvalidArgument when the chart has negative weights or Q is not
  /// odd of weight +1 (or not homological under Validation::homological).
  explicit HigherAlgebroid(VectorField q, Validation validation = Validation::homological);

  const ContextPtr& context() const { return q_.context(); }
  const VectorField& q() const { return q_; }
  /// Maximal coordinate weight N.
  int degree() const { return degree_; }
  /// Indices of weight-0 coordinates.
  const std::vector<std::size_t>& base() const { return base_; }
  /// Indices of weight-1 coordinates.
  const std::vector<std::size_t>& linear_fiber() const { return linear_fiber_; }

 private:
  VectorField q_;
  int degree_ = 0;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> linear_fiber_;
};

// --- canonical module basis of the negative-weight fields --------------------

/// m * d/dc with c of positive weight and m a monomial in positive-weight
/// coordinates of weight < w(c).
struct BasisElement {
  Monomial monomial;
  std::size_t target = 0;
  VectorField field;
  Parity parity = Parity::even;
  int weight = 0;
  std::string label;
};

/// Coefficients over a basis; each entry is a weight-0 polynomial.
using Coefficients = std::vector<Polynomial>;

class NegativeBasis {
 public:
  explicit NegativeBasis(ContextPtr ctx);

  const ContextPtr& context() const { return ctx_; }
  std::size_t size() const { return elements_.size(); }
  const BasisElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Index of the constant field d/dc, if c has positive weight.
  std::optional<std::size_t> constant_field(std::size_t coordinate) const;

  /// Writes a negative field as sum_b g_b * b with weight-0 coefficients.
  /// Throws InvalidArgument for fields outside the negative part.
  Coefficients expand(const VectorField& x) const;
  VectorField combine(const Coefficients& coefficients) const;
  Coefficients zero() const;

 private:
  ContextPtr ctx_;
  std::vector<BasisElement> elements_;
  std::map<std::pair<std::size_t, std::vector<std::uint16_t>>, std::size_t> lookup_;
  std::vector<bool> is_base_;
};

// --- operations --------------------------------------------------------------

VectorField big_D(const HigherAlgebroid& a, const VectorField& u);
/// Throws InvalidArgument unless u is homogeneous of negative weight.
VectorField derived_d(const HigherAlgebroid& a, const VectorField& u);
VectorField derived_bracket(const HigherAlgebroid& a, const VectorField& u, const VectorField& v);
/// k >= 1 arguments; k = 0 is rejected.
VectorField higher_derived_bracket(const HigherAlgebroid& a, std::span<const VectorField> args);

/// Q^a_i(x) for every weight-0 coordinate a and weight-1 coordinate i, read
/// off as the left derivative d(Q^a)/dy^i.
std::map<std::pair<std::size_t, std::size_t>, Polynomial> anchor_geometric(
    const HigherAlgebroid& a);
/// a(u) as a field on the base: the weight-0 components of [Q,u].
VectorField anchor_field(const HigherAlgebroid& a, const VectorField& u);
/// a(u) f. Throws InvalidArgument unless f has weight 0.
Polynomial anchor_algebraic(const HigherAlgebroid& a, const VectorField& u, const Polynomial& f);

struct AnchorComparison {
  bool agree = true;
  struct Entry {
    VectorField u;
    VectorField algebraic;
    VectorField geometric;
  };
  std::vector<Entry> mismatches;
  std::size_t checked = 0;
};
/// Compares a(u) from [[Q,u],f] with (-1)^{u+1} sum_i u^i Q^a_i d_a on the
/// weight -1 basis fields and their products with base coordinates.
AnchorComparison anchors_agree(const HigherAlgebroid& a);

VectorField delta_f(const HigherAlgebroid& a, const Polynomial& f, const VectorField& u);

// --- identity suite ----------------------------------------------------------

enum class Identity {
  dsq,          // d^2 = 0
  dbrack,       // d[u,v] = {u,v} - (-1)^{uv}{v,u}
  dnewbrack,    // d{u,v} = -(-1)^{(u+1)v}{v,du} + (-1)^{u+1}{u,dv} + (-1)^u [du,dv]
  leib,         // {u,[v,w]} = [{u,v},w] + (-1)^{(u+1)v}[v,{u,w}]
  jac,          // {u,{v,w}} = (-1)^{u+1}{{u,v},w} + (-1)^{(u+1)(v+1)}{v,{u,w}}
  linearlie,    // [fu,v] = f[u,v]
  anchorlin,    // a(gu) = (-1)^g g a(u)
  leibanchor,   // {u,fv} = a(u)f v + (-1)^{(u+1)f} f{u,v}
  leibanchor2,  // {fu,v} = (-1)^f f{u,v} + (-1)^{(f+u)v} a(v)f u + delta_f([u,v])
};
inline constexpr Identity kAllIdentities[] = {
    Identity::dsq,       Identity::dbrack,    Identity::dnewbrack,
    Identity::leib,      Identity::jac,       Identity::linearlie,
    Identity::anchorlin, Identity::leibanchor, Identity::leibanchor2};

std::string_view identity_name(Identity id);
/// Number of field and function arguments an identity quantifies over.
std::pair<int, int> identity_arity(Identity id);

/// Left minus right side of one identity instance. Unused arguments are
/// ignored.
VectorField identity_residual(const HigherAlgebroid& a, Identity id, const VectorField& u,
                              const VectorField& v, const VectorField& w, const Polynomial& f);

struct IdentitySample {
  VectorField u, v, w;
  Polynomial f, g;
};

/// `fields` and `functions` are checked exhaustively (every tuple of the
/// right arity); each entry of `tuples` is checked once per identity.
struct SampleSet {
  std::vector<VectorField> fields;
  std::vector<Polynomial> functions;
  std::vector<IdentitySample> tuples;
};

struct IdentityResult {
  Identity identity;
  bool ok = true;
  std::size_t instances = 0;
  // First failing instance in evaluation order.
  std::vector<VectorField> fields;
  std::optional<Polynomial> function;
  VectorField residual;
};

struct IdentityReport {
  std::vector<IdentityResult> results;
  bool ok() const;
};

/// OpenMP-parallel evaluation. The report does not depend on the schedule.
IdentityReport verify_two_layer(const HigherAlgebroid& a, const SampleSet& samples,
                                std::span<const Identity> identities = kAllIdentities);
/// Serial reference evaluation; produces the same report.
IdentityReport verify_two_layer_serial(const HigherAlgebroid& a, const SampleSet& samples,
                                       std::span<const Identity> identities = kAllIdentities);

/// Basis fields and a few weight-0 functions (1, each base coordinate, and a
/// product when available).
SampleSet basis_samples(const HigherAlgebroid& a);
/// Random homogeneous negative fields with weight-0 coefficients and random
/// weight-0 functions, reproducible from the seed.
std::vector<IdentitySample> random_samples(const HigherAlgebroid& a, std::size_t count,
                                           unsigned long seed);

/// `IDENTITY <name> OK` or `IDENTITY <name> FAIL u=... residual=...` lines.
std::string format_report(const IdentityReport& report);

}  // namespace qmk
