#pragma once

// Tabulated two-layer structure on the negative fields, the L-infinity
// brackets on the quotient by fields vanishing at the origin, and
// reconstruction of Q from the tables alone.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmk/derived_structure.hpp"

namespace qmk {

/// Structure constants on the canonical basis. Every table entry is a
/// coefficient vector over `basis`; the anchor is stored as a field whose
/// only nonzero components sit at weight-0 coordinates.
struct TwoLayerStructure {
  NegativeBasis basis;
  std::vector<std::vector<Coefficients>> bracket;  // [b_i, b_j]
  std::vector<Coefficients> differential;          // d b_i
  std::vector<std::vector<Coefficients>> derived;  // {b_i, b_j}
  std::vector<VectorField> anchor;                 // a(b_i)

  const ContextPtr& context() const { return basis.context(); }
  bool operator==(const TwoLayerStructure& other) const;
};

/// Tabulates [_,_], d, {_,_} and the anchor. Rows are computed in parallel.
TwoLayerStructure two_layer(const HigherAlgebroid& a);
TwoLayerStructure two_layer_serial(const HigherAlgebroid& a);

/// The operations of a TwoLayerStructure extended to arbitrary elements
/// sum_b g_b b of the module, using only the tables: [_,_] through function
/// linearity, {_,_} through both Leibniz rules, d through delta_f, and
/// delta_f through the anchor.
class TwoLayerAlgebra {
 public:
  explicit TwoLayerAlgebra(const TwoLayerStructure& tables);

  const NegativeBasis& basis() const { return t_.basis; }
  Coefficients unit(std::size_t i) const;

  Coefficients bracket(const Coefficients& u, const Coefficients& v) const;
  Coefficients d(const Coefficients& u) const;
  Coefficients derived(const Coefficients& u, const Coefficients& v) const;
  VectorField anchor(const Coefficients& u) const;
  /// delta_f(u) = Q(f) u below weight -1, zero on weight -1.
  Coefficients delta(const Polynomial& f, const Coefficients& u) const;

 private:
  Coefficients scale(const Polynomial& f, const Coefficients& u) const;
  void add_scaled(Coefficients& acc, const Polynomial& f, const Coefficients& u) const;
  Polynomial q_of(const Polynomial& f) const;

  const TwoLayerStructure& t_;
  std::vector<Polynomial> base_components_;  // Q^a rebuilt from the anchor table
};

struct TableCheck {
  /// Identities holding for every odd weight +1 field: dbrack and leib.
  bool consistent = true;
  /// Identities that additionally need [Q,Q] = 0: dsq, dnewbrack, jac.
  bool homological = true;
  std::vector<std::string> failures;
};

/// Re-checks the identities on every basis tuple using only the tables.
TableCheck check_tables(const TwoLayerStructure& tables);

/// Class of a negative field in the quotient by fields vanishing at the
/// origin: components at positive-weight coordinates with every
/// positive-weight coordinate set to zero.
VectorField quotient_class(const VectorField& x);

/// Orders bracket keys by arity, then lexicographically.
struct ArityOrder {
  bool operator()(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// k-ary brackets on the classes of d/dc, c of positive weight, for
/// k = 1..N+1. Keys are non-decreasing tuples of coordinate indices, odd
/// coordinates appearing at most once.
struct LInftyStructure {
  ContextPtr context;
  std::vector<std::size_t> generators;
  std::vector<VectorField> lifting;  // one representative per generator
  int max_arity = 0;
  std::map<std::vector<std::size_t>, VectorField, ArityOrder> brackets;

  bool operator==(const LInftyStructure& other) const;
};

/// Brackets class([...[Q,u1],...,uk]) for the given lifting (default:
/// constant fields d/dc). Throws InvalidArgument if a lift is not a negative
/// representative of its class.
LInftyStructure linfty_brackets(const HigherAlgebroid& a,
                                std::optional<std::vector<VectorField>> lifting = std::nullopt);
/// Same brackets from the tables: class(du), class({u,v}) and
/// class([...[{u1,u2},u3],...,uk]).
LInftyStructure linfty_from_tables(const TwoLayerStructure& tables);

/// Components of Q at positive-weight coordinates from its Taylor
/// coefficients at the origin. Requires the constant-field lifting.
VectorField taylor_reconstruct(const LInftyStructure& l);

class InconsistentTables : public Error {
 public:
  using Error::Error;
};

struct RecoveryOptions {
  /// Also demand the identities that need [Q,Q] = 0.
  bool require_homological = true;
};

/// Rebuilds Q from the tables alone. Throws InconsistentTables when the
/// tables fail the identity re-check.
VectorField recover_Q(const TwoLayerStructure& tables, RecoveryOptions options = {});

}  // namespace qmk
