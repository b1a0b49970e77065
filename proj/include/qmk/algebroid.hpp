#pragma once

// The N=1 layer: sections of E as weight -1 fields on PiE, bracket and
// anchor read off from Q, and the Lie algebroid axioms.

#include <string>
#include <vector>

#include "qmk/vector_fields.hpp"

namespace qmk {

/// Chart with weights 0 (base x^a) and 1 (fiber xi^i) and an odd weight +1 Q.
class AlgebroidChart {
 public:
  explicit AlgebroidChart(VectorField q);

  const ContextPtr& context() const { return q_.context(); }
  const VectorField& q() const { return q_; }
  const std::vector<std::size_t>& base() const { return base_; }
  const std::vector<std::size_t>& fiber() const { return fiber_; }

 private:
  VectorField q_;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> fiber_;
};

/// u = u^k e_k, one component per fiber coordinate in declaration order.
/// e_k has parity p(xi^k) + 1.
struct Section {
  std::vector<Polynomial> components;
  Parity parity = Parity::even;

  bool operator==(const Section& other) const;
};

Section zero_section(const AlgebroidChart& c, Parity parity = Parity::even);
/// f e_k; f must be a homogeneous base function.
Section basis_section(const AlgebroidChart& c, std::size_t k,
                      const std::optional<Polynomial>& f = std::nullopt);

/// i_u = (-1)^u u^k d/dxi^k.
VectorField embed_section(const AlgebroidChart& c, const Section& u);
/// Inverse of embed_section on homogeneous weight -1 fields.
Section extract_section(const AlgebroidChart& c, const VectorField& x);

/// i_[u,v] = (-1)^u [[Q,i_u],i_v].
Section algebroid_bracket(const AlgebroidChart& c, const Section& u, const Section& v);
/// a(u) f = [[Q,i_u],f]; only base components are nonzero.
VectorField algebroid_anchor(const AlgebroidChart& c, const Section& u);

std::string to_string(const AlgebroidChart& c, const Section& u);

struct AxiomResult {
  std::string name;
  bool ok = true;
  std::size_t instances = 0;
  std::string witness;   // first failing arguments
  std::string residual;
};

struct AxiomReport {
  std::vector<AxiomResult> axioms;  // antisymmetry, jacobi, leibniz, anchorlin
  bool homological = true;
  std::string q2_witness;
  bool axioms_ok() const;
  bool ok() const { return axioms_ok() && homological; }
};

/// Checks the axioms on basis sections with multipliers 1 and each base
/// coordinate, plus [Q,Q] = 0.
AxiomReport verify_algebroid_axioms(const AlgebroidChart& c);
std::string format_report(const AxiomReport& report);

/// sigma pulls functions on c2 back to c1. Throws InvalidArgument unless
/// sigma preserves weight.
RelatednessCheck check_algebroid_morphism(const AlgebroidChart& c1, const AlgebroidChart& c2,
                                          const Substitution& sigma);

}  // namespace qmk
