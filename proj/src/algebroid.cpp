#include "qmk/algebroid.hpp"

namespace qmk {

AlgebroidChart::AlgebroidChart(VectorField q) : q_(std::move(q)) {
  if (!q_.context()) throw InvalidArgument("field has no chart");
  const GradedContext& ctx = *q_.context();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i].weight == 0) base_.push_back(i);
    else if (ctx[i].weight == 1) fiber_.push_back(i);
    else
      throw InvalidArgument("Lie algebroid charts only have weights 0 and 1 (coordinate '" +
                            ctx[i].name + "' has weight " + std::to_string(ctx[i].weight) + ")");
  }
  if (!q_.has_parity(Parity::odd)) throw InvalidArgument("Q must be odd");
  if (!q_.has_weight(1)) throw InvalidArgument("Q must be homogeneous of weight +1");
}

bool Section::operator==(const Section& other) const {
  return components == other.components;
}

namespace {

Parity unit_parity(const AlgebroidChart& c, std::size_t k) {
  return (*c.context())[c.fiber()[k]].parity + Parity::odd;
}

void check_section(const AlgebroidChart& c, const Section& u) {
  if (u.components.size() != c.fiber().size())
    throw InvalidArgument("section needs one component per fiber coordinate");
  for (std::size_t k = 0; k < u.components.size(); ++k) {
    const Polynomial& f = u.components[k];
    if (f.is_zero()) continue;
    if (!same_context(f.context(), c.context())) throw ContextMismatch();
    if (!f.has_weight(0)) throw InvalidArgument("section components must have weight 0");
    if (!f.has_parity(u.parity + unit_parity(c, k)))
      throw ParityMismatch("section component parity disagrees with the declared parity");
  }
}

bool is_zero(const Section& u) {
  for (const auto& p : u.components)
    if (!p.is_zero()) return false;
  return true;
}

Section combine(const Section& a, int s, const Section& b) {
  Section out = a;
  for (std::size_t k = 0; k < out.components.size(); ++k) {
    if (s > 0) out.components[k] += b.components[k];
    else out.components[k] -= b.components[k];
  }
  return out;
}

Section scale(const Polynomial& f, const Section& u, Parity pf) {
  Section out = u;
  for (auto& p : out.components) p = f * p;
  out.parity = u.parity + pf;
  return out;
}

}  // namespace

Section zero_section(const AlgebroidChart& c, Parity parity) {
  return Section{std::vector<Polynomial>(c.fiber().size(), Polynomial(c.context())), parity};
}

Section basis_section(const AlgebroidChart& c, std::size_t k, const std::optional<Polynomial>& f) {
  Section u = zero_section(c, unit_parity(c, k));
  if (!f) {
    u.components.at(k) = Polynomial::constant(c.context(), 1);
    return u;
  }
  if (f->is_zero()) return u;
  const auto pf = f->parity();
  if (!pf) throw InvalidArgument("multiplier must have a definite parity");
  u.parity = u.parity + *pf;
  u.components.at(k) = *f;
  check_section(c, u);
  return u;
}

VectorField embed_section(const AlgebroidChart& c, const Section& u) {
  check_section(c, u);
  VectorField x(c.context());
  for (std::size_t k = 0; k < u.components.size(); ++k)
    x.set(c.fiber()[k], is_odd(u.parity) ? -u.components[k] : u.components[k]);
  return x;
}

Section extract_section(const AlgebroidChart& c, const VectorField& x) {
  if (!same_context(x.context(), c.context())) throw ContextMismatch();
  Section u = zero_section(c);
  if (x.is_zero()) return u;
  const auto w = x.weight();
  const auto p = x.parity();
  if (!w || *w != -1 || !p) throw InvalidArgument("not a homogeneous weight -1 field");
  u.parity = *p + Parity::odd;
  for (std::size_t k = 0; k < c.fiber().size(); ++k) {
    const Polynomial& comp = x[c.fiber()[k]];
    u.components[k] = is_odd(u.parity) ? -comp : comp;
  }
  return u;
}

Section algebroid_bracket(const AlgebroidChart& c, const Section& u, const Section& v) {
  VectorField x = commutator(commutator(c.q(), embed_section(c, u)), embed_section(c, v));
  if (is_odd(u.parity)) x = -x;
  if (!x.has_weight(-1)) throw InvalidArgument("bracket left the weight -1 fields");
  Section out = extract_section(c, x);
  out.parity = u.parity + v.parity;
  return out;
}

VectorField algebroid_anchor(const AlgebroidChart& c, const Section& u) {
  const VectorField x = commutator(c.q(), embed_section(c, u));
  VectorField out(c.context());
  for (std::size_t a : c.base()) out.set(a, x[a]);
  return out;
}

std::string to_string(const AlgebroidChart& c, const Section& u) {
  std::string out = "{";
  bool first = true;
  for (std::size_t k = 0; k < u.components.size(); ++k) {
    if (u.components[k].is_zero()) continue;
    if (!first) out += ", ";
    first = false;
    out += "e_" + (*c.context())[c.fiber()[k]].name + ": " + to_string(u.components[k]);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

bool AxiomReport::axioms_ok() const {
  for (const auto& a : axioms)
    if (!a.ok) return false;
  return true;
}

AxiomReport verify_algebroid_axioms(const AlgebroidChart& c) {
  const ContextPtr& ctx = c.context();
  const std::size_t n = c.fiber().size();

  std::vector<Polynomial> multipliers{Polynomial::constant(ctx, 1)};
  for (std::size_t a : c.base()) multipliers.push_back(Polynomial::variable(ctx, a));

  std::vector<Section> basis;
  for (std::size_t k = 0; k < n; ++k) basis.push_back(basis_section(c, k));
  std::vector<Section> sections;
  for (const auto& f : multipliers)
    for (std::size_t k = 0; k < n; ++k) sections.push_back(basis_section(c, k, f));

  auto show = [&](const Section& s) { return to_string(c, s); };
  auto record = [](AxiomResult& r, bool failed, const std::string& witness,
                   const std::string& residual) {
    ++r.instances;
    if (failed && r.ok) {
      r.ok = false;
      r.witness = witness;
      r.residual = residual;
    }
  };

  AxiomResult antisym;
  antisym.name = "antisymmetry";
  for (const auto& u : sections) {
    for (const auto& v : sections) {
      Section r = combine(algebroid_bracket(c, u, v), koszul(u.parity, v.parity),
                          algebroid_bracket(c, v, u));
      record(antisym, !is_zero(r), "u=" + show(u) + " v=" + show(v), show(r));
    }
  }

  AxiomResult jacobi;
  jacobi.name = "jacobi";
  for (const auto& u : basis) {
    for (const auto& v : basis) {
      for (const auto& w : sections) {
        Section r = algebroid_bracket(c, u, algebroid_bracket(c, v, w));
        r = combine(r, -1, algebroid_bracket(c, algebroid_bracket(c, u, v), w));
        r = combine(r, -koszul(u.parity, v.parity),
                    algebroid_bracket(c, v, algebroid_bracket(c, u, w)));
        record(jacobi, !is_zero(r), "u=" + show(u) + " v=" + show(v) + " w=" + show(w), show(r));
      }
    }
  }

  AxiomResult leibniz;
  leibniz.name = "leibniz";
  AxiomResult anchorlin;
  anchorlin.name = "anchorlin";
  for (const auto& u : basis) {
    const VectorField au = algebroid_anchor(c, u);
    for (const auto& f : multipliers) {
      const Parity pf = *f.parity();
      for (std::size_t j = 0; j < n; ++j) {
        const Section& v = basis[j];
        Section r = algebroid_bracket(c, u, scale(f, v, pf));
        Section av = scale(apply(au, f), v, pf);
        r = combine(r, -1, av);
        r = combine(r, -koszul(u.parity, pf), scale(f, algebroid_bracket(c, u, v), pf));
        record(leibniz, !is_zero(r), "u=" + show(u) + " v=" + show(v) + " f=" + to_string(f),
               show(r));
      }
      const VectorField r = algebroid_anchor(c, scale(f, u, pf)) - f * au;
      record(anchorlin, !r.is_zero(), "u=" + show(u) + " f=" + to_string(f), to_string(r));
    }
  }

  AxiomReport report;
  report.axioms = {antisym, jacobi, leibniz, anchorlin};
  const HomologicalCheck h = is_homological(c.q());
  report.homological = h.homological;
  if (h.witness)
    report.q2_witness = (*ctx)[*h.witness].name + ": " + to_string(h.square[*h.witness]);
  return report;
}

std::string format_report(const AxiomReport& report) {
  std::string out;
  for (const auto& a : report.axioms) {
    out += "AXIOM " + a.name;
    if (a.ok) out += " OK\n";
    else out += " FAIL " + a.witness + " residual=" + a.residual + "\n";
  }
  out += report.homological ? "Q2 OK\n" : "Q2 FAIL " + report.q2_witness + "\n";
  return out;
}

RelatednessCheck check_algebroid_morphism(const AlgebroidChart& c1, const AlgebroidChart& c2,
                                          const Substitution& sigma) {
  if (!same_context(sigma.source(), c2.context()) || !same_context(sigma.target(), c1.context()))
    throw ContextMismatch();
  if (!sigma.preserves_weight()) throw InvalidArgument("substitution does not preserve weight");
  return check_f_related(sigma, c1.q(), c2.q());
}

}  // namespace qmk
