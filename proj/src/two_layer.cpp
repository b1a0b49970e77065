#include "qmk/two_layer.hpp"

#include <exception>
#include <functional>

namespace qmk {

bool TwoLayerStructure::operator==(const TwoLayerStructure& other) const {
  return same_context(context(), other.context()) && bracket == other.bracket &&
         differential == other.differential && derived == other.derived &&
         anchor == other.anchor;
}

namespace {

void fill_row(const HigherAlgebroid& a, TwoLayerStructure& t, std::size_t i) {
  const NegativeBasis& basis = t.basis;
  const VectorField& bi = basis[i].field;
  t.differential[i] = basis.expand(derived_d(a, bi));
  t.anchor[i] = anchor_field(a, bi);
  const VectorField dq = big_D(a, bi);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const VectorField& bj = basis[j].field;
    t.bracket[i][j] = basis.expand(commutator(bi, bj));
    t.derived[i][j] = basis.expand(commutator(dq, bj));
  }
}

TwoLayerStructure empty_tables(const HigherAlgebroid& a) {
  TwoLayerStructure t{NegativeBasis(a.context()), {}, {}, {}, {}};
  const std::size_t n = t.basis.size();
  t.bracket.assign(n, std::vector<Coefficients>(n));
  t.derived.assign(n, std::vector<Coefficients>(n));
  t.differential.assign(n, Coefficients{});
  t.anchor.assign(n, VectorField(a.context()));
  return t;
}

}  // namespace

TwoLayerStructure two_layer(const HigherAlgebroid& a) {
  TwoLayerStructure t = empty_tables(a);
  std::exception_ptr failure;
  const long n = static_cast<long>(t.basis.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      fill_row(a, t, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qmk_two_layer_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return t;
}

TwoLayerStructure two_layer_serial(const HigherAlgebroid& a) {
  TwoLayerStructure t = empty_tables(a);
  for (std::size_t i = 0; i < t.basis.size(); ++i) fill_row(a, t, i);
  return t;
}

// ---------------------------------------------------------------------------
// TwoLayerAlgebra

TwoLayerAlgebra::TwoLayerAlgebra(const TwoLayerStructure& tables) : t_(tables) {
  const ContextPtr& ctx = t_.context();
  const GradedContext& g = *ctx;
  base_components_.assign(g.size(), Polynomial(ctx));
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (g[x].weight != 0) continue;
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (g[y].weight != 1) continue;
      const auto idx = t_.basis.constant_field(y);
      // a(d/dy)^x = -(-1)^{p(y)} dQ^x/dy
      Polynomial h = t_.anchor[*idx][x];
      if (!is_odd(g[y].parity)) h = -h;
      base_components_[x] += Polynomial::variable(ctx, y) * h;
    }
  }
}

Coefficients TwoLayerAlgebra::unit(std::size_t i) const {
  Coefficients u = t_.basis.zero();
  u[i] = Polynomial::constant(t_.context(), 1);
  return u;
}

Coefficients TwoLayerAlgebra::scale(const Polynomial& f, const Coefficients& u) const {
  Coefficients out = t_.basis.zero();
  if (f.is_zero()) return out;
  for (std::size_t b = 0; b < u.size(); ++b)
    if (!u[b].is_zero()) out[b] = f * u[b];
  return out;
}

void TwoLayerAlgebra::add_scaled(Coefficients& acc, const Polynomial& f,
                                 const Coefficients& u) const {
  if (f.is_zero()) return;
  for (std::size_t b = 0; b < u.size(); ++b)
    if (!u[b].is_zero()) acc[b] += f * u[b];
}

Polynomial TwoLayerAlgebra::q_of(const Polynomial& f) const {
  Polynomial out(t_.context());
  for (std::size_t x = 0; x < base_components_.size(); ++x)
    if (!base_components_[x].is_zero()) out += base_components_[x] * partial_derivative(f, x);
  return out;
}

namespace {

// Calls fn(part, parity) for each nonzero parity component of f.
template <typename Fn>
void for_parity_parts(const Polynomial& f, Fn&& fn) {
  if (f.is_zero()) return;
  if (auto p = f.parity()) {
    fn(f, *p);
    return;
  }
  for (Parity p : {Parity::even, Parity::odd}) {
    Polynomial part = parity_component(f, p);
    if (!part.is_zero()) fn(part, p);
  }
}

Polynomial signed_poly(int s, Polynomial p) { return s > 0 ? p : -p; }

}  // namespace

Coefficients TwoLayerAlgebra::bracket(const Coefficients& u, const Coefficients& v) const {
  Coefficients out = t_.basis.zero();
  for (std::size_t b = 0; b < u.size(); ++b) {
    if (u[b].is_zero()) continue;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c].is_zero()) continue;
      // [g b, h c] = (-1)^{b h} g h [b, c]
      for_parity_parts(v[c], [&](const Polynomial& h, Parity ph) {
        add_scaled(out, signed_poly(koszul(t_.basis[b].parity, ph), u[b] * h), t_.bracket[b][c]);
      });
    }
  }
  return out;
}

Coefficients TwoLayerAlgebra::delta(const Polynomial& f, const Coefficients& u) const {
  Coefficients out = t_.basis.zero();
  const Polynomial qf = q_of(f);
  if (qf.is_zero()) return out;
  for (std::size_t e = 0; e < u.size(); ++e) {
    if (u[e].is_zero() || t_.basis[e].weight == -1) continue;
    const Coefficients part = t_.basis.expand(qf * (u[e] * t_.basis[e].field));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += part[k];
  }
  return out;
}

Coefficients TwoLayerAlgebra::d(const Coefficients& u) const {
  Coefficients out = t_.basis.zero();
  for (std::size_t b = 0; b < u.size(); ++b) {
    if (u[b].is_zero()) continue;
    // d(g b) = delta_g(b) + (-1)^g g d(b)
    for_parity_parts(u[b], [&](const Polynomial& g, Parity pg) {
      const Coefficients db = delta(g, unit(b));
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += db[k];
      add_scaled(out, signed_poly(sign(pg), g), t_.differential[b]);
    });
  }
  return out;
}

Coefficients TwoLayerAlgebra::derived(const Coefficients& u, const Coefficients& v) const {
  const ContextPtr& ctx = t_.context();
  Coefficients out = t_.basis.zero();
  for (std::size_t b = 0; b < u.size(); ++b) {
    if (u[b].is_zero()) continue;
    const Parity pb = t_.basis[b].parity;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c].is_zero()) continue;
      const Parity pc = t_.basis[c].parity;
      for_parity_parts(u[b], [&](const Polynomial& g, Parity pg) {
        for_parity_parts(v[c], [&](const Polynomial& h, Parity ph) {
          // {b, h c} = (a(b)h) c + (-1)^{(b+1)h} h {b,c}
          Coefficients inner = scale(signed_poly(koszul(pb + Parity::odd, ph), h), t_.derived[b][c]);
          inner[c] += apply(t_.anchor[b], h);
          // (-1)^g g {b, h c}
          add_scaled(out, signed_poly(sign(pg), g), inner);
          // (-1)^{(g+b)(h+c)} (a(h c) g) b,  a(h c) g = (-1)^h h (a(c) g)
          const Polynomial ahg = h * apply(t_.anchor[c], g);
          const int s = koszul(pg + pb, ph + pc) * sign(ph);
          out[b] += signed_poly(s, ahg);
          // delta_g([b, h c]),  [b, h c] = (-1)^{b h} h [b, c]
          const Coefficients bhc = scale(signed_poly(koszul(pb, ph), h), t_.bracket[b][c]);
          const Coefficients dl = delta(g, bhc);
          for (std::size_t k = 0; k < out.size(); ++k) out[k] += dl[k];
        });
      });
    }
  }
  (void)ctx;
  return out;
}

VectorField TwoLayerAlgebra::anchor(const Coefficients& u) const {
  VectorField out(t_.context());
  for (std::size_t b = 0; b < u.size(); ++b) {
    for_parity_parts(u[b], [&](const Polynomial& g, Parity pg) {
      out += signed_poly(sign(pg), g) * t_.anchor[b];
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table re-check

namespace {

bool all_zero(const Coefficients& c) {
  for (const auto& p : c)
    if (!p.is_zero()) return false;
  return true;
}

void axpy(Coefficients& acc, int s, const Coefficients& x) {
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (x[k].is_zero()) continue;
    if (s > 0) acc[k] += x[k];
    else acc[k] -= x[k];
  }
}

int sgn_of(bool odd) { return odd ? -1 : 1; }

}  // namespace

TableCheck check_tables(const TwoLayerStructure& tables) {
  TwoLayerAlgebra alg(tables);
  const NegativeBasis& basis = tables.basis;
  const std::size_t n = basis.size();
  std::vector<Coefficients> units;
  for (std::size_t i = 0; i < n; ++i) units.push_back(alg.unit(i));

  // failures per row, tagged with whether the identity needs Q^2 = 0
  std::vector<std::vector<std::pair<bool, std::string>>> rows(n);
  std::exception_ptr failure;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long li = 0; li < count; ++li) {
    try {
      const std::size_t i = static_cast<std::size_t>(li);
      auto& row = rows[i];
      const bool pi = is_odd(basis[i].parity);
      const auto& u = units[i];
      const Coefficients du = alg.d(u);
      if (!all_zero(alg.d(du))) row.emplace_back(true, "dsq " + basis[i].label);
      for (std::size_t j = 0; j < n; ++j) {
        const bool pj = is_odd(basis[j].parity);
        const auto& v = units[j];
        const std::string pair = basis[i].label + " " + basis[j].label;
        const Coefficients uv = alg.derived(u, v);

        Coefficients r = alg.d(alg.bracket(u, v));
        axpy(r, -1, uv);
        axpy(r, sgn_of(pi && pj), alg.derived(v, u));
        if (!all_zero(r)) row.emplace_back(false, "dbrack " + pair);

        const Coefficients dv = alg.d(v);
        r = alg.d(uv);
        axpy(r, sgn_of(!pi && pj), alg.derived(v, du));
        axpy(r, sgn_of(pi), alg.derived(u, dv));
        axpy(r, -sgn_of(pi), alg.bracket(du, dv));
        if (!all_zero(r)) row.emplace_back(true, "dnewbrack " + pair);

        for (std::size_t k = 0; k < n; ++k) {
          const auto& w = units[k];
          const std::string triple = pair + " " + basis[k].label;
          const Coefficients uw = alg.derived(u, w);
          r = alg.derived(u, alg.bracket(v, w));
          axpy(r, -1, alg.bracket(uv, w));
          axpy(r, -sgn_of(!pi && pj), alg.bracket(v, uw));
          if (!all_zero(r)) row.emplace_back(false, "leib " + triple);

          r = alg.derived(u, alg.derived(v, w));
          axpy(r, sgn_of(pi), alg.derived(uv, w));
          axpy(r, -sgn_of(!pi && !pj), alg.derived(v, uw));
          if (!all_zero(r)) row.emplace_back(true, "jac " + triple);
        }
      }
    } catch (...) {
#pragma omp critical(qmk_table_check_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  TableCheck out;
  for (const auto& row : rows) {
    for (const auto& [needs_q2, what] : row) {
      if (needs_q2) out.homological = false;
      else out.consistent = false;
      out.failures.push_back(what);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// L-infinity brackets

VectorField quotient_class(const VectorField& x) {
  if (!x.context()) return x;
  const GradedContext& g = *x.context();
  std::vector<bool> positive(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) positive[i] = g[i].weight > 0;
  VectorField out(x.context());
  for (std::size_t c = 0; c < g.size(); ++c)
    if (positive[c]) out.set(c, evaluate_at_zero(x[c], positive));
  return out;
}

bool LInftyStructure::operator==(const LInftyStructure& other) const {
  return same_context(context, other.context) && generators == other.generators &&
         max_arity == other.max_arity && brackets == other.brackets;
}

namespace {

std::vector<std::vector<std::size_t>> bracket_keys(const GradedContext& g,
                                                   const std::vector<std::size_t>& gens,
                                                   int max_arity) {
  std::vector<std::vector<std::size_t>> keys;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t, int)> grow = [&](std::size_t start, int remaining) {
    if (remaining == 0) {
      keys.push_back(cur);
      return;
    }
    for (std::size_t k = start; k < gens.size(); ++k) {
      cur.push_back(gens[k]);
      grow(is_odd(g[gens[k]].parity) ? k + 1 : k, remaining - 1);
      cur.pop_back();
    }
  };
  for (int k = 1; k <= max_arity; ++k) grow(0, k);
  return keys;
}

LInftyStructure empty_linfty(const ContextPtr& ctx) {
  LInftyStructure l;
  l.context = ctx;
  const GradedContext& g = *ctx;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i].weight > 0) l.generators.push_back(i);
  l.max_arity = *g.degree() + 1;
  return l;
}

}  // namespace

LInftyStructure linfty_brackets(const HigherAlgebroid& a,
                                std::optional<std::vector<VectorField>> lifting) {
  LInftyStructure l = empty_linfty(a.context());
  const ContextPtr& ctx = a.context();
  if (lifting) {
    if (lifting->size() != l.generators.size())
      throw InvalidArgument("lifting must provide one field per generator");
    for (std::size_t k = 0; k < l.generators.size(); ++k) {
      const VectorField& lift = (*lifting)[k];
      const auto w = lift.weight();
      if (!w || *w >= 0 || !lift.parity() ||
          quotient_class(lift) != VectorField::partial(ctx, l.generators[k]))
        throw InvalidArgument("lifting is not a section of the quotient projection at '" +
                              (*ctx)[l.generators[k]].name + "'");
    }
    l.lifting = std::move(*lifting);
  } else {
    for (std::size_t c : l.generators) l.lifting.push_back(VectorField::partial(ctx, c));
  }
  std::map<std::size_t, std::size_t> position;
  for (std::size_t k = 0; k < l.generators.size(); ++k) position[l.generators[k]] = k;

  for (const auto& key : bracket_keys(*ctx, l.generators, l.max_arity)) {
    VectorField x = a.q();
    for (std::size_t c : key) x = commutator(x, l.lifting[position[c]]);
    l.brackets.emplace(key, quotient_class(x));
  }
  return l;
}

LInftyStructure linfty_from_tables(const TwoLayerStructure& tables) {
  const ContextPtr& ctx = tables.context();
  LInftyStructure l = empty_linfty(ctx);
  for (std::size_t c : l.generators) l.lifting.push_back(VectorField::partial(ctx, c));
  TwoLayerAlgebra alg(tables);
  const NegativeBasis& basis = tables.basis;
  auto unit_of = [&](std::size_t c) { return alg.unit(*basis.constant_field(c)); };

  for (const auto& key : bracket_keys(*ctx, l.generators, l.max_arity)) {
    Coefficients x;
    if (key.size() == 1) {
      x = tables.differential[*basis.constant_field(key[0])];
    } else {
      x = tables.derived[*basis.constant_field(key[0])][*basis.constant_field(key[1])];
      for (std::size_t j = 2; j < key.size(); ++j) x = alg.bracket(x, unit_of(key[j]));
    }
    VectorField cls(ctx);
    for (std::size_t c : l.generators) cls.set(c, x[*basis.constant_field(c)]);
    l.brackets.emplace(key, std::move(cls));
  }
  return l;
}

VectorField taylor_reconstruct(const LInftyStructure& l) {
  const ContextPtr& ctx = l.context;
  const GradedContext& g = *ctx;
  for (std::size_t k = 0; k < l.generators.size(); ++k)
    if (l.lifting[k] != VectorField::partial(ctx, l.generators[k]))
      throw InvalidArgument("Taylor reconstruction needs the constant-field lifting");

  VectorField q(ctx);
  for (const auto& [key, cls] : l.brackets) {
    // Nested brackets with constant fields differentiate Q:
    // [X, d/dc] = -(-1)^{p(X)p(c)} dX/dc, starting from odd X = Q.
    int eps = 1;
    Parity px = Parity::odd;
    std::vector<std::uint16_t> exps(g.size(), 0);
    for (std::size_t c : key) {
      eps *= -koszul(px, g[c].parity);
      px = px + g[c].parity;
      ++exps[c];
    }
    Rational factorial = 1;
    for (auto e : exps)
      for (unsigned i = 2; i <= e; ++i) factorial *= i;
    const Monomial m(g, exps);
    const Polynomial mono = Polynomial::term(ctx, m, 1);
    for (std::size_t c : l.generators) {
      for_parity_parts(cls[c], [&](const Polynomial& b, Parity pb) {
        Rational k = Rational(eps * koszul(pb, m.parity())) / factorial;
        Polynomial comp = q[c];
        comp += (b * mono) * k;
        q.set(c, std::move(comp));
      });
    }
  }
  return q;
}

VectorField recover_Q(const TwoLayerStructure& tables, RecoveryOptions options) {
  const TableCheck check = check_tables(tables);
  if (!check.consistent || (options.require_homological && !check.homological)) {
    std::string msg = "inconsistent two-layer tables:";
    for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i)
      msg += " [" + check.failures[i] + "]";
    throw InconsistentTables(msg);
  }
  const ContextPtr& ctx = tables.context();
  const GradedContext& g = *ctx;
  if (!g.degree()) throw InvalidArgument("chart must be non-negatively graded");

  VectorField q = taylor_reconstruct(linfty_from_tables(tables));
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (g[x].weight != 0) continue;
    Polynomial comp(ctx);
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (g[y].weight != 1) continue;
      Polynomial h = tables.anchor[*tables.basis.constant_field(y)][x];
      if (!is_odd(g[y].parity)) h = -h;
      comp += Polynomial::variable(ctx, y) * h;
    }
    q.set(x, std::move(comp));
  }
  return q;
}

}  // namespace qmk
