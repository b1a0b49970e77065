#include "qmk/derived_structure.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <random>

namespace qmk {

HigherAlgebroid::HigherAlgebroid(VectorField q, Validation validation) : q_(std::move(q)) {
  if (!q_.context()) throw InvalidArgument("field has no chart");
  const GradedContext& ctx = *q_.context();
  if (!ctx.nonnegatively_graded())
    throw InvalidArgument("higher algebroid needs a non-negatively graded chart");
  if (!q_.has_parity(Parity::odd)) throw InvalidArgument("Q must be odd");
  if (!q_.has_weight(1)) throw InvalidArgument("Q must be homogeneous of weight +1");
  degree_ = *ctx.degree();
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i].weight == 0) base_.push_back(i);
    if (ctx[i].weight == 1) linear_fiber_.push_back(i);
  }
  if (validation == Validation::homological) {
    auto check = is_homological(q_);
    if (!check.homological)
      throw InvalidArgument("Q is not homological: [Q,Q] has nonzero component at '" +
                            ctx[*check.witness].name + "'");
  }
}

// ---------------------------------------------------------------------------
// NegativeBasis

NegativeBasis::NegativeBasis(ContextPtr ctx) : ctx_(std::move(ctx)) {
  const GradedContext& g = *ctx_;
  const std::size_t n = g.size();
  is_base_.assign(n, false);
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i].weight < 0) throw InvalidArgument("negative basis needs a non-negatively graded chart");
    if (g[i].weight == 0) is_base_[i] = true;
    else positive.push_back(i);
  }

  for (std::size_t target : positive) {
    const int bound = g[target].weight;
    std::vector<Monomial> monomials;
    std::vector<std::uint16_t> exps(n, 0);
    std::function<void(std::size_t, int)> grow = [&](std::size_t k, int w) {
      if (k == positive.size()) {
        monomials.emplace_back(g, exps);
        return;
      }
      const std::size_t c = positive[k];
      const int cap = is_odd(g[c].parity) ? 1 : bound;
      for (int e = 0; e <= cap && w + e * g[c].weight < bound; ++e) {
        exps[c] = static_cast<std::uint16_t>(e);
        grow(k + 1, w + e * g[c].weight);
      }
      exps[c] = 0;
    };
    grow(0, 0);
    std::sort(monomials.begin(), monomials.end(), MonomialOrder{});
    for (auto& m : monomials) {
      BasisElement b;
      b.monomial = m;
      b.target = target;
      b.field = VectorField(ctx_);
      b.field.set(target, Polynomial::term(ctx_, m, 1));
      b.parity = m.parity() + g[target].parity;
      b.weight = m.weight() - g[target].weight;
      std::string label;
      for (std::size_t i = 0; i < n; ++i)
        for (int e = 0; e < m[i]; ++e) label += g[i].name + "_";
      b.label = label + "d_" + g[target].name;
      lookup_.emplace(std::make_pair(target, m.exponents()), elements_.size());
      elements_.push_back(std::move(b));
    }
  }
}

std::optional<std::size_t> NegativeBasis::find(std::string_view label) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].label == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> NegativeBasis::constant_field(std::size_t coordinate) const {
  auto it = lookup_.find({coordinate, std::vector<std::uint16_t>(ctx_->size(), 0)});
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Coefficients NegativeBasis::zero() const { return Coefficients(elements_.size(), Polynomial(ctx_)); }

Coefficients NegativeBasis::expand(const VectorField& x) const {
  Coefficients out = zero();
  if (x.is_zero()) return out;
  if (!same_context(x.context(), ctx_)) throw ContextMismatch();
  const GradedContext& g = *ctx_;
  const std::size_t n = g.size();
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& [m, coeff] : x[c].terms()) {
      std::vector<std::uint16_t> e0(n, 0), ep(n, 0);
      for (std::size_t i = 0; i < n; ++i) (is_base_[i] ? e0 : ep)[i] = m[i];
      auto it = lookup_.find({c, ep});
      if (it == lookup_.end())
        throw InvalidArgument("field is not in the negative part: " + to_string(x));
      Monomial m0(g, std::move(e0));
      Monomial mp(g, std::move(ep));
      auto prod = multiply(g, m0, mp);  // m0 * mp = s * m
      Rational k = coeff;
      if (prod->second < 0) k = -k;
      out[it->second].add_term(m0, k);
    }
  }
  return out;
}

VectorField NegativeBasis::combine(const Coefficients& coefficients) const {
  VectorField out(ctx_);
  for (std::size_t b = 0; b < elements_.size(); ++b)
    if (!coefficients[b].is_zero()) out += coefficients[b] * elements_[b].field;
  return out;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

Parity parity_or_throw(const VectorField& x, const char* what) {
  if (x.is_zero()) return Parity::even;
  auto p = x.parity();
  if (!p) throw InvalidArgument(std::string(what) + " must have homogeneous parity");
  return *p;
}

Parity parity_or_throw(const Polynomial& f, const char* what) {
  if (f.is_zero()) return Parity::even;
  auto p = f.parity();
  if (!p) throw InvalidArgument(std::string(what) + " must have homogeneous parity");
  return *p;
}

void require_negative(const VectorField& u, const char* what) {
  if (u.is_zero()) return;
  auto w = u.weight();
  if (!w || *w >= 0 || !u.parity())
    throw InvalidArgument(std::string(what) + " must be homogeneous of negative weight");
}

void require_weight_zero(const Polynomial& f) {
  if (!f.has_weight(0)) throw InvalidArgument("function must have weight 0");
}

void require_context(const HigherAlgebroid& a, const VectorField& u) {
  if (u.context() && !same_context(u.context(), a.context())) throw ContextMismatch();
}

VectorField zero_field(const HigherAlgebroid& a) { return VectorField(a.context()); }

}  // namespace

VectorField big_D(const HigherAlgebroid& a, const VectorField& u) {
  require_context(a, u);
  return commutator(a.q(), u);
}

VectorField derived_d(const HigherAlgebroid& a, const VectorField& u) {
  require_context(a, u);
  require_negative(u, "argument of d");
  if (u.is_zero()) return zero_field(a);
  return negative_part(big_D(a, u));
}

VectorField derived_bracket(const HigherAlgebroid& a, const VectorField& u, const VectorField& v) {
  require_context(a, u);
  require_context(a, v);
  require_negative(u, "first argument of {,}");
  require_negative(v, "second argument of {,}");
  if (u.is_zero() || v.is_zero()) return zero_field(a);
  return commutator(big_D(a, u), v);
}

VectorField higher_derived_bracket(const HigherAlgebroid& a, std::span<const VectorField> args) {
  if (args.empty()) throw InvalidArgument("the 0-ary derived bracket is not exposed");
  for (const auto& u : args) {
    require_context(a, u);
    require_negative(u, "derived bracket argument");
  }
  VectorField acc = a.q();
  for (const auto& u : args) acc = commutator(acc, u);
  return negative_part(acc);
}

std::map<std::pair<std::size_t, std::size_t>, Polynomial> anchor_geometric(
    const HigherAlgebroid& a) {
  std::map<std::pair<std::size_t, std::size_t>, Polynomial> out;
  for (std::size_t x : a.base())
    for (std::size_t y : a.linear_fiber())
      out.emplace(std::make_pair(x, y), partial_derivative(a.q()[x], y));
  return out;
}

VectorField anchor_field(const HigherAlgebroid& a, const VectorField& u) {
  require_context(a, u);
  require_negative(u, "argument of the anchor");
  VectorField out = zero_field(a);
  if (u.is_zero()) return out;
  const VectorField x = big_D(a, u);
  for (std::size_t b : a.base()) out.set(b, x[b]);
  return out;
}

Polynomial anchor_algebraic(const HigherAlgebroid& a, const VectorField& u, const Polynomial& f) {
  require_weight_zero(f);
  return apply(anchor_field(a, u), f);
}

AnchorComparison anchors_agree(const HigherAlgebroid& a) {
  AnchorComparison out;
  const ContextPtr& ctx = a.context();
  const auto family = anchor_geometric(a);
  NegativeBasis basis(ctx);
  std::vector<Polynomial> multipliers{Polynomial::constant(ctx, 1)};
  for (std::size_t x : a.base()) multipliers.push_back(Polynomial::variable(ctx, x));

  for (const auto& b : basis.elements()) {
    if (b.weight != -1) continue;
    for (const auto& g : multipliers) {
      const VectorField u = g * b.field;
      if (u.is_zero()) continue;
      const Parity pu = *u.parity();
      VectorField geometric(ctx);
      for (std::size_t x : a.base()) {
        Polynomial comp(ctx);
        for (std::size_t y : a.linear_fiber()) comp += u[y] * family.at({x, y});
        if (!is_odd(pu)) comp = -comp;  // (-1)^{u+1}
        geometric.set(x, comp);
      }
      VectorField algebraic = anchor_field(a, u);
      ++out.checked;
      if (algebraic != geometric) {
        out.agree = false;
        out.mismatches.push_back({u, std::move(algebraic), std::move(geometric)});
      }
    }
  }
  return out;
}

VectorField delta_f(const HigherAlgebroid& a, const Polynomial& f, const VectorField& u) {
  require_context(a, u);
  require_negative(u, "argument of delta_f");
  require_weight_zero(f);
  const Parity pf = parity_or_throw(f, "multiplier");
  VectorField out = derived_d(a, f * u);
  VectorField fd = f * derived_d(a, u);
  if (is_odd(pf)) out += fd;
  else out -= fd;
  return out;
}

// ---------------------------------------------------------------------------
// Identity suite

std::string_view identity_name(Identity id) {
  switch (id) {
    case Identity::dsq: return "dsq";
    case Identity::dbrack: return "dbrack";
    case Identity::dnewbrack: return "dnewbrack";
    case Identity::leib: return "leib";
    case Identity::jac: return "jac";
    case Identity::linearlie: return "linearlie";
    case Identity::anchorlin: return "anchorlin";
    case Identity::leibanchor: return "leibanchor";
    case Identity::leibanchor2: return "leibanchor2";
  }
  return "?";
}

std::pair<int, int> identity_arity(Identity id) {
  switch (id) {
    case Identity::dsq: return {1, 0};
    case Identity::dbrack:
    case Identity::dnewbrack: return {2, 0};
    case Identity::leib:
    case Identity::jac: return {3, 0};
    case Identity::anchorlin: return {1, 1};
    case Identity::linearlie:
    case Identity::leibanchor:
    case Identity::leibanchor2: return {2, 1};
  }
  return {0, 0};
}

namespace {

// Adds s * x to acc for s = +1 or -1.
void accumulate(VectorField& acc, int s, const VectorField& x) {
  if (s > 0) acc += x;
  else acc -= x;
}

int sgn_of(bool odd) { return odd ? -1 : 1; }

}  // namespace

VectorField identity_residual(const HigherAlgebroid& a, Identity id, const VectorField& u,
                              const VectorField& v, const VectorField& w, const Polynomial& f) {
  auto d = [&](const VectorField& x) { return derived_d(a, x); };
  auto nb = [&](const VectorField& x, const VectorField& y) { return derived_bracket(a, x, y); };
  auto br = [](const VectorField& x, const VectorField& y) { return commutator(x, y); };

  const bool pu = is_odd(parity_or_throw(u, "u"));
  const bool pv = is_odd(parity_or_throw(v, "v"));
  const bool pf = is_odd(parity_or_throw(f, "f"));

  switch (id) {
    case Identity::dsq:
      return d(d(u));

    case Identity::dbrack: {
      VectorField r = d(br(u, v)) - nb(u, v);
      accumulate(r, sgn_of(pu && pv), nb(v, u));
      return r;
    }

    case Identity::dnewbrack: {
      const VectorField du = d(u);
      const VectorField dv = d(v);
      VectorField r = d(nb(u, v));
      accumulate(r, sgn_of(!pu && pv), nb(v, du));  // + (-1)^{(u+1)v}
      accumulate(r, sgn_of(pu), nb(u, dv));          // - (-1)^{u+1}
      accumulate(r, -sgn_of(pu), br(du, dv));        // - (-1)^{u}
      return r;
    }

    case Identity::leib: {
      VectorField r = nb(u, br(v, w)) - br(nb(u, v), w);
      accumulate(r, -sgn_of(!pu && pv), br(v, nb(u, w)));
      return r;
    }

    case Identity::jac: {
      VectorField r = nb(u, nb(v, w));
      accumulate(r, sgn_of(pu), nb(nb(u, v), w));               // - (-1)^{u+1}
      accumulate(r, -sgn_of(!pu && !pv), nb(v, nb(u, w)));      // - (-1)^{(u+1)(v+1)}
      return r;
    }

    case Identity::linearlie:
      return br(f * u, v) - f * br(u, v);

    case Identity::anchorlin: {
      VectorField r = anchor_field(a, f * u);
      accumulate(r, -sgn_of(pf), f * anchor_field(a, u));
      return r;
    }

    case Identity::leibanchor: {
      VectorField r = nb(u, f * v) - anchor_algebraic(a, u, f) * v;
      accumulate(r, -sgn_of(!pu && pf), f * nb(u, v));
      return r;
    }

    case Identity::leibanchor2: {
      VectorField r = nb(f * u, v);
      accumulate(r, -sgn_of(pf), f * nb(u, v));
      accumulate(r, -sgn_of((pf != pu) && pv), anchor_algebraic(a, v, f) * u);
      r -= delta_f(a, f, br(u, v));
      return r;
    }
  }
  return VectorField(a.context());
}

bool IdentityReport::ok() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.ok; });
}

namespace {

struct Task {
  Identity id;
  const VectorField* args[3];
  const Polynomial* fn;
};

std::vector<Task> plan_tasks(const SampleSet& samples, std::span<const Identity> identities,
                             const VectorField& zero_v, const Polynomial& zero_f) {
  std::vector<Task> tasks;
  const std::size_t nf = samples.fields.size();
  for (Identity id : identities) {
    const auto [k, m] = identity_arity(id);
    if (nf > 0 && (m == 0 || !samples.functions.empty())) {
      const std::size_t n_fn = m == 0 ? 1 : samples.functions.size();
      std::size_t total = n_fn;
      for (int i = 0; i < k; ++i) total *= nf;
      for (std::size_t t = 0; t < total; ++t) {
        std::size_t r = t;
        Task task{id, {&zero_v, &zero_v, &zero_v}, &zero_f};
        if (m > 0) {
          task.fn = &samples.functions[r % n_fn];
          r /= n_fn;
        }
        for (int i = k - 1; i >= 0; --i) {
          task.args[i] = &samples.fields[r % nf];
          r /= nf;
        }
        tasks.push_back(task);
      }
    }
    for (const auto& s : samples.tuples) {
      const Polynomial* fn = id == Identity::anchorlin ? &s.g : &s.f;
      tasks.push_back(Task{id, {&s.u, &s.v, &s.w}, fn});
    }
  }
  return tasks;
}

IdentityReport assemble(std::span<const Identity> identities, const std::vector<Task>& tasks,
                        std::vector<VectorField>& residuals) {
  IdentityReport report;
  for (Identity id : identities) {
    IdentityResult res;
    res.identity = id;
    const auto [k, m] = identity_arity(id);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].id != id) continue;
      ++res.instances;
      if (res.ok && !residuals[t].is_zero()) {
        res.ok = false;
        for (int i = 0; i < k; ++i) res.fields.push_back(*tasks[t].args[i]);
        if (m > 0) res.function = *tasks[t].fn;
        res.residual = std::move(residuals[t]);
      }
    }
    if (res.instances > 0) report.results.push_back(std::move(res));
  }
  return report;
}

VectorField run_task(const HigherAlgebroid& a, const Task& t) {
  return identity_residual(a, t.id, *t.args[0], *t.args[1], *t.args[2], *t.fn);
}

}  // namespace

IdentityReport verify_two_layer(const HigherAlgebroid& a, const SampleSet& samples,
                                std::span<const Identity> identities) {
  const VectorField zero_v(a.context());
  const Polynomial zero_f(a.context());
  const auto tasks = plan_tasks(samples, identities, zero_v, zero_f);
  std::vector<VectorField> residuals(tasks.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < n; ++t) {
    try {
      residuals[t] = run_task(a, tasks[t]);
    } catch (...) {
#pragma omp critical(qmk_verify_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(identities, tasks, residuals);
}

IdentityReport verify_two_layer_serial(const HigherAlgebroid& a, const SampleSet& samples,
                                       std::span<const Identity> identities) {
  const VectorField zero_v(a.context());
  const Polynomial zero_f(a.context());
  const auto tasks = plan_tasks(samples, identities, zero_v, zero_f);
  std::vector<VectorField> residuals(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) residuals[t] = run_task(a, tasks[t]);
  return assemble(identities, tasks, residuals);
}

SampleSet basis_samples(const HigherAlgebroid& a) {
  SampleSet s;
  const ContextPtr& ctx = a.context();
  const NegativeBasis basis(ctx);
  for (const auto& b : basis.elements()) s.fields.push_back(b.field);
  s.functions.push_back(Polynomial::constant(ctx, 1));
  for (std::size_t x : a.base()) s.functions.push_back(Polynomial::variable(ctx, x));
  if (!a.base().empty()) {
    const auto x0 = Polynomial::variable(ctx, a.base().front());
    const auto x1 = Polynomial::variable(ctx, a.base().back());
    Polynomial p = x0 * x1 + x0;
    if (!p.parity()) p = x0 + Polynomial::constant(ctx, 2);
    if (p.parity()) s.functions.push_back(p);
  }
  return s;
}

namespace {

class SampleGenerator {
 public:
  SampleGenerator(const HigherAlgebroid& a, unsigned long seed)
      : a_(a), basis_(a.context()), rng_(seed) {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      groups_[{basis_[i].weight, basis_[i].parity}].push_back(i);
    for (std::size_t x : a.base())
      (is_odd((*a.context())[x].parity) ? odd_base_ : even_base_).push_back(x);
  }

  bool empty() const { return groups_.empty(); }

  VectorField field() {
    auto it = groups_.begin();
    std::advance(it, pick(groups_.size()));
    const auto& members = it->second;
    VectorField u(a_.context());
    const std::size_t count = 1 + pick(3);
    for (std::size_t j = 0; j < count; ++j)
      u += even_function(1) * basis_[members[pick(members.size())]].field;
    if (u.is_zero()) u = basis_[members.front()].field;
    return u;
  }

  Polynomial function() {
    if (!odd_base_.empty() && pick(2) == 1) {
      const auto& ctx = a_.context();
      return even_function(1) * Polynomial::variable(ctx, odd_base_[pick(odd_base_.size())]);
    }
    return even_function(2);
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  Rational coefficient() {
    int num = static_cast<int>(pick(7)) - 3;
    if (num == 0) num = 1;
    Rational r(num, static_cast<int>(1 + pick(2)));
    r.canonicalize();
    return r;
  }

  // A random even weight-0 polynomial with up to three terms.
  Polynomial even_function(unsigned max_degree) {
    const auto& ctx = a_.context();
    Polynomial f(ctx);
    const std::size_t terms = 1 + pick(3);
    for (std::size_t t = 0; t < terms; ++t) {
      Polynomial m = Polynomial::constant(ctx, coefficient());
      if (!even_base_.empty()) {
        const std::size_t deg = pick(max_degree + 1);
        for (std::size_t k = 0; k < deg; ++k)
          m = m * Polynomial::variable(ctx, even_base_[pick(even_base_.size())]);
      }
      if (odd_base_.size() >= 2 && pick(4) == 0)
        m = m * Polynomial::variable(ctx, odd_base_[0]) * Polynomial::variable(ctx, odd_base_[1]);
      f += m;
    }
    if (f.is_zero()) f = Polynomial::constant(ctx, 1);
    return f;
  }

  const HigherAlgebroid& a_;
  NegativeBasis basis_;
  std::mt19937_64 rng_;
  std::map<std::pair<int, Parity>, std::vector<std::size_t>> groups_;
  std::vector<std::size_t> even_base_;
  std::vector<std::size_t> odd_base_;
};

}  // namespace

std::vector<IdentitySample> random_samples(const HigherAlgebroid& a, std::size_t count,
                                           unsigned long seed) {
  std::vector<IdentitySample> out;
  SampleGenerator gen(a, seed);
  if (gen.empty()) return out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    IdentitySample s;
    s.u = gen.field();
    s.v = gen.field();
    s.w = gen.field();
    s.f = gen.function();
    s.g = gen.function();
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_report(const IdentityReport& report) {
  static const char* kFieldNames[] = {"u", "v", "w"};
  std::string out;
  for (const auto& r : report.results) {
    out += "IDENTITY ";
    out += identity_name(r.identity);
    if (r.ok) {
      out += " OK\n";
      continue;
    }
    out += " FAIL";
    for (std::size_t i = 0; i < r.fields.size(); ++i)
      out += std::string(" ") + kFieldNames[i] + "=" + to_string(r.fields[i]);
    if (r.function)
      out += std::string(" ") + (r.identity == Identity::anchorlin ? "g" : "f") + "=" +
             to_string(*r.function);
    out += " residual=" + to_string(r.residual) + "\n";
  }
  return out;
}

}  // namespace qmk
