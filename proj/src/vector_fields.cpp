#include "qmk/vector_fields.hpp"

namespace qmk {

VectorField::VectorField(ContextPtr ctx) : ctx_(std::move(ctx)) {
  components_.assign(ctx_->size(), Polynomial(ctx_));
}

VectorField::VectorField(ContextPtr ctx, std::vector<Polynomial> components)
    : ctx_(std::move(ctx)), components_(std::move(components)) {
  if (components_.size() != ctx_->size()) throw InvalidArgument("wrong number of components");
  for (auto& c : components_) {
    if (c.context() && !same_context(c.context(), ctx_)) throw ContextMismatch();
    if (c.is_zero()) c = Polynomial(ctx_);
  }
}

VectorField VectorField::partial(ContextPtr ctx, std::size_t index) {
  VectorField x(ctx);
  x.set(index, Polynomial::constant(ctx, 1));
  return x;
}

VectorField VectorField::partial(ContextPtr ctx, std::string_view name) {
  const std::size_t i = ctx->index_of(name);
  return partial(std::move(ctx), i);
}

void VectorField::set(std::size_t c, Polynomial value) {
  if (value.context() && !same_context(value.context(), ctx_)) throw ContextMismatch();
  Polynomial v(ctx_);
  v += value;
  components_.at(c) = std::move(v);
}

void VectorField::set(std::string_view name, Polynomial value) {
  set(ctx_->index_of(name), std::move(value));
}

bool VectorField::is_zero() const {
  for (const auto& c : components_)
    if (!c.is_zero()) return false;
  return true;
}

bool VectorField::has_parity(Parity p) const {
  for (std::size_t c = 0; c < components_.size(); ++c)
    if (!components_[c].has_parity(p + (*ctx_)[c].parity)) return false;
  return true;
}

bool VectorField::has_weight(int w) const {
  for (std::size_t c = 0; c < components_.size(); ++c)
    if (!components_[c].has_weight(w + (*ctx_)[c].weight)) return false;
  return true;
}

std::optional<Parity> VectorField::parity() const {
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (components_[c].is_zero()) continue;
    const auto& first = components_[c].terms().begin()->first;
    const Parity p = first.parity() + (*ctx_)[c].parity;
    if (has_parity(p)) return p;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<int> VectorField::weight() const {
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (components_[c].is_zero()) continue;
    const int w = components_[c].terms().begin()->first.weight() - (*ctx_)[c].weight;
    if (has_weight(w)) return w;
    return std::nullopt;
  }
  return std::nullopt;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (other.ctx_ == nullptr) return *this;
  if (ctx_ == nullptr) return *this = other;
  if (!same_context(ctx_, other.ctx_)) throw ContextMismatch();
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] += other.components_[c];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  if (other.ctx_ == nullptr) return *this;
  if (ctx_ == nullptr) return *this = -other;
  if (!same_context(ctx_, other.ctx_)) throw ContextMismatch();
  for (std::size_t c = 0; c < components_.size(); ++c) components_[c] -= other.components_[c];
  return *this;
}

VectorField& VectorField::operator*=(const Rational& k) {
  for (auto& c : components_) c *= k;
  return *this;
}

VectorField VectorField::operator-() const {
  VectorField out = *this;
  for (auto& c : out.components_) c = -c;
  return out;
}

VectorField operator*(const Polynomial& f, const VectorField& x) {
  if (x.ctx_ == nullptr) return x;
  VectorField out(x.ctx_);
  if (f.is_zero()) return out;
  if (!same_context(f.context(), x.ctx_)) throw ContextMismatch();
  for (std::size_t c = 0; c < x.components_.size(); ++c)
    if (!x.components_[c].is_zero()) out.components_[c] = f * x.components_[c];
  return out;
}

bool VectorField::operator==(const VectorField& other) const {
  if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
  if (!same_context(ctx_, other.ctx_)) return false;
  return components_ == other.components_;
}

Polynomial apply(const VectorField& x, const Polynomial& f) {
  Polynomial out(x.context());
  if (f.is_zero() || x.context() == nullptr) return out;
  if (!same_context(x.context(), f.context())) throw ContextMismatch();
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c].is_zero()) continue;
    Polynomial d = partial_derivative(f, c);
    if (!d.is_zero()) out += x[c] * d;
  }
  return out;
}

VectorField parity_part(const VectorField& x, Parity p) {
  if (x.context() == nullptr) return x;
  VectorField out(x.context());
  const GradedContext& ctx = *x.context();
  for (std::size_t c = 0; c < x.size(); ++c)
    out.set(c, parity_component(x[c], p + ctx[c].parity));
  return out;
}

namespace {

VectorField commutator_homogeneous(const VectorField& x, Parity px, const VectorField& y,
                                   Parity py) {
  VectorField out(x.context());
  const int s = koszul(px, py);
  for (std::size_t c = 0; c < x.size(); ++c) {
    Polynomial v = apply(x, y[c]);
    Polynomial w = apply(y, x[c]);
    if (s > 0) v -= w;
    else v += w;
    out.set(c, std::move(v));
  }
  return out;
}

}  // namespace

VectorField commutator(const VectorField& x, const VectorField& y) {
  if (x.context() == nullptr || y.context() == nullptr)
    return VectorField(x.context() ? x.context() : y.context());
  if (!same_context(x.context(), y.context())) throw ContextMismatch();
  VectorField out(x.context());
  if (x.is_zero() || y.is_zero()) return out;
  auto px = x.parity();
  auto py = y.parity();
  if (px && py) return commutator_homogeneous(x, *px, y, *py);
  for (Parity a : {Parity::even, Parity::odd}) {
    VectorField xa = parity_part(x, a);
    if (xa.is_zero()) continue;
    for (Parity b : {Parity::even, Parity::odd}) {
      VectorField yb = parity_part(y, b);
      if (!yb.is_zero()) out += commutator_homogeneous(xa, a, yb, b);
    }
  }
  return out;
}

HomologicalCheck is_homological(const VectorField& q) {
  if (!q.has_parity(Parity::odd)) throw InvalidArgument("homological field must be odd");
  HomologicalCheck out;
  out.square = commutator(q, q);
  for (std::size_t c = 0; c < out.square.size(); ++c) {
    if (!out.square[c].is_zero()) {
      out.witness = c;
      break;
    }
  }
  out.homological = !out.witness.has_value();
  return out;
}

std::map<int, VectorField> weight_decompose(const VectorField& x) {
  std::map<int, VectorField> parts;
  if (x.context() == nullptr) return parts;
  const GradedContext& ctx = *x.context();
  for (std::size_t c = 0; c < x.size(); ++c) {
    for (const auto& [m, coeff] : x[c].terms()) {
      const int w = m.weight() - ctx[c].weight;
      auto [it, inserted] = parts.try_emplace(w, x.context());
      Polynomial comp = it->second[c];
      comp.add_term(m, coeff);
      it->second.set(c, std::move(comp));
    }
  }
  return parts;
}

VectorField negative_part(const VectorField& x) {
  VectorField out(x.context());
  for (const auto& [w, part] : weight_decompose(x))
    if (w < 0) out += part;
  return out;
}

VectorField nonnegative_part(const VectorField& x) {
  VectorField out(x.context());
  for (const auto& [w, part] : weight_decompose(x))
    if (w >= 0) out += part;
  return out;
}

VectorField evaluate_at_zero(const VectorField& x, const std::vector<bool>& vanishing) {
  VectorField out(x.context());
  for (std::size_t c = 0; c < x.size(); ++c) out.set(c, evaluate_at_zero(x[c], vanishing));
  return out;
}

RelatednessCheck check_f_related(const Substitution& sigma, const VectorField& q1,
                                 const VectorField& q2) {
  if (!same_context(q1.context(), sigma.target()) || !same_context(q2.context(), sigma.source()))
    throw ContextMismatch();
  RelatednessCheck out;
  out.related = true;
  for (std::size_t i = 0; i < sigma.source()->size(); ++i) {
    Polynomial r = substitute(q2[i], sigma) - apply(q1, sigma.image(i));
    if (!r.is_zero()) out.related = false;
    out.residuals.push_back(std::move(r));
  }
  return out;
}

ContextPtr shifted_tangent_context(const ContextPtr& ctx) {
  std::vector<Coordinate> coords = ctx->coordinates();
  for (const auto& c : ctx->coordinates())
    coords.push_back(Coordinate{"d" + c.name, c.parity + Parity::odd, c.weight + 1});
  return GradedContext::make(std::move(coords));
}

VectorField de_rham_field(const ContextPtr& shifted) {
  const std::size_t n = shifted->size() / 2;
  VectorField d(shifted);
  for (std::size_t i = 0; i < n; ++i) d.set(i, Polynomial::variable(shifted, n + i));
  return d;
}

Substitution tautological_map(const VectorField& q, const ContextPtr& shifted) {
  const ContextPtr& ctx = q.context();
  if (shifted->size() != 2 * ctx->size()) throw InvalidArgument("not a shifted tangent chart");
  Substitution sigma(shifted, ctx);
  for (std::size_t i = 0; i < ctx->size(); ++i) {
    sigma.assign(i, Polynomial::variable(ctx, i));
    sigma.assign(ctx->size() + i, q[i]);
  }
  return sigma;
}

CoordinateChange::CoordinateChange(Substitution a_in_b, Substitution b_in_a)
    : a_in_b_(std::move(a_in_b)), b_in_a_(std::move(b_in_a)) {
  if (!same_context(a_in_b_.source(), b_in_a_.target()) ||
      !same_context(a_in_b_.target(), b_in_a_.source()))
    throw ContextMismatch();
  const ContextPtr& a = a_in_b_.source();
  const ContextPtr& b = b_in_a_.source();
  for (std::size_t i = 0; i < a->size(); ++i)
    if (substitute(a_in_b_.image(i), b_in_a_) != Polynomial::variable(a, i))
      throw InvalidArgument("coordinate change is not invertible at '" + (*a)[i].name + "'");
  for (std::size_t i = 0; i < b->size(); ++i)
    if (substitute(b_in_a_.image(i), a_in_b_) != Polynomial::variable(b, i))
      throw InvalidArgument("coordinate change is not invertible at '" + (*b)[i].name + "'");
}

bool CoordinateChange::preserves_weight() const {
  return a_in_b_.preserves_weight() && b_in_a_.preserves_weight();
}

CoordinateChange CoordinateChange::inverse() const { return CoordinateChange(b_in_a_, a_in_b_); }

VectorField pushforward(const VectorField& x, const CoordinateChange& change) {
  if (!same_context(x.context(), change.from())) throw ContextMismatch();
  VectorField out(change.to());
  const Substitution& back = change.from_in_to();
  const Substitution& forth = change.to_in_from();
  for (std::size_t i = 0; i < change.to()->size(); ++i)
    out.set(i, substitute(apply(x, forth.image(i)), back));
  return out;
}

std::string to_string(const VectorField& x) {
  std::string out = "{";
  bool first = true;
  if (x.context()) {
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c].is_zero()) continue;
      if (!first) out += ", ";
      first = false;
      out += (*x.context())[c].name + ": " + to_string(x[c]);
    }
  }
  return out + "}";
}

}  // namespace qmk
