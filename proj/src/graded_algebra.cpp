#include "qmk/graded_algebra.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace qmk {

namespace {
std::atomic<std::size_t> g_term_limit{0};
}

void set_term_limit(std::size_t limit) { g_term_limit.store(limit); }
std::size_t term_limit() { return g_term_limit.load(); }

std::string_view to_string(Parity p) { return is_odd(p) ? "odd" : "even"; }

// ---------------------------------------------------------------------------
// GradedContext

GradedContext::GradedContext(std::vector<Coordinate> coordinates)
    : coordinates_(std::move(coordinates)) {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    const auto& name = coordinates_[i].name;
    if (name.empty()) throw InvalidArgument("coordinate with empty name");
    if (!index_.emplace(name, i).second)
      throw InvalidArgument("duplicate coordinate name '" + name + "'");
  }
}

ContextPtr GradedContext::make(std::vector<Coordinate> coordinates) {
  return ContextPtr(new GradedContext(std::move(coordinates)));
}

std::optional<std::size_t> GradedContext::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GradedContext::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownCoordinate("unknown coordinate '" + std::string(name) + "'");
}

bool GradedContext::nonnegatively_graded() const {
  return std::all_of(coordinates_.begin(), coordinates_.end(),
                     [](const Coordinate& c) { return c.weight >= 0; });
}

std::optional<int> GradedContext::degree() const {
  if (!nonnegatively_graded()) return std::nullopt;
  int n = 0;
  for (const auto& c : coordinates_) n = std::max(n, c.weight);
  return n;
}

bool same_context(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(const GradedContext& ctx, std::vector<std::uint16_t> exponents)
    : exponents_(std::move(exponents)) {
  if (exponents_.size() != ctx.size()) throw InvalidArgument("exponent vector has wrong length");
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    if (is_odd(ctx[i].parity) && exponents_[i] > 1)
      throw InvalidArgument("odd coordinate '" + ctx[i].name + "' raised to a power > 1");
  recompute(ctx);
}

Monomial Monomial::variable(const GradedContext& ctx, std::size_t index) {
  std::vector<std::uint16_t> e(ctx.size(), 0);
  e.at(index) = 1;
  return Monomial(ctx, std::move(e));
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto e : exponents_) d += e;
  return d;
}

void Monomial::recompute(const GradedContext& ctx) {
  weight_ = 0;
  bool odd = false;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] == 0) continue;
    weight_ += ctx[i].weight * exponents_[i];
    if (is_odd(ctx[i].parity)) odd = !odd;
  }
  parity_ = parity_of(odd);
}

std::optional<std::pair<Monomial, int>> multiply(const GradedContext& ctx, const Monomial& a,
                                                 const Monomial& b) {
  const std::size_t n = a.size();
  Monomial out;
  out.exponents_.resize(n);
  // Moving each odd factor of b leftwards past the odd factors of a that sit
  // later in canonical order costs one sign per transposition.
  int odd_after = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (a.exponents_[i] && is_odd(ctx[i].parity)) ++odd_after;
  bool negative = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool odd = is_odd(ctx[i].parity);
    if (odd && a.exponents_[i]) --odd_after;
    if (odd && b.exponents_[i]) {
      if (a.exponents_[i]) return std::nullopt;
      if (odd_after % 2) negative = !negative;
    }
    out.exponents_[i] = static_cast<std::uint16_t>(a.exponents_[i] + b.exponents_[i]);
  }
  out.weight_ = a.weight_ + b.weight_;
  out.parity_ = a.parity_ + b.parity_;
  return std::make_pair(std::move(out), negative ? -1 : 1);
}

Monomial without_variable(const GradedContext& ctx, const Monomial& m, std::size_t index) {
  Monomial out = m;
  --out.exponents_[index];
  out.weight_ -= ctx[index].weight;
  out.parity_ = out.parity_ + ctx[index].parity;
  return out;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  if (a.weight() != b.weight()) return a.weight() < b.weight();
  const auto& ea = a.exponents();
  const auto& eb = b.exponents();
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (ea[i] != eb[i]) return ea[i] > eb[i];
  return false;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(ContextPtr ctx, const Rational& c) {
  Polynomial p(ctx);
  p.add_term(Monomial(ctx->size()), c);
  return p;
}

Polynomial Polynomial::variable(ContextPtr ctx, std::size_t index) {
  Polynomial p(ctx);
  p.add_term(Monomial::variable(*ctx, index), 1);
  return p;
}

Polynomial Polynomial::variable(ContextPtr ctx, std::string_view name) {
  const std::size_t i = ctx->index_of(name);
  return variable(std::move(ctx), i);
}

Polynomial Polynomial::term(ContextPtr ctx, const Monomial& m, const Rational& c) {
  Polynomial p(std::move(ctx));
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) {
    it->second.canonicalize();  // callers may pass num/den unreduced
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_limit() const {
  const std::size_t limit = term_limit();
  if (limit != 0 && terms_.size() > limit) throw TermLimitExceeded(limit);
}

std::optional<Parity> Polynomial::parity() const {
  if (terms_.empty()) return std::nullopt;
  const Parity p = terms_.begin()->first.parity();
  for (const auto& [m, c] : terms_)
    if (m.parity() != p) return std::nullopt;
  return p;
}

std::optional<int> Polynomial::weight() const {
  if (terms_.empty()) return std::nullopt;
  // Terms are sorted by weight.
  const int lo = terms_.begin()->first.weight();
  const int hi = terms_.rbegin()->first.weight();
  if (lo != hi) return std::nullopt;
  return lo;
}

bool Polynomial::has_parity(Parity p) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [p](const auto& t) { return t.first.parity() == p; });
}

bool Polynomial::has_weight(int w) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [w](const auto& t) { return t.first.weight() == w; });
}

Rational Polynomial::constant_term() const {
  for (const auto& [m, c] : terms_)
    if (m.is_one()) return c;
  return 0;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  if (!ctx_) ctx_ = other.ctx_;
  else if (!same_context(ctx_, other.ctx_)) throw ContextMismatch();
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  check_limit();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  if (!ctx_) ctx_ = other.ctx_;
  else if (!same_context(ctx_, other.ctx_)) throw ContextMismatch();
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  check_limit();
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial(a.ctx_ ? a.ctx_ : b.ctx_);
  if (!same_context(a.ctx_, b.ctx_)) throw ContextMismatch();
  const GradedContext& ctx = *a.ctx_;
  Polynomial out(a.ctx_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto prod = multiply(ctx, ma, mb);
      if (!prod) continue;
      Rational c = ca * cb;
      if (prod->second < 0) c = -c;
      out.add_term(prod->first, c);
    }
  }
  out.check_limit();
  return out;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.empty() || other.terms_.empty()) return terms_.empty() && other.terms_.empty();
  if (!same_context(ctx_, other.ctx_)) return false;
  return terms_ == other.terms_;
}

Polynomial poly_mul(const Polynomial& f, const Polynomial& g) { return f * g; }

Polynomial partial_derivative(const Polynomial& f, std::size_t index) {
  Polynomial out(f.context());
  if (f.is_zero()) return out;
  const GradedContext& ctx = *f.context();
  if (index >= ctx.size()) throw UnknownCoordinate("coordinate index out of range");
  const bool odd = is_odd(ctx[index].parity);
  for (const auto& [m, c] : f.terms()) {
    const auto e = m[index];
    if (e == 0) continue;
    Rational coeff = c * e;
    if (odd) {
      // The left derivative passes the odd factors standing before index.
      int before = 0;
      for (std::size_t j = 0; j < index; ++j)
        if (m[j] && is_odd(ctx[j].parity)) ++before;
      if (before % 2) coeff = -coeff;
    }
    out.add_term(without_variable(ctx, m, index), coeff);
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& f, std::string_view name) {
  if (!f.context()) return f;
  return partial_derivative(f, f.context()->index_of(name));
}

Polynomial homogeneous_component(const Polynomial& f, int w) {
  Polynomial out(f.context());
  for (const auto& [m, c] : f.terms())
    if (m.weight() == w) out.add_term(m, c);
  return out;
}

Polynomial parity_component(const Polynomial& f, Parity p) {
  Polynomial out(f.context());
  for (const auto& [m, c] : f.terms())
    if (m.parity() == p) out.add_term(m, c);
  return out;
}

std::optional<ParityWeight> parity_weight(const Polynomial& f) {
  auto p = f.parity();
  auto w = f.weight();
  if (!p || !w) return std::nullopt;
  return ParityWeight{*p, *w};
}

Polynomial evaluate_at_zero(const Polynomial& f, const std::vector<bool>& vanishing) {
  Polynomial out(f.context());
  for (const auto& [m, c] : f.terms()) {
    bool keep = true;
    for (std::size_t i = 0; i < m.size() && keep; ++i)
      if (m[i] && vanishing[i]) keep = false;
    if (keep) out.add_term(m, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

Substitution::Substitution(ContextPtr source, ContextPtr target)
    : source_(std::move(source)), target_(std::move(target)), images_(source_->size()) {}

Substitution Substitution::identity(ContextPtr ctx) {
  Substitution s(ctx, ctx);
  for (std::size_t i = 0; i < ctx->size(); ++i) s.images_[i] = Polynomial::variable(ctx, i);
  return s;
}

Substitution& Substitution::assign(std::size_t index, Polynomial image) {
  if (index >= source_->size()) throw UnknownCoordinate("coordinate index out of range");
  if (image.context() && !same_context(image.context(), target_)) throw ContextMismatch();
  const Coordinate& c = (*source_)[index];
  if (!image.has_parity(c.parity))
    throw ParityMismatch("image of " + std::string(to_string(c.parity)) + " coordinate '" +
                         c.name + "' is not " + std::string(to_string(c.parity)));
  Polynomial img(target_);
  img += image;
  images_[index] = std::move(img);
  return *this;
}

Substitution& Substitution::assign(std::string_view name, Polynomial image) {
  return assign(source_->index_of(name), std::move(image));
}

const Polynomial& Substitution::image(std::size_t index) const {
  const auto& img = images_.at(index);
  if (!img)
    throw UnknownCoordinate("substitution undefined on coordinate '" + (*source_)[index].name +
                            "'");
  return *img;
}

bool Substitution::preserves_weight() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] && !images_[i]->has_weight((*source_)[i].weight)) return false;
  return true;
}

Polynomial substitute(const Polynomial& f, const Substitution& sigma) {
  Polynomial out(sigma.target());
  if (f.is_zero()) return out;
  if (!same_context(f.context(), sigma.source())) throw ContextMismatch();
  const std::size_t n = sigma.source()->size();
  // powers[i][e] = image(i)^e, filled lazily
  std::vector<std::vector<Polynomial>> powers(n);
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) {
      cache.push_back(Polynomial::constant(sigma.target(), 1));
      cache.push_back(sigma.image(i));
    }
    while (cache.size() <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
  };
  for (const auto& [m, c] : f.terms()) {
    Polynomial term = Polynomial::constant(sigma.target(), c);
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i)
      if (m[i]) term = term * power(i, m[i]);
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const GradedContext& ctx, const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!out.empty()) out += '*';
    out += ctx[i].name;
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  const GradedContext& ctx = *f.context();
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    const bool negative = sgn(c) < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += to_string(ctx, m);
    }
  }
  return out;
}

}  // namespace qmk
