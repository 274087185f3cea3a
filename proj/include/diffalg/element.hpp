#pragma once

#include <memory>
#include <vector>

#include "diffalg/ratfunc.hpp"

namespace diffalg {

/// Square-root relations g^2 = r, where r only mentions generators below g.
class RelationSet {
 public:
  struct Relation {
    Var gen;
    RatFunc radicand;
  };

  void add(Var gen, RatFunc radicand) {
    if (radicand.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "zero radicand");
    for (Var v : radicand.vars())
      if (v >= gen) throw Error(ErrorCode::CyclicDefinition, "radicand mentions a generator at or above its root");
    if (!rels_.empty() && rels_.back().gen >= gen)
      throw Error(ErrorCode::InvalidArgument, "relations must be added in increasing generator order");
    if (index_.size() <= gen) index_.resize(gen + 1, -1);
    index_[gen] = static_cast<int>(rels_.size());
    rels_.push_back({gen, std::move(radicand)});
  }

  const std::vector<Relation>& relations() const { return rels_; }
  std::size_t size() const { return rels_.size(); }
  bool empty() const { return rels_.empty(); }

  bool is_algebraic(Var g) const { return g < index_.size() && index_[g] >= 0; }
  const RatFunc& radicand(Var g) const { return rels_[static_cast<std::size_t>(index_[g])].radicand; }

  /// Algebraic generators occurring in p, largest first.
  std::vector<Var> algebraic_in(const MultiPoly& p) const {
    std::vector<Var> out;
    if (rels_.empty()) return out;
    for (Var v : p.vars())
      if (is_algebraic(v)) out.push_back(v);
    std::reverse(out.begin(), out.end());
    return out;
  }

  bool reduced(const MultiPoly& p) const {
    if (rels_.empty()) return true;
    for (const auto& t : p.terms())
      for (const auto& [v, e] : t.mono.entries())
        if (e > 1 && is_algebraic(v)) return false;
    return true;
  }

 private:
  std::vector<Relation> rels_;
  std::vector<int> index_;
};

using RelationsPtr = std::shared_ptr<const RelationSet>;

/// Value of a tower field: a rational function in normal form modulo the
/// square-root relations it carries. Numerators are linear in each algebraic
/// generator and denominators are free of them.
class Element {
 public:
  Element() = default;
  Element(long c) : value_(c) {}                           // NOLINT(google-explicit-constructor)
  Element(int c) : value_(static_cast<long>(c)) {}         // NOLINT
  Element(const BigRat& c) : value_(c) {}                  // NOLINT
  Element(RatFunc v, RelationsPtr rels) : value_(std::move(v)), rels_(std::move(rels)) {}

  /// Reduces an arbitrary fraction to normal form.
  static Element reduce(const RatFunc& v, const RelationsPtr& rels);
  static Element reduce(const MultiPoly& num, const MultiPoly& den, const RelationsPtr& rels);
  static Element generator(Var g, const RelationsPtr& rels) {
    return Element(RatFunc(MultiPoly::variable(g)), rels);
  }

  const RatFunc& value() const { return value_; }
  const MultiPoly& num() const { return value_.num(); }
  const MultiPoly& den() const { return value_.den(); }
  const RelationsPtr& relations() const { return rels_; }

  bool is_zero() const { return value_.is_zero(); }
  bool is_one() const { return value_.num().is_one() && value_.den().is_one(); }
  bool is_rational() const { return value_.is_constant(); }
  BigRat rational_value() const { return value_.constant_value(); }
  bool contains(Var v) const { return value_.contains(v); }
  std::set<Var> vars() const { return value_.vars(); }
  std::uint32_t total_degree() const { return std::max(num().total_degree(), den().total_degree()); }

  friend bool operator==(const Element& a, const Element& b) { return a.value_ == b.value_; }

  Element operator-() const { return Element(-value_, rels_); }
  friend Element operator+(const Element& a, const Element& b) { return Element(a.value_ + b.value_, pick(a, b)); }
  friend Element operator-(const Element& a, const Element& b) { return Element(a.value_ - b.value_, pick(a, b)); }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator/(const Element& a, const Element& b) { return a * b.inverse(); }
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }
  Element& operator/=(const Element& o) { return *this = *this / o; }

  Element inverse() const;
  Element pow(unsigned e) const {
    Element result(1), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  /// Same value viewed against a (larger) relation set.
  Element with_relations(RelationsPtr rels) const { return Element(value_, std::move(rels)); }

 private:
  static RelationsPtr pick(const Element& a, const Element& b) {
    if (!a.rels_) return b.rels_;
    if (!b.rels_) return a.rels_;
    return a.rels_->size() >= b.rels_->size() ? a.rels_ : b.rels_;
  }

  RatFunc value_;
  RelationsPtr rels_;
};

namespace detail {

/// Rewrites every algebraic power g^k (k >= 2) through g^2 = r.
inline Element reduce_poly(const MultiPoly& p, const RelationsPtr& rels) {
  if (!rels || rels->reduced(p)) return Element(RatFunc(p), rels);
  const auto alg = rels->algebraic_in(p);
  const Var g = alg.front();
  const auto parts = p.coefficients_in(g);
  const Element r = Element(rels->radicand(g), rels);
  const Element root = Element::generator(g, rels);
  Element result(0), rpow(1);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k >= 2 && k % 2 == 0) rpow *= r;
    if (parts[k].is_zero()) continue;
    Element term = reduce_poly(parts[k], rels);
    term = term * rpow;
    if (k % 2 == 1) term = term * root;
    result += term.with_relations(rels);
  }
  return result.with_relations(rels);
}

}  // namespace detail

inline Element operator*(const Element& a, const Element& b) {
  if (a.is_zero() || b.is_zero()) return Element(RatFunc{}, Element::pick(a, b));
  const RelationsPtr rels = Element::pick(a, b);
  bool shared = false;
  if (rels && !rels->empty() && !a.num().is_constant() && !b.num().is_constant()) {
    for (Var g : rels->algebraic_in(a.num()))
      if (b.num().contains(g)) {
        shared = true;
        break;
      }
  }
  if (!shared) return Element(a.value_ * b.value_, rels);
  const MultiPoly g1 = b.den().is_one() ? MultiPoly(1) : poly_gcd(a.num(), b.den());
  const MultiPoly g2 = a.den().is_one() ? MultiPoly(1) : poly_gcd(b.num(), a.den());
  const auto cut = [](const MultiPoly& p, const MultiPoly& g) { return g.is_one() ? p : *MultiPoly::divide(p, g); };
  const Element prod = detail::reduce_poly(cut(a.num(), g1) * cut(b.num(), g2), rels);
  if (prod.is_zero()) return Element(RatFunc{}, rels);
  return Element(ratfunc_normalize(prod.num(), prod.den() * cut(a.den(), g2) * cut(b.den(), g1)), rels);
}

inline Element Element::inverse() const {
  if (is_zero()) throw Error(ErrorCode::ZeroDenominator, "inverse of zero element");
  const auto alg = rels_ ? rels_->algebraic_in(num()) : std::vector<Var>{};
  if (alg.empty()) return Element(value_.inverse(), rels_);
  // 1/(A0 + A1 g) = (A0 - A1 g) / (A0^2 - A1^2 r)
  const Var g = alg.front();
  const auto parts = num().coefficients_in(g);
  const Element a0(RatFunc(parts[0]), rels_), a1(RatFunc(parts[1]), rels_);
  const Element r(rels_->radicand(g), rels_);
  const Element norm = a0 * a0 - a1 * a1 * r;
  if (norm.is_zero())
    throw Error(ErrorCode::ZeroDenominator, "denominator is a zero divisor modulo the relations");
  const Element conj = a0 - a1 * Element::generator(g, rels_);
  return Element(RatFunc(den()), rels_) * conj * norm.inverse();
}

inline Element Element::reduce(const MultiPoly& num, const MultiPoly& den, const RelationsPtr& rels) {
  if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "zero denominator");
  const Element n = detail::reduce_poly(num, rels);
  if (n.is_zero()) return Element(RatFunc{}, rels);
  const Element d = detail::reduce_poly(den, rels);
  if (d.is_zero()) throw Error(ErrorCode::ZeroDenominator, "denominator vanishes modulo the relations");
  return (n * d.inverse()).with_relations(rels);
}

inline Element Element::reduce(const RatFunc& v, const RelationsPtr& rels) {
  return reduce(v.num(), v.den(), rels);
}

/// Canonical representative of e modulo rels.
inline RatFunc normal_form(const RatFunc& e, const RelationSet& rels) {
  auto ptr = std::make_shared<const RelationSet>(rels);
  return Element::reduce(e, ptr).value();
}

}  // namespace diffalg
