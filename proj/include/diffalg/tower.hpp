#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "diffalg/element.hpp"

namespace diffalg {

// Extension kinds. Every Element inside a kind uses only generators declared
// before the generator being defined.

/// Base variable with an explicitly given derivative.
struct BaseVar {
  Element derivative;
};
/// Symbolic constant: D(theta) = 0.
struct ConstParam {};
/// D(theta) = h'/h.
struct LogTag {
  Element h;
};
/// D(theta) = p'/q, p p'/q or p'/((p - c) q), with q^2 = p^3 - a p - b.
struct EllIntegralTag {
  int kind = 1;
  Element p, q, a, b, c;
};
/// D(theta) = integrand.
struct Primitive {
  Element integrand;
  std::variant<std::monostate, LogTag, EllIntegralTag> tag;
  /// Known w with D(w) = integrand, used to fold untagged primitives.
  std::optional<Element> antiderivative;
};
/// D(theta) = D(v) theta.
struct Exponential {
  Element v;
};
/// D(theta) = D(v) q with q^2 = theta^3 - a theta - b; q is the companion
/// generator declared right after theta.
struct EllipticFunction {
  Element v, a, b;
};
/// Companion q of an elliptic function generator.
struct EllipticCompanion {
  Var theta = 0;
  Element a, b;
};
/// D(theta) = D(v) theta / (v (theta + 1)).
struct LambertW {
  Element v;
};
/// theta^2 = radicand.
struct AlgebraicSqrt {
  Element radicand;
};

using ExtensionKind =
    std::variant<BaseVar, ConstParam, Primitive, Exponential, EllipticFunction, LambertW, AlgebraicSqrt, EllipticCompanion>;

inline std::string_view kind_name(const ExtensionKind& k) {
  struct V {
    std::string_view operator()(const BaseVar&) const { return "var"; }
    std::string_view operator()(const ConstParam&) const { return "const"; }
    std::string_view operator()(const Primitive& p) const {
      if (std::holds_alternative<LogTag>(p.tag)) return "log";
      if (std::holds_alternative<EllIntegralTag>(p.tag)) return "ellint";
      return "int";
    }
    std::string_view operator()(const Exponential&) const { return "exp"; }
    std::string_view operator()(const EllipticFunction&) const { return "ellfun"; }
    std::string_view operator()(const LambertW&) const { return "lambertw"; }
    std::string_view operator()(const AlgebraicSqrt&) const { return "sqrt"; }
    std::string_view operator()(const EllipticCompanion&) const { return "ellfun-companion"; }
  };
  return std::visit(V{}, k);
}

/// Calls f on every Element stored in the kind.
template <class F>
void for_each_element(const ExtensionKind& k, F&& f) {
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, BaseVar>) {
          f(kind.derivative);
        } else if constexpr (std::is_same_v<T, Primitive>) {
          f(kind.integrand);
          if (auto* lt = std::get_if<LogTag>(&kind.tag)) f(lt->h);
          if (auto* et = std::get_if<EllIntegralTag>(&kind.tag)) {
            f(et->p), f(et->q), f(et->a), f(et->b), f(et->c);
          }
          if (kind.antiderivative) f(*kind.antiderivative);
        } else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, LambertW>) {
          f(kind.v);
        } else if constexpr (std::is_same_v<T, EllipticFunction>) {
          f(kind.v), f(kind.a), f(kind.b);
        } else if constexpr (std::is_same_v<T, AlgebraicSqrt>) {
          f(kind.radicand);
        } else if constexpr (std::is_same_v<T, EllipticCompanion>) {
          f(kind.a), f(kind.b);
        }
      },
      k);
}

/// Copy of the kind with every Element passed through f.
template <class F>
ExtensionKind map_elements(const ExtensionKind& k, F&& f) {
  return std::visit(
      [&](const auto& kind) -> ExtensionKind {
        using T = std::decay_t<decltype(kind)>;
        T out = kind;
        if constexpr (std::is_same_v<T, BaseVar>) {
          out.derivative = f(kind.derivative);
        } else if constexpr (std::is_same_v<T, Primitive>) {
          out.integrand = f(kind.integrand);
          if (auto* lt = std::get_if<LogTag>(&out.tag)) lt->h = f(lt->h);
          if (auto* et = std::get_if<EllIntegralTag>(&out.tag)) {
            et->p = f(et->p), et->q = f(et->q), et->a = f(et->a), et->b = f(et->b), et->c = f(et->c);
          }
          if (kind.antiderivative) out.antiderivative = f(*kind.antiderivative);
        } else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, LambertW>) {
          out.v = f(kind.v);
        } else if constexpr (std::is_same_v<T, EllipticFunction>) {
          out.v = f(kind.v), out.a = f(kind.a), out.b = f(kind.b);
        } else if constexpr (std::is_same_v<T, AlgebraicSqrt>) {
          out.radicand = f(kind.radicand);
        } else if constexpr (std::is_same_v<T, EllipticCompanion>) {
          out.a = f(kind.a), out.b = f(kind.b);
        }
        return out;
      },
      k);
}

namespace detail {

/// Applies the derivation with the given generator images to e.
inline Element apply_derivation(const std::vector<Element>& images, const Element& e, const RelationsPtr& rels) {
  const auto poly_derivative = [&](const MultiPoly& p) {
    Element acc(RatFunc{}, rels);
    for (Var g : p.vars()) {
      if (g >= images.size() || images[g].is_zero()) continue;
      acc += Element(RatFunc(p.partial(g)), rels) * images[g];
    }
    return acc;
  };
  if (e.num().is_constant()) {
    if (e.den().is_constant()) return Element(RatFunc{}, rels);
  }
  const Element dn = poly_derivative(e.num());
  if (e.den().is_one()) return dn.with_relations(rels);
  const Element dd = poly_derivative(e.den());
  const Element inv_den(RatFunc::from_reduced(MultiPoly(1), e.den()), rels);
  return ((dn - e.with_relations(rels) * dd) * inv_den).with_relations(rels);
}

}  // namespace detail

/// Ordered list of generators over Q. Values are immutable; extend returns a
/// new tower sharing nothing mutable with the old one.
class Tower {
 public:
  struct Generator {
    std::string name;
    ExtensionKind kind;
  };

  Tower() : rels_(std::make_shared<RelationSet>()) {}

  std::size_t size() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& generator(Var g) const { return gens_.at(g); }
  const std::string& name(Var g) const { return gens_.at(g).name; }
  const ExtensionKind& kind(Var g) const { return gens_.at(g).kind; }
  const RelationsPtr& relations() const { return rels_; }

  std::optional<Var> find(std::string_view name) const {
    for (Var i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }
  Var id(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw Error(ErrorCode::UnknownName, "no generator named '" + std::string(name) + "'");
  }

  bool is_algebraic(Var g) const {
    return std::holds_alternative<AlgebraicSqrt>(kind(g)) || std::holds_alternative<EllipticCompanion>(kind(g));
  }
  bool is_transcendental(Var g) const { return !is_algebraic(g); }
  bool is_const_param(Var g) const { return std::holds_alternative<ConstParam>(kind(g)); }

  Element gen(Var g) const {
    if (g >= size()) throw Error(ErrorCode::UnknownName, "generator id out of range");
    return Element::generator(g, rels_);
  }
  Element gen(std::string_view name) const { return gen(id(name)); }
  Element number(const BigRat& c) const { return Element(RatFunc(c), rels_); }
  /// Brings an element of this tower (or a prefix of it) onto its relations.
  Element adopt(const Element& e) const {
    check_in_tower(e, static_cast<Var>(size()), "element");
    return e.with_relations(rels_);
  }

  /// Image of each generator under the tower derivation D.
  const std::vector<Element>& derivative_images() const { return dgen_; }
  Element derive(const Element& e) const { return detail::apply_derivation(dgen_, e, rels_); }
  bool is_constant(const Element& e) const { return derive(e).is_zero(); }

  /// Appends a generator (two for EllipticFunction: theta, then NAME_q).
  Tower extend(const std::string& name, ExtensionKind k) const {
    const Var id = static_cast<Var>(size());
    if (name.empty()) throw Error(ErrorCode::InvalidDefiningData, "empty generator name");
    if (find(name)) throw Error(ErrorCode::NameClash, "generator '" + name + "' already declared");
    if (std::holds_alternative<EllipticFunction>(k) && find(name + "_q"))
      throw Error(ErrorCode::NameClash, "generator '" + name + "_q' already declared");
    if (std::holds_alternative<EllipticCompanion>(k))
      throw Error(ErrorCode::InvalidDefiningData, "companion generators are created by ellfun");
    for_each_element(k, [&](const Element& e) { check_in_tower(e, id, name); });
    k = map_elements(k, [&](const Element& e) { return e.with_relations(rels_); });

    Tower t = *this;
    auto rels = std::make_shared<RelationSet>(*rels_);
    const Element zero(RatFunc{}, rels_);

    std::visit(
        [&](auto& kind) {
          using T = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<T, Primitive>) {
            validate_primitive(kind, name);
          } else if constexpr (std::is_same_v<T, EllipticFunction>) {
            if (!is_constant(kind.a) || !is_constant(kind.b))
              throw Error(ErrorCode::InvalidDefiningData, "ellfun '" + name + "': a and b must be constants");
          } else if constexpr (std::is_same_v<T, LambertW>) {
            if (kind.v.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "lambertw of zero");
          } else if constexpr (std::is_same_v<T, AlgebraicSqrt>) {
            if (kind.radicand.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "sqrt of zero");
          }
        },
        k);

    if (auto* sq = std::get_if<AlgebraicSqrt>(&k)) rels->add(id, sq->radicand.value());
    EllipticFunction* ef = std::get_if<EllipticFunction>(&k);
    if (ef) {
      const Element th(RatFunc(MultiPoly::variable(id)), rels_);
      rels->add(id + 1, (th * th * th - ef->a * th - ef->b).value());
    }
    t.rels_ = rels;
    t.gens_.push_back({name, k});
    if (ef) t.gens_.push_back({name + "_q", EllipticCompanion{id, ef->a, ef->b}});
    t.rebind();

    // D on the new generator(s).
    const Element theta = t.gen(id);
    const auto dv = [&](const Element& v) { return t.derive(v); };
    std::visit(
        [&](const auto& kind) {
          using T = std::decay_t<decltype(kind)>;
          Element d;
          if constexpr (std::is_same_v<T, BaseVar>) {
            d = kind.derivative;
          } else if constexpr (std::is_same_v<T, ConstParam>) {
            d = zero;
          } else if constexpr (std::is_same_v<T, Primitive>) {
            d = kind.integrand;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            d = dv(kind.v) * theta;
          } else if constexpr (std::is_same_v<T, EllipticFunction>) {
            d = dv(kind.v) * t.gen(id + 1);
          } else if constexpr (std::is_same_v<T, LambertW>) {
            d = dv(kind.v) * theta / (kind.v * (theta + Element(1)));
          } else if constexpr (std::is_same_v<T, AlgebraicSqrt>) {
            d = t.implicit(id, t.derive(kind.radicand));
          }
          t.dgen_.push_back(d.with_relations(t.rels_));
        },
        k);
    if (ef) {
      const Element cubic = theta * theta * theta - ef->a * theta - ef->b;
      t.dgen_.push_back(t.implicit(id + 1, t.derive(cubic)));
    }
    return t;
  }

  /// delta(g) = delta(r) / (2 g) for an algebraic generator g with g^2 = r.
  Element implicit(Var g, const Element& radicand_image) const {
    if (radicand_image.is_zero()) return Element(RatFunc{}, rels_);
    const Element r(rels_->radicand(g), rels_);
    return radicand_image * gen(g) / (r * Element(2));
  }
  /// Radicand of an algebraic generator as an element.
  Element radicand(Var g) const { return Element(rels_->radicand(g), rels_); }

  /// Result of rebuilding a tower with some generators dropped or retyped.
  struct Rebuilt;
  enum class Op { Keep, Drop, MakeConstant, MakeSqrt };
  struct RebuildOp {
    Op op = Op::Keep;
    std::optional<Element> radicand;  // for MakeSqrt, in the old tower
  };
  Rebuilt rebuild(const std::vector<RebuildOp>& ops) const;

 private:
  void check_in_tower(const Element& e, Var limit, const std::string& what) const {
    for (Var v : e.vars())
      if (v >= limit)
        throw Error(ErrorCode::CyclicDefinition,
                    "definition of '" + what + "' uses a generator that is not declared before it");
  }

  void validate_primitive(Primitive& p, const std::string& name) const {
    if (auto* lt = std::get_if<LogTag>(&p.tag)) {
      if (lt->h.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "log of zero");
      const Element f = derive(lt->h) / lt->h;
      if (!p.integrand.is_zero() && p.integrand != f)
        throw Error(ErrorCode::InvalidDefiningData, "log '" + name + "': integrand differs from Dh/h");
      p.integrand = f;
    } else if (auto* et = std::get_if<EllIntegralTag>(&p.tag)) {
      if (et->kind < 1 || et->kind > 3)
        throw Error(ErrorCode::InvalidDefiningData, "ellint kind must be 1, 2 or 3");
      const Element dp = derive(et->p);
      if (dp.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': p is constant");
      if (et->q.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': q is zero");
      // q^2 = p^3 - a p - b  =>  p^3 - q^2 = a p + b with a, b constant.
      const Element rest = et->p.pow(3) - et->q * et->q;
      const Element a = derive(rest) / dp;
      const Element b = rest - a * et->p;
      if (!is_constant(a) || !is_constant(b))
        throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': q^2 is not p^3 - a p - b with constant a, b");
      et->a = a;
      et->b = b;
      if (et->kind == 3) {
        if (!is_constant(et->c)) throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': c must be constant");
        if ((et->p - et->c).is_zero()) throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': p equals c");
      } else {
        et->c = Element(RatFunc{}, rels_);
      }
      Element f;
      switch (et->kind) {
        case 1: f = dp / et->q; break;
        case 2: f = et->p * dp / et->q; break;
        default: f = dp / ((et->p - et->c) * et->q); break;
      }
      if (!p.integrand.is_zero() && p.integrand != f)
        throw Error(ErrorCode::InvalidDefiningData, "ellint '" + name + "': integrand differs from its kind");
      p.integrand = f;
    } else if (p.antiderivative) {
      if (derive(*p.antiderivative) != p.integrand)
        throw Error(ErrorCode::InvalidDefiningData, "int '" + name + "': recorded antiderivative does not match");
    }
  }

  /// Points every stored element at the current relation set.
  void rebind() {
    for (auto& g : gens_) g.kind = map_elements(g.kind, [&](const Element& e) { return e.with_relations(rels_); });
    for (auto& d : dgen_) d = d.with_relations(rels_);
  }

  std::vector<Generator> gens_;
  RelationsPtr rels_;
  std::vector<Element> dgen_;
};

struct Tower::Rebuilt {
  Tower tower;
  std::vector<std::optional<Var>> map;  // old id -> new id

  Element import(const Element& e) const {
    for (Var v : e.vars())
      if (v >= map.size() || !map[v])
        throw Error(ErrorCode::FieldMismatch, "element uses a generator removed from the tower");
    const auto rename = [this](Var v) { return *map[v]; };
    return Element(e.value().renamed(rename), tower.relations());
  }
};

inline Tower::Rebuilt Tower::rebuild(const std::vector<RebuildOp>& ops) const {
  Rebuilt out;
  out.map.assign(size(), std::nullopt);
  for (Var i = 0; i < size(); ++i) {
    const Op op = i < ops.size() ? ops[i].op : Op::Keep;
    if (op == Op::Drop) continue;
    const Var nid = static_cast<Var>(out.tower.size());
    if (op == Op::MakeConstant) {
      out.tower = out.tower.extend(gens_[i].name, ConstParam{});
      out.map[i] = nid;
      continue;
    }
    if (op == Op::MakeSqrt) {
      out.tower = out.tower.extend(gens_[i].name, AlgebraicSqrt{out.import(*ops[i].radicand)});
      out.map[i] = nid;
      continue;
    }
    if (std::holds_alternative<EllipticCompanion>(gens_[i].kind)) {
      // Kept together with its theta.
      continue;
    }
    const ExtensionKind k = map_elements(gens_[i].kind, [&](const Element& e) { return out.import(e); });
    out.tower = out.tower.extend(gens_[i].name, k);
    out.map[i] = nid;
    if (std::holds_alternative<EllipticFunction>(gens_[i].kind)) out.map[i + 1] = nid + 1;
  }
  return out;
}

}  // namespace diffalg
