#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "diffalg/liouville.hpp"

namespace diffalg {

/// Canonical text for polynomials, elements, towers and forms. Output parses
/// back to the same values.
class Printer {
 public:
  explicit Printer(const Tower& t) {
    for (const auto& g : t.generators()) names_.push_back(g.name);
  }
  explicit Printer(std::vector<std::string> names) : names_(std::move(names)) {}

  std::string name(Var v) const { return v < names_.size() ? names_[v] : "g" + std::to_string(v); }

  std::string monomial(const Monomial& m) const {
    std::string s;
    for (const auto& [v, e] : m.entries()) {
      if (!s.empty()) s += '*';
      s += name(v);
      if (e > 1) s += '^' + std::to_string(e);
    }
    return s;
  }

  /// Terms from the highest monomial down; variables in tower order.
  std::string poly(const MultiPoly& p) const {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : p.terms()) {
      BigRat c = t.coef;
      const bool neg = c.sign() < 0;
      if (neg) c = -c;
      if (first) {
        if (neg) s += '-';
      } else {
        s += neg ? " - " : " + ";
      }
      first = false;
      if (t.mono.is_one()) {
        s += c.str();
      } else if (c.is_one()) {
        s += monomial(t.mono);
      } else {
        s += c.str() + '*' + monomial(t.mono);
      }
    }
    return s;
  }

  std::string ratfunc(const RatFunc& r) const {
    if (r.den().is_one()) return poly(r.num());
    return '(' + poly(r.num()) + ")/(" + poly(r.den()) + ')';
  }
  std::string element(const Element& e) const { return ratfunc(e.value()); }

  std::string phi(const PhiTerm& p) const {
    std::string args = std::visit(
        [&](const auto& t) -> std::string {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, LogPhi>) {
            return element(t.v);
          } else if constexpr (std::is_same_v<T, W1Phi> || std::is_same_v<T, W2Phi>) {
            return join({t.v, t.q, t.a, t.b});
          } else if constexpr (std::is_same_v<T, W3Phi>) {
            return join({t.v, t.q, t.a, t.b, t.c});
          } else if constexpr (std::is_same_v<T, L3Phi>) {
            return join({t.v, t.y, t.m, t.prm.a, t.prm.delta});
          } else {
            return join({t.v, t.y, t.m});
          }
        },
        p);
    return std::string(phi_name(p)) + '(' + args + ')';
  }

  std::string form(const LiouvilleForm& f) const {
    std::string s = "v0 = " + element(f.v0) + '\n';
    for (const auto& t : f.terms) s += "term " + element(t.coeff) + " * " + phi(t.phi) + '\n';
    return s;
  }

  std::string kind(const ExtensionKind& k) const {
    return std::visit(
        [&](const auto& kd) -> std::string {
          using T = std::decay_t<decltype(kd)>;
          if constexpr (std::is_same_v<T, Primitive>) {
            if (auto* lt = std::get_if<LogTag>(&kd.tag)) return "log(" + element(lt->h) + ')';
            if (auto* et = std::get_if<EllIntegralTag>(&kd.tag)) {
              std::string s = "ellint(" + std::to_string(et->kind) + ", " + element(et->p) + ", " + element(et->q);
              if (et->kind == 3) s += ", " + element(et->c);
              return s + ')';
            }
            if (kd.antiderivative) return "int(" + element(kd.integrand) + ", " + element(*kd.antiderivative) + ')';
            return "int(" + element(kd.integrand) + ')';
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return "exp(" + element(kd.v) + ')';
          } else if constexpr (std::is_same_v<T, EllipticFunction>) {
            return "ellfun(" + join({kd.v, kd.a, kd.b}) + ')';
          } else if constexpr (std::is_same_v<T, LambertW>) {
            return "lambertw(" + element(kd.v) + ')';
          } else if constexpr (std::is_same_v<T, AlgebraicSqrt>) {
            return "sqrt(" + element(kd.radicand) + ')';
          } else {
            return std::string(kind_name(k));
          }
        },
        k);
  }

  /// One declaration per line; the elliptic companion is implied by ellfun.
  std::string tower(const Tower& t) const {
    std::string s;
    for (const auto& g : t.generators()) {
      if (std::holds_alternative<EllipticCompanion>(g.kind)) continue;
      if (std::holds_alternative<ConstParam>(g.kind)) {
        s += "const " + g.name + '\n';
      } else if (auto* b = std::get_if<BaseVar>(&g.kind)) {
        s += "var " + g.name + " = d/dx " + element(b->derivative) + '\n';
      } else {
        s += "gen " + g.name + " = " + kind(g.kind) + '\n';
      }
    }
    return s;
  }

 private:
  std::string join(std::initializer_list<Element> es) const {
    std::string s;
    for (const auto& e : es) {
      if (!s.empty()) s += ", ";
      s += element(e);
    }
    return s;
  }

  std::vector<std::string> names_;
};

inline std::string to_string(const Element& e, const Tower& t) { return Printer(t).element(e); }

}  // namespace diffalg
