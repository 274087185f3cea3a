#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "diffalg/tower.hpp"

namespace diffalg {

/// The tower derivation D.
struct FullD {};
/// The derivation X attached to a transcendental generator k.
struct CommutingX {
  Var k = 0;
};
/// Formal partial derivative with respect to a transcendental generator.
struct Partial {
  Var k = 0;
};
/// D_F for the cut at generator j: D on every other generator, zero on j.
struct BelowD {
  Var j = 0;
};
using DerivationHandle = std::variant<FullD, CommutingX, Partial, BelowD>;

namespace detail {

inline void require_transcendental(const Tower& t, Var k, const char* what) {
  if (k >= t.size()) throw Error(ErrorCode::UnsupportedHandle, std::string(what) + ": generator id out of range");
  if (t.is_algebraic(k))
    throw Error(ErrorCode::UnsupportedHandle, std::string(what) + " is not defined for algebraic generator '" + t.name(k) + "'");
}

/// Value of X on its own generator theta_k.
inline Element commuting_value(const Tower& t, Var k) {
  if (k >= t.size()) throw Error(ErrorCode::UnsupportedHandle, "CommutingX: generator id out of range");
  const Element theta = t.gen(k);
  return std::visit(
      [&](const auto& kind) -> Element {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Primitive>) return t.number(1);
        else if constexpr (std::is_same_v<T, Exponential>) return theta;
        else if constexpr (std::is_same_v<T, EllipticFunction>) return t.gen(k + 1);
        else if constexpr (std::is_same_v<T, LambertW>) return theta / (theta + Element(1));
        else
          throw Error(ErrorCode::UnsupportedHandle,
                      "CommutingX is not defined for " + std::string(kind_name(t.kind(k))) + " generator '" + t.name(k) + "'");
      },
      t.kind(k));
}

}  // namespace detail

/// Images of every generator under the handle. Algebraic generators get their
/// image by implicit differentiation of g^2 = r.
inline std::vector<Element> derivation_images(const Tower& t, const DerivationHandle& h) {
  if (std::holds_alternative<FullD>(h)) return t.derivative_images();
  std::vector<Element> img;
  img.reserve(t.size());
  const Element zero = t.number(0);
  std::optional<Element> xval;
  if (auto* x = std::get_if<CommutingX>(&h)) xval = detail::commuting_value(t, x->k);
  if (auto* p = std::get_if<Partial>(&h)) detail::require_transcendental(t, p->k, "Partial");
  if (auto* b = std::get_if<BelowD>(&h)) detail::require_transcendental(t, b->j, "BelowD");
  for (Var g = 0; g < t.size(); ++g) {
    if (t.is_algebraic(g)) {
      img.push_back(t.implicit(g, detail::apply_derivation(img, t.radicand(g), t.relations())));
      continue;
    }
    if (auto* x = std::get_if<CommutingX>(&h)) {
      img.push_back(g == x->k ? *xval : zero);
    } else if (auto* p = std::get_if<Partial>(&h)) {
      img.push_back(g == p->k ? t.number(1) : zero);
    } else {
      const auto* b = std::get_if<BelowD>(&h);
      img.push_back(g == b->j ? zero : t.derivative_images()[g]);
    }
  }
  return img;
}

inline Element derive(const Tower& t, const DerivationHandle& h, const Element& e) {
  if (std::holds_alternative<FullD>(h)) return t.derive(t.adopt(e));
  return detail::apply_derivation(derivation_images(t, h), t.adopt(e), t.relations());
}

inline bool is_constant(const Tower& t, const Element& e) { return t.is_constant(t.adopt(e)); }

/// Df = D_F f + D(theta_j) * d f / d theta_j.
inline bool check_chain_rule(const Tower& t, Var j, const Element& e) {
  const Element lhs = derive(t, FullD{}, e);
  const Element rhs = derive(t, BelowD{j}, e) + t.derivative_images().at(j) * derive(t, Partial{j}, e);
  return lhs == rhs;
}

struct LieReport {
  Var k = 0;
  /// (generator, (DX - XD)(generator)) for every generator of the field up to
  /// theta_k and its companion.
  std::vector<std::pair<Var, Element>> residues;
  bool pass = true;
};

inline LieReport check_lie_closed(const Tower& t, Var k) {
  LieReport rep;
  rep.k = k;
  const auto ximg = derivation_images(t, CommutingX{k});
  const auto& dimg = t.derivative_images();
  Var last = k;
  if (std::holds_alternative<EllipticFunction>(t.kind(k))) last = k + 1;
  for (Var g = 0; g <= last; ++g) {
    const Element dx = detail::apply_derivation(dimg, ximg[g], t.relations());
    const Element xd = detail::apply_derivation(ximg, dimg[g], t.relations());
    Element r = dx - xd;
    if (!r.is_zero()) rep.pass = false;
    rep.residues.emplace_back(g, std::move(r));
  }
  return rep;
}

/// psi in the commutation lemma: a rational function of one variable with
/// rational coefficients, or 1 / sqrt(cubic) with rational coefficients.
struct PsiSpec {
  enum class Kind { Rational, InvSqrtCubic } kind = Kind::Rational;
  /// Rational: numerator and denominator coefficients, lowest degree first.
  std::vector<BigRat> num{BigRat(1)}, den{BigRat(1)};
  /// InvSqrtCubic: c0 + c1 u + c2 u^2 + c3 u^3.
  std::vector<BigRat> cubic;
  /// Generator s with s^2 = cubic(p); searched for when absent.
  std::optional<Var> root;

  static PsiSpec rational(std::vector<BigRat> n, std::vector<BigRat> d = {BigRat(1)}) {
    PsiSpec s;
    s.num = std::move(n);
    s.den = std::move(d);
    return s;
  }
  static PsiSpec inv_sqrt(std::vector<BigRat> c, std::optional<Var> root = std::nullopt) {
    PsiSpec s;
    s.kind = Kind::InvSqrtCubic;
    s.cubic = std::move(c);
    s.root = root;
    return s;
  }
};

namespace detail {

inline Element horner(const std::vector<BigRat>& c, const Element& u) {
  Element acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + Element(*it);
  return acc;
}

}  // namespace detail

/// psi(p) as an element of the tower.
inline Element realize_psi(const Tower& t, const PsiSpec& psi, const Element& p) {
  const Element u = t.adopt(p);
  if (psi.kind == PsiSpec::Kind::Rational) {
    const Element d = detail::horner(psi.den, u);
    if (d.is_zero()) throw Error(ErrorCode::PsiNotRealizable, "psi has a pole at p");
    return detail::horner(psi.num, u) / d;
  }
  if (psi.cubic.empty() || psi.cubic.size() > 4)
    throw Error(ErrorCode::PsiNotRealizable, "psi radicand must be a polynomial of degree at most 3");
  const Element r = detail::horner(psi.cubic, u);
  if (r.is_zero()) throw Error(ErrorCode::PsiNotRealizable, "psi radicand vanishes at p");
  const auto try_root = [&](Var s) -> std::optional<Element> {
    if (s >= t.size() || !t.is_algebraic(s)) return std::nullopt;
    if (t.radicand(s) == r) return Element(1) / t.gen(s);
    return std::nullopt;
  };
  if (psi.root) {
    if (auto v = try_root(*psi.root)) return *v;
    throw Error(ErrorCode::PsiNotRealizable, "given generator is not a square root of the psi radicand at p");
  }
  for (Var s = 0; s < t.size(); ++s)
    if (auto v = try_root(s)) return *v;
  if (r.num().is_constant() && r.den().is_constant()) {
    // A rational square is realizable without a generator.
    const BigRat c = r.rational_value();
    if (c.sign() > 0) {
      mpz_class n = c.numerator(), d = c.denominator();
      if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        return t.number(BigRat(BigInt(rd), BigInt(rn)));
      }
    }
  }
  throw Error(ErrorCode::PsiNotRealizable, "no generator of the tower is a square root of the psi radicand at p");
}

struct DerCommResult {
  Element lhs, rhs;
  bool holds = false;
};

/// X((Yp) psi(p)) - Y((Xp) psi(p)) against ([X,Y] p) psi(p).
inline DerCommResult der_comm(const Tower& t, const DerivationHandle& x, const DerivationHandle& y, const Element& p,
                              const PsiSpec& psi) {
  const Element pp = t.adopt(p);
  const Element ps = realize_psi(t, psi, pp);
  const Element xp = derive(t, x, pp), yp = derive(t, y, pp);
  DerCommResult out;
  out.lhs = derive(t, x, yp * ps) - derive(t, y, xp * ps);
  out.rhs = (derive(t, x, yp) - derive(t, y, xp)) * ps;
  out.holds = out.lhs == out.rhs;
  return out;
}

inline bool check_der_comm(const Tower& t, const DerivationHandle& x, const DerivationHandle& y, const Element& p,
                           const PsiSpec& psi) {
  return der_comm(t, x, y, p, psi).holds;
}

namespace detail {

inline void require_sqrt(const Tower& t, Var s) {
  if (s >= t.size() || !std::holds_alternative<AlgebraicSqrt>(t.kind(s)))
    throw Error(ErrorCode::NotQuadratic, "generator is not a square root extension");
}

}  // namespace detail

/// Image of e under s -> -s.
inline Element conjugate(const Tower& t, Var s, const Element& e) {
  detail::require_sqrt(t, s);
  const Element a = t.adopt(e);
  for (Var v : a.vars())
    if (v > s) throw Error(ErrorCode::FieldMismatch, "element is not in the field up to the square root");
  const auto parts = a.num().coefficients_in(s);
  MultiPoly n = parts.empty() ? MultiPoly{} : parts[0];
  if (parts.size() > 1) n = n - parts[1] * MultiPoly::variable(s);
  return Element(RatFunc::from_reduced(n, a.den()), t.relations());
}

inline Element trace(const Tower& t, Var s, const Element& e) {
  const Element r = t.adopt(e) + conjugate(t, s, e);
  if (r.contains(s)) throw Error(ErrorCode::FieldMismatch, "trace did not descend below the square root");
  return r;
}

inline Element norm(const Tower& t, Var s, const Element& e) {
  const Element r = t.adopt(e) * conjugate(t, s, e);
  if (r.contains(s)) throw Error(ErrorCode::FieldMismatch, "norm did not descend below the square root");
  return r;
}

/// D(N e) / N e = Tr(De / e).
inline bool check_lognorm(const Tower& t, Var s, const Element& e) {
  if (e.is_zero()) throw Error(ErrorCode::ZeroElement, "logarithmic derivative of zero");
  const Element n = norm(t, s, e);
  const Element lhs = t.derive(n) / n;
  const Element rhs = trace(t, s, t.derive(t.adopt(e)) / t.adopt(e));
  return lhs == rhs;
}

}  // namespace diffalg
