#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diffalg/derivation.hpp"

namespace diffalg {

/// y^2 = (1 - x^2)(1 - m x^2).
struct LegendreCurve {
  Element m;

  static LegendreCurve make(const Element& m) {
    if (m.is_rational() && (m.is_zero() || m.is_one()))
      throw Error(ErrorCode::InvalidDefiningData, "Legendre modulus must differ from 0 and 1");
    return LegendreCurve{m};
  }
  template <class T>
  static T rhs(const T& m, const T& x) {
    const T one(1);
    return (one - x * x) * (one - m * x * x);
  }
};

/// y^2 = x^3 - a x - b.
struct WeierstrassCurve {
  Element a, b;

  static WeierstrassCurve make(const Element& a, const Element& b) {
    const Element disc = Element(4) * a * a * a - Element(27) * b * b;
    if (disc.is_rational() && disc.is_zero())
      throw Error(ErrorCode::InvalidDefiningData, "singular Weierstrass curve");
    return WeierstrassCurve{a, b};
  }
  Element rhs(const Element& x) const { return x * x * x - a * x - b; }
};

struct CurvePoint {
  Element x, y;
  bool at_infinity = false;

  static CurvePoint infinity() { return CurvePoint{Element(0), Element(1), true}; }
  friend bool operator==(const CurvePoint& p, const CurvePoint& q) {
    if (p.at_infinity || q.at_infinity) return p.at_infinity == q.at_infinity;
    return p.x == q.x && p.y == q.y;
  }
};

/// Parameter of the third kind: delta^2 = (1 - a^2)(1 - m a^2).
struct ThirdKindParam {
  Element a, delta;

  static ThirdKindParam make(const LegendreCurve& c, const Element& a, const Element& delta) {
    if (a.is_zero()) throw Error(ErrorCode::InvalidDefiningData, "third-kind parameter a must be nonzero");
    if (delta * delta != LegendreCurve::rhs(c.m, a))
      throw Error(ErrorCode::InvalidDefiningData, "delta^2 differs from (1 - a^2)(1 - m a^2)");
    return ThirdKindParam{a, delta};
  }
  Element n() const { return Element(1) / (a * a); }
};

inline Element curve_residue(const LegendreCurve& c, const CurvePoint& p) {
  return p.y * p.y - LegendreCurve::rhs(c.m, p.x);
}
inline Element curve_residue(const WeierstrassCurve& c, const CurvePoint& p) {
  if (p.at_infinity) return Element(0);
  return p.y * p.y - c.rhs(p.x);
}

/// Sum on the Legendre curve; the addition law of x = sn, y = cn dn.
/// Returns nullopt when 1 - m x1^2 x2^2 vanishes.
template <class T>
std::optional<std::pair<T, T>> legendre_add_formula(const T& m, const T& x1, const T& y1, const T& x2, const T& y2) {
  const T one(1);
  const T x1s = x1 * x1, x2s = x2 * x2;
  const T mxx = m * x1s * x2s;
  const T d = one - mxx;
  if (d == T(0)) return std::nullopt;
  const T x3 = (x1 * y2 + x2 * y1) / d;
  const T y3 = (y1 * y2 * (one + mxx) - x1 * x2 * (m * (one - x1s) * (one - x2s) + (one - m * x1s) * (one - m * x2s))) / (d * d);
  return std::make_pair(x3, y3);
}

inline CurvePoint legendre_add(const LegendreCurve& c, const CurvePoint& p1, const CurvePoint& p2) {
  auto r = legendre_add_formula<Element>(c.m, p1.x, p1.y, p2.x, p2.y);
  if (!r) throw Error(ErrorCode::DegenerateDenominator, "1 - m x1^2 x2^2 vanishes");
  return CurvePoint{std::move(r->first), std::move(r->second), false};
}

inline CurvePoint legendre_neg(const CurvePoint& p) { return CurvePoint{-p.x, p.y, false}; }

inline CurvePoint weierstrass_neg(const CurvePoint& p) {
  if (p.at_infinity) return p;
  return CurvePoint{p.x, -p.y, false};
}

namespace detail {

inline CurvePoint chord_point(const Element& lambda, const CurvePoint& p1, const CurvePoint& p2) {
  const Element x3 = lambda * lambda - p1.x - p2.x;
  return CurvePoint{x3, lambda * (p1.x - x3) - p1.y, false};
}

}  // namespace detail

/// Slope of the chord (or tangent) through p1 and p2; nullopt for vertical lines.
inline std::optional<Element> weierstrass_slope(const WeierstrassCurve& c, const CurvePoint& p1, const CurvePoint& p2) {
  if (p1.at_infinity || p2.at_infinity) return std::nullopt;
  if (p1.x != p2.x) return (p2.y - p1.y) / (p2.x - p1.x);
  if (p1.y == -p2.y) return std::nullopt;
  if (p1.y != p2.y) throw Error(ErrorCode::InvalidArgument, "points share x but are not on the same curve");
  return (Element(3) * p1.x * p1.x - c.a) / (Element(2) * p1.y);
}

inline CurvePoint weierstrass_add(const WeierstrassCurve& c, const CurvePoint& p1, const CurvePoint& p2) {
  if (p1.at_infinity) return p2;
  if (p2.at_infinity) return p1;
  const auto lambda = weierstrass_slope(c, p1, p2);
  if (!lambda) return CurvePoint::infinity();
  return detail::chord_point(*lambda, p1, p2);
}

namespace detail {

inline Element chord(const CurvePoint& p1, const CurvePoint& p2) {
  const Element d = p1.x * p2.y - p2.x * p1.y;
  if (d.is_zero()) throw Error(ErrorCode::DegenerateChord, "x1 y2 = x2 y1");
  return d;
}

}  // namespace detail

/// a0 = (x2^3 y1 - x1^3 y2) / (x1 y2 - x2 y1).
inline Element abel_a0(const CurvePoint& p1, const CurvePoint& p2) {
  const Element d = detail::chord(p1, p2);
  return (p2.x.pow(3) * p1.y - p1.x.pow(3) * p2.y) / d;
}

/// Numerator and denominator of the third-kind log argument.
inline std::pair<Element, Element> abel_log_parts(const LegendreCurve&, const ThirdKindParam& prm, const CurvePoint& p1,
                                                  const CurvePoint& p2, const CurvePoint& p3) {
  const Element base = abel_a0(p1, p2) * prm.a + prm.a.pow(3);
  const Element t = p1.x * p2.x * p3.x * prm.delta;
  return {base + t, base - t};
}

inline Element abel_log_argument(const LegendreCurve& c, const ThirdKindParam& prm, const CurvePoint& p1,
                                 const CurvePoint& p2, const CurvePoint& p3) {
  const auto [n, d] = abel_log_parts(c, prm, p1, p2, p3);
  if (d.is_zero()) throw Error(ErrorCode::ZeroDenominator, "denominator of the log argument vanishes");
  return n / d;
}

/// g = m (x1^3 x2 - x1 x2^3) / (x1 y2 - x2 y1).
inline Element abel_e_correction(const LegendreCurve& c, const CurvePoint& p1, const CurvePoint& p2) {
  const Element d = detail::chord(p1, p2);
  return c.m * (p1.x.pow(3) * p2.x - p1.x * p2.x.pow(3)) / d;
}

enum class AbelKind { F, E, PI, W1, W2 };

inline std::string_view abel_kind_name(AbelKind k) {
  switch (k) {
    case AbelKind::F: return "F";
    case AbelKind::E: return "E";
    case AbelKind::PI: return "PI";
    case AbelKind::W1: return "W1";
    case AbelKind::W2: return "W2";
  }
  return "?";
}

inline std::optional<AbelKind> parse_abel_kind(std::string_view s) {
  for (AbelKind k : {AbelKind::F, AbelKind::E, AbelKind::PI, AbelKind::W1, AbelKind::W2})
    if (abel_kind_name(k) == s) return k;
  return std::nullopt;
}

struct AbelReport {
  AbelKind kind = AbelKind::F;
  Tower tower;
  /// LHS - RHS under d/dx1 and d/dx2.
  Element residue1, residue2;
  bool pass = false;
};

/// Tower m, [a, Delta,] x1, x2, y1, y2 for the Legendre kinds and
/// a, b, x1, x2, y1, y2 for the Weierstrass kinds.
inline Tower abel_tower(AbelKind kind) {
  Tower t;
  const bool weier = kind == AbelKind::W1 || kind == AbelKind::W2;
  if (weier) {
    t = t.extend("a", ConstParam{}).extend("b", ConstParam{});
  } else {
    t = t.extend("m", ConstParam{});
    if (kind == AbelKind::PI) {
      t = t.extend("a", ConstParam{});
      t = t.extend("Delta", AlgebraicSqrt{LegendreCurve::rhs(t.gen("m"), t.gen("a"))});
    }
  }
  t = t.extend("x1", BaseVar{Element(1)}).extend("x2", BaseVar{Element(1)});
  for (const char* i : {"1", "2"}) {
    const Element x = t.gen(std::string("x") + i);
    const Element r = weier ? x * x * x - t.gen("a") * x - t.gen("b") : LegendreCurve::rhs(t.gen("m"), x);
    t = t.extend(std::string("y") + i, AlgebraicSqrt{r});
  }
  return t;
}

/// LHS - RHS of the differential addition identity under derivation h.
inline Element abel_residue(const Tower& t, AbelKind kind, const DerivationHandle& h) {
  const CurvePoint p1{t.gen("x1"), t.gen("y1"), false}, p2{t.gen("x2"), t.gen("y2"), false};
  const auto d = [&](const Element& e) { return derive(t, h, e); };
  if (kind == AbelKind::W1 || kind == AbelKind::W2) {
    const WeierstrassCurve c{t.gen("a"), t.gen("b")};
    const auto lambda = weierstrass_slope(c, p1, p2);
    const CurvePoint p3 = detail::chord_point(*lambda, p1, p2);
    if (kind == AbelKind::W1) return d(p1.x) / p1.y + d(p2.x) / p2.y - d(p3.x) / p3.y;
    // Second kind: the correction is 2 lambda.
    return p1.x * d(p1.x) / p1.y + p2.x * d(p2.x) / p2.y - p3.x * d(p3.x) / p3.y - d(Element(2) * *lambda);
  }
  const LegendreCurve c{t.gen("m")};
  const CurvePoint p3 = legendre_add(c, p1, p2);
  const Element one(1);
  switch (kind) {
    case AbelKind::F: return d(p1.x) / p1.y + d(p2.x) / p2.y - d(p3.x) / p3.y;
    case AbelKind::E: {
      const auto w = [&](const CurvePoint& p) { return (one - c.m * p.x * p.x) * d(p.x) / p.y; };
      return w(p1) + w(p2) - w(p3) - d(abel_e_correction(c, p1, p2));
    }
    default: {
      const ThirdKindParam prm{t.gen("a"), t.gen("Delta")};
      const Element n = prm.n();
      const auto w = [&](const CurvePoint& p) { return d(p.x) / ((one - n * p.x * p.x) * p.y); };
      const auto [fn, fd] = abel_log_parts(c, prm, p1, p2, p3);
      const Element dlog = d(fn) / fn - d(fd) / fd;
      return w(p1) + w(p2) - w(p3) + prm.a / (Element(2) * prm.delta) * dlog;
    }
  }
}

inline AbelReport check_abel_identity(AbelKind kind) {
  AbelReport rep;
  rep.kind = kind;
  rep.tower = abel_tower(kind);
  rep.residue1 = abel_residue(rep.tower, kind, Partial{rep.tower.id("x1")});
  rep.residue2 = abel_residue(rep.tower, kind, Partial{rep.tower.id("x2")});
  rep.pass = rep.residue1.is_zero() && rep.residue2.is_zero();
  return rep;
}

}  // namespace diffalg
