#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "diffalg/elliptic.hpp"

namespace diffalg {

/// phi = Dv / v.
struct LogPhi {
  Element v;
};
/// phi = Dv / q on q^2 = v^3 - a v - b.
struct W1Phi {
  Element v, q, a, b;
};
/// phi = v Dv / q.
struct W2Phi {
  Element v, q, a, b;
};
/// phi = Dv / ((v - c) q).
struct W3Phi {
  Element v, q, a, b, c;
};
/// phi = Dv / y on y^2 = (1 - v^2)(1 - m v^2).
struct L1Phi {
  Element v, y, m;
};
/// phi = (1 - m v^2) Dv / y.
struct L2Phi {
  Element v, y, m;
};
/// phi = Dv / ((1 - v^2/a^2) y).
struct L3Phi {
  Element v, y, m;
  ThirdKindParam prm;
};

using PhiTerm = std::variant<LogPhi, W1Phi, W2Phi, W3Phi, L1Phi, L2Phi, L3Phi>;

struct FormTerm {
  Element coeff;
  PhiTerm phi;
};

/// D(v0) + sum coeff_i phi_i.
struct LiouvilleForm {
  Element v0;
  std::vector<FormTerm> terms;
};

inline std::string_view phi_name(const PhiTerm& p) {
  static constexpr std::string_view names[] = {"log", "w1", "w2", "w3", "l1", "l2", "l3"};
  return names[p.index()];
}

/// The argument v of the term.
inline const Element& phi_arg(const PhiTerm& p) {
  return std::visit([](const auto& t) -> const Element& { return t.v; }, p);
}

template <class F>
PhiTerm map_phi(const PhiTerm& p, F&& f) {
  return std::visit(
      [&](const auto& t) -> PhiTerm {
        using T = std::decay_t<decltype(t)>;
        T o = t;
        if constexpr (std::is_same_v<T, LogPhi>) {
          o.v = f(t.v);
        } else if constexpr (std::is_same_v<T, W1Phi> || std::is_same_v<T, W2Phi>) {
          o.v = f(t.v), o.q = f(t.q), o.a = f(t.a), o.b = f(t.b);
        } else if constexpr (std::is_same_v<T, W3Phi>) {
          o.v = f(t.v), o.q = f(t.q), o.a = f(t.a), o.b = f(t.b), o.c = f(t.c);
        } else if constexpr (std::is_same_v<T, L3Phi>) {
          o.v = f(t.v), o.y = f(t.y), o.m = f(t.m), o.prm.a = f(t.prm.a), o.prm.delta = f(t.prm.delta);
        } else {
          o.v = f(t.v), o.y = f(t.y), o.m = f(t.m);
        }
        return o;
      },
      p);
}

template <class F>
LiouvilleForm map_form(const LiouvilleForm& form, F&& f) {
  LiouvilleForm out{f(form.v0), {}};
  for (const auto& term : form.terms) out.terms.push_back({f(term.coeff), map_phi(term.phi, f)});
  return out;
}

template <class F>
void for_each_form_element(const LiouvilleForm& form, F&& f) {
  (void)map_form(form, [&](const Element& e) {
    f(e);
    return e;
  });
}

/// Checks the curve relation and constancy of the curve parameters.
inline void validate_term(const Tower& t, const PhiTerm& p) {
  const auto need_const = [&](const Element& e, const char* what) {
    if (!t.is_constant(t.adopt(e))) throw Error(ErrorCode::InvalidTerm, std::string(what) + " must be a constant");
  };
  std::visit(
      [&](const auto& term) {
        using T = std::decay_t<decltype(term)>;
        if constexpr (std::is_same_v<T, LogPhi>) {
          if (term.v.is_zero()) throw Error(ErrorCode::InvalidTerm, "log of zero");
        } else if constexpr (std::is_same_v<T, W1Phi> || std::is_same_v<T, W2Phi> || std::is_same_v<T, W3Phi>) {
          need_const(term.a, "curve parameter a");
          need_const(term.b, "curve parameter b");
          if constexpr (std::is_same_v<T, W3Phi>) need_const(term.c, "third-kind parameter c");
          if (t.adopt(term.q * term.q) != t.adopt(term.v.pow(3) - term.a * term.v - term.b))
            throw Error(ErrorCode::InvalidTerm, "q^2 differs from v^3 - a v - b");
        } else {
          need_const(term.m, "modulus m");
          if (t.adopt(term.y * term.y) != t.adopt(LegendreCurve::rhs(term.m, term.v)))
            throw Error(ErrorCode::InvalidTerm, "y^2 differs from (1 - v^2)(1 - m v^2)");
          if constexpr (std::is_same_v<T, L3Phi>) {
            need_const(term.prm.a, "third-kind parameter a");
            need_const(term.prm.delta, "third-kind parameter delta");
            if (term.prm.a.is_zero()) throw Error(ErrorCode::InvalidTerm, "third-kind parameter a is zero");
            if (t.adopt(term.prm.delta * term.prm.delta) != t.adopt(LegendreCurve::rhs(term.m, term.prm.a)))
              throw Error(ErrorCode::InvalidTerm, "delta^2 differs from (1 - a^2)(1 - m a^2)");
          }
        }
      },
      p);
}

inline void validate_form(const Tower& t, const LiouvilleForm& form) {
  for_each_form_element(form, [&](const Element& e) { (void)t.adopt(e); });
  for (const auto& term : form.terms) {
    if (!t.is_constant(t.adopt(term.coeff)))
      throw Error(ErrorCode::NonConstantCoefficient, "form coefficients must be constants");
    validate_term(t, term.phi);
  }
}

inline Element phi_eval(const Tower& t, const PhiTerm& p, const DerivationHandle& h) {
  const auto over = [](const Element& n, const Element& d) {
    if (d.is_zero()) throw Error(ErrorCode::ZeroDenominator, "phi term has a zero denominator");
    return n / d;
  };
  return std::visit(
      [&](const auto& term) -> Element {
        using T = std::decay_t<decltype(term)>;
        const Element v = t.adopt(term.v);
        const Element dv = derive(t, h, v);
        const Element one(1);
        if constexpr (std::is_same_v<T, LogPhi>) {
          return over(dv, v);
        } else if constexpr (std::is_same_v<T, W1Phi>) {
          return over(dv, t.adopt(term.q));
        } else if constexpr (std::is_same_v<T, W2Phi>) {
          return over(v * dv, t.adopt(term.q));
        } else if constexpr (std::is_same_v<T, W3Phi>) {
          return over(dv, (v - t.adopt(term.c)) * t.adopt(term.q));
        } else if constexpr (std::is_same_v<T, L1Phi>) {
          return over(dv, t.adopt(term.y));
        } else if constexpr (std::is_same_v<T, L2Phi>) {
          return over((one - t.adopt(term.m) * v * v) * dv, t.adopt(term.y));
        } else {
          return over(dv, (one - t.adopt(term.prm.n()) * v * v) * t.adopt(term.y));
        }
      },
      p);
}

/// h(v0) + sum coeff_i phi_i(h v_i, v_i).
inline Element form_apply(const Tower& t, const LiouvilleForm& form, const DerivationHandle& h) {
  Element acc = derive(t, h, form.v0);
  for (const auto& term : form.terms) acc += t.adopt(term.coeff) * phi_eval(t, term.phi, h);
  return acc;
}

inline Element form_derivative(const Tower& t, const LiouvilleForm& form) { return form_apply(t, form, FullD{}); }

inline bool verify_liouville(const Tower& t, const Element& f, const LiouvilleForm& form) {
  return form_derivative(t, form) == t.adopt(f);
}

inline Element x_constant(const Tower& t, const LiouvilleForm& form, Var k) {
  const Element c = form_apply(t, form, CommutingX{k});
  if (!t.is_constant(c))
    throw Error(ErrorCode::NotConstant, "X applied to the form is not a constant; its derivative does not lie below the generator");
  return c;
}

/// X phi(Dv, v) = D phi(Xv, v).
inline bool check_step1(const Tower& t, const PhiTerm& p, Var k) {
  const Element lhs = derive(t, CommutingX{k}, phi_eval(t, p, FullD{}));
  const Element rhs = t.derive(phi_eval(t, p, CommutingX{k}));
  return lhs == rhs;
}

/// Outcome of one reduction step: the form over the smaller tower.
struct ReduceResult {
  Tower tower;
  Element f;
  LiouvilleForm form;
  /// Constant c from the step (reduce_top only).
  std::optional<Element> c;
  /// Value the generator was specialized to, if any.
  std::optional<BigRat> specialized;
  std::string note;
};

namespace detail {

inline bool form_mentions(const LiouvilleForm& form, Var g) {
  bool hit = false;
  for_each_form_element(form, [&](const Element& e) { hit = hit || e.contains(g); });
  return hit;
}

/// Substitutes theta = c, or nullopt at a pole.
inline std::optional<Element> specialize(const Element& e, Var theta, const BigRat& c) {
  if (!e.contains(theta)) return e;
  const MultiPoly d = e.den().evaluated(theta, c);
  if (d.is_zero()) return std::nullopt;
  return Element(ratfunc_normalize(e.num().evaluated(theta, c), d), e.relations());
}

/// Drops terms whose argument is constant and merges nothing else.
inline LiouvilleForm prune(const Tower& t, LiouvilleForm form) {
  std::vector<FormTerm> kept;
  for (auto& term : form.terms) {
    if (term.coeff.is_zero()) continue;
    if (t.is_constant(t.adopt(phi_arg(term.phi)))) continue;
    kept.push_back(std::move(term));
  }
  form.terms = std::move(kept);
  return form;
}

inline void self_check(const ReduceResult& r) {
  if (!verify_liouville(r.tower, r.f, r.form))
    throw Error(ErrorCode::RoundTripFailure, "reduced form does not differentiate to the integrand");
}

}  // namespace detail

/// Removes the top transcendental generator (and its companion).
inline ReduceResult reduce_top(const Tower& t, const Element& f, const LiouvilleForm& form) {
  if (t.size() == 0) throw Error(ErrorCode::NothingToReduce, "empty tower");
  Var k = static_cast<Var>(t.size() - 1);
  const bool elliptic = std::holds_alternative<EllipticCompanion>(t.kind(k));
  if (elliptic) k -= 1;
  if (t.is_algebraic(k))
    throw Error(ErrorCode::UnsupportedHandle, "top generator '" + t.name(k) + "' is algebraic; use the algebraic reduction");
  const Element ff = t.adopt(f);
  validate_form(t, form);
  for (Var g = k; g < t.size(); ++g)
    if (ff.contains(g)) throw Error(ErrorCode::FNotBelow, "integrand involves the top generator '" + t.name(g) + "'");
  const Element c = x_constant(t, form, k);

  // Term contributed by c D(theta), expressed below theta.
  LiouvilleForm extra{t.number(0), {}};
  if (!c.is_zero()) {
    std::visit(
        [&](const auto& kind) {
          using T = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<T, Primitive>) {
            if (auto* lt = std::get_if<LogTag>(&kind.tag)) {
              extra.terms.push_back({c, LogPhi{lt->h}});
            } else if (auto* et = std::get_if<EllIntegralTag>(&kind.tag)) {
              if (et->kind == 1) extra.terms.push_back({c, W1Phi{et->p, et->q, et->a, et->b}});
              else if (et->kind == 2) extra.terms.push_back({c, W2Phi{et->p, et->q, et->a, et->b}});
              else extra.terms.push_back({c, W3Phi{et->p, et->q, et->a, et->b, et->c}});
            } else if (kind.antiderivative) {
              extra.v0 = c * *kind.antiderivative;
            } else {
              throw Error(ErrorCode::IntegrandNotReducible,
                          "primitive '" + t.name(k) + "' has no log or elliptic tag and no recorded antiderivative");
            }
          } else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, EllipticFunction>) {
            extra.v0 = c * kind.v;
          } else if constexpr (std::is_same_v<T, LambertW>) {
            extra.terms.push_back({c, LogPhi{kind.v}});
          } else {
            throw Error(ErrorCode::UnsupportedHandle, "top generator '" + t.name(k) + "' is not reducible");
          }
        },
        t.kind(k));
  }

  ReduceResult out;
  out.c = c;
  const bool uses_q = elliptic && detail::form_mentions(form, k + 1);
  std::vector<Tower::RebuildOp> ops(t.size());
  LiouvilleForm body = form;
  if (uses_q || !detail::form_mentions(form, k)) {
    if (uses_q) {
      ops[k].op = Tower::Op::MakeConstant;
      ops[k + 1] = {Tower::Op::MakeSqrt, t.radicand(k + 1)};
      out.note = "kept '" + t.name(k) + "' as a constant";
    } else {
      ops[k].op = Tower::Op::Drop;
      if (elliptic) ops[k + 1].op = Tower::Op::Drop;
    }
  } else {
    // Specialize theta to a rational value where every part is defined.
    static const int candidates[] = {0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8};
    const auto try_value = [&](const BigRat& v) -> std::optional<LiouvilleForm> {
      bool ok = true;
      LiouvilleForm s = map_form(form, [&](const Element& e) {
        if (!ok) return e;
        auto r = detail::specialize(t.adopt(e), k, v);
        if (!r) {
          ok = false;
          return e;
        }
        return *r;
      });
      if (!ok) return std::nullopt;
      try {
        (void)form_apply(t, s, FullD{});
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroDenominator) return std::nullopt;
        throw;
      }
      return s;
    };
    std::optional<LiouvilleForm> chosen;
    for (int v : candidates) {
      if ((chosen = try_value(BigRat(v)))) {
        out.specialized = BigRat(v);
        break;
      }
    }
    if (chosen) {
      body = *chosen;
      ops[k].op = Tower::Op::Drop;
      if (elliptic) ops[k + 1].op = Tower::Op::Drop;
    } else {
      ops[k].op = Tower::Op::MakeConstant;
      if (elliptic) ops[k + 1] = {Tower::Op::MakeSqrt, t.radicand(k + 1)};
      out.note = "kept '" + t.name(k) + "' as a constant";
    }
  }
  const auto rb = t.rebuild(ops);
  const auto imp = [&](const Element& e) { return rb.import(t.adopt(e)); };
  LiouvilleForm nf = map_form(body, imp);
  const LiouvilleForm ex = map_form(extra, imp);
  nf.v0 += ex.v0;
  for (const auto& term : ex.terms) nf.terms.push_back(term);
  out.tower = rb.tower;
  out.f = imp(ff);
  out.form = detail::prune(out.tower, nf);
  if (ops[k].op == Tower::Op::MakeConstant) {
    // Drop the retyped generators again when pruning removed every use.
    const Var nk = *rb.map[k];
    bool used = false;
    for (Var g = nk; g < out.tower.size(); ++g) used = used || detail::form_mentions(out.form, g);
    if (!used) {
      std::vector<Tower::RebuildOp> drop(out.tower.size());
      for (Var g = nk; g < out.tower.size(); ++g) drop[g].op = Tower::Op::Drop;
      const auto rb2 = out.tower.rebuild(drop);
      out.form = map_form(out.form, [&](const Element& e) { return rb2.import(e); });
      out.f = rb2.import(out.f);
      out.tower = rb2.tower;
      out.note.clear();
    }
  }
  detail::self_check(out);
  return out;
}

/// Removes the top square-root generator s by the trace.
inline ReduceResult reduce_algebraic(const Tower& t, Var s, const Element& f, const LiouvilleForm& form) {
  detail::require_sqrt(t, s);
  if (s + 1 != t.size()) throw Error(ErrorCode::InvalidArgument, "square root '" + t.name(s) + "' is not the top generator");
  const Element ff = t.adopt(f);
  if (ff.contains(s)) throw Error(ErrorCode::FNotBelow, "integrand involves '" + t.name(s) + "'");
  validate_form(t, form);
  const auto conj = [&](const Element& e) { return conjugate(t, s, e); };
  const Element half = t.number(BigRat(1, 2));

  LiouvilleForm nf{half * trace(t, s, form.v0), {}};
  for (const auto& term : form.terms) {
    bool involves = false;
    (void)map_phi(term.phi, [&](const Element& e) {
      involves = involves || e.contains(s);
      return e;
    });
    if (!involves && !term.coeff.contains(s)) {
      nf.terms.push_back(term);
      continue;
    }
    const Element hc = half * term.coeff;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, LogPhi>) {
            const Element n = norm(t, s, p.v);
            nf.terms.push_back({hc, LogPhi{n / Element(n.num().leading_coef())}});
          } else if constexpr (std::is_same_v<T, W3Phi>) {
            throw Error(ErrorCode::UnsupportedTermKind, "third-kind Weierstrass terms cannot be pushed through a square root");
          } else if constexpr (std::is_same_v<T, W1Phi> || std::is_same_v<T, W2Phi>) {
            const CurvePoint p1{p.v, p.q, false}, p2{conj(p.v), conj(p.q), false};
            if (p1.x == p2.x && p1.y == -p2.y) return;  // conjugates cancel
            const WeierstrassCurve c{p.a, p.b};
            const auto lambda = weierstrass_slope(c, p1, p2);
            if (!lambda || p1.x == p2.x) throw Error(ErrorCode::DegenerateChord, "conjugate points share x");
            const CurvePoint p3 = detail::chord_point(*lambda, p1, p2);
            nf.terms.push_back({hc, T{p3.x, p3.y, p.a, p.b}});
            if constexpr (std::is_same_v<T, W2Phi>) nf.v0 += term.coeff * *lambda;
          } else {
            const CurvePoint p1{p.v, p.y, false}, p2{conj(p.v), conj(p.y), false};
            if (p1.x == p2.x && p1.y == -p2.y) return;  // conjugates cancel
            const LegendreCurve c{p.m};
            const CurvePoint p3 = legendre_add(c, p1, p2);
            if constexpr (std::is_same_v<T, L1Phi>) {
              nf.terms.push_back({hc, L1Phi{p3.x, p3.y, p.m}});
            } else if constexpr (std::is_same_v<T, L2Phi>) {
              nf.terms.push_back({hc, L2Phi{p3.x, p3.y, p.m}});
              nf.v0 += hc * abel_e_correction(c, p1, p2);
            } else {
              nf.terms.push_back({hc, L3Phi{p3.x, p3.y, p.m, p.prm}});
              const Element g = abel_log_argument(c, p.prm, p1, p2, p3);
              nf.terms.push_back({-hc * p.prm.a / (Element(2) * p.prm.delta), LogPhi{g}});
            }
          }
        },
        term.phi);
  }
  for (const auto& term : nf.terms) {
    bool bad = term.coeff.contains(s);
    (void)map_phi(term.phi, [&](const Element& e) {
      bad = bad || e.contains(s);
      return e;
    });
    if (bad) throw Error(ErrorCode::FieldMismatch, "pushed-down term still involves the square root");
  }
  std::vector<Tower::RebuildOp> ops(t.size());
  ops[s].op = Tower::Op::Drop;
  const auto rb = t.rebuild(ops);
  const auto imp = [&](const Element& e) { return rb.import(t.adopt(e)); };
  ReduceResult out;
  out.tower = rb.tower;
  out.f = imp(ff);
  out.form = detail::prune(out.tower, map_form(nf, imp));
  detail::self_check(out);
  return out;
}

/// One reduction step on whatever sits at the top of the tower.
inline ReduceResult reduce_step(const Tower& t, const Element& f, const LiouvilleForm& form) {
  if (t.size() == 0) throw Error(ErrorCode::NothingToReduce, "empty tower");
  const Var top = static_cast<Var>(t.size() - 1);
  if (std::holds_alternative<AlgebraicSqrt>(t.kind(top))) return reduce_algebraic(t, top, f, form);
  const auto& k = t.kind(top);
  if (std::holds_alternative<BaseVar>(k) || std::holds_alternative<ConstParam>(k))
    throw Error(ErrorCode::NothingToReduce, "top generator '" + t.name(top) + "' is a base variable or constant");
  return reduce_top(t, f, form);
}

}  // namespace diffalg
