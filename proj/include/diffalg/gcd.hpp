#pragma once

#include <map>
#include <random>
#include <set>
#include <vector>

#include "diffalg/modular.hpp"
#include "diffalg/multipoly.hpp"

namespace diffalg {

namespace detail {

/// Integer-coefficient polynomial in dense exponent vectors, lex-sorted.
struct ZPoly {
  std::vector<std::pair<modp::Exps, mpz_class>> terms;
};

inline ZPoly to_zpoly(const MultiPoly& p, const std::vector<Var>& order) {
  std::map<Var, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  ZPoly z;
  z.terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    modp::Exps e(order.size(), 0);
    for (const auto& [v, x] : t.mono.entries()) e[pos.at(v)] = x;
    z.terms.push_back({std::move(e), t.coef.numerator()});
  }
  std::sort(z.terms.begin(), z.terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return z;
}

inline modp::MPoly reduce_mod(const ZPoly& z, const modp::Zp& f, std::size_t k) {
  modp::MPoly m;
  m.nvars = k;
  m.terms.reserve(z.terms.size());
  for (const auto& [e, c] : z.terms) {
    const auto r = f.from(c);
    if (r) m.terms.push_back({e, r});
  }
  return m;
}

inline MultiPoly from_exps(const std::map<modp::Exps, mpz_class>& terms, const std::vector<Var>& order) {
  std::vector<MultiPoly::Term> out;
  out.reserve(terms.size());
  for (const auto& [e, c] : terms) {
    if (c == 0) continue;
    Monomial m;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) m *= Monomial::var(order[i], e[i]);
    out.push_back({std::move(m), BigRat(c)});
  }
  return MultiPoly::from_terms(std::move(out));
}

/// Primitive integer polynomial proportional to p.
inline MultiPoly integer_primitive(const MultiPoly& p) {
  return p.scaled(BigRat(1) / p.integer_content());
}

/// Multi-modular gcd of two primitive integer polynomials sharing the
/// variables in `order`. Result is monic over Q; correctness is certified by
/// exact trial division.
inline MultiPoly modular_gcd(const MultiPoly& a, const MultiPoly& b, const std::vector<Var>& order) {
  const std::size_t k = order.size();
  const ZPoly za = to_zpoly(a, order), zb = to_zpoly(b, order);
  mpz_class gamma;
  mpz_gcd(gamma.get_mpz_t(), za.terms.front().second.get_mpz_t(), zb.terms.front().second.get_mpz_t());

  std::mt19937_64 rng(0x5eed1234u);
  std::map<modp::Exps, mpz_class> acc;  // residues in [0, modulus)
  mpz_class modulus = 1;
  modp::Exps current_lm;
  bool have = false;
  MultiPoly previous;

  for (const modp::u64 p : modp::word_primes()) {
    const modp::Zp f{p};
    if (f.from(za.terms.front().second) == 0 || f.from(zb.terms.front().second) == 0) continue;
    modp::MPoly g = modp::pgcd(f, reduce_mod(za, f, k), reduce_mod(zb, f, k), rng);
    if (g.is_constant()) return MultiPoly(1);
    const modp::Exps lm = g.terms.front().e;
    if (have && lm > current_lm) continue;
    if (!have || lm < current_lm) {
      acc.clear();
      modulus = 1;
      current_lm = lm;
      have = true;
    }
    const modp::u64 s = f.from(gamma);
    std::map<modp::Exps, modp::u64> img;
    for (const auto& t : g.terms) img[t.e] = f.mul(t.c, s);
    for (const auto& [e, v] : img) acc.try_emplace(e, 0);
    // Chinese remaindering: x = old + modulus * ((new - old) / modulus mod p).
    const modp::u64 minv = f.inv(f.from(modulus));
    for (auto& [e, x] : acc) {
      const auto it = img.find(e);
      const modp::u64 nv = it == img.end() ? 0 : it->second;
      const modp::u64 t = f.mul(f.sub(nv, f.from(x)), minv);
      x += modulus * mpz_class(static_cast<unsigned long>(t));
    }
    modulus *= mpz_class(static_cast<unsigned long>(p));
    std::map<modp::Exps, mpz_class> sym;
    const mpz_class half = modulus / 2;
    for (const auto& [e, x] : acc) sym[e] = x > half ? mpz_class(x - modulus) : x;
    MultiPoly candidate = from_exps(sym, order);
    if (candidate == previous) {
      MultiPoly g0 = candidate.monic();
      if (MultiPoly::divide(a, g0) && MultiPoly::divide(b, g0)) return g0;
    }
    previous = std::move(candidate);
  }
  throw std::logic_error("modular_gcd: prime supply exhausted");
}

inline MultiPoly gcd_primitive(const MultiPoly& a, const MultiPoly& b);

/// gcd of b with every coefficient of a taken with respect to `vs`.
inline MultiPoly gcd_with_content(const MultiPoly& a, const std::set<Var>& vs, MultiPoly b) {
  auto coeffs = a.coefficients_in(vs);
  std::vector<const MultiPoly*> order;
  for (const auto& [m, c] : coeffs) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const MultiPoly* x, const MultiPoly* y) { return x->size() < y->size(); });
  for (const MultiPoly* c : order) {
    b = gcd_primitive(integer_primitive(*c), integer_primitive(b));
    if (b.is_constant()) return MultiPoly(1);
  }
  return b;
}

/// Both inputs nonzero with integer coefficients; result monic.
inline MultiPoly gcd_primitive(const MultiPoly& a0, const MultiPoly& b0) {
  if (a0.is_constant() || b0.is_constant()) return MultiPoly(1);
  if (a0 == b0) return a0.monic();
  const Monomial ma = a0.monomial_content(), mb = b0.monomial_content();
  const Monomial mg = Monomial::gcd(ma, mb);
  MultiPoly a = ma.is_one() ? a0 : *MultiPoly::divide(a0, MultiPoly::monomial(ma, BigRat(1)));
  MultiPoly b = mb.is_one() ? b0 : *MultiPoly::divide(b0, MultiPoly::monomial(mb, BigRat(1)));
  const MultiPoly mono = MultiPoly::monomial(mg, BigRat(1));
  if (a.is_constant() || b.is_constant()) return mono;

  const auto va = a.vars(), vb = b.vars();
  std::set<Var> only_a, only_b, common;
  for (Var v : va) (vb.count(v) ? common : only_a).insert(v);
  for (Var v : vb)
    if (!va.count(v)) only_b.insert(v);
  if (common.empty()) return mono;

  MultiPoly g;
  if (!only_a.empty()) {
    g = gcd_with_content(a, only_a, b);
  } else if (!only_b.empty()) {
    g = gcd_with_content(b, only_b, a);
  } else {
    g = modular_gcd(integer_primitive(a), integer_primitive(b), std::vector<Var>(common.begin(), common.end()));
  }
  return (g * mono).monic();
}

}  // namespace detail

/// Greatest common divisor over Q, normalized to leading coefficient 1.
/// poly_gcd(p, 0) is p made monic.
inline MultiPoly poly_gcd(const MultiPoly& p, const MultiPoly& q) {
  if (p.is_zero()) return q.monic();
  if (q.is_zero()) return p.monic();
  return detail::gcd_primitive(detail::integer_primitive(p), detail::integer_primitive(q));
}

}  // namespace diffalg
