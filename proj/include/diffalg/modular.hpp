#pragma once

// Arithmetic in Z/p for word-sized primes, dense univariate and sparse
// multivariate polynomials over Z/p, and the recursive dense-interpolation
// gcd used as the inner engine of poly_gcd.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace diffalg::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Zp {
  u64 p;

  u64 add(u64 a, u64 b) const {
    const u64 s = a + b;
    return s >= p ? s - p : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (p - b); }
  u64 neg(u64 a) const { return a ? p - a : 0; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
  u64 from(const mpz_class& z) const { return mpz_fdiv_ui(z.get_mpz_t(), p); }
};

/// Primes just below 2^62, generated once.
inline const std::vector<u64>& word_primes() {
  static const std::vector<u64> primes = [] {
    std::vector<u64> out;
    mpz_class n = (mpz_class(1) << 62) - 1;
    while (out.size() < 64) {
      // Step down by hand: mpz_nextprime only walks upward.
      n -= 2;
      if (mpz_probab_prime_p(n.get_mpz_t(), 30)) out.push_back(n.get_ui());
    }
    return out;
  }();
  return primes;
}

// ----------------------------------------------------------------------------
// Dense univariate polynomials, index = degree.

using UPoly = std::vector<u64>;

inline void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const UPoly& a) { return static_cast<int>(a.size()) - 1; }

inline UPoly u_add(const Zp& f, const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}
inline UPoly u_sub(const Zp& f, const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}
inline UPoly u_scale(const Zp& f, const UPoly& a, u64 c) {
  if (c == 0) return {};
  UPoly r(a);
  for (auto& x : r) x = f.mul(x, c);
  return r;
}
inline UPoly u_mul(const Zp& f, const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}
inline u64 u_eval(const Zp& f, const UPoly& a, u64 x) {
  u64 r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = f.add(f.mul(r, x), *it);
  return r;
}
inline UPoly u_monic(const Zp& f, const UPoly& a) {
  if (a.empty() || a.back() == 1) return a;
  return u_scale(f, a, f.inv(a.back()));
}
/// Quotient and remainder; b nonzero.
inline std::pair<UPoly, UPoly> u_divrem(const Zp& f, UPoly a, const UPoly& b) {
  if (deg(a) < deg(b)) return {{}, a};
  const u64 inv = f.inv(b.back());
  UPoly q(a.size() - b.size() + 1, 0);
  for (int i = deg(a); i >= deg(b); --i) {
    const u64 c = f.mul(a[i], inv);
    q[i - deg(b)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= deg(b); ++j) a[i - deg(b) + j] = f.sub(a[i - deg(b) + j], f.mul(c, b[j]));
  }
  trim(a);
  trim(q);
  return {q, a};
}
inline UPoly u_gcd(const Zp& f, UPoly a, UPoly b) {
  while (!b.empty()) {
    auto r = u_divrem(f, std::move(a), b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return u_monic(f, a);
}

// ----------------------------------------------------------------------------
// Sparse multivariate polynomials in a fixed number of variables, terms in
// decreasing lexicographic order of exponent vectors.

using Exps = std::vector<std::uint32_t>;

struct MTerm {
  Exps e;
  u64 c;
};

struct MPoly {
  std::size_t nvars = 0;
  std::vector<MTerm> terms;

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 && std::all_of(terms[0].e.begin(), terms[0].e.end(), [](auto x) { return x == 0; }));
  }
};

inline void sort_terms(MPoly& a) {
  std::sort(a.terms.begin(), a.terms.end(), [](const MTerm& x, const MTerm& y) { return x.e > y.e; });
}

inline MPoly m_monic(const Zp& f, MPoly a) {
  if (a.terms.empty()) return a;
  const u64 inv = f.inv(a.terms.front().c);
  for (auto& t : a.terms) t.c = f.mul(t.c, inv);
  return a;
}

/// Groups of terms sharing the exponents of all but the last variable; each
/// group is returned as a univariate polynomial in the last variable.
inline std::vector<std::pair<Exps, UPoly>> groups(const MPoly& a) {
  std::vector<std::pair<Exps, UPoly>> out;
  const std::size_t k = a.nvars;
  for (const auto& t : a.terms) {
    Exps prefix(t.e.begin(), t.e.begin() + static_cast<long>(k - 1));
    if (out.empty() || out.back().first != prefix) out.push_back({std::move(prefix), UPoly{}});
    auto& u = out.back().second;
    const auto d = t.e[k - 1];
    if (u.size() <= d) u.resize(d + 1, 0);
    u[d] = t.c;
  }
  return out;
}

inline MPoly from_groups(std::size_t k, const std::vector<std::pair<Exps, UPoly>>& gs) {
  MPoly r;
  r.nvars = k;
  for (const auto& [prefix, u] : gs) {
    for (int d = deg(u); d >= 0; --d) {
      if (u[d] == 0) continue;
      Exps e = prefix;
      e.push_back(static_cast<std::uint32_t>(d));
      r.terms.push_back({std::move(e), u[d]});
    }
  }
  return r;
}

inline MPoly lift_last(const UPoly& u, std::size_t k) {
  return from_groups(k, {{Exps(k - 1, 0), u}});
}

inline MPoly eval_last(const Zp& f, const MPoly& a, u64 x) {
  MPoly r;
  r.nvars = a.nvars - 1;
  for (auto& [prefix, u] : groups(a)) {
    const u64 v = u_eval(f, u, x);
    if (v) r.terms.push_back({std::move(prefix), v});
  }
  return r;
}

inline UPoly content_last(const Zp& f, const std::vector<std::pair<Exps, UPoly>>& gs) {
  UPoly c;
  for (const auto& g : gs) {
    c = u_gcd(f, std::move(c), g.second);
    if (deg(c) == 0) break;
  }
  return c;
}

inline std::size_t deg_last(const std::vector<std::pair<Exps, UPoly>>& gs) {
  int d = 0;
  for (const auto& g : gs) d = std::max(d, deg(g.second));
  return static_cast<std::size_t>(d);
}

/// Monic gcd in Z/p[x_0..x_{k-1}] under lexicographic order with x_0 most
/// significant. The last variable is eliminated by evaluation and recovered
/// by Newton interpolation.
inline MPoly pgcd(const Zp& f, const MPoly& a, const MPoly& b, std::mt19937_64& rng) {
  const std::size_t k = a.nvars;
  if (a.is_zero()) return m_monic(f, b);
  if (b.is_zero()) return m_monic(f, a);
  if (k == 1) {
    UPoly ua, ub;
    for (const auto& t : a.terms) {
      if (ua.size() <= t.e[0]) ua.resize(t.e[0] + 1, 0);
      ua[t.e[0]] = t.c;
    }
    for (const auto& t : b.terms) {
      if (ub.size() <= t.e[0]) ub.resize(t.e[0] + 1, 0);
      ub[t.e[0]] = t.c;
    }
    return lift_last(u_gcd(f, ua, ub), 1);
  }

  auto ga = groups(a), gb = groups(b);
  const UPoly ca = content_last(f, ga), cb = content_last(f, gb);
  const UPoly cont = u_gcd(f, ca, cb);
  for (auto& g : ga) g.second = u_divrem(f, g.second, ca).first;
  for (auto& g : gb) g.second = u_divrem(f, g.second, cb).first;
  const auto only_last = [k](const std::vector<std::pair<Exps, UPoly>>& gs) {
    return gs.size() == 1 && std::all_of(gs[0].first.begin(), gs[0].first.end(), [](auto x) { return x == 0; });
  };
  if (only_last(ga) || only_last(gb)) return m_monic(f, lift_last(cont, k));

  const MPoly pa = from_groups(k, ga), pb = from_groups(k, gb);
  const UPoly& la = ga.front().second;
  const UPoly& lb = gb.front().second;
  const UPoly lg = u_gcd(f, la, lb);
  const std::size_t bound = static_cast<std::size_t>(deg(lg)) + std::min(deg_last(ga), deg_last(gb)) + 1;

  std::map<Exps, UPoly> interp;
  UPoly modulus{1};
  Exps current_lm;
  std::size_t points = 0;
  std::uniform_int_distribution<u64> pick(1, f.p - 1);

  const auto finish = [&]() {
    std::vector<std::pair<Exps, UPoly>> gs(interp.rbegin(), interp.rend());
    const UPoly c = content_last(f, gs);
    for (auto& g : gs) g.second = u_divrem(f, g.second, c).first;
    MPoly h = from_groups(k, gs);
    // Multiply back the content gcd.
    auto hg = groups(h);
    for (auto& g : hg) g.second = u_mul(f, g.second, cont);
    return m_monic(f, from_groups(k, hg));
  };

  for (int attempts = 0; attempts < 100000; ++attempts) {
    const u64 x = pick(rng);
    if (u_eval(f, la, x) == 0 || u_eval(f, lb, x) == 0) continue;
    MPoly img = pgcd(f, eval_last(f, pa, x), eval_last(f, pb, x), rng);
    if (img.is_constant()) return m_monic(f, lift_last(cont, k));
    const Exps& lm = img.terms.front().e;
    const u64 scale = u_eval(f, lg, x);
    for (auto& t : img.terms) t.c = f.mul(t.c, scale);

    if (points == 0 || lm < current_lm) {
      current_lm = lm;
      interp.clear();
      for (const auto& t : img.terms) interp[t.e] = UPoly{t.c};
      modulus = UPoly{f.neg(x), 1};
      points = 1;
    } else if (lm > current_lm) {
      continue;
    } else {
      // Newton step: H += (img - H(x)) * modulus / modulus(x).
      std::map<Exps, u64> diff;
      for (const auto& [e, u] : interp) {
        const u64 v = u_eval(f, u, x);
        if (v) diff[e] = f.neg(v);
      }
      for (const auto& t : img.terms) diff[t.e] = f.add(diff[t.e], t.c);
      bool changed = false;
      const u64 inv_m = f.inv(u_eval(f, modulus, x));
      for (const auto& [e, v] : diff) {
        if (v == 0) continue;
        changed = true;
        auto& u = interp[e];
        u = u_add(f, u, u_scale(f, modulus, f.mul(v, inv_m)));
        if (u.empty()) interp.erase(e);
      }
      modulus = u_mul(f, modulus, UPoly{f.neg(x), 1});
      ++points;
      if (!changed) return finish();
    }
    if (points >= bound) return finish();
  }
  return finish();
}

}  // namespace diffalg::modp
