#pragma once

#include <random>
#include <vector>

#include "diffalg/derivation.hpp"

namespace diffalg::testing {

using Rng = std::mt19937_64;

inline Tower base_x() { return Tower{}.extend("x", BaseVar{Element(1)}); }

inline int rand_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random polynomial in the given generators with small integer coefficients.
inline Element rand_poly(const Tower& t, Rng& rng, const std::vector<Var>& vars, int terms, int max_deg) {
  Element acc = t.number(0);
  for (int i = 0; i < terms; ++i) {
    int c = rand_int(rng, -5, 5);
    if (c == 0) c = 1;
    Element m = t.number(c);
    const int d = rand_int(rng, 0, max_deg);
    for (int k = 0; k < d && !vars.empty(); ++k) m = m * t.gen(vars[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(vars.size()) - 1))]);
    acc = acc + m;
  }
  return acc;
}

/// Random nonzero element: a quotient of two random polynomials.
inline Element rand_elem(const Tower& t, Rng& rng, const std::vector<Var>& vars, int terms = 3, int max_deg = 2) {
  for (;;) {
    const Element n = rand_poly(t, rng, vars, terms, max_deg);
    const Element d = rand_int(rng, 0, 1) ? rand_poly(t, rng, vars, 2, max_deg) : t.number(1);
    if (n.is_zero() || d.is_zero()) continue;
    return n / d;
  }
}

inline std::vector<Var> all_vars(const Tower& t) {
  std::vector<Var> v;
  for (Var g = 0; g < t.size(); ++g) v.push_back(g);
  return v;
}

/// Random tower over Q(x) with the given number of extensions.
inline Tower random_tower(Rng& rng, int levels, bool allow_sqrt = true) {
  Tower t = base_x();
  for (int i = 0; i < levels; ++i) {
    const std::string name = "g" + std::to_string(i);
    const auto vars = all_vars(t);
    const int kind = rand_int(rng, 0, allow_sqrt ? 5 : 4);
    try {
    switch (kind) {
      case 0: t = t.extend(name, Exponential{rand_elem(t, rng, vars, 2, 1)}); break;
      case 1: t = t.extend(name, Primitive{t.number(0), LogTag{t.gen(0) + rand_elem(t, rng, vars, 2, 1)}, {}}); break;
      case 2: t = t.extend(name, Primitive{rand_elem(t, rng, vars, 2, 1), {}, {}}); break;
      case 3: t = t.extend(name, EllipticFunction{rand_elem(t, rng, vars, 2, 1), t.number(rand_int(rng, -3, 3)), t.number(rand_int(rng, 1, 3))}); break;
      case 4: t = t.extend(name, LambertW{rand_elem(t, rng, vars, 2, 1)}); break;
      default: {
        // Square root of a non-square: x plus something nonconstant.
        const Element r = t.gen(0) + rand_poly(t, rng, vars, 2, 1) * t.gen(0) * t.gen(0);
        t = t.extend(name, AlgebraicSqrt{r.is_zero() ? t.gen(0) : r});
        break;
      }
    }
    } catch (const Error&) {
      --i;  // degenerate random data; draw again
    }
  }
  return t;
}

}  // namespace diffalg::testing

#include "diffalg/liouville.hpp"

namespace diffalg::testing {

/// Random form over t: log terms everywhere, plus first-kind terms on the
/// elliptic pairs of the tower.
inline LiouvilleForm random_form(const Tower& t, Rng& rng, const std::vector<Var>& vars, int terms = 2) {
  LiouvilleForm f{rand_elem(t, rng, vars, 2, 2), {}};
  for (int i = 0; i < terms; ++i) {
    const Element c = t.number(BigRat(rand_int(rng, -3, 3) * 2 + 1, rand_int(rng, 1, 3)));
    f.terms.push_back({c, LogPhi{rand_elem(t, rng, vars, 2, 1)}});
  }
  for (Var g = 0; g < t.size(); ++g) {
    if (const auto* ef = std::get_if<EllipticFunction>(&t.kind(g)); ef && rand_int(rng, 0, 1)) {
      f.terms.push_back({t.number(rand_int(rng, 1, 3)), W1Phi{t.gen(g), t.gen(g + 1), ef->a, ef->b}});
    }
  }
  return f;
}

}  // namespace diffalg::testing
