#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diffalg/bigrat.hpp"
#include "diffalg/monomial.hpp"

namespace diffalg {

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// in strictly decreasing monomial order with no zero coefficients.
class MultiPoly {
 public:
  struct Term {
    Monomial mono;
    BigRat coef;
    friend bool operator==(const Term&, const Term&) = default;
  };

  MultiPoly() = default;
  MultiPoly(const BigRat& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Monomial{}, c});
  }
  MultiPoly(long c) : MultiPoly(BigRat(c)) {}  // NOLINT
  MultiPoly(int c) : MultiPoly(BigRat(c)) {}   // NOLINT

  static MultiPoly variable(Var v, std::uint32_t e = 1) {
    return monomial(Monomial::var(v, e), BigRat(1));
  }
  static MultiPoly monomial(Monomial m, BigRat c) {
    MultiPoly p;
    if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  /// Builds from unsorted terms; like monomials are combined.
  static MultiPoly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.mono > b.mono; });
    MultiPoly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
        if (p.terms_.back().coef.is_zero()) p.terms_.pop_back();
      } else if (!t.coef.is_zero()) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }
  /// Terms must already be strictly decreasing and nonzero.
  static MultiPoly from_sorted(std::vector<Term> terms) {
    MultiPoly p;
    p.terms_ = std::move(terms);
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef.is_one(); }
  BigRat constant_value() const { return is_zero() || !terms_.back().mono.is_one() ? BigRat(0) : terms_.back().coef; }

  const Term& leading_term() const { return terms_.front(); }
  const BigRat& leading_coef() const { return terms_.front().coef; }
  const Monomial& leading_monomial() const { return terms_.front().mono; }

  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  std::uint32_t degree_in(Var v) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
  }

  bool contains(Var v) const {
    return std::any_of(terms_.begin(), terms_.end(), [v](const Term& t) { return t.mono.contains(v); });
  }

  std::set<Var> vars() const {
    std::set<Var> s;
    for (const auto& t : terms_)
      for (const auto& [v, e] : t.mono.entries()) s.insert(v);
    return s;
  }

  /// Largest generator id occurring in any term.
  std::optional<Var> top_var() const {
    std::optional<Var> top;
    for (const auto& t : terms_)
      if (auto v = t.mono.top_var(); v && (!top || *v > *top)) top = v;
    return top;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, false); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return merge(a, b, true); }
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }

  MultiPoly scaled(const BigRat& c) const {
    if (c.is_zero()) return {};
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }
  MultiPoly shifted(const Monomial& m, const BigRat& c) const {
    if (c.is_zero()) return {};
    MultiPoly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.shifted(a.terms_[0].mono, a.terms_[0].coef);
    if (b.terms_.size() == 1) return a.shifted(b.terms_[0].mono, b.terms_[0].coef);
    const MultiPoly& small = a.size() <= b.size() ? a : b;
    const MultiPoly& big = a.size() <= b.size() ? b : a;
    std::unordered_map<Monomial, mpq_class, MonomialHash> acc;
    acc.reserve(std::min<std::size_t>(small.size() * big.size(), 1u << 22));
    mpq_class tmp;
    for (const auto& s : small.terms_) {
      for (const auto& t : big.terms_) {
        mpq_mul(tmp.get_mpq_t(), s.coef.raw().get_mpq_t(), t.coef.raw().get_mpq_t());
        auto [it, fresh] = acc.try_emplace(s.mono * t.mono);
        if (fresh) {
          it->second = tmp;
        } else {
          it->second += tmp;
        }
      }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (sgn(c) != 0) out.push_back({m, BigRat(c)});
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.mono > y.mono; });
    return from_sorted(std::move(out));
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly pow(unsigned e) const {
    MultiPoly result(1), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

  /// Exact quotient a / b, or nullopt if b does not divide a.
  static std::optional<MultiPoly> divide(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw Error(ErrorCode::ZeroDenominator, "polynomial division by zero");
    if (a.is_zero()) return MultiPoly{};
    if (b.size() == 1) {
      const auto& bt = b.terms_[0];
      const BigRat inv = BigRat(1) / bt.coef;
      MultiPoly q;
      q.terms_.reserve(a.size());
      for (const auto& t : a.terms_) {
        if (!bt.mono.divides(t.mono)) return std::nullopt;
        q.terms_.push_back({t.mono / bt.mono, t.coef * inv});
      }
      return q;
    }
    const auto& lt = b.terms_.front();
    const BigRat inv = BigRat(1) / lt.coef;
    std::map<Monomial, mpq_class, std::greater<>> rem;
    for (const auto& t : a.terms_) rem.emplace(t.mono, t.coef.raw());
    std::vector<Term> quot;
    mpq_class tmp;
    while (!rem.empty()) {
      auto top = rem.begin();
      if (!lt.mono.divides(top->first)) return std::nullopt;
      Monomial qm = top->first / lt.mono;
      BigRat qc = BigRat(top->second) * inv;
      rem.erase(top);
      for (std::size_t i = 1; i < b.terms_.size(); ++i) {
        const auto& bt = b.terms_[i];
        mpq_mul(tmp.get_mpq_t(), qc.raw().get_mpq_t(), bt.coef.raw().get_mpq_t());
        auto [it, fresh] = rem.try_emplace(bt.mono * qm);
        if (fresh) {
          it->second = -tmp;
        } else {
          it->second -= tmp;
          if (sgn(it->second) == 0) rem.erase(it);
        }
      }
      quot.push_back({std::move(qm), std::move(qc)});
    }
    return from_sorted(std::move(quot));
  }

  /// Coefficients with respect to v: result[k] is the coefficient of v^k.
  std::vector<MultiPoly> coefficients_in(Var v) const {
    std::vector<std::vector<Term>> parts(degree_in(v) + 1);
    for (const auto& t : terms_) {
      const auto e = t.mono.exponent(v);
      parts[e].push_back({e ? t.mono.without(v) : t.mono, t.coef});
    }
    std::vector<MultiPoly> out;
    out.reserve(parts.size());
    // Removing one generator from every term keeps the relative order.
    for (auto& p : parts) out.push_back(from_sorted(std::move(p)));
    return out;
  }

  /// Groups terms by their exponents on `vs`; keys are monomials in `vs`,
  /// values are the cofactors free of `vs`.
  std::map<Monomial, MultiPoly> coefficients_in(const std::set<Var>& vs) const {
    std::map<Monomial, std::vector<Term>> parts;
    for (const auto& t : terms_) {
      Monomial key, rest;
      for (const auto& [v, e] : t.mono.entries()) {
        if (vs.count(v)) {
          key *= Monomial::var(v, e);
        } else {
          rest *= Monomial::var(v, e);
        }
      }
      parts[key].push_back({std::move(rest), t.coef});
    }
    std::map<Monomial, MultiPoly> out;
    for (auto& [k, ts] : parts) out.emplace(k, from_sorted(std::move(ts)));
    return out;
  }

  MultiPoly partial(Var v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      const auto e = t.mono.exponent(v);
      if (e == 0) continue;
      Monomial m = t.mono.without(v);
      if (e > 1) m *= Monomial::var(v, e - 1);
      out.push_back({std::move(m), t.coef * BigRat(static_cast<long>(e))});
    }
    return from_terms(std::move(out));
  }

  /// Substitutes v := value.
  MultiPoly evaluated(Var v, const BigRat& value) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      const auto e = t.mono.exponent(v);
      if (e == 0) {
        out.push_back(t);
      } else {
        out.push_back({t.mono.without(v), t.coef * value.pow(e)});
      }
    }
    return from_terms(std::move(out));
  }

  /// Monomial dividing every term, with exponent-wise minimum.
  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.front().mono;
    for (const auto& t : terms_) {
      if (g.is_one()) break;
      g = Monomial::gcd(g, t.mono);
    }
    return g;
  }

  /// Copy scaled so the leading coefficient is 1.
  MultiPoly monic() const {
    if (is_zero() || leading_coef().is_one()) return *this;
    return scaled(BigRat(1) / leading_coef());
  }

  /// Positive rational c with (*this / c) having coprime integer coefficients
  /// and the sign of the leading coefficient kept.
  BigRat integer_content() const {
    if (is_zero()) return BigRat(1);
    mpz_class g = 0, l = 1;
    for (const auto& t : terms_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.raw().get_num_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.raw().get_den_mpz_t());
    }
    return BigRat(g, l);
  }

  template <class F>
  MultiPoly renamed(F&& map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.mono.renamed(map), t.coef});
    return from_terms(std::move(out));
  }

  std::size_t hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) h = h * 7919u ^ t.mono.hash() ^ (t.coef.hash() << 1);
    return h;
  }

 private:
  static MultiPoly merge(const MultiPoly& a, const MultiPoly& b, bool subtract) {
    MultiPoly r;
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->mono > j->mono)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->mono > i->mono) {
        r.terms_.push_back({j->mono, subtract ? -j->coef : j->coef});
        ++j;
      } else {
        BigRat c = subtract ? i->coef - j->coef : i->coef + j->coef;
        if (!c.is_zero()) r.terms_.push_back({i->mono, std::move(c)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

}  // namespace diffalg
