#pragma once

#include <atomic>
#include <string>

#include "diffalg/gcd.hpp"

namespace diffalg {

/// Abort guard on the total degree of any normalized numerator or
/// denominator; 0 disables the check.
inline std::atomic<unsigned> g_max_total_degree{0};

class DegreeLimit {
 public:
  explicit DegreeLimit(unsigned limit) : saved_(g_max_total_degree.exchange(limit)) {}
  ~DegreeLimit() { g_max_total_degree = saved_; }
  DegreeLimit(const DegreeLimit&) = delete;
  DegreeLimit& operator=(const DegreeLimit&) = delete;

 private:
  unsigned saved_;
};

inline void check_degree(const MultiPoly& p) {
  const unsigned limit = g_max_total_degree.load(std::memory_order_relaxed);
  if (limit != 0 && p.total_degree() > limit)
    throw Error(ErrorCode::DegreeLimitExceeded,
                "total degree " + std::to_string(p.total_degree()) + " exceeds " + std::to_string(limit));
}

/// Reduced fraction num/den: gcd(num, den) = 1 and den has leading
/// coefficient 1.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(const MultiPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const BigRat& c) : num_(c), den_(1) {}     // NOLINT
  RatFunc(long c) : num_(c), den_(1) {}              // NOLINT

  /// Trusts that the invariants already hold.
  static RatFunc from_reduced(MultiPoly num, MultiPoly den) {
    RatFunc r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
  }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  BigRat constant_value() const { return num_.constant_value(); }

  std::set<Var> vars() const {
    auto s = num_.vars();
    for (Var v : den_.vars()) s.insert(v);
    return s;
  }
  bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }

  RatFunc operator-() const { return from_reduced(-num_, den_); }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return from_checked(a.num_ + b.num_, MultiPoly(1));
    if (a.den_ == b.den_) return reduced_sum(a.num_ + b.num_, a.den_, a.den_);
    const MultiPoly g = poly_gcd(a.den_, b.den_);
    if (g.is_one()) return from_checked(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    const MultiPoly ad = *MultiPoly::divide(a.den_, g), bd = *MultiPoly::divide(b.den_, g);
    return reduced_sum(a.num_ * bd + b.num_ * ad, ad * b.den_, g);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const MultiPoly g1 = b.den_.is_one() ? MultiPoly(1) : poly_gcd(a.num_, b.den_);
    const MultiPoly g2 = a.den_.is_one() ? MultiPoly(1) : poly_gcd(b.num_, a.den_);
    const auto cut = [](const MultiPoly& p, const MultiPoly& g) { return g.is_one() ? p : *MultiPoly::divide(p, g); };
    return from_checked(cut(a.num_, g1) * cut(b.num_, g2), cut(a.den_, g2) * cut(b.den_, g1));
  }

  /// Inverse in the free polynomial ring (no algebraic relations).
  RatFunc inverse() const {
    if (is_zero()) throw Error(ErrorCode::ZeroDenominator, "inverse of zero");
    const BigRat lc = num_.leading_coef();
    return from_checked(den_.scaled(BigRat(1) / lc), num_.scaled(BigRat(1) / lc));
  }

  RatFunc scaled(const BigRat& c) const { return c.is_zero() ? RatFunc{} : from_reduced(num_.scaled(c), den_); }

  template <class F>
  RatFunc renamed(F&& map) const {
    return from_reduced(num_.renamed(map), den_.renamed(map));
  }

  std::size_t hash() const { return num_.hash() * 31u ^ den_.hash(); }

 private:
  friend RatFunc ratfunc_normalize(const MultiPoly& num, const MultiPoly& den);

  static RatFunc from_checked(MultiPoly num, MultiPoly den) {
    if (num.is_zero()) return {};
    if (!den.leading_coef().is_one()) {
      const BigRat inv = BigRat(1) / den.leading_coef();
      num = num.scaled(inv);
      den = den.scaled(inv);
    }
    check_degree(num);
    check_degree(den);
    return from_reduced(std::move(num), std::move(den));
  }

  /// num/den where any common factor must divide `g`.
  static RatFunc reduced_sum(MultiPoly num, MultiPoly den, const MultiPoly& g) {
    if (num.is_zero()) return {};
    const MultiPoly h = poly_gcd(num, g);
    if (!h.is_one()) {
      num = *MultiPoly::divide(num, h);
      den = *MultiPoly::divide(den, h);
    }
    return from_checked(std::move(num), std::move(den));
  }

  MultiPoly num_, den_;
};

/// Cancels common factors and makes the denominator monic.
inline RatFunc ratfunc_normalize(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "ratfunc_normalize with zero denominator");
  if (num.is_zero()) return RatFunc{};
  const MultiPoly g = poly_gcd(num, den);
  if (g.is_one()) return RatFunc::from_checked(num, den);
  return RatFunc::from_checked(*MultiPoly::divide(num, g), *MultiPoly::divide(den, g));
}

}  // namespace diffalg
