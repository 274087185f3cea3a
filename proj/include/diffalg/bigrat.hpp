#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "diffalg/errors.hpp"

namespace diffalg {

using BigInt = mpz_class;

/// Exact rational number in lowest terms with positive denominator.
class BigRat {
 public:
  BigRat() = default;
  BigRat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  BigRat(int v) : q_(static_cast<long>(v)) {}  // NOLINT
  explicit BigRat(const BigInt& v) : q_(v) {}
  BigRat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(ErrorCode::ZeroDenominator, "rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit BigRat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  explicit BigRat(double d) : q_(d) {}

  /// Parses "n" or "n/d" in base 10.
  static BigRat parse(std::string_view text) {
    mpq_class q;
    if (q.set_str(std::string(text), 10) != 0)
      throw Error(ErrorCode::ParseError, "bad rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0) throw Error(ErrorCode::ZeroDenominator, "rational literal with zero denominator");
    q.canonicalize();
    return BigRat(q);
  }

  BigInt numerator() const { return q_.get_num(); }
  BigInt denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  std::string str() const { return q_.get_str(10); }

  BigRat operator-() const { return BigRat(mpq_class(-q_)); }
  BigRat& operator+=(const BigRat& o) { q_ += o.q_; return *this; }
  BigRat& operator-=(const BigRat& o) { q_ -= o.q_; return *this; }
  BigRat& operator*=(const BigRat& o) { q_ *= o.q_; return *this; }
  BigRat& operator/=(const BigRat& o) {
    if (o.is_zero()) throw Error(ErrorCode::ZeroDenominator, "rational division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend BigRat operator+(BigRat a, const BigRat& b) { return a += b; }
  friend BigRat operator-(BigRat a, const BigRat& b) { return a -= b; }
  friend BigRat operator*(BigRat a, const BigRat& b) { return a *= b; }
  friend BigRat operator/(BigRat a, const BigRat& b) { return a /= b; }

  friend bool operator==(const BigRat& a, const BigRat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const BigRat& a, const BigRat& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  BigRat pow(unsigned e) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
    return BigRat(mpq_class(n, d));
  }

  BigRat abs() const { return BigRat(mpq_class(::abs(q_))); }

  std::size_t hash() const {
    return std::hash<unsigned long>{}(mpz_get_ui(q_.get_num_mpz_t())) * 31u ^
           std::hash<unsigned long>{}(mpz_get_ui(q_.get_den_mpz_t()));
  }

 private:
  mpq_class q_;
};

}  // namespace diffalg
