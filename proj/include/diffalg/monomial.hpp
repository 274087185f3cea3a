#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

namespace diffalg {

/// Generator index inside a tower; later generators have larger ids.
using Var = std::uint32_t;

/// Power product of generators. Only nonzero exponents are stored, sorted by
/// generator id.
class Monomial {
 public:
  using Entry = std::pair<Var, std::uint32_t>;
  using Storage = boost::container::small_vector<Entry, 6>;

  Monomial() = default;
  static Monomial var(Var v, std::uint32_t e = 1) {
    Monomial m;
    if (e != 0) {
      m.entries_.push_back({v, e});
      m.degree_ = e;
    }
    return m;
  }
  /// Builds from arbitrary (var, exponent) pairs; duplicates are summed.
  static Monomial from_pairs(std::initializer_list<Entry> pairs) {
    Monomial m;
    for (const auto& [v, e] : pairs) m *= var(v, e);
    return m;
  }

  const Storage& entries() const { return entries_; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return entries_.empty(); }

  std::uint32_t exponent(Var v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, Var x) { return e.first < x; });
    return (it != entries_.end() && it->first == v) ? it->second : 0;
  }

  bool contains(Var v) const { return exponent(v) != 0; }

  /// Largest generator id with a nonzero exponent.
  std::optional<Var> top_var() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.back().first;
  }

  Monomial& operator*=(const Monomial& o) {
    if (o.entries_.empty()) return *this;
    if (entries_.empty()) return *this = o;
    Storage out;
    out.reserve(entries_.size() + o.entries_.size());
    auto a = entries_.cbegin();
    auto b = o.entries_.cbegin();
    while (a != entries_.cend() || b != o.entries_.cend()) {
      if (b == o.entries_.cend() || (a != entries_.cend() && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == entries_.cend() || b->first < a->first) {
        out.push_back(*b++);
      } else {
        out.push_back({a->first, a->second + b->second});
        ++a;
        ++b;
      }
    }
    entries_ = std::move(out);
    degree_ += o.degree_;
    return *this;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }

  bool divides(const Monomial& o) const {
    if (degree_ > o.degree_) return false;
    auto b = o.entries_.begin();
    for (const auto& [v, e] : entries_) {
      while (b != o.entries_.end() && b->first < v) ++b;
      if (b == o.entries_.end() || b->first != v || b->second < e) return false;
    }
    return true;
  }

  /// this / o; requires o.divides(*this).
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    auto b = o.entries_.begin();
    for (const auto& [v, e] : entries_) {
      std::uint32_t sub = 0;
      if (b != o.entries_.end() && b->first == v) sub = (b++)->second;
      if (e > sub) r.entries_.push_back({v, e - sub});
    }
    r.degree_ = degree_ - o.degree_;
    return r;
  }

  /// Componentwise minimum.
  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto j = b.entries_.begin();
    for (const auto& [v, e] : a.entries_) {
      while (j != b.entries_.end() && j->first < v) ++j;
      if (j != b.entries_.end() && j->first == v) {
        const auto m = std::min(e, j->second);
        r.entries_.push_back({v, m});
        r.degree_ += m;
      }
    }
    return r;
  }

  /// Copy with the exponent of v set to zero.
  Monomial without(Var v) const {
    Monomial r;
    for (const auto& en : entries_) {
      if (en.first == v) continue;
      r.entries_.push_back(en);
      r.degree_ += en.second;
    }
    return r;
  }

  /// Copy with every generator renamed through map (must be increasing on the
  /// generators present).
  template <class F>
  Monomial renamed(F&& map) const {
    Monomial r;
    for (const auto& [v, e] : entries_) {
      r.entries_.push_back({map(v), e});
      r.degree_ += e;
    }
    std::sort(r.entries_.begin(), r.entries_.end());
    return r;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.entries_ == b.entries_;
  }

  /// Graded order, ties broken lexicographically with later generators
  /// ranking higher.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    auto i = a.entries_.rbegin(), j = b.entries_.rbegin();
    for (; i != a.entries_.rend() && j != b.entries_.rend(); ++i, ++j) {
      if (i->first != j->first) return i->first <=> j->first;
      if (i->second != j->second) return i->second <=> j->second;
    }
    if (i != a.entries_.rend()) return std::strong_ordering::greater;
    if (j != b.entries_.rend()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = degree_;
    for (const auto& [v, e] : entries_) h = h * 1000003u ^ (std::size_t{v} << 20 | e);
    return h;
  }

 private:
  Storage entries_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace diffalg
