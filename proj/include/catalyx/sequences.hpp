#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "catalyx/rational.hpp"

namespace catalyx {

/// Finite sequence of nonnegative exact rationals; at least one positive.
class SchmidtVector {
 public:
  explicit SchmidtVector(std::vector<Rational> elems) : elems_(std::move(elems)) {
    if (elems_.empty()) throw ShapeError("empty coefficient sequence");
    bool any_pos = false;
    for (const Rational& e : elems_) {
      if (e < 0) throw DomainError("negative coefficient");
      if (e > 0) any_pos = true;
    }
    if (!any_pos) throw DegenerateError("all coefficients are zero");
  }
  SchmidtVector(std::initializer_list<Rational> elems)
      : SchmidtVector(std::vector<Rational>(elems)) {}

  static SchmidtVector parse(const std::vector<std::string>& strs) {
    std::vector<Rational> v;
    v.reserve(strs.size());
    for (const auto& s : strs) v.push_back(parse_rational(s));
    return SchmidtVector(std::move(v));
  }

  std::size_t size() const { return elems_.size(); }
  const Rational& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Rational>& elems() const { return elems_; }

  bool strictly_positive() const {
    return std::all_of(elems_.begin(), elems_.end(), [](const Rational& e) { return e > 0; });
  }
  std::size_t zero_count() const {
    return static_cast<std::size_t>(
        std::count_if(elems_.begin(), elems_.end(), [](const Rational& e) { return e == 0; }));
  }
  Rational sum() const {
    Rational s = 0;
    for (const Rational& e : elems_) s += e;
    return s;
  }
  Rational min() const { return *std::min_element(elems_.begin(), elems_.end()); }
  Rational max() const { return *std::max_element(elems_.begin(), elems_.end()); }

  SchmidtVector scaled(const Rational& k) const {
    std::vector<Rational> v;
    v.reserve(elems_.size());
    for (const Rational& e : elems_) v.push_back(e * k);
    return SchmidtVector(std::move(v));
  }

 private:
  std::vector<Rational> elems_;
};

inline SchmidtVector sort_ascending(const SchmidtVector& x) {
  std::vector<Rational> v = x.elems();
  std::sort(v.begin(), v.end());
  return SchmidtVector(std::move(v));
}

/// F_m(x): sum of the m smallest elements, 1 <= m <= n.
inline Rational f_m(const SchmidtVector& x, std::size_t m) {
  if (m < 1 || m > x.size()) throw DomainError("f_m index out of range");
  std::vector<Rational> v = x.elems();
  std::sort(v.begin(), v.end());
  Rational s = 0;
  for (std::size_t i = 0; i < m; ++i) s += v[i];
  return s;
}

inline bool supermajorizes(const SchmidtVector& x, const SchmidtVector& y) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  std::vector<Rational> xs = x.elems(), ys = y.elems();
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  Rational fx = 0, fy = 0;
  for (std::size_t m = 0; m < xs.size(); ++m) {
    fx += xs[m];
    fy += ys[m];
    if (fx < fy) return false;
  }
  return true;
}

inline bool majorizes(const SchmidtVector& x, const SchmidtVector& y) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  return x.sum() == y.sum() && supermajorizes(x, y);
}

/// Multiset of positive values with integer multiplicities.
class Catalyst {
 public:
  using Entry = std::pair<Rational, Integer>;

  explicit Catalyst(std::vector<Entry> entries) {
    std::map<Rational, Integer> merged;
    for (auto& [v, m] : entries) {
      if (v <= 0) throw DomainError("catalyst values must be positive");
      if (m < 1) throw DomainError("catalyst multiplicities must be >= 1");
      merged[v] += m;
    }
    if (merged.empty()) throw DegenerateError("empty catalyst");
    entries_.assign(merged.begin(), merged.end());
  }
  Catalyst(std::initializer_list<Entry> entries) : Catalyst(std::vector<Entry>(entries)) {}

  static Catalyst identity() { return Catalyst({{Rational(1), Integer(1)}}); }

  const std::vector<Entry>& entries() const { return entries_; }
  Integer dimension() const {
    Integer d = 0;
    for (const auto& [v, m] : entries_) d += m;
    return d;
  }

  SchmidtVector expand() const {
    std::vector<Rational> flat;
    for (const auto& [v, m] : entries_) {
      if (m > Integer(1000000)) throw ResourceCapError("catalyst too large to expand");
      for (Integer i = 0; i < m; ++i) flat.push_back(v);
    }
    return SchmidtVector(std::move(flat));
  }

 private:
  std::vector<Entry> entries_;
};

/// All pairwise products x_i * c_l, multiplicities respected.
inline SchmidtVector tensor(const SchmidtVector& x, const Catalyst& c) {
  std::vector<Rational> out;
  for (const Rational& xi : x.elems()) {
    for (const auto& [v, m] : c.entries()) {
      if (m > Integer(1000000)) throw ResourceCapError("catalyst too large to expand");
      for (Integer i = 0; i < m; ++i) out.push_back(xi * v);
    }
  }
  return SchmidtVector(std::move(out));
}

/// H_x(t) = sum_i (t - x_i)^+ as a piecewise linear convex function.
class CharacteristicFunction {
 public:
  explicit CharacteristicFunction(const SchmidtVector& x) {
    std::vector<Rational> v = x.elems();
    std::sort(v.begin(), v.end());
    for (const Rational& e : v) {
      if (!points_.empty() && points_.back().first == e) {
        ++points_.back().second;
      } else {
        points_.emplace_back(e, 1);
      }
    }
    prefix_count_.reserve(points_.size());
    prefix_sum_.reserve(points_.size());
    long cnt = 0;
    Rational sum = 0;
    for (const auto& [val, c] : points_) {
      cnt += c;
      sum += val * c;
      prefix_count_.push_back(cnt);
      prefix_sum_.push_back(sum);
    }
  }

  Rational operator()(const Rational& t) const {
    if (t < 0) throw DomainError("characteristic function needs t >= 0");
    // indexes with value < t contribute (t - x_i)
    std::size_t lo = 0, hi = points_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (points_[mid].first < t)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) return Rational(0);
    return Rational(prefix_count_[lo - 1]) * t - prefix_sum_[lo - 1];
  }

  const std::vector<std::pair<Rational, long>>& breakpoints() const { return points_; }
  long total_count() const { return prefix_count_.empty() ? 0 : prefix_count_.back(); }

 private:
  std::vector<std::pair<Rational, long>> points_;
  std::vector<long> prefix_count_;
  std::vector<Rational> prefix_sum_;
};

inline Rational characteristic_eval(const SchmidtVector& x, const Rational& t) {
  return CharacteristicFunction(x)(t);
}

/// Removes values shared by x and y, once per shared multiplicity.
inline std::pair<SchmidtVector, SchmidtVector> strip_common(const SchmidtVector& x,
                                                            const SchmidtVector& y) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  std::map<Rational, long> ycount;
  for (const Rational& e : y.elems()) ++ycount[e];
  std::vector<Rational> xr, yr;
  std::map<Rational, long> removed;
  for (const Rational& e : x.elems()) {
    auto it = ycount.find(e);
    if (it != ycount.end() && it->second > 0) {
      --it->second;
      ++removed[e];
    } else {
      xr.push_back(e);
    }
  }
  for (const Rational& e : y.elems()) {
    auto it = removed.find(e);
    if (it != removed.end() && it->second > 0) {
      --it->second;
    } else {
      yr.push_back(e);
    }
  }
  if (xr.empty()) throw DegenerateError("sequences are equal up to ordering");
  return {SchmidtVector(std::move(xr)), SchmidtVector(std::move(yr))};
}

}  // namespace catalyx
