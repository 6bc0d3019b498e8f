#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catalyx/rational.hpp"

namespace catalyx {

struct DivisibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense univariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

  static Polynomial one() { return Polynomial({Rational(1)}); }
  static Polynomial monomial(std::size_t k, Rational coeff = Rational(1)) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = std::move(coeff);
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& s) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
  }

  template <typename T>
  T eval_at(const T& s) const {
    T acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + T(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j] != 0) v[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Polynomial(std::move(v));
  }
  Polynomial scaled(const Rational& k) const {
    std::vector<Rational> v = c_;
    for (auto& e : v) e *= k;
    return Polynomial(std::move(v));
  }

  /// Euclidean remainder of *this by b.
  Polynomial rem(const Polynomial& b) const {
    if (b.is_zero()) throw DomainError("polynomial remainder by zero");
    std::vector<Rational> r = c_;
    while (r.size() >= b.c_.size()) {
      Rational q = r.back() / b.c_.back();
      std::size_t off = r.size() - b.c_.size();
      for (std::size_t i = 0; i < b.c_.size(); ++i) r[off + i] -= q * b.c_[i];
      while (!r.empty() && r.back() == 0) r.pop_back();
      if (r.empty()) break;
    }
    return Polynomial(std::move(r));
  }

  /// Exact quotient; throws when b does not divide *this.
  Polynomial divide_exact(const Polynomial& b) const {
    if (b.is_zero()) throw DomainError("division by zero polynomial");
    std::vector<Rational> r = c_, q(c_.size(), Rational(0));
    while (r.size() >= b.c_.size()) {
      Rational f = r.back() / b.c_.back();
      std::size_t off = r.size() - b.c_.size();
      q[off] = f;
      for (std::size_t i = 0; i < b.c_.size(); ++i) r[off + i] -= f * b.c_[i];
      while (!r.empty() && r.back() == 0) r.pop_back();
      if (r.empty()) break;
    }
    if (!r.empty()) throw DivisibilityError("polynomial division leaves a remainder");
    return Polynomial(std::move(q));
  }

  /// Multiplies by the positive constant clearing denominators and content.
  Polynomial primitive() const {
    if (is_zero()) return *this;
    Integer den = 1;
    for (const Rational& e : c_) den = lcm_int(den, denominator(e));
    Integer gcd_num = 0;
    for (const Rational& e : c_) {
      Integer scaled_num = numerator(e * den);
      gcd_num = boost::multiprecision::gcd(gcd_num, scaled_num);
    }
    if (gcd_num == 0) gcd_num = 1;
    Rational k = Rational(den, gcd_num);
    return scaled(k < 0 ? -k : k);
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " + ";
      s += rational_to_string(c_[i]);
      if (i >= 1) s += "*s^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Quotient gamma with (1-s)*gamma(s) = p(s); requires p(1) = 0 exactly.
inline Polynomial divide_by_one_minus_s(const Polynomial& p) {
  if (p.is_zero()) return Polynomial();
  Rational run = 0;
  std::vector<Rational> out;
  out.reserve(p.coeffs().size());
  for (const Rational& c : p.coeffs()) {
    run += c;
    out.push_back(run);
  }
  if (out.back() != 0) throw DivisibilityError("polynomial does not vanish at s = 1");
  out.pop_back();
  return Polynomial(std::move(out));
}

inline Polynomial poly_gcd(Polynomial a, Polynomial b) {
  a = a.primitive();
  b = b.primitive();
  while (!b.is_zero()) {
    Polynomial r = a.rem(b).primitive();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Polynomial square_free_part(const Polynomial& p) {
  if (p.degree() <= 1) return p;
  Polynomial g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p;
  return p.divide_exact(g.scaled(Rational(1) / g.leading()));
}

/// Sturm chain with primitive-integer normalization at each step.
inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain;
  chain.push_back(p.primitive());
  Polynomial d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d.primitive());
  while (true) {
    Polynomial r = chain[chain.size() - 2].rem(chain.back());
    if (r.is_zero()) break;
    // primitive() rescales by a positive constant, so the negation sticks
    chain.push_back(r.scaled(Rational(-1)).primitive());
  }
  return chain;
}

namespace detail {
inline int sign_at_zero_plus(const Polynomial& p) {
  for (const Rational& c : p.coeffs())
    if (c != 0) return c.sign();
  return 0;
}

template <typename Point>
int sign_at(const Polynomial& p, const Point& t) {
  return p.eval_at(t).sign();
}
inline int sign_at(const Polynomial& p, const Rational& t) { return p(t).sign(); }

inline int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}
}  // namespace detail

/// Number of distinct real roots of square-free p in (0, R]; R may be any
/// exactly comparable point type (rational or a cubic-field element).
template <typename Point>
long count_roots_in_0R(const std::vector<Polynomial>& chain, const Point& r) {
  std::vector<int> s0, sr;
  s0.reserve(chain.size());
  sr.reserve(chain.size());
  for (const Polynomial& p : chain) {
    s0.push_back(detail::sign_at_zero_plus(p));
    sr.push_back(detail::sign_at(p, r));
  }
  return detail::variations(s0) - detail::variations(sr);
}

struct PositivityWitness {
  Rational lo, hi;  // interval containing a root or a nonpositive value
};

struct PositivityResult {
  bool positive = false;
  std::optional<PositivityWitness> witness;
};

/// Decides gamma(s) > 0 for all s in (0, R] exactly via Sturm sequences.
/// The zero multiplicity at s = 0 is stripped first (s^r > 0 on the interval).
template <typename Point>
PositivityResult certify_positive_on(const Polynomial& gamma, const Point& r_point,
                                     const Rational& r_upper_for_witness) {
  if (gamma.is_zero()) throw DegenerateError("zero polynomial");
  std::vector<Rational> c = gamma.coeffs();
  std::size_t shift = 0;
  while (shift < c.size() && c[shift] == 0) ++shift;
  Polynomial g(std::vector<Rational>(c.begin() + shift, c.end()));

  if (detail::sign_at(g, r_point) <= 0) {
    return {false, PositivityWitness{r_upper_for_witness, r_upper_for_witness}};
  }
  Polynomial sf = square_free_part(g);
  auto chain = sturm_chain(sf);
  long roots = count_roots_in_0R(chain, r_point);
  if (roots == 0) return {true, std::nullopt};

  // isolate one root (or nonpositive point) for the witness
  Rational lo = 0, hi = r_upper_for_witness;
  for (int iter = 0; iter < 80; ++iter) {
    Rational mid = (lo + hi) / 2;
    if (g(mid) <= 0) return {false, PositivityWitness{mid, mid}};
    std::vector<int> smid;
    smid.reserve(chain.size());
    for (const Polynomial& p : chain) smid.push_back(detail::sign_at(p, mid));
    std::vector<int> slo;
    slo.reserve(chain.size());
    if (lo == 0) {
      for (const Polynomial& p : chain) slo.push_back(detail::sign_at_zero_plus(p));
    } else {
      for (const Polynomial& p : chain) slo.push_back(detail::sign_at(p, lo));
    }
    long left = detail::variations(slo) - detail::variations(smid);
    if (left > 0)
      hi = mid;
    else
      lo = mid;
    if ((hi - lo) < r_upper_for_witness / Rational(Integer(1) << 48)) break;
  }
  return {false, PositivityWitness{lo, hi}};
}

inline PositivityResult certify_positive_on(const Polynomial& gamma, const Rational& r) {
  if (r <= 0) throw DomainError("positivity interval needs R > 0");
  return certify_positive_on(gamma, r, r);
}

}  // namespace catalyx
