#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace catalyx {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConditionsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

/// Parses "p/q", integers, plain decimals and scientific notation, all as
/// exact base-10 rationals. "0.4" becomes 2/5, never a binary float.
inline Rational parse_rational(std::string_view s) {
  auto fail = [&]() -> Rational {
    throw ParseError("invalid number literal: '" + std::string(s) + "'");
  };
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (num.empty() || den.empty()) return fail();
    try {
      Integer n{std::string(num)};
      Integer d{std::string(den)};
      if (d == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
      return Rational(n, d);
    } catch (const std::exception&) {
      return fail();
    }
  }

  bool neg = false;
  std::string_view rest = s;
  if (rest.front() == '+' || rest.front() == '-') {
    neg = rest.front() == '-';
    rest.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  long exponent = 0;
  std::size_t i = 0;
  bool any = false;
  for (; i < rest.size() && rest[i] >= '0' && rest[i] <= '9'; ++i) {
    digits.push_back(rest[i]);
    any = true;
  }
  if (i < rest.size() && rest[i] == '.') {
    ++i;
    for (; i < rest.size() && rest[i] >= '0' && rest[i] <= '9'; ++i) {
      digits.push_back(rest[i]);
      ++frac_digits;
      any = true;
    }
  }
  if (!any) return fail();
  if (i < rest.size() && (rest[i] == 'e' || rest[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < rest.size() && (rest[i] == '+' || rest[i] == '-')) {
      eneg = rest[i] == '-';
      ++i;
    }
    if (i == rest.size()) return fail();
    long e = 0;
    for (; i < rest.size(); ++i) {
      if (rest[i] < '0' || rest[i] > '9') return fail();
      if (e > 1000000) return fail();
      e = e * 10 + (rest[i] - '0');
    }
    exponent = eneg ? -e : e;
  }
  if (i != rest.size()) return fail();

  std::size_t nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? std::string("0") : digits.substr(nz);
  Integer mant{digits};
  Rational value(mant);
  long net = exponent - frac_digits;
  Integer ten{10};
  if (net > 0) {
    value *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(net)));
  } else if (net < 0) {
    value /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-net)));
  }
  return neg ? Rational(-value) : value;
}

/// "p/q" when the denominator is nontrivial, plain integer text otherwise.
inline std::string rational_to_string(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

inline Rational pow_rational(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (base == 0) {
    if (e < 0) throw DomainError("zero base with negative exponent");
    return Rational(0);
  }
  unsigned mag = static_cast<unsigned>(e < 0 ? -e : e);
  Integer n = boost::multiprecision::pow(numerator(base), mag);
  Integer d = boost::multiprecision::pow(denominator(base), mag);
  return e > 0 ? Rational(n, d) : Rational(d, n);
}

inline Integer floor_int(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer quo = n / d;
  if (n % d != 0 && q < 0) --quo;
  return quo;
}

inline Integer ceil_int(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer quo = n / d;
  if (n % d != 0 && q > 0) ++quo;
  return quo;
}

/// Smallest multiple of 1/d that is >= q.
inline Rational ceil_to_grid(const Rational& q, const Integer& d) {
  return Rational(ceil_int(q * d), d);
}

inline Rational floor_to_grid(const Rational& q, const Integer& d) {
  return Rational(floor_int(q * d), d);
}

/// Simplest rational (smallest denominator, Stern-Brocot sense) in [lo, hi].
inline Rational simplest_in_interval(Rational lo, Rational hi) {
  if (lo > hi) throw DomainError("simplest_in_interval: empty interval");
  if (lo == hi) return lo;
  bool neg = false;
  if (hi < 0) {
    std::swap(lo, hi);
    lo = -lo;
    hi = -hi;
    neg = true;
  } else if (lo < 0) {
    return Rational(0);
  }
  // continued-fraction walk; iterative to keep stack flat
  std::vector<Integer> terms;
  Rational a = lo, b = hi;
  Rational result;
  while (true) {
    Integer ia = floor_int(a);
    if (a == ia) {
      terms.push_back(ia);
      break;
    }
    Integer ib = floor_int(b);
    if (ia < ib) {
      terms.push_back(ia + 1);
      break;
    }
    terms.push_back(ia);
    Rational fa = a - ia, fb = b - ia;
    a = 1 / fb;
    b = 1 / fa;
  }
  Rational acc(terms.back());
  for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
    acc = Rational(*it) + 1 / acc;
  }
  return neg ? Rational(-acc) : acc;
}

/// Exact cube root when q is a perfect cube of a rational.
inline bool rational_cbrt_exact(const Rational& q, Rational& out) {
  if (q < 0) return false;
  mpz_t r;
  mpz_init(r);
  bool exact_n = mpz_root(r, numerator(q).backend().data(), 3) != 0;
  Integer rn{r};
  bool exact_d = mpz_root(r, denominator(q).backend().data(), 3) != 0;
  Integer rd{r};
  mpz_clear(r);
  if (exact_n && exact_d) {
    out = Rational(rn, rd);
    return true;
  }
  return false;
}

inline Integer lcm_int(const Integer& a, const Integer& b) {
  return boost::multiprecision::lcm(a, b);
}

}  // namespace catalyx
