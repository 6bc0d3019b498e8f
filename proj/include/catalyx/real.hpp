#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "catalyx/rational.hpp"

namespace catalyx {

using Real = boost::multiprecision::mpfr_float;

inline unsigned bits_to_digits(unsigned bits) {
  return std::max(12u, static_cast<unsigned>(bits * 0.30103) + 4);
}

/// Scoped working precision for mpfr-backed reals, in bits.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits_to_digits(bits));
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

inline Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

inline Real log_sum_exp(const std::vector<Real>& v) {
  Real m = v.front();
  for (const Real& t : v)
    if (t > m) m = t;
  Real s = 0;
  for (const Real& t : v) s += exp(t - m);
  return m + log(s);
}

}  // namespace catalyx
