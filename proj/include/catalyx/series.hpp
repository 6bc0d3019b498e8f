#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "catalyx/polynomial.hpp"
#include "catalyx/rational.hpp"
#include "catalyx/real.hpp"

namespace catalyx {

struct FactorInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One multiplicand of the series a(s): either a finite polynomial with
/// nonnegative coefficients or the geometric series sum ratio^m s^m.
struct SeriesFactor {
  Polynomial poly;
  bool geometric = false;
  Rational ratio;

  static SeriesFactor polynomial(Polynomial p) {
    SeriesFactor f;
    f.poly = std::move(p);
    return f;
  }
  static SeriesFactor geometric_series(Rational r) {
    SeriesFactor f;
    f.geometric = true;
    f.ratio = std::move(r);
    return f;
  }
};

/// Truncated nonnegative series: exact head, exact tail sum, value bound.
struct NonnegSeries {
  std::vector<Rational> head;  // a_0 .. a_{M-1}
  Rational tail_sum;           // sum_{m >= M} a_m
  std::size_t truncation_m = 0;
  Rational value_at_r;         // a(R), exact closed form

  Rational head_value(const Rational& r) const {
    Rational acc = 0;
    for (auto it = head.rbegin(); it != head.rend(); ++it) acc = acc * r + *it;
    return acc;
  }
};

/// Smallest-denominator rational in [lo, hi] given as exact rationals.
inline Rational rationalize_in(const Rational& lo, const Rational& hi) {
  return simplest_in_interval(lo, hi);
}

/// Directed upper rationalization of a real: simplest rational in
/// [v, v + window], guaranteed >= the stored approximation.
inline Rational rationalize_up(const Real& v, const Real& window) {
  Rational lo, hi;
  mpfr_get_q(lo.backend().data(), v.backend().data());
  Real top = v + window;
  mpfr_get_q(hi.backend().data(), top.backend().data());
  return simplest_in_interval(lo, hi);
}

inline Rational rationalize_down(const Real& v, const Real& window) {
  return -rationalize_up(-v, window);
}

struct LinearSeriesPair {
  SeriesFactor a;
  Polynomial b;       // exact when xi is rationalized; scaffolding otherwise
  Rational xi_used;
};

/// Series pair for the factor (1 - xi s) on (0, R].
inline LinearSeriesPair series_for_linear(const Rational& xi, const Rational& r) {
  if (xi <= 0) {
    return {SeriesFactor::polynomial(Polynomial::one()), Polynomial{Rational(1), -xi}, xi};
  }
  if (xi * r >= 1)
    throw FactorInfeasibleError("linear factor has its root inside (0, R]");
  return {SeriesFactor::geometric_series(xi), Polynomial::one(), xi};
}

inline LinearSeriesPair series_for_linear(const Real& xi, const Rational& r) {
  if (xi <= 0) {
    Rational xh = rationalize_up(xi, abs(xi) / 1000000 + Real(1e-24));
    if (xh > 0) xh = 0;
    return series_for_linear(xh, r);
  }
  Real gap = (1 / to_real(r) - xi) / 2;
  if (gap <= 0) throw FactorInfeasibleError("linear factor has its root inside (0, R]");
  Rational xh = rationalize_up(xi, std::min(gap, xi / 1000000 + Real(1e-24)));
  return series_for_linear(xh, r);
}

struct QuadSeriesPair {
  Polynomial a, b;
  long n_choice = 0;   // binomial N; 0 when a = 1 or the truncated form is used
  long k_cut = -1;     // partial-sum cut index; -1 for the binomial form
  Rational xi_used, lambda_used;
};

inline Integer binom(long n, long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Minimal N with (1/4) * C(2N, N)^(1/N) >= xi^2 / lambda, exactly.
inline long minimal_binomial_n(const Rational& xi, const Rational& lam, long n_cap = 1 << 24) {
  Rational q = xi * xi / lam;
  if (q >= 1) throw FactorInfeasibleError("quadratic factor needs lambda > xi^2");
  Rational q_pow = 1;
  for (long n = 1; n <= n_cap; ++n) {
    q_pow *= 4 * q;  // (4q)^n
    if (Rational(binom(2 * n, n)) >= q_pow) return n;
  }
  throw BudgetError("binomial N selection exceeded cap");
}

/// Series pair for (1 - 2 xi s + lambda s^2) with lambda > xi^2:
/// a = sum_{k<2N} (1 + lambda s^2)^k (2 xi s)^(2N-1-k), b = (1+lambda s^2)^2N - (2 xi s)^2N.
inline QuadSeriesPair series_for_quadratic(const Rational& xi, const Rational& lam) {
  if (lam <= xi * xi) throw FactorInfeasibleError("quadratic factor needs lambda > xi^2");
  Polynomial factor{Rational(1), -2 * xi, lam};
  if (xi <= 0) {
    QuadSeriesPair out{Polynomial::one(), factor, 0, -1, xi, lam};
    return out;
  }
  long n = minimal_binomial_n(xi, lam);
  // (1 + lambda s^2)^k by iterated multiplication
  Polynomial base{Rational(1), Rational(0), lam};
  std::vector<Polynomial> powers(2 * n + 1);
  powers[0] = Polynomial::one();
  for (long k = 1; k <= 2 * n; ++k) powers[k] = powers[k - 1] * base;
  Polynomial a;
  Rational two_xi = 2 * xi;
  for (long k = 0; k < 2 * n; ++k) {
    Polynomial term = powers[k] * Polynomial::monomial(static_cast<std::size_t>(2 * n - 1 - k),
                                                       pow_rational(two_xi, 2 * n - 1 - k));
    a = a + term;
  }
  Polynomial b = powers[2 * n] - Polynomial::monomial(static_cast<std::size_t>(2 * n),
                                                      pow_rational(two_xi, 2 * n));
  if (!(a * factor - b).is_zero()) throw NumericError("quadratic series identity failed");
  return {std::move(a), std::move(b), n, -1, xi, lam};
}

/// Partial-sum alternative: a = truncation of 1/(1 - 2 xi s + lambda s^2)
/// just before its first negative coefficient; then
/// b = a * factor = 1 - v_{K+1} s^(K+1) + lambda v_K s^(K+2) is nonnegative.
inline QuadSeriesPair series_for_quadratic_truncated(const Rational& xi, const Rational& lam) {
  if (lam <= xi * xi) throw FactorInfeasibleError("quadratic factor needs lambda > xi^2");
  Polynomial factor{Rational(1), -2 * xi, lam};
  if (xi <= 0) return {Polynomial::one(), factor, 0, -1, xi, lam};
  std::vector<Rational> v{Rational(1), 2 * xi};
  while (true) {
    Rational nxt = 2 * xi * v[v.size() - 1] - lam * v[v.size() - 2];
    if (nxt < 0) break;
    v.push_back(nxt);
    if (v.size() > 2000000) throw BudgetError("partial-sum quadratic series too long");
  }
  long k_cut = static_cast<long>(v.size()) - 1;
  Polynomial a{std::vector<Rational>(v.begin(), v.end())};
  Polynomial b = a * factor;
  for (const Rational& c : b.coeffs())
    if (c < 0) throw NumericError("partial-sum series lost nonnegativity");
  return {std::move(a), std::move(b), 0, k_cut, xi, lam};
}

/// Mass a(1) of a factor's series (for route selection); throws on divergence.
inline Rational factor_mass_at_one(const SeriesFactor& f) {
  if (!f.geometric) return f.poly(Rational(1));
  if (f.ratio >= 1) throw DomainError("geometric factor diverges at s = 1");
  return 1 / (1 - f.ratio);
}

/// Exact product of factor series. Head coefficients are computed by
/// convolving the polynomial part and folding in geometric recurrences.
class FactorProduct {
 public:
  explicit FactorProduct(std::vector<SeriesFactor> factors) {
    poly_ = Polynomial::one();
    for (auto& f : factors) {
      if (f.geometric)
        ratios_.push_back(f.ratio);
      else
        poly_ = poly_ * f.poly;
    }
  }

  const Polynomial& poly_part() const { return poly_; }
  const std::vector<Rational>& ratios() const { return ratios_; }

  std::vector<Rational> head(std::size_t m_count) const {
    std::vector<Rational> a(m_count, Rational(0));
    for (std::size_t i = 0; i < m_count && i <= static_cast<std::size_t>(poly_.degree()); ++i)
      a[i] = poly_.coeff(i);
    for (const Rational& xi : ratios_) {
      Rational acc = 0;
      for (std::size_t m = 0; m < m_count; ++m) {
        acc = acc * xi + a[m];
        a[m] = acc;
      }
    }
    return a;
  }

  template <typename PointT>
  PointT value_at(const PointT& r) const {
    PointT acc = poly_.eval_at(r);
    for (const Rational& xi : ratios_) {
      PointT denom = PointT(Rational(1)) - r * PointT(xi);
      acc = acc * inverse_of(denom);
    }
    return acc;
  }

  Rational value_at(const Rational& r) const {
    Rational acc = poly_(r);
    for (const Rational& xi : ratios_) {
      Rational denom = 1 - xi * r;
      if (denom <= 0) throw DomainError("series diverges at evaluation point");
      acc /= denom;
    }
    return acc;
  }

  bool convergent_at(const Rational& r) const {
    for (const Rational& xi : ratios_)
      if (xi * r >= 1) return false;
    return true;
  }

 private:
  template <typename PointT>
  static PointT inverse_of(const PointT& v) {
    return v.inverse();
  }
  Polynomial poly_;
  std::vector<Rational> ratios_;
};

/// Product of certified factors truncated so the tail at R stays below
/// eps_target / 2; the tail sum A is exact via the closed forms.
inline NonnegSeries multiply_series(const std::vector<SeriesFactor>& factors, const Rational& r,
                                    const Rational& eps_target,
                                    std::size_t m_cap = 2000000) {
  if (eps_target <= 0) throw DomainError("eps_target must be positive");
  FactorProduct prod(factors);
  if (!prod.convergent_at(r)) throw FactorInfeasibleError("factor series diverges at R");
  const Rational a_at_r = prod.value_at(r);
  const long poly_deg = prod.poly_part().degree();

  std::size_t m = 1;
  std::vector<Rational> head;
  while (true) {
    head = prod.head(m);
    Rational head_r = 0;
    for (auto it = head.rbegin(); it != head.rend(); ++it) head_r = head_r * r + *it;
    Rational tail = a_at_r - head_r;
    if (2 * tail < eps_target) break;
    if (m >= m_cap) throw BudgetError("series truncation exceeded cap");
    if (prod.ratios().empty() && static_cast<long>(m) > poly_deg) break;
    m = m <= 64 ? m + 1 : m * 2;
  }

  NonnegSeries out;
  out.truncation_m = m;
  out.head = std::move(head);
  out.value_at_r = a_at_r;
  if (prod.convergent_at(Rational(1))) {
    Rational at_one = prod.value_at(Rational(1));
    Rational head_one = 0;
    for (auto it = out.head.rbegin(); it != out.head.rend(); ++it) head_one = head_one + *it;
    out.tail_sum = at_one - head_one;
  } else {
    throw DomainError("tail sum undefined: series diverges at s = 1");
  }
  for (const Rational& c : out.head)
    if (c < 0) throw NumericError("product series lost nonnegativity");
  return out;
}

enum class RoundingMode { TOWARD_ZERO, TOWARD_PLUS_INF };

/// Coefficientwise directed rounding of reals onto the 1/denominator grid;
/// negative roundoff clamps to zero. The output need not satisfy any exact
/// identity: downstream exact verification is the gate.
inline std::vector<Rational> rationalize(const std::vector<Real>& coeffs,
                                         const Integer& denominator_bound,
                                         RoundingMode mode = RoundingMode::TOWARD_ZERO) {
  std::vector<Rational> out;
  out.reserve(coeffs.size());
  for (const Real& c : coeffs) {
    if (c <= 0) {
      out.emplace_back(0);
      continue;
    }
    Rational exact;
    mpfr_get_q(exact.backend().data(), c.backend().data());
    out.push_back(mode == RoundingMode::TOWARD_ZERO ? floor_to_grid(exact, denominator_bound)
                                                    : ceil_to_grid(exact, denominator_bound));
  }
  return out;
}

}  // namespace catalyx
