#pragma once

#include <utility>
#include <vector>

#include "catalyx/polynomial.hpp"
#include "catalyx/rational.hpp"
#include "catalyx/real.hpp"

namespace catalyx {

struct Cplx {
  Real re, im;
  Cplx() : re(0), im(0) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator/(const Cplx& a, const Cplx& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  Real abs2() const { return re * re + im * im; }
  Real abs() const { return sqrt(abs2()); }
};

namespace detail {

inline std::pair<Cplx, Cplx> horner_with_derivative(const std::vector<Real>& coeffs,
                                                    const Cplx& z) {
  Cplx p{coeffs.back(), Real(0)}, d{Real(0), Real(0)};
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
    d = d * z + p;
    p = p * z + Cplx{*it, Real(0)};
  }
  return {p, d};
}

/// Aberth-Ehrlich simultaneous iteration; p must be square-free.
inline std::vector<Cplx> aberth(const Polynomial& p, unsigned bits, const Real& tol) {
  const long n = p.degree();
  std::vector<Real> c;
  c.reserve(n + 1);
  for (const Rational& q : p.coeffs()) c.push_back(to_real(q));

  // Cauchy bound for the root radius
  Real lead = abs(c.back());
  Real radius = 0;
  for (long i = 0; i < n; ++i) {
    Real t = abs(c[i]) / lead;
    if (t > radius) radius = t;
  }
  radius += 1;

  std::vector<Cplx> z(n);
  Real pi;
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  for (long i = 0; i < n; ++i) {
    Real ang = (2 * pi * i) / n + Real(37) / 100;  // detuned from axes
    Real r = radius * (Real(55) + (i % 7)) / 100;
    z[i] = {r * cos(ang), r * sin(ang)};
  }

  const int max_iters = 220;
  for (int iter = 0; iter < max_iters; ++iter) {
    Real worst = 0;
    for (long i = 0; i < n; ++i) {
      auto [pv, dv] = horner_with_derivative(c, z[i]);
      if (pv.abs2() == 0) continue;
      Cplx w = pv / dv;
      Cplx sum{Real(0), Real(0)};
      for (long j = 0; j < n; ++j) {
        if (j == i) continue;
        sum = sum + Cplx{Real(1), Real(0)} / (z[i] - z[j]);
      }
      Cplx denom = Cplx{Real(1), Real(0)} - w * sum;
      Cplx step = w / denom;
      z[i] = z[i] - step;
      Real rel = step.abs() / (1 + z[i].abs());
      if (rel > worst) worst = rel;
    }
    if (worst < tol) break;
  }
  return z;
}

}  // namespace detail

/// Yun decomposition: returns f_1, f_2, ... with g = const * prod f_i^i and
/// each f_i square-free.
inline std::vector<Polynomial> yun_square_free(const Polynomial& g) {
  std::vector<Polynomial> out;
  if (g.degree() <= 0) return out;
  Polynomial d = g.derivative();
  Polynomial a = poly_gcd(g, d);
  if (a.degree() == 0) {
    out.push_back(g);
    return out;
  }
  a = a.scaled(Rational(1) / a.leading());
  Polynomial b = g.divide_exact(a);
  Polynomial c = d.divide_exact(a) - b.derivative();
  while (b.degree() > 0) {
    Polynomial f = poly_gcd(b, c);
    f = f.scaled(Rational(1) / f.leading());
    out.push_back(f);
    b = b.divide_exact(f);
    c = c.divide_exact(f) - b.derivative();
  }
  return out;
}

/// gamma = A s^r * prod(1 - xi_i s) * prod(1 - 2 xi'_i s + (xi'^2 + eta'^2) s^2)
struct FactorizedPoly {
  Rational leading;              // A, exact: the lowest nonzero coefficient
  long root0_multiplicity = 0;   // r
  std::vector<Real> linear_xi;   // xi_i = 1/rho for real roots rho
  std::vector<std::pair<Real, Real>> quadratic;  // (xi', eta'), eta' > 0
  unsigned precision_bits = 0;
  Real residual;                 // max coefficient error of the reconstruction
};

struct FactorSettings {
  unsigned precision_bits = 256;
  double tolerance = 1e-30;
  double real_axis_tolerance = 1e-25;
  int max_escalations = 3;
};

inline FactorizedPoly factor_real(const Polynomial& gamma, const FactorSettings& fs = {}) {
  if (gamma.is_zero()) throw DegenerateError("cannot factor the zero polynomial");

  std::vector<Rational> c = gamma.coeffs();
  std::size_t shift = 0;
  while (shift < c.size() && c[shift] == 0) ++shift;
  Polynomial g(std::vector<Rational>(c.begin() + shift, c.end()));

  FactorizedPoly out;
  out.root0_multiplicity = static_cast<long>(shift);
  out.leading = g.coeff(0);
  if (g.degree() == 0) {
    out.precision_bits = fs.precision_bits;
    out.residual = 0;
    return out;
  }

  auto square_free = yun_square_free(g);

  unsigned bits = fs.precision_bits;
  for (int attempt = 0;; ++attempt) {
    PrecisionScope scope(bits);
    Real tol = Real(fs.tolerance);
    std::vector<Cplx> roots;
    for (std::size_t idx = 0; idx < square_free.size(); ++idx) {
      if (square_free[idx].degree() <= 0) continue;
      auto zs = detail::aberth(square_free[idx], bits, tol);
      for (std::size_t k = 0; k <= idx; ++k)
        for (const Cplx& z : zs) roots.push_back(z);
    }

    FactorizedPoly fac = out;
    fac.precision_bits = bits;
    bool bad = false;
    Real axis_tol = Real(fs.real_axis_tolerance);
    std::vector<Cplx> upper;
    for (const Cplx& z : roots) {
      Real scale = 1 + z.abs();
      if (abs(z.im) <= axis_tol * scale) {
        if (z.re == 0) { bad = true; break; }
        fac.linear_xi.push_back(1 / z.re);
      } else if (z.im > 0) {
        upper.push_back(z);
      }
    }
    if (!bad) {
      for (const Cplx& z : upper) {
        Real m2 = z.abs2();
        fac.quadratic.emplace_back(z.re / m2, z.im / m2);
      }
      // reconstruction residual against the exact coefficients
      std::vector<Real> poly{Real(1)};
      auto mul_in = [&poly](const std::vector<Real>& f) {
        std::vector<Real> r(poly.size() + f.size() - 1, Real(0));
        for (std::size_t i = 0; i < poly.size(); ++i)
          for (std::size_t j = 0; j < f.size(); ++j) r[i + j] += poly[i] * f[j];
        poly = std::move(r);
      };
      for (const Real& xi : fac.linear_xi) mul_in({Real(1), -xi});
      for (auto& [xp, ep] : fac.quadratic) mul_in({Real(1), -2 * xp, xp * xp + ep * ep});
      Real lead = to_real(fac.leading);
      Real resid = 0, scale = 0;
      for (std::size_t i = 0; i <= static_cast<std::size_t>(g.degree()); ++i) {
        Real want = to_real(g.coeff(i));
        Real got = i < poly.size() ? poly[i] * lead : Real(0);
        Real err = abs(want - got);
        if (err > resid) resid = err;
        if (abs(want) > scale) scale = abs(want);
      }
      fac.residual = resid;
      if (resid <= Real(fs.tolerance) * (scale + 1) * 1000000) {
        if ((fac.linear_xi.size() + 2 * fac.quadratic.size()) ==
            static_cast<std::size_t>(g.degree()))
          return fac;
      }
    }
    if (attempt >= fs.max_escalations)
      throw NumericError("polynomial factorization did not converge");
    bits *= 2;
  }
}

}  // namespace catalyx
