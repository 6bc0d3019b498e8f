#pragma once

#include <memory>
#include <string>
#include <utility>

#include "catalyx/rational.hpp"
#include "catalyx/real.hpp"

namespace catalyx {

/// The ordered field Q(w) with w = theta^(1/3) for a rational theta > 0.
/// When theta is a perfect cube, w is rational and elements collapse.
struct OmegaFieldData {
  Rational theta;
  bool is_cube = false;
  Rational omega_rational;  // valid when is_cube
};

using OmegaField = std::shared_ptr<const OmegaFieldData>;

inline OmegaField make_omega_field(Rational theta) {
  if (theta <= 0) throw DomainError("omega field needs theta > 0");
  OmegaFieldData d;
  d.theta = std::move(theta);
  d.is_cube = rational_cbrt_exact(d.theta, d.omega_rational);
  return std::make_shared<const OmegaFieldData>(std::move(d));
}

/// Exact element a0 + a1*w + a2*w^2. A null field tags a plain rational.
class FieldElem {
 public:
  FieldElem() : a0_(0), a1_(0), a2_(0) {}
  /*implicit*/ FieldElem(Rational r) : a0_(std::move(r)), a1_(0), a2_(0) {}
  FieldElem(Rational a0, Rational a1, Rational a2, OmegaField fld)
      : a0_(std::move(a0)), a1_(std::move(a1)), a2_(std::move(a2)), fld_(std::move(fld)) {
    if (!fld_ && (a1_ != 0 || a2_ != 0))
      throw DomainError("field element with omega terms needs a field");
  }

  static FieldElem omega_power(const OmegaField& fld, long e) {
    if (!fld) throw DomainError("omega_power without a field");
    if (fld->is_cube) return FieldElem(pow_rational(fld->omega_rational, e));
    long q = e >= 0 ? e / 3 : -((-e + 2) / 3);
    long r = e - 3 * q;
    Rational base = pow_rational(fld->theta, q);
    Rational c[3] = {Rational(0), Rational(0), Rational(0)};
    c[r] = base;
    return FieldElem(c[0], c[1], c[2], fld);
  }

  const Rational& c0() const { return a0_; }
  const Rational& c1() const { return a1_; }
  const Rational& c2() const { return a2_; }
  const OmegaField& field() const { return fld_; }
  bool pure_rational() const { return a1_ == 0 && a2_ == 0; }

  friend FieldElem operator+(const FieldElem& x, const FieldElem& y) {
    return FieldElem(x.a0_ + y.a0_, x.a1_ + y.a1_, x.a2_ + y.a2_, merged(x, y));
  }
  friend FieldElem operator-(const FieldElem& x, const FieldElem& y) {
    return FieldElem(x.a0_ - y.a0_, x.a1_ - y.a1_, x.a2_ - y.a2_, merged(x, y));
  }
  FieldElem operator-() const { return FieldElem(-a0_, -a1_, -a2_, fld_); }
  friend FieldElem operator*(const FieldElem& x, const FieldElem& y) {
    OmegaField f = merged(x, y);
    if (x.pure_rational()) return y.scaled(x.a0_);
    if (y.pure_rational()) return x.scaled(y.a0_);
    const Rational& t = f->theta;
    Rational c0 = x.a0_ * y.a0_ + t * (x.a1_ * y.a2_ + x.a2_ * y.a1_);
    Rational c1 = x.a0_ * y.a1_ + x.a1_ * y.a0_ + t * (x.a2_ * y.a2_);
    Rational c2 = x.a0_ * y.a2_ + x.a1_ * y.a1_ + x.a2_ * y.a0_;
    return FieldElem(std::move(c0), std::move(c1), std::move(c2), std::move(f));
  }
  FieldElem scaled(const Rational& q) const {
    return FieldElem(a0_ * q, a1_ * q, a2_ * q, fld_);
  }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }

  bool is_zero() const { return a0_ == 0 && a1_ == 0 && a2_ == 0; }

  int sign() const {
    if (pure_rational()) return a0_.sign();
    if (fld_->is_cube) return collapse_rational().sign();
    // sign equals the sign of the field norm: the two conjugate factors are a
    // nonzero complex pair, so their product is strictly positive.
    const Rational& t = fld_->theta;
    Rational n = a0_ * a0_ * a0_ + t * (a1_ * a1_ * a1_) + t * t * (a2_ * a2_ * a2_) -
                 3 * t * a0_ * a1_ * a2_;
    return n.sign();
  }

  friend bool operator<(const FieldElem& x, const FieldElem& y) { return (x - y).sign() < 0; }
  friend bool operator<=(const FieldElem& x, const FieldElem& y) { return (x - y).sign() <= 0; }
  friend bool operator==(const FieldElem& x, const FieldElem& y) { return (x - y).is_zero(); }

  /// adj with  x * adj(x) = norm(x), a rational.
  FieldElem adjoint() const {
    if (!fld_ || fld_->is_cube)
      throw DomainError("adjoint defined for generic cubic elements only");
    const Rational& t = fld_->theta;
    return FieldElem(a0_ * a0_ - t * a1_ * a2_, t * a2_ * a2_ - a0_ * a1_,
                     a1_ * a1_ - a0_ * a2_, fld_);
  }

  FieldElem inverse() const {
    if (is_zero()) throw DomainError("field inverse of zero");
    if (pure_rational()) return FieldElem(Rational(1) / a0_, Rational(0), Rational(0), fld_);
    if (fld_->is_cube) return FieldElem(Rational(1) / collapse_rational());
    const Rational& t = fld_->theta;
    Rational norm = a0_ * a0_ * a0_ + t * (a1_ * a1_ * a1_) + t * t * (a2_ * a2_ * a2_) -
                    3 * t * a0_ * a1_ * a2_;
    return adjoint().scaled(Rational(1) / norm);
  }

  Real to_real() const {
    if (pure_rational()) return catalyx::to_real(a0_);
    if (fld_->is_cube) return catalyx::to_real(collapse_rational());
    Real w = cbrt(catalyx::to_real(fld_->theta));
    return catalyx::to_real(a0_) + w * (catalyx::to_real(a1_) + w * catalyx::to_real(a2_));
  }

  std::string str() const {
    std::string s = rational_to_string(a0_);
    if (a1_ != 0) s += " + (" + rational_to_string(a1_) + ")w";
    if (a2_ != 0) s += " + (" + rational_to_string(a2_) + ")w^2";
    return s;
  }

 private:
  Rational collapse_rational() const {
    const Rational& w = fld_->omega_rational;
    return a0_ + a1_ * w + a2_ * w * w;
  }
  static OmegaField merged(const FieldElem& x, const FieldElem& y) {
    if (!x.fld_) return y.fld_;
    if (!y.fld_) return x.fld_;
    if (x.fld_ != y.fld_ && x.fld_->theta != y.fld_->theta)
      throw DomainError("mixing elements from different omega fields");
    return x.fld_;
  }

  Rational a0_, a1_, a2_;
  OmegaField fld_;
};

}  // namespace catalyx
