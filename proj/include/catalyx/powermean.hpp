#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catalyx/rational.hpp"
#include "catalyx/real.hpp"
#include "catalyx/sequences.hpp"

namespace catalyx {

struct AnalysisSettings {
  unsigned precision_bits = 128;
  unsigned max_precision_bits = 1024;
  int grid_points = 2048;
  double nu_cap = -512.0;  // finite floor of the sampling grid
  double sigma = 64.0;     // u = tanh(nu/sigma) compactification scale
  double rel_tolerance = 1e-12;
};

/// nu-th power mean, nu <= 1. Zeros force the mean to 0 for nu <= 0.
inline Real power_mean(const SchmidtVector& x, const Real& nu) {
  if (nu > 1) throw DomainError("power mean outside nu <= 1");
  const auto n = static_cast<long>(x.size());
  bool has_zero = !x.strictly_positive();
  if (nu == 0) {
    if (has_zero) return Real(0);
    Real acc = 0;
    for (const Rational& e : x.elems()) acc += log(to_real(e));
    return exp(acc / n);
  }
  if (has_zero && nu < 0) return Real(0);
  std::vector<Real> terms;
  terms.reserve(x.size());
  for (const Rational& e : x.elems()) {
    if (e == 0) continue;  // 0^nu = 0 for nu > 0
    terms.push_back(nu * log(to_real(e)));
  }
  Real lse = log_sum_exp(terms);
  return exp((lse - log(Real(n))) / nu);
}

inline Rational power_mean_neg_inf(const SchmidtVector& x) { return sort_ascending(x)[0]; }

struct VidalResult {
  Rational p;
  std::size_t argmin_m = 0;  // 1-based index attaining the minimum
};

/// min over m with F_m(y) > 0 of F_m(x)/F_m(y), exact.
inline VidalResult vidal_probability(const SchmidtVector& x, const SchmidtVector& y) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  if (y.sum() == 0) throw DegenerateError("target sequence sums to zero");
  std::vector<Rational> xs = x.elems(), ys = y.elems();
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  Rational fx = 0, fy = 0;
  std::optional<Rational> best;
  std::size_t best_m = 0;
  for (std::size_t m = 0; m < xs.size(); ++m) {
    fx += xs[m];
    fy += ys[m];
    if (fy == 0) continue;
    Rational ratio = fx / fy;
    if (!best || ratio < *best) {
      best = ratio;
      best_m = m + 1;
    }
  }
  return {*best, best_m};
}

enum class Attainability { ATTAINABLE, NOT_ATTAINABLE, CERTAIN, BOUNDARY_UNKNOWN };

inline const char* to_string(Attainability a) {
  switch (a) {
    case Attainability::ATTAINABLE: return "ATTAINABLE";
    case Attainability::NOT_ATTAINABLE: return "NOT_ATTAINABLE";
    case Attainability::CERTAIN: return "CERTAIN";
    case Attainability::BOUNDARY_UNKNOWN: return "BOUNDARY_UNKNOWN";
  }
  return "?";
}

enum class ArgminKind { NEG_INF_ENDPOINT, INTERIOR, ONE_ENDPOINT };

struct ConversionReport {
  Rational p_vidal;
  std::size_t vidal_argmin_m = 0;
  Real p_cat;        // min(1, raw_ratio_min)
  Real raw_ratio_min;
  ArgminKind argmin_kind = ArgminKind::ONE_ENDPOINT;
  Real argmin_nu;    // meaningful for INTERIOR
  Attainability attainability = Attainability::BOUNDARY_UNKNOWN;
  double tolerance = 0;
  unsigned precision_bits = 0;
  std::string diagnostics;
};

struct CurveSample {
  bool nu_neg_inf = false;
  Real nu;
  bool ratio_inf = false;
  Real ratio;
};

struct PowerMeanCurve {
  std::vector<CurveSample> samples;
  double nu_cap = 0;
  int grid_points = 0;
  unsigned precision_bits = 0;
};

namespace detail {

// log of A_nu(x)/A_nu(y) at finite nu != 0 (log arguments precomputed)
class LogRatio {
 public:
  LogRatio(const SchmidtVector& x, const SchmidtVector& y) {
    n_ = static_cast<long>(x.size());
    for (const Rational& e : x.elems())
      if (e > 0) lx_.push_back(log(to_real(e)));
    for (const Rational& e : y.elems())
      if (e > 0) ly_.push_back(log(to_real(e)));
    y_zeros_ = ly_.size() != y.size();
    x_zeros_ = lx_.size() != x.size();
    for (const Rational& e : x.elems())
      if (e > 0) sum_log_x_ += log(to_real(e));
    for (const Rational& e : y.elems())
      if (e > 0) sum_log_y_ += log(to_real(e));
  }

  bool y_has_zeros() const { return y_zeros_; }

  // returns {is_infinite, log_ratio}
  std::pair<bool, Real> operator()(const Real& nu) const {
    if (nu == 0) {
      if (y_zeros_) return {true, Real(0)};
      if (x_zeros_) throw DomainError("geometric mean of zero-bearing source");
      return {false, (sum_log_x_ - sum_log_y_) / n_};
    }
    if (nu < 0 && y_zeros_) return {true, Real(0)};
    std::vector<Real> tx, ty;
    tx.reserve(lx_.size());
    ty.reserve(ly_.size());
    for (const Real& l : lx_) tx.push_back(nu * l);
    for (const Real& l : ly_) ty.push_back(nu * l);
    return {false, (log_sum_exp(tx) - log_sum_exp(ty)) / nu};
  }

 private:
  long n_ = 0;
  bool y_zeros_ = false, x_zeros_ = false;
  std::vector<Real> lx_, ly_;
  Real sum_log_x_ = 0, sum_log_y_ = 0;
};

struct MinimizeOutcome {
  Rational endpoint_one;                  // r(1), exact
  std::optional<Rational> endpoint_neg_inf;  // absent => +infinity (y has zeros)
  bool has_interior = false;
  Real interior_min_log;
  Real interior_argmin_nu;
  std::vector<CurveSample> samples;
};

inline MinimizeOutcome minimize_ratio(const SchmidtVector& x, const SchmidtVector& y,
                                      const AnalysisSettings& s, bool want_samples) {
  MinimizeOutcome out;
  out.endpoint_one = x.sum() / y.sum();
  Rational y_min = sort_ascending(y)[0];
  if (y_min > 0) out.endpoint_neg_inf = sort_ascending(x)[0] / y_min;

  LogRatio lr(x, y);
  const double sigma = s.sigma;
  double nu_lo = lr.y_has_zeros() ? 0.0 : s.nu_cap;
  Real u_lo = tanh(Real(nu_lo) / sigma);
  Real u_hi = tanh(Real(1) / sigma);
  const int g = std::max(8, s.grid_points);

  std::vector<Real> nus, logs;
  nus.reserve(g);
  logs.reserve(g);
  for (int i = 1; i < g; ++i) {
    Real u = u_lo + (u_hi - u_lo) * i / g;
    Real nu = sigma * atanh(u);
    auto [inf, v] = lr(nu);
    if (inf) continue;
    nus.push_back(nu);
    logs.push_back(v);
    if (want_samples) out.samples.push_back({false, nu, false, exp(v)});
  }
  if (nus.empty()) return out;

  auto eval_u = [&](const Real& u) {
    auto [inf, v] = lr(sigma * atanh(u));
    return inf ? Real(1e9) : v;
  };

  bool found = false;
  Real best_log, best_nu;
  Real phi = (sqrt(Real(5)) - 1) / 2;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    bool left_ok = i == 0 || logs[i] <= logs[i - 1];
    bool right_ok = i + 1 == nus.size() || logs[i] <= logs[i + 1];
    if (!(left_ok && right_ok)) continue;
    Real a = tanh((i == 0 ? nus[0] : nus[i - 1]) / sigma);
    Real b = tanh((i + 1 == nus.size() ? nus.back() : nus[i + 1]) / sigma);
    Real c = b - phi * (b - a), d = a + phi * (b - a);
    Real fc = eval_u(c), fd = eval_u(d);
    for (int it = 0; it < 140; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = eval_u(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = eval_u(d);
      }
    }
    Real um = (a + b) / 2;
    Real fm = eval_u(um);
    if (fm > fc) { fm = fc; um = c; }
    if (fm > fd) { fm = fd; um = d; }
    if (!found || fm < best_log) {
      found = true;
      best_log = fm;
      best_nu = sigma * atanh(um);
    }
  }
  if (found) {
    out.has_interior = true;
    out.interior_min_log = best_log;
    out.interior_argmin_nu = best_nu;
  }
  return out;
}

}  // namespace detail

inline PowerMeanCurve ratio_curve(const SchmidtVector& x, const SchmidtVector& y,
                                  const AnalysisSettings& s = {}) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");
  PrecisionScope scope(s.precision_bits);
  auto mo = detail::minimize_ratio(x, y, s, true);
  PowerMeanCurve curve;
  CurveSample first;
  first.nu_neg_inf = true;
  if (mo.endpoint_neg_inf) {
    first.ratio = to_real(*mo.endpoint_neg_inf);
  } else {
    first.ratio_inf = true;
  }
  curve.samples.push_back(first);
  for (auto& smp : mo.samples) curve.samples.push_back(smp);
  CurveSample last;
  last.nu = 1;
  last.ratio = to_real(mo.endpoint_one);
  curve.samples.push_back(last);
  curve.nu_cap = s.nu_cap;
  curve.grid_points = s.grid_points;
  curve.precision_bits = s.precision_bits;
  return curve;
}

inline ConversionReport catalytic_probability(const SchmidtVector& x, const SchmidtVector& y,
                                              const AnalysisSettings& settings = {}) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");
  if (y.sum() == 0) throw DegenerateError("target sequence sums to zero");

  ConversionReport rep;
  auto vr = vidal_probability(x, y);
  rep.p_vidal = vr.p;
  rep.vidal_argmin_m = vr.argmin_m;
  rep.tolerance = settings.rel_tolerance;

  AnalysisSettings s = settings;
  while (true) {
    PrecisionScope scope(s.precision_bits);
    rep.precision_bits = s.precision_bits;
    const Real tau = Real(s.rel_tolerance);
    auto mo = detail::minimize_ratio(x, y, s, false);

    Real end_one = to_real(mo.endpoint_one);
    Real log_end_one = log(end_one);
    std::optional<Real> log_end_minf;
    if (mo.endpoint_neg_inf) log_end_minf = log(to_real(*mo.endpoint_neg_inf));

    Real best_end_log = log_end_one;
    ArgminKind end_kind = ArgminKind::ONE_ENDPOINT;
    if (log_end_minf && *log_end_minf < best_end_log) {
      best_end_log = *log_end_minf;
      end_kind = ArgminKind::NEG_INF_ENDPOINT;
    }
    Rational best_end_exact =
        end_kind == ArgminKind::ONE_ENDPOINT ? mo.endpoint_one : *mo.endpoint_neg_inf;
    bool can_escalate = s.precision_bits < s.max_precision_bits;
    bool endpoints_ge_one = best_end_exact >= 1;  // exact rational test

    if (endpoints_ge_one && (!mo.has_interior || mo.interior_min_log >= 0)) {
      rep.raw_ratio_min =
          mo.has_interior && mo.interior_min_log < best_end_log ? exp(mo.interior_min_log)
                                                                : to_real(best_end_exact);
      rep.argmin_kind = end_kind;
      rep.p_cat = Real(1);
      rep.attainability = Attainability::CERTAIN;
      return rep;
    }
    if (endpoints_ge_one && mo.interior_min_log >= -tau) {
      // interior grazes 1 from below within tolerance: not resolvable
      if (can_escalate) {
        s.precision_bits *= 2;
        s.grid_points *= 2;
        continue;
      }
      rep.raw_ratio_min = exp(mo.interior_min_log);
      rep.argmin_kind = ArgminKind::INTERIOR;
      rep.argmin_nu = mo.interior_argmin_nu;
      rep.p_cat = rep.raw_ratio_min;
      rep.attainability = Attainability::BOUNDARY_UNKNOWN;
      rep.diagnostics = "minimum within tolerance of 1 at maximum precision";
      return rep;
    }

    bool interior_strictly_below = mo.has_interior && mo.interior_min_log < best_end_log - tau;
    bool interior_ambiguous =
        mo.has_interior && !interior_strictly_below && mo.interior_min_log < best_end_log + tau;

    if (interior_strictly_below) {
      rep.raw_ratio_min = exp(mo.interior_min_log);
      rep.argmin_kind = ArgminKind::INTERIOR;
      rep.argmin_nu = mo.interior_argmin_nu;
      rep.p_cat = rep.raw_ratio_min > 1 ? Real(1) : rep.raw_ratio_min;
      rep.attainability = Attainability::NOT_ATTAINABLE;
      return rep;
    }
    if (interior_ambiguous) {
      if (can_escalate) {
        s.precision_bits *= 2;
        s.grid_points *= 2;
        continue;
      }
      rep.raw_ratio_min = exp(std::min(mo.interior_min_log, best_end_log));
      rep.argmin_kind = end_kind;
      rep.p_cat = rep.raw_ratio_min;
      rep.attainability = Attainability::BOUNDARY_UNKNOWN;
      rep.diagnostics = "interior minimum indistinguishable from endpoint at max precision";
      return rep;
    }

    // minimum only at an endpoint, with exact value < 1
    rep.raw_ratio_min = to_real(best_end_exact);
    rep.p_cat = rep.raw_ratio_min;
    rep.argmin_kind = end_kind;
    if (end_kind == ArgminKind::NEG_INF_ENDPOINT) {
      rep.attainability = Attainability::ATTAINABLE;
    } else {
      // minimizer at nu = 1: at lambda = p_cat the scaled sums are equal,
      // which is the regime the theorem leaves open
      rep.attainability = Attainability::BOUNDARY_UNKNOWN;
      rep.diagnostics = "minimum at nu = 1 endpoint (equal scaled sums)";
    }
    return rep;
  }
}

enum class ConditionsVerdict { HOLDS, FAILS, BOUNDARY };

struct ConditionsResult {
  ConditionsVerdict verdict = ConditionsVerdict::BOUNDARY;
  std::optional<Real> witness_nu;
  bool sum_exceeds = false;  // sum x > sum y, the theorem's standing assumption
  Real ratio_min;
  unsigned precision_bits = 0;
};

/// Checks A_nu(x) > A_nu(y) over the open interval (-inf, 1).
inline ConditionsResult check_supertrumping_conditions(const SchmidtVector& x,
                                                       const SchmidtVector& y,
                                                       const AnalysisSettings& settings = {}) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");

  ConditionsResult res;
  res.sum_exceeds = x.sum() > y.sum();

  if (sort_ascending(x).elems() == sort_ascending(y).elems()) {
    res.verdict = ConditionsVerdict::FAILS;
    res.witness_nu = Real(0);  // equal sequences: strictness fails everywhere
    res.ratio_min = 1;
    return res;
  }

  AnalysisSettings s = settings;
  while (true) {
    PrecisionScope scope(s.precision_bits);
    res.precision_bits = s.precision_bits;
    const Real tau = Real(s.rel_tolerance);
    auto mo = detail::minimize_ratio(x, y, s, false);
    detail::LogRatio lr(x, y);

    Real raw_log = log(to_real(mo.endpoint_one));
    if (mo.endpoint_neg_inf) {
      Real l = log(to_real(*mo.endpoint_neg_inf));
      if (l < raw_log) raw_log = l;
    }
    bool interior_min_is_global = mo.has_interior && mo.interior_min_log < raw_log;
    if (interior_min_is_global) raw_log = mo.interior_min_log;
    res.ratio_min = exp(raw_log);

    if (raw_log > tau) {
      res.verdict = ConditionsVerdict::HOLDS;
      return res;
    }
    if (raw_log < -tau) {
      // find an interior witness
      if (interior_min_is_global) {
        res.verdict = ConditionsVerdict::FAILS;
        res.witness_nu = mo.interior_argmin_nu;
        return res;
      }
      // endpoint dips below 1: walk inward until the ratio is certifiably low
      bool from_one = log(to_real(mo.endpoint_one)) <= raw_log + tau;
      Real nu = from_one ? Real(1) : Real(s.nu_cap);
      Real step = from_one ? Real(-1) : Real(1);
      for (int it = 0; it < 80; ++it) {
        step /= 2;
        Real cand = nu + step;
        if (from_one && cand >= 1) continue;
        auto [inf, v] = lr(cand);
        if (!inf && v < -tau / 2) {
          res.verdict = ConditionsVerdict::FAILS;
          res.witness_nu = cand;
          return res;
        }
      }
      if (s.precision_bits < s.max_precision_bits) {
        s.precision_bits *= 2;
        s.grid_points *= 2;
        continue;
      }
      res.verdict = ConditionsVerdict::BOUNDARY;
      return res;
    }
    if (s.precision_bits < s.max_precision_bits) {
      s.precision_bits *= 2;
      s.grid_points *= 2;
      continue;
    }
    res.verdict = ConditionsVerdict::BOUNDARY;
    return res;
  }
}

}  // namespace catalyx
