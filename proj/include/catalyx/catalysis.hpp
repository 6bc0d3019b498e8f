#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "catalyx/cubic_field.hpp"
#include "catalyx/polynomial.hpp"
#include "catalyx/powermean.hpp"
#include "catalyx/rational.hpp"
#include "catalyx/real.hpp"
#include "catalyx/roots.hpp"
#include "catalyx/sequences.hpp"
#include "catalyx/series.hpp"
#include "catalyx/simplex.hpp"

namespace catalyx {

struct SynthesisSettings {
  AnalysisSettings analysis;
  unsigned factor_bits = 256;
  double factor_tolerance = 1e-30;
  Integer grid_denominator{64};
  Rational factor_mass_budget{1000};
  Rational product_mass_budget{200000};
  long paper_n_cap = 24;
  Integer max_product_size{10000000};
  int max_retries = 5;
  double lambda_margin = 0.99;
  double theta_shave = 1e-6;
  double cover_margin_frac = 0.25;
  long cover_extra_length = 96;
  std::size_t m_cap = 200000;
};

/// Catalyst whose values are integer powers of omega (omega^3 rational).
/// A null field means the values are plain rationals given directly.
struct SynthCatalyst {
  OmegaField field;
  std::vector<std::pair<long, Integer>> powers;     // (exponent, multiplicity)
  std::vector<Catalyst::Entry> rational_entries;    // used when field == nullptr

  Integer dimension() const {
    Integer d = 0;
    if (field)
      for (const auto& [e, m] : powers) d += m;
    else
      for (const auto& [v, m] : rational_entries) d += m;
    return d;
  }

  std::vector<std::pair<FieldElem, Integer>> values() const {
    std::vector<std::pair<FieldElem, Integer>> out;
    if (field) {
      out.reserve(powers.size());
      for (const auto& [e, m] : powers) out.emplace_back(FieldElem::omega_power(field, e), m);
    } else {
      out.reserve(rational_entries.size());
      for (const auto& [v, m] : rational_entries) out.emplace_back(FieldElem(v), m);
    }
    return out;
  }

  static SynthCatalyst from_catalyst(const Catalyst& c) {
    SynthCatalyst s;
    s.rational_entries = c.entries();
    return s;
  }

  /// Plain rational catalyst; only possible when values are rational.
  std::optional<Catalyst> as_rational() const {
    if (!field) return Catalyst(rational_entries);
    if (!field->is_cube) return std::nullopt;
    std::vector<Catalyst::Entry> es;
    for (const auto& [e, m] : powers) es.emplace_back(pow_rational(field->omega_rational, e), m);
    return Catalyst(std::move(es));
  }
};

namespace detail {

struct Group {
  FieldElem value;
  Integer mult;
};

inline std::vector<Group> sorted_groups(std::vector<Group> g) {
  std::sort(g.begin(), g.end(), [](const Group& a, const Group& b) { return a.value < b.value; });
  std::vector<Group> out;
  for (auto& e : g) {
    if (!out.empty() && (out.back().value - e.value).is_zero())
      out.back().mult += e.mult;
    else
      out.push_back(std::move(e));
  }
  return out;
}

class PartialSumCursor {
 public:
  explicit PartialSumCursor(const std::vector<Group>& g) : g_(g) {}

  // F(m): sum of the m smallest elements; m must be nondecreasing over calls
  FieldElem at(const Integer& m) {
    while (i_ < g_.size() && before_ + g_[i_].mult <= m) {
      sum_ += g_[i_].value.scaled(Rational(g_[i_].mult));
      before_ += g_[i_].mult;
      ++i_;
    }
    if (i_ < g_.size() && m > before_)
      return sum_ + g_[i_].value.scaled(Rational(m - before_));
    return sum_;
  }

 private:
  const std::vector<Group>& g_;
  std::size_t i_ = 0;
  Integer before_ = 0;
  FieldElem sum_;
};

/// Exact check that the x-side partial sums dominate the y-side ones at
/// every count. Both sides are piecewise linear in the count, so the
/// boundary counts of either side suffice.
inline bool grouped_dominates(const std::vector<Group>& gx_in, const std::vector<Group>& gy_in) {
  auto gx = sorted_groups(gx_in);
  auto gy = sorted_groups(gy_in);
  std::vector<Integer> bounds;
  Integer cx = 0, cy = 0;
  for (const auto& g : gx) bounds.push_back(cx += g.mult);
  for (const auto& g : gy) bounds.push_back(cy += g.mult);
  if (cx != cy) throw ShapeError("grouped comparison needs equal totals");
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  PartialSumCursor fx(gx), fy(gy);
  for (const Integer& b : bounds) {
    if ((fx.at(b) - fy.at(b)).sign() < 0) return false;
  }
  return true;
}

inline std::vector<Group> tensor_groups(const SchmidtVector& x, const SynthCatalyst& c) {
  auto vals = c.values();
  std::vector<Group> g;
  g.reserve(x.size() * vals.size());
  for (const Rational& xi : x.elems())
    for (const auto& [v, m] : vals) g.push_back({v.scaled(xi), m});
  return g;
}

}  // namespace detail

/// Exact supermajorization check of x (tensor) c against y (tensor) c.
inline bool verify_catalyst(const SchmidtVector& x, const SchmidtVector& y,
                            const SynthCatalyst& c,
                            const Integer& max_product_size = Integer(10000000)) {
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  Integer work = Integer(x.size()) * c.dimension();
  if (work > max_product_size)
    throw ResourceCapError("tensor product exceeds the configured element cap");
  return detail::grouped_dominates(detail::tensor_groups(x, c), detail::tensor_groups(y, c));
}

inline bool verify_catalyst(const SchmidtVector& x, const SchmidtVector& y, const Catalyst& c,
                            const Integer& max_product_size = Integer(10000000)) {
  return verify_catalyst(x, y, SynthCatalyst::from_catalyst(c), max_product_size);
}

/// y_i = K w^alpha_i, x_i = K w^beta_i with alpha_1 = 0 after normalization.
struct CaseAInstance {
  OmegaField field;
  long scale_exponent = 0;  // K = w^scale_exponent (bookkeeping only)
  std::vector<long> alpha;
  std::vector<long> beta;
};

struct SynthesisCertificate {
  std::string strategy;  // "trivial" | "factor-series" | "breakpoint-cover"
  std::vector<std::string> trace;
  Rational lambda_used = 1;
  Polynomial big_gamma;   // Gamma(s)
  Polynomial small_gamma; // gamma(s) = Gamma/(1-s)
  std::string factorization_summary;
  std::vector<Rational> series_head;
  Rational series_tail = 0;
  std::size_t truncation_m = 0;
  FieldElem epsilon_num, epsilon_den;  // eps = num/den
  Integer multiplicity_scale = 1;
  SynthCatalyst catalyst;
  bool verified = false;
  unsigned precision_bits = 0;
  int attempts = 1;
};

namespace detail {

inline Polynomial exponents_to_gamma(const std::vector<long>& alpha,
                                     const std::vector<long>& beta) {
  long deg = 0;
  for (long a : alpha) deg = std::max(deg, a);
  for (long b : beta) deg = std::max(deg, b);
  std::vector<Rational> c(static_cast<std::size_t>(deg) + 1, Rational(0));
  for (long a : alpha) c[static_cast<std::size_t>(a)] += 1;
  for (long b : beta) c[static_cast<std::size_t>(b)] -= 1;
  return Polynomial(std::move(c));
}

inline Rational rational_upper_of(const Real& v, double pad = 1e-3) {
  Rational q;
  Real padded = v * (1 + Real(pad)) + Real(pad);
  mpfr_get_q(q.backend().data(), padded.backend().data());
  return q;
}

struct FactorRouteFactors {
  std::vector<SeriesFactor> factors;
  Rational mass{1};
  std::string summary;
};

inline FactorRouteFactors build_factor_series(const Polynomial& gamma, const OmegaField& fld,
                                              const SynthesisSettings& st) {
  FactorSettings fs;
  fs.precision_bits = st.factor_bits;
  fs.tolerance = st.factor_tolerance;
  FactorizedPoly fac = factor_real(gamma, fs);
  if (fac.root0_multiplicity > 0)
    throw ConditionsError("gamma vanishes at 0; exponent normalization broken");

  PrecisionScope scope(st.factor_bits);
  Real omega_r = FieldElem::omega_power(fld, 1).to_real();
  FactorRouteFactors out;
  std::ostringstream sum;
  sum << "A=" << rational_to_string(fac.leading) << " linear=" << fac.linear_xi.size()
      << " quadratic=" << fac.quadratic.size();
  int n_geom = 0, n_paper = 0, n_trunc = 0;

  for (const Real& xi : fac.linear_xi) {
    if (xi <= 0) continue;  // factor already has nonnegative coefficients
    Real inv_omega = 1 / omega_r;
    Real gap = (inv_omega - xi) / 4;
    if (gap <= 0) throw FactorInfeasibleError("real root inside (0, omega]");
    Rational xh;
    bool ok = false;
    for (int shrink = 0; shrink < 4 && !ok; ++shrink) {
      xh = rationalize_up(xi, gap);
      // exact check (xh * omega)^3 < 1
      ok = xh > 0 && pow_rational(xh, 3) * fld->theta < 1;
      gap /= 16;
    }
    if (!ok) throw FactorInfeasibleError("could not rationalize a real-root factor");
    out.factors.push_back(SeriesFactor::geometric_series(xh));
    out.mass /= (1 - xh);
    ++n_geom;
  }
  for (const auto& [xip, etap] : fac.quadratic) {
    if (xip <= 0) continue;
    Real lam_r = xip * xip + etap * etap;
    Real room = (lam_r - xip * xip) / 8;
    Real window = std::min(room / (2 * xip + 1), Real(1e-12));
    Rational xh = rationalize_up(xip, window);
    Rational lh = rationalize_down(lam_r, window);
    if (lh <= xh * xh) throw FactorInfeasibleError("quadratic rationalization collapsed");

    bool use_paper = false;
    QuadSeriesPair pair;
    try {
      long n = minimal_binomial_n(xh, lh, st.paper_n_cap);
      Rational mass_paper = (pow_rational(1 + lh, 2 * n) - pow_rational(2 * xh, 2 * n)) /
                            (1 + lh - 2 * xh);
      if (mass_paper <= st.factor_mass_budget) {
        pair = series_for_quadratic(xh, lh);
        use_paper = true;
        ++n_paper;
      }
    } catch (const BudgetError&) {
    }
    if (!use_paper) {
      pair = series_for_quadratic_truncated(xh, lh);
      ++n_trunc;
    }
    out.mass *= pair.a(Rational(1));
    out.factors.push_back(SeriesFactor::polynomial(std::move(pair.a)));
  }
  sum << " geometric=" << n_geom << " binomial=" << n_paper << " partial-sum=" << n_trunc;
  out.summary = sum.str();
  return out;
}

struct HeadResult {
  std::vector<Rational> head;
  Rational tail = 0;
  std::size_t m = 0;
  Integer scale = 1;
  std::vector<Rational> third_series;  // t(s), degree m
};

// third-series alignment: multiply by t(s) >= 0 so every head coefficient
// lands on the 1/d grid while a' * gamma keeps nonnegative coefficients
inline HeadResult grid_align(const FactorProduct& prod, std::size_t m, const Integer& d) {
  std::vector<Rational> a = prod.head(m);
  std::vector<Rational> t{Rational(1)};
  std::vector<Rational> out(m);
  out[0] = a[0];  // equals 1 for all our products
  for (std::size_t k = 1; k < m; ++k) {
    Rational partial = a[k];
    for (std::size_t j = 1; j < k; ++j) partial += a[k - j] * t[j];
    Rational target = ceil_to_grid(partial, d);
    t.push_back(target - partial);  // divided by a_0 = 1
    out[k] = target;
  }
  Rational a_one = prod.value_at(Rational(1));
  Rational t_one = 0;
  for (const Rational& tc : t) t_one += tc;
  Rational base = a_one * t_one;
  Rational aligned_total = ceil_to_grid(base, d);
  // final t_m >= 0 nudges the series total onto the grid
  t.push_back((aligned_total - base) / a_one);
  Rational head_sum = 0;
  for (const Rational& h : out) head_sum += h;
  HeadResult res;
  res.head = std::move(out);
  res.tail = aligned_total - head_sum;
  res.m = m;
  res.third_series = std::move(t);
  Integer scale = 1;
  for (const Rational& h : res.head) scale = lcm_int(scale, denominator(h));
  scale = lcm_int(scale, denominator(res.tail));
  res.scale = scale;
  return res;
}

}  // namespace detail

/// Constructive synthesis for exponent-lattice instances. The catalyst’s
/// characteristic function is N.h(t) with h built from a truncated
/// nonnegative series for gamma = Gamma/(1-s).
inline SynthesisCertificate synthesize_case_a(
    const CaseAInstance& inst, const SynthesisSettings& st = {}, long m_multiplier = 1,
    const SchmidtVector* verify_x = nullptr, const SchmidtVector* verify_y = nullptr,
    const Rational& lambda_for_verify = Rational(1)) {
  if (inst.alpha.size() != inst.beta.size() || inst.alpha.empty())
    throw ShapeError("instance needs equal nonempty exponent lists");
  for (long a : inst.alpha)
    if (a < 0) throw ConditionsError("alpha exponents must be normalized to >= 0");
  long beta_min = *std::min_element(inst.beta.begin(), inst.beta.end());
  if (beta_min < 1) throw ConditionsError("beta exponents must be >= 1 after normalization");

  SynthesisCertificate cert;
  cert.big_gamma = detail::exponents_to_gamma(inst.alpha, inst.beta);
  cert.small_gamma = divide_by_one_minus_s(cert.big_gamma);
  cert.precision_bits = st.factor_bits;

  Rational gamma_at_one = 0;
  for (const Rational& c : cert.small_gamma.coeffs()) gamma_at_one += c;
  if (gamma_at_one <= 0)
    throw ConditionsError("sum(beta) - sum(alpha) must be positive");

  const OmegaField& fld = inst.field;
  FieldElem omega = FieldElem::omega_power(fld, 1);
  {
    Rational witness_r = fld->is_cube ? fld->omega_rational
                                      : detail::rational_upper_of(omega.to_real());
    auto pos = certify_positive_on(cert.small_gamma, omega, witness_r);
    if (!pos.positive)
      throw ConditionsError("gamma is not positive on (0, omega]: power-mean conditions fail");
  }

  // eps = (omega - 1) * gamma(0) / sum_k |Gamma_k| omega^k, kept as num/den
  const Rational b0 = cert.small_gamma.coeff(0);
  cert.epsilon_num = (omega - FieldElem(Rational(1))).scaled(b0);
  {
    FieldElem den;
    const auto& gc = cert.big_gamma.coeffs();
    for (std::size_t k = 0; k < gc.size(); ++k) {
      if (gc[k] == 0) continue;
      Rational mag = gc[k] < 0 ? Rational(-gc[k]) : gc[k];
      den += FieldElem::omega_power(fld, static_cast<long>(k)).scaled(mag);
    }
    cert.epsilon_den = den;
  }

  bool cover = false;
  detail::FactorRouteFactors route;
  try {
    route = detail::build_factor_series(cert.small_gamma, fld, st);
    if (route.mass > st.product_mass_budget) cover = true;
  } catch (const FactorInfeasibleError& e) {
    cover = true;
    route.summary = std::string("factor route infeasible: ") + e.what();
  } catch (const NumericError& e) {
    cover = true;
    route.summary = std::string("factor route numeric failure: ") + e.what();
  }
  cert.factorization_summary = route.summary;

  const long deg_e = cert.big_gamma.degree();
  const Integer d_grid = st.grid_denominator;

  if (!cover) {
    cert.strategy = "factor-series";
    FactorProduct prod(route.factors);
    FieldElem a_omega = prod.value_at(omega);
    const long poly_deg = prod.poly_part().degree();

    auto tail_ok = [&](const std::vector<Rational>& head) {
      FieldElem head_omega;
      for (auto it = head.rbegin(); it != head.rend(); ++it)
        head_omega = head_omega * omega + FieldElem(*it);
      FieldElem tail = a_omega - head_omega;
      // tail < eps/2  <=>  2 * tail * den < num
      return ((tail * cert.epsilon_den).scaled(2) - cert.epsilon_num).sign() < 0;
    };

    std::size_t m = 1;
    while (true) {
      if (tail_ok(prod.head(m))) break;
      if (prod.ratios().empty() && static_cast<long>(m) > poly_deg) break;
      if (m >= st.m_cap) throw BudgetError("series truncation exceeded cap");
      m = m <= 64 ? m + 1 : m * 2;
    }
    m = static_cast<std::size_t>(m * std::max<long>(1, m_multiplier));

    detail::HeadResult hr;
    for (int grow = 0;; ++grow) {
      hr = detail::grid_align(prod, m, d_grid);
      // exact truncation condition for the aligned series a' = a * t:
      // a'(w) - head'(w) < eps / 2
      FieldElem t_omega;
      for (auto it = hr.third_series.rbegin(); it != hr.third_series.rend(); ++it)
        t_omega = t_omega * omega + FieldElem(*it);
      FieldElem head_omega;
      for (auto it = hr.head.rbegin(); it != hr.head.rend(); ++it)
        head_omega = head_omega * omega + FieldElem(*it);
      FieldElem aligned_tail = a_omega * t_omega - head_omega;
      bool ok = ((aligned_tail * cert.epsilon_den).scaled(2) - cert.epsilon_num).sign() < 0;
      if (ok) break;
      if (grow >= 8 || m >= st.m_cap)
        throw BudgetError("aligned series truncation exceeded cap");
      m = m * 2;
    }

    cert.series_head = hr.head;
    cert.series_tail = hr.tail;
    cert.truncation_m = hr.m;
    cert.multiplicity_scale = hr.scale;
    SynthCatalyst cat;
    cat.field = fld;
    for (std::size_t k = 0; k < hr.head.size(); ++k) {
      Integer mult = numerator(hr.head[k] * hr.scale);
      if (mult > 0) cat.powers.emplace_back(static_cast<long>(k), mult);
    }
    Integer lump = numerator(hr.tail * hr.scale);
    if (lump > 0) cat.powers.emplace_back(static_cast<long>(hr.m), lump);
    cert.catalyst = std::move(cat);
  } else {
    cert.strategy = "breakpoint-cover";
    // psi_d = H_ybar(w^d) - H_xbar(w^d) on the exponent lattice
    std::vector<FieldElem> wpow;
    const long m_max = deg_e + st.cover_extra_length * std::max<long>(1, m_multiplier);
    const long j_max = m_max + deg_e + 1;
    wpow.reserve(j_max + 2);
    for (long e = 0; e <= j_max + 1; ++e) wpow.push_back(FieldElem::omega_power(fld, e));
    const auto& gcoef = cert.big_gamma.coeffs();
    std::vector<FieldElem> psi(static_cast<std::size_t>(deg_e) + 1);
    for (long dd = 1; dd <= deg_e; ++dd) {
      FieldElem acc;
      for (long k = 0; k < dd; ++k) {
        if (gcoef[static_cast<std::size_t>(k)] == 0) continue;
        acc += (wpow[dd] - wpow[k]).scaled(gcoef[static_cast<std::size_t>(k)]);
      }
      psi[static_cast<std::size_t>(dd)] = acc;
    }
    FieldElem s_const;
    for (std::size_t k = 0; k < gcoef.size(); ++k)
      if (gcoef[k] != 0) s_const -= wpow[k].scaled(gcoef[k]);
    if (s_const.sign() <= 0)
      throw ConditionsError("sum(xbar) must exceed sum(ybar)");
    auto psi_at = [&](long dd) -> const FieldElem& {
      static const FieldElem zero{};
      if (dd <= 0) return zero;
      if (dd >= deg_e) return s_const;
      return psi[static_cast<std::size_t>(dd)];
    };

    // float LP: variables a_m (m = 1..m_max), minimize mass, margin mu
    PrecisionScope scope(st.analysis.precision_bits);
    std::vector<double> psif(static_cast<std::size_t>(j_max) + 2);
    for (long dd = 1; dd <= j_max + 1; ++dd)
      psif[static_cast<std::size_t>(dd)] = static_cast<double>(psi_at(dd).to_real());
    std::vector<double> wf(static_cast<std::size_t>(j_max) + 2);
    for (long e = 0; e <= j_max + 1; ++e) wf[static_cast<std::size_t>(e)] =
        static_cast<double>(wpow[static_cast<std::size_t>(e)].to_real());
    const double mu = st.cover_margin_frac * psif[1];
    std::vector<std::vector<double>> lp_a;
    std::vector<double> lp_b, lp_c(static_cast<std::size_t>(m_max), 1.0);
    for (long j = 1; j <= j_max; ++j) {
      std::vector<double> row(static_cast<std::size_t>(m_max), 0.0);
      for (long mm = 1; mm <= m_max; ++mm) {
        long dd = j - mm;
        if (dd > 0) row[static_cast<std::size_t>(mm - 1)] =
            wf[static_cast<std::size_t>(mm)] * (dd >= deg_e ? psif[static_cast<std::size_t>(deg_e)]
                                                            : psif[static_cast<std::size_t>(dd)]);
      }
      lp_a.push_back(std::move(row));
      lp_b.push_back(mu - (j >= deg_e ? psif[static_cast<std::size_t>(deg_e)]
                                      : psif[static_cast<std::size_t>(j)]));
    }
    auto lp = SimplexSolver().solve(lp_a, lp_b, lp_c);
    if (!lp.feasible) throw NumericError("cover linear program infeasible");

    std::map<long, Rational> a;
    a[0] = 1;
    for (long mm = 1; mm <= m_max; ++mm) {
      double v = lp.x[static_cast<std::size_t>(mm - 1)];
      if (v > 1e-9) {
        Rational q;
        Real rv(v);
        mpfr_get_q(q.backend().data(), rv.backend().data());
        a[mm] = ceil_to_grid(q, d_grid);
      }
    }

    // exact lattice repair: delta(w^j) = sum_m a_m w^m psi_{j-m} >= 0
    auto delta_at = [&](long j) {
      FieldElem acc;
      for (const auto& [mm, am] : a) {
        long dd = j - mm;
        if (dd > 0) acc += (wpow[static_cast<std::size_t>(mm)] * psi_at(dd)).scaled(am);
      }
      return acc;
    };
    long top = a.rbegin()->first;
    for (int pass = 0; pass < 6; ++pass) {
      bool clean = true;
      for (long j = 1; j <= top + deg_e + 1; ++j) {
        FieldElem v = delta_at(j);
        if (v.sign() >= 0) continue;
        clean = false;
        // place quantized mass at the most effective available offset
        long best_d = 1;
        double best = -1;
        for (long dd = 1; dd <= std::min<long>(j, deg_e); ++dd) {
          double cand = dd >= deg_e ? psif[static_cast<std::size_t>(deg_e)]
                                    : psif[static_cast<std::size_t>(dd)];
          if (cand > best) {
            best = cand;
            best_d = dd;
          }
        }
        long mm = j - best_d;
        FieldElem eff = wpow[static_cast<std::size_t>(mm)] * psi_at(best_d);
        FieldElem need = -v;
        Integer q(1);
        double approx = static_cast<double>(need.to_real()) /
                        (static_cast<double>(eff.to_real()) / static_cast<double>(d_grid));
        if (approx > 1) q = Integer(static_cast<long long>(approx));
        while ((eff.scaled(Rational(q, d_grid)) - need).sign() < 0) ++q;
        a[mm] += Rational(q, d_grid);
        top = std::max(top, mm);
      }
      if (clean) break;
    }

    Rational mass = 0;
    Integer scale = 1;
    for (const auto& [mm, am] : a) {
      mass += am;
      scale = lcm_int(scale, denominator(am));
    }
    cert.truncation_m = static_cast<std::size_t>(top + 1);
    cert.series_tail = 0;
    cert.series_head.assign(cert.truncation_m, Rational(0));
    for (const auto& [mm, am] : a) cert.series_head[static_cast<std::size_t>(mm)] = am;
    cert.multiplicity_scale = scale;
    SynthCatalyst cat;
    cat.field = fld;
    for (const auto& [mm, am] : a) {
      Integer mult = numerator(am * scale);
      if (mult > 0) cat.powers.emplace_back(mm, mult);
    }
    cert.catalyst = std::move(cat);
  }

  // final exact verification
  const SchmidtVector* vx = verify_x;
  const SchmidtVector* vy = verify_y;
  SynthCatalyst& cat = cert.catalyst;
  std::optional<SchmidtVector> made_x, made_y;
  if (!vx) {
    // verify against the instance's own lattice pair when the field is
    // rational; otherwise against the grouped lattice values directly
    if (fld->is_cube) {
      std::vector<Rational> xs, ys;
      for (long b : inst.beta) xs.push_back(pow_rational(fld->omega_rational, b));
      for (long al : inst.alpha) ys.push_back(pow_rational(fld->omega_rational, al));
      made_x.emplace(std::move(xs));
      made_y.emplace(std::move(ys));
      vx = &*made_x;
      vy = &*made_y;
    }
  }
  if (vx) {
    Integer work = Integer(vx->size()) * cat.dimension();
    if (work > st.max_product_size)
      throw ResourceCapError("synthesized catalyst exceeds the element cap");
    SchmidtVector scaled_y = vy->scaled(lambda_for_verify);
    cert.verified = detail::grouped_dominates(detail::tensor_groups(*vx, cat),
                                              detail::tensor_groups(scaled_y, cat));
  } else {
    // irrational omega: compare the lattice pairs in the field
    std::vector<detail::Group> gx, gy;
    auto vals = cat.values();
    for (long b : inst.beta)
      for (const auto& [v, m] : vals)
        gx.push_back({v * FieldElem::omega_power(fld, b), m});
    for (long al : inst.alpha)
      for (const auto& [v, m] : vals)
        gy.push_back({v * FieldElem::omega_power(fld, al), m});
    Integer work = Integer(inst.beta.size()) * cat.dimension();
    if (work > st.max_product_size)
      throw ResourceCapError("synthesized catalyst exceeds the element cap");
    cert.verified = detail::grouped_dominates(gx, gy);
  }
  return cert;
}

struct CaseBReduction {
  CaseAInstance instance;
  Rational theta_low;
  std::vector<FieldElem> xbar, ybar;  // K w^beta, K w^alpha including the scale
};

namespace detail {

inline long exponent_below(const Rational& v, const OmegaField& fld, double log_omega_d) {
  // largest e with w^e < v
  double est = std::log(static_cast<double>(v)) / log_omega_d;
  long e = static_cast<long>(std::floor(est)) - 2;
  Rational v3 = v * v * v;
  auto lt = [&](long ee) { return pow_rational(fld->theta, ee) < v3; };  // w^ee < v
  while (lt(e + 1)) ++e;
  while (!lt(e)) --e;
  return e;
}

inline long exponent_above(const Rational& v, const OmegaField& fld, double log_omega_d) {
  // smallest e with w^e > v
  double est = std::log(static_cast<double>(v)) / log_omega_d;
  long e = static_cast<long>(std::ceil(est)) + 2;
  Rational v3 = v * v * v;
  auto gt = [&](long ee) { return pow_rational(fld->theta, ee) > v3; };  // w^ee > v
  while (gt(e - 1)) --e;
  while (!gt(e)) ++e;
  return e;
}

}  // namespace detail

/// Rounds a strictly-positive pair onto an omega-power lattice, with
/// theta = min ratio of power means rounded down to a rational > 1.
inline CaseBReduction reduce_case_b(const SchmidtVector& x, const SchmidtVector& y,
                                    const SynthesisSettings& st = {}) {
  if (!x.strictly_positive() || !y.strictly_positive())
    throw DomainError("case B needs strictly positive sequences");
  auto rep = catalytic_probability(x, y, st.analysis);
  PrecisionScope scope(st.analysis.precision_bits);
  Real raw = rep.raw_ratio_min;
  Real lo_r = raw * (1 - 2 * Real(st.theta_shave));
  Real hi_r = raw * (1 - Real(st.theta_shave));
  Rational lo, hi;
  mpfr_get_q(lo.backend().data(), lo_r.backend().data());
  mpfr_get_q(hi.backend().data(), hi_r.backend().data());
  Rational theta_low = simplest_in_interval(lo, hi);
  if (theta_low <= 1)
    throw ConditionsError("power-mean minimum does not exceed 1: case B cannot proceed");

  CaseBReduction red;
  red.theta_low = theta_low;
  red.instance.field = make_omega_field(theta_low);
  const OmegaField& fld = red.instance.field;
  double logw = std::log(static_cast<double>(theta_low)) / 3.0;

  std::vector<long> beta, alpha;
  for (const Rational& xi : x.elems()) beta.push_back(detail::exponent_below(xi, fld, logw));
  for (const Rational& yi : y.elems()) alpha.push_back(detail::exponent_above(yi, fld, logw));
  long m0 = *std::min_element(alpha.begin(), alpha.end());
  for (long& a : alpha) a -= m0;
  for (long& b : beta) b -= m0;
  red.instance.scale_exponent = m0;
  long beta_min = *std::min_element(beta.begin(), beta.end());
  if (beta_min < 1)
    throw ConditionsError("lattice rounding lost the x > y margin; retry with larger shave");
  red.instance.alpha = std::move(alpha);
  red.instance.beta = std::move(beta);
  for (long b : red.instance.beta)
    red.xbar.push_back(FieldElem::omega_power(fld, b + m0));
  for (long a : red.instance.alpha)
    red.ybar.push_back(FieldElem::omega_power(fld, a + m0));
  return red;
}

struct CaseCReduction {
  std::size_t zero_count = 0;
  Real j_min;
  Rational eps_zero;
  SchmidtVector ybar;
};

/// Replaces the zeros of y by a small positive rational so the pair can be
/// handled on the strictly-positive path.
inline CaseCReduction reduce_case_c(const SchmidtVector& x, const SchmidtVector& y,
                                    const SynthesisSettings& st = {}) {
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");
  std::size_t m = y.zero_count();
  if (m == 0 || m >= y.size()) throw DomainError("case C needs 0 < #zeros < n");

  PrecisionScope scope(st.analysis.precision_bits);
  const long n = static_cast<long>(x.size());
  std::vector<Real> lx;
  for (const Rational& e : x.elems()) lx.push_back(log(to_real(e)));
  std::vector<Real> ly_pos;
  for (const Rational& e : y.elems())
    if (e > 0) ly_pos.push_back(log(to_real(e)));

  auto j_of = [&](const Real& nu) -> Real {
    if (nu == 0) {
      Real acc = 0;
      for (const Real& l : lx) acc += l;
      for (const Real& l : ly_pos) acc -= l;
      return exp(acc / static_cast<long>(m));
    }
    std::vector<Real> tx;
    for (const Real& l : lx) tx.push_back(nu * l);
    Real sx = exp(log_sum_exp(tx));
    Real sy = 0;
    for (const Real& l : ly_pos) sy += exp(nu * l);
    Real inner = (sx - sy) / static_cast<long>(m);
    if (inner <= 0) throw ConditionsError("power-mean conditions fail on (0, 1]");
    return exp(log(inner) / nu);
  };

  const int grid = 512;
  Real best = j_of(Real(1));
  for (int i = 0; i < grid; ++i) {
    Real nu = Real(i) / grid;
    Real v = j_of(nu);
    if (v < best) best = v;
  }
  CaseCReduction red;
  red.j_min = best;

  Rational x_min = sort_ascending(x)[0];
  Rational y_max = sort_ascending(y)[y.size() - 1];
  // y_n (x_1/y_n)^(n/m), rounded down through reals
  Real bound2 = to_real(y_max) * exp(Real(n) / static_cast<long>(m) *
                                     (log(to_real(x_min)) - log(to_real(y_max))));
  Real cap = best;
  if (bound2 < cap) cap = bound2;
  Real xm = to_real(x_min);
  if (xm < cap) cap = xm;
  Rational eps = rationalize_down(cap / 2, cap / 1024);
  if (eps <= 0) throw NumericError("could not pick a positive epsilon for case C");
  // keep the modified target free of collisions with existing values
  auto collides = [&](const Rational& v) {
    for (const Rational& e : x.elems())
      if (e == v) return true;
    for (const Rational& e : y.elems())
      if (e == v) return true;
    return false;
  };
  while (collides(eps)) eps *= Rational(3, 4);
  red.eps_zero = eps;

  std::vector<Rational> yb = y.elems();
  for (Rational& e : yb)
    if (e == 0) e = eps;
  red.ybar = SchmidtVector(std::move(yb));
  return red;
}

/// Full pipeline: scale, strip, shortcut, case C, case B, case A, verify.
inline SynthesisCertificate synthesize_catalyst(const SchmidtVector& x, const SchmidtVector& y,
                                                const Rational& lambda,
                                                const SynthesisSettings& settings = {}) {
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");
  if (lambda <= 0) throw DomainError("lambda must be positive");
  if (x.size() != y.size()) throw ShapeError("length mismatch");
  SchmidtVector scaled = y.scaled(lambda);
  if (x.sum() == scaled.sum())
    throw ConditionsError(
        "equal scaled sums: the trumping boundary case is not covered; pick a smaller lambda");
  if (x.sum() < scaled.sum())
    throw ConditionsError("sum x must exceed lambda * sum y; pick a smaller lambda");

  auto conds = check_supertrumping_conditions(x, scaled, settings.analysis);
  if (conds.verdict == ConditionsVerdict::FAILS)
    throw ConditionsError("power-mean conditions fail: lambda exceeds the catalytic bound");
  if (conds.verdict == ConditionsVerdict::BOUNDARY)
    throw ConditionsError(
        "power-mean conditions cannot be certified at this precision; pick a smaller lambda");
  {
    PrecisionScope scope(settings.analysis.precision_bits);
    if (conds.ratio_min * Real(settings.lambda_margin) < 1)
      throw ConditionsError("lambda is too close to the catalytic bound; pick a smaller lambda");
  }

  SynthesisCertificate cert;
  cert.lambda_used = lambda;
  if (supermajorizes(x, scaled)) {
    cert.strategy = "trivial";
    cert.trace.push_back("plain supermajorization holds; identity catalyst");
    cert.catalyst = SynthCatalyst::from_catalyst(Catalyst::identity());
    cert.verified = verify_catalyst(x, scaled, cert.catalyst, settings.max_product_size);
    return cert;
  }

  auto [xs, ys] = strip_common(x, scaled);
  std::vector<std::string> trace;
  trace.push_back("stripped common elements: " + std::to_string(xs.size()) + " of " +
                  std::to_string(x.size()) + " remain");

  SchmidtVector ys_pos = ys;
  if (ys.zero_count() > 0) {
    auto cc = reduce_case_c(xs, ys, settings);
    trace.push_back("case C: replaced " + std::to_string(cc.zero_count) +
                    " zeros by " + rational_to_string(cc.eps_zero));
    ys_pos = cc.ybar;
  }

  SynthesisSettings st = settings;
  std::string last_error;
  for (int attempt = 0; attempt < settings.max_retries; ++attempt) {
    try {
      auto red = reduce_case_b(xs, ys_pos, st);
      SynthesisCertificate inner =
          synthesize_case_a(red.instance, st, 1 << attempt, &x, &y, lambda);
      inner.lambda_used = lambda;
      inner.trace = trace;
      inner.trace.push_back("case B: theta_low = " + rational_to_string(red.theta_low) +
                            ", lattice degree = " + std::to_string(inner.big_gamma.degree()));
      inner.trace.push_back("case A strategy: " + inner.strategy);
      inner.attempts = attempt + 1;
      if (inner.verified) return inner;
      last_error = "exact verification failed";
    } catch (const ConditionsError&) {
      throw;
    } catch (const ResourceCapError&) {
      throw;
    } catch (const std::exception& e) {
      last_error = e.what();
    }
    // escalate: precision up, finer grid, longer cover, smaller shave
    st.analysis.precision_bits = std::min(st.analysis.max_precision_bits,
                                          st.analysis.precision_bits * 2);
    st.factor_bits *= 2;
    st.grid_denominator *= 4;
    st.theta_shave *= 4;
  }
  throw BudgetError("catalyst synthesis budget exhausted: " + last_error);
}

struct NecessitySample {
  Real nu;
  Real closed_form;
  Real quadrature;
  Real rel_diff;
};

struct NecessityCertificate {
  std::vector<NecessitySample> samples;
  bool all_positive = true;
};

/// Cross-checks the integral I_nu two ways: the closed form
/// (sum x^nu - sum y^nu)(sum c^nu)/(nu(1-nu)) against piecewise-exact
/// integration of (H_{y.c} - H_{x.c})(t) t^(nu-2).
inline NecessityCertificate necessity_certificate(const SchmidtVector& x, const SchmidtVector& y,
                                                  const SynthCatalyst& c,
                                                  const std::vector<Rational>& nus,
                                                  unsigned precision_bits = 192) {
  if (!x.strictly_positive()) throw DomainError("x has only positive elements required");
  if (sort_ascending(x).elems() == sort_ascending(y).elems())
    throw DegenerateError("x and y coincide; nothing to certify");
  PrecisionScope scope(precision_bits);

  std::vector<std::pair<Real, Real>> cvals;  // (value, multiplicity)
  for (const auto& [v, m] : c.values()) cvals.emplace_back(v.to_real(), to_real(Rational(m)));

  // breakpoints of Delta: all products value * c_value with signed weights
  // slope contribution +mult for y-side, -mult for x-side
  std::vector<std::pair<Real, Real>> events;  // (t, slope change)
  for (const Rational& yi : y.elems())
    for (const auto& [cv, cm] : cvals) events.emplace_back(to_real(yi) * cv, cm);
  for (const Rational& xi : x.elems())
    for (const auto& [cv, cm] : cvals) events.emplace_back(to_real(xi) * cv, -cm);
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  bool y_zero = !y.strictly_positive();
  NecessityCertificate out;
  for (const Rational& nu_q : nus) {
    Real nu = to_real(nu_q);
    if (nu >= 1) throw DomainError("samples must satisfy nu < 1");
    if (y_zero && nu <= 0) throw DomainError("nu <= 0 needs strictly positive y");

    // closed form
    Real closed;
    {
      Real sx = 0, sy = 0, sc = 0;
      for (const Rational& e : x.elems()) sx += exp(nu * log(to_real(e)));
      for (const Rational& e : y.elems())
        if (e > 0) sy += exp(nu * log(to_real(e)));
        else if (nu > 0) sy += 0;
      for (const auto& [cv, cm] : cvals) sc += cm * exp(nu * log(cv));
      if (nu_q == 0) {
        Real lpx = 0, lpy = 0, nc = 0;
        for (const Rational& e : x.elems()) lpx += log(to_real(e));
        for (const Rational& e : y.elems()) lpy += log(to_real(e));
        for (const auto& [cv, cm] : cvals) nc += cm;
        closed = (lpx - lpy) * nc;
      } else {
        closed = (sx - sy) * sc / (nu * (1 - nu));
      }
    }

    // piecewise-exact integral of Delta(t) t^(nu-2)
    Real integral = 0;
    {
      Real slope = 0, delta0 = 0, t0 = 0;
      auto power = [&](const Real& t, const Real& p) { return exp(p * log(t)); };
      for (std::size_t i = 0; i < events.size(); ++i) {
        Real t1 = events[i].first;
        if (t1 > t0 && slope != 0) {
          // Delta(t) = delta0 + slope (t - t0) on [t0, t1]
          Real c1 = delta0 - slope * t0;
          Real seg;
          if (nu_q == 0) {
            seg = -c1 * (1 / t1 - 1 / t0) + slope * log(t1 / t0);
          } else if (t0 == 0) {
            seg = slope * power(t1, nu) / nu;  // c1 = 0 since Delta(0) = 0
          } else {
            seg = c1 * (power(t1, nu - 1) - power(t0, nu - 1)) / (nu - 1) +
                  slope * (power(t1, nu) - power(t0, nu)) / nu;
          }
          integral += seg;
          delta0 += slope * (t1 - t0);
        } else if (t1 > t0) {
          // slope == 0 segment: Delta constant
          if (delta0 != 0) {
            if (nu_q == 0)
              integral += -delta0 * (1 / t1 - 1 / t0);
            else
              integral += delta0 * (power(t1, nu - 1) - power(t0, nu - 1)) / (nu - 1);
          }
        }
        slope += events[i].second;
        t0 = t1;
      }
      // tail: Delta constant = (sum x - sum y) sum c
      if (delta0 != 0) integral += delta0 * power(t0, nu - 1) / (1 - nu);
    }

    NecessitySample s;
    s.nu = nu;
    s.closed_form = closed;
    s.quadrature = integral;
    Real scale = abs(closed) + abs(integral) + Real(1e-30);
    s.rel_diff = abs(closed - integral) / scale;
    if (closed <= 0) out.all_positive = false;
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace catalyx
