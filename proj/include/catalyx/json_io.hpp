#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalyx/catalysis.hpp"
#include "catalyx/powermean.hpp"
#include "catalyx/rational.hpp"
#include "catalyx/sequences.hpp"

namespace catalyx {

using Json = nlohmann::json;

/// Exact number extraction: strings and integers only. Raw JSON floats
/// round-trip through binary and are rejected to keep inputs exact.
inline Rational json_to_rational(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.get<long long>()));
  if (j.is_number_unsigned()) return Rational(Integer(j.get<unsigned long long>()));
  if (j.is_number_float())
    throw ParseError(where + ": write decimals as strings (\"0.4\") to keep them exact");
  throw ParseError(where + ": expected a number string");
}

inline std::vector<Rational> json_to_rationals(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(json_to_rational(e, where));
  return out;
}

struct ProblemFile {
  SchmidtVector x{std::vector<Rational>{Rational(1)}};
  SchmidtVector y{std::vector<Rational>{Rational(1)}};
  std::optional<Rational> lambda;
  std::optional<Catalyst> catalyst;
  AnalysisSettings analysis;
  SynthesisSettings synthesis;

  static ProblemFile parse(const Json& j) {
    if (!j.is_object()) throw ParseError("problem file must be a JSON object");
    if (!j.contains("x") || !j.contains("y"))
      throw ParseError("problem file needs both \"x\" and \"y\"");
    ProblemFile p;
    p.x = SchmidtVector(json_to_rationals(j.at("x"), "x"));
    p.y = SchmidtVector(json_to_rationals(j.at("y"), "y"));
    if (j.contains("lambda")) p.lambda = json_to_rational(j.at("lambda"), "lambda");
    if (j.contains("c")) {
      const Json& c = j.at("c");
      if (!c.is_array()) throw ParseError("c: expected an array");
      std::vector<Catalyst::Entry> entries;
      for (const auto& e : c) {
        if (e.is_object()) {
          Rational v = json_to_rational(e.at("value"), "c.value");
          Integer m{1};
          if (e.contains("multiplicity")) {
            const Json& mj = e.at("multiplicity");
            if (mj.is_string())
              m = Integer(mj.get<std::string>());
            else
              m = Integer(mj.get<long long>());
          }
          entries.emplace_back(v, m);
        } else {
          entries.emplace_back(json_to_rational(e, "c"), 1);
        }
      }
      p.catalyst = Catalyst(std::move(entries));
    }
    if (j.contains("settings")) {
      const Json& s = j.at("settings");
      if (s.contains("precision_bits"))
        p.analysis.precision_bits = s.at("precision_bits").get<unsigned>();
      if (s.contains("grid")) p.analysis.grid_points = s.at("grid").get<int>();
      if (s.contains("tolerance")) p.analysis.rel_tolerance = s.at("tolerance").get<double>();
      if (s.contains("margin")) p.synthesis.lambda_margin = s.at("margin").get<double>();
      if (s.contains("max_product_size"))
        p.synthesis.max_product_size = Integer(s.at("max_product_size").get<long long>());
    }
    p.synthesis.analysis = p.analysis;
    return p;
  }

  static ProblemFile load(const std::string& path) {
    Json j;
    if (path == "-") {
      j = Json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw ParseError("cannot open input file: " + path);
      j = Json::parse(in);
    }
    return parse(j);
  }
};

inline Json field_elem_to_json(const FieldElem& e) {
  Json j;
  j["c0"] = rational_to_string(e.c0());
  j["c1"] = rational_to_string(e.c1());
  j["c2"] = rational_to_string(e.c2());
  if (e.field()) j["base_cubed"] = rational_to_string(e.field()->theta);
  std::ostringstream approx;
  approx << e.to_real();
  j["approx"] = approx.str();
  return j;
}

inline Json catalyst_to_json(const SynthCatalyst& c) {
  Json j;
  if (c.field) {
    j["kind"] = "omega-powers";
    j["base_cubed"] = rational_to_string(c.field->theta);
    Json entries = Json::array();
    for (const auto& [e, m] : c.powers) {
      Json je;
      je["exponent_numerator"] = e;  // value = base_cubed^(exponent/3)
      je["multiplicity"] = m.str();
      entries.push_back(je);
    }
    j["entries"] = entries;
  } else {
    j["kind"] = "rational";
    Json entries = Json::array();
    for (const auto& [v, m] : c.rational_entries) {
      Json je;
      je["value"] = rational_to_string(v);
      je["multiplicity"] = m.str();
      entries.push_back(je);
    }
    j["entries"] = entries;
  }
  j["dimension"] = c.dimension().str();
  return j;
}

inline SynthCatalyst catalyst_from_json(const Json& j) {
  SynthCatalyst c;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "omega-powers") {
    c.field = make_omega_field(parse_rational(j.at("base_cubed").get<std::string>()));
    for (const auto& e : j.at("entries")) {
      long ex = e.at("exponent_numerator").get<long>();
      Integer m{e.at("multiplicity").get<std::string>()};
      c.powers.emplace_back(ex, m);
    }
  } else {
    std::vector<Catalyst::Entry> entries;
    for (const auto& e : j.at("entries")) {
      Rational v = parse_rational(e.at("value").get<std::string>());
      Integer m{e.at("multiplicity").get<std::string>()};
      entries.emplace_back(v, m);
    }
    c.rational_entries = std::move(entries);
  }
  return c;
}

inline Json certificate_to_json(const SynthesisCertificate& cert, const SchmidtVector& x,
                                const SchmidtVector& y) {
  Json j;
  j["lambda"] = rational_to_string(cert.lambda_used);
  j["strategy"] = cert.strategy;
  j["trace"] = cert.trace;
  auto poly_json = [](const Polynomial& p) {
    Json a = Json::array();
    for (const Rational& c : p.coeffs()) a.push_back(rational_to_string(c));
    return a;
  };
  j["big_gamma"] = poly_json(cert.big_gamma);
  j["small_gamma"] = poly_json(cert.small_gamma);
  j["factorization"] = cert.factorization_summary;
  Json head = Json::array();
  for (const Rational& h : cert.series_head) head.push_back(rational_to_string(h));
  j["series_head"] = head;
  j["series_tail"] = rational_to_string(cert.series_tail);
  j["truncation_m"] = cert.truncation_m;
  if (!cert.epsilon_den.is_zero()) {
    j["epsilon"] = {{"num", field_elem_to_json(cert.epsilon_num)},
                    {"den", field_elem_to_json(cert.epsilon_den)}};
  }
  j["multiplicity_scale"] = cert.multiplicity_scale.str();
  j["catalyst"] = catalyst_to_json(cert.catalyst);
  j["verified"] = cert.verified;
  j["attempts"] = cert.attempts;
  Json xs = Json::array(), ys = Json::array();
  for (const Rational& e : x.elems()) xs.push_back(rational_to_string(e));
  for (const Rational& e : y.elems()) ys.push_back(rational_to_string(e));
  j["x"] = xs;
  j["y"] = ys;
  return j;
}

inline std::string real_to_decimal(const Real& v, unsigned digits = 40) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace catalyx
