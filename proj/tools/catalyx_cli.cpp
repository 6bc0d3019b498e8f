#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catalyx/catalysis.hpp"
#include "catalyx/json_io.hpp"
#include "catalyx/powermean.hpp"
#include "catalyx/sequences.hpp"

namespace {

using namespace catalyx;

constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConditions = 4;
constexpr int kExitBudget = 5;
constexpr int kExitCap = 6;

struct CommonFlags {
  std::string input;
  std::optional<unsigned> precision_bits;
  std::optional<int> grid;
  std::optional<double> tolerance;
  std::optional<double> margin;
  std::optional<long long> max_product_size;
  bool normalize = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("input", f.input, "problem file (JSON), or - for stdin")->required();
  cmd->add_option("--precision-bits", f.precision_bits, "working precision in bits");
  cmd->add_option("--grid", f.grid, "interior sampling grid density");
  cmd->add_option("--tolerance", f.tolerance, "relative classification tolerance");
  cmd->add_option("--margin", f.margin, "lambda / p_cat safety margin for synthesis");
  cmd->add_option("--max-product-size", f.max_product_size,
                  "cap on tensor-product elements in exact verification");
  cmd->add_flag("--normalize", f.normalize, "rescale x and y to unit sum first");
}

ProblemFile load_problem(const CommonFlags& f) {
  ProblemFile p = ProblemFile::load(f.input);
  const char* env_bits = std::getenv("CATALYX_PRECISION_BITS");
  if (env_bits != nullptr) {
    p.analysis.precision_bits = static_cast<unsigned>(std::strtoul(env_bits, nullptr, 10));
  }
  if (f.precision_bits) p.analysis.precision_bits = *f.precision_bits;
  if (f.grid) p.analysis.grid_points = *f.grid;
  if (f.tolerance) p.analysis.rel_tolerance = *f.tolerance;
  if (f.margin) p.synthesis.lambda_margin = *f.margin;
  if (f.max_product_size) p.synthesis.max_product_size = Integer(*f.max_product_size);
  if (p.analysis.max_precision_bits < p.analysis.precision_bits)
    p.analysis.max_precision_bits = p.analysis.precision_bits;
  p.synthesis.analysis = p.analysis;
  if (f.normalize) {
    p.x = p.x.scaled(1 / p.x.sum());
    p.y = p.y.scaled(1 / p.y.sum());
  }
  return p;
}

std::string argmin_string(const ConversionReport& rep) {
  switch (rep.argmin_kind) {
    case ArgminKind::NEG_INF_ENDPOINT: return "-inf";
    case ArgminKind::ONE_ENDPOINT: return "1";
    case ArgminKind::INTERIOR: return real_to_decimal(rep.argmin_nu, 20);
  }
  return "?";
}

int cmd_prob(const CommonFlags& f, bool normalized_semantics) {
  ProblemFile p = load_problem(f);
  auto v = vidal_probability(p.x, p.y);
  Rational value = v.p;
  if (normalized_semantics && value > 1) value = 1;
  Json out;
  out["p_vidal"] = rational_to_string(value);
  out["argmin_m"] = v.argmin_m;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_catprob(const CommonFlags& f, const std::string& curve_path) {
  ProblemFile p = load_problem(f);
  auto rep = catalytic_probability(p.x, p.y, p.analysis);
  Json out;
  out["p_cat"] = real_to_decimal(rep.p_cat);
  out["raw_ratio_min"] = real_to_decimal(rep.raw_ratio_min);
  out["argmin_nu"] = argmin_string(rep);
  out["attainability"] = to_string(rep.attainability);
  out["p_vidal"] = rational_to_string(rep.p_vidal);
  out["vidal_argmin_m"] = rep.vidal_argmin_m;
  out["precision_bits"] = rep.precision_bits;
  out["tolerance"] = rep.tolerance;
  if (!rep.diagnostics.empty()) out["diagnostics"] = rep.diagnostics;
  std::cout << out.dump(2) << "\n";
  if (!curve_path.empty()) {
    auto curve = ratio_curve(p.x, p.y, p.analysis);
    std::ofstream cs(curve_path);
    if (!cs) throw ParseError("cannot open curve output: " + curve_path);
    cs << "nu,ratio\n";
    for (const auto& s : curve.samples) {
      if (s.nu_neg_inf)
        cs << "-inf,";
      else
        cs << real_to_decimal(s.nu, 20) << ",";
      if (s.ratio_inf)
        cs << "inf\n";
      else
        cs << real_to_decimal(s.ratio, 24) << "\n";
    }
  }
  return 0;
}

int cmd_synth(const CommonFlags& f, const std::string& lambda_arg,
              const std::string& out_path) {
  ProblemFile p = load_problem(f);
  Rational lambda;
  if (!lambda_arg.empty())
    lambda = parse_rational(lambda_arg);
  else if (p.lambda)
    lambda = *p.lambda;
  else
    throw ParseError("synth needs --lambda or a \"lambda\" field");

  auto cert = synthesize_catalyst(p.x, p.y, lambda, p.synthesis);
  Json j = certificate_to_json(cert, p.x, p.y);
  std::string path = out_path.empty() ? "certificate.json" : out_path;
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open certificate output: " + path);
  os << j.dump(2) << "\n";
  std::cout << "catalyst dimension " << cert.catalyst.dimension().str() << ", strategy "
            << cert.strategy << ", verified " << (cert.verified ? "true" : "false")
            << ", certificate written to " << path << "\n";
  return cert.verified ? 0 : kExitBudget;
}

int cmd_verify(const CommonFlags& f, const std::string& cert_path) {
  SchmidtVector x{std::vector<Rational>{Rational(1)}};
  SchmidtVector y{std::vector<Rational>{Rational(1)}};
  SynthCatalyst cat;
  Integer cap{10000000};
  if (!cert_path.empty()) {
    std::ifstream in(cert_path);
    if (!in) throw ParseError("cannot open certificate: " + cert_path);
    Json j = Json::parse(in);
    x = SchmidtVector(json_to_rationals(j.at("x"), "x"));
    y = SchmidtVector(json_to_rationals(j.at("y"), "y"));
    if (j.contains("lambda")) {
      Rational lambda = parse_rational(j.at("lambda").get<std::string>());
      y = y.scaled(lambda);
    }
    cat = catalyst_from_json(j.at("catalyst"));
    if (f.max_product_size) cap = Integer(*f.max_product_size);
  } else {
    ProblemFile p = load_problem(f);
    if (!p.catalyst) throw ParseError("verify needs a \"c\" field or --certificate");
    x = p.x;
    y = p.lambda ? p.y.scaled(*p.lambda) : p.y;
    cat = SynthCatalyst::from_catalyst(*p.catalyst);
    cap = p.synthesis.max_product_size;
  }
  bool ok = verify_catalyst(x, y, cat, cap);
  std::cout << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analytics for catalytic conversion of bipartite pure states"};
  app.require_subcommand(1);

  CommonFlags prob_flags, catprob_flags, synth_flags, verify_flags;
  std::string curve_path, lambda_arg, cert_out, cert_in;

  auto* prob = app.add_subcommand("prob", "single-copy conversion probability (exact)");
  add_common(prob, prob_flags);

  auto* catprob = app.add_subcommand("catprob", "catalytic conversion probability bound");
  add_common(catprob, catprob_flags);
  catprob->add_option("--curve", curve_path, "write the sampled ratio curve as CSV");

  auto* synth = app.add_subcommand("synth", "synthesize and verify a catalyst");
  add_common(synth, synth_flags);
  synth->add_option("--lambda", lambda_arg, "conversion probability target (exact rational)");
  synth->add_option("-o,--output", cert_out, "certificate output path");

  auto* verify = app.add_subcommand("verify", "exact catalyst verification");
  verify->add_option("input", verify_flags.input, "problem file with a \"c\" field, or -");
  verify->add_option("--certificate", cert_in, "verify a synthesis certificate file");
  verify->add_option("--max-product-size", verify_flags.max_product_size,
                     "cap on tensor-product elements");
  verify->add_option("--lambda", lambda_arg, "unused; lambda comes from the input file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (prob->parsed()) return cmd_prob(prob_flags, prob_flags.normalize);
    if (catprob->parsed()) return cmd_catprob(catprob_flags, curve_path);
    if (synth->parsed()) return cmd_synth(synth_flags, lambda_arg, cert_out);
    if (verify->parsed()) return cmd_verify(verify_flags, cert_in);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ConditionsError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitConditions;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitCap;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return 0;
}
