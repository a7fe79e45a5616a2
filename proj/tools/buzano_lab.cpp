// buzano_lab: batch verification, single computations and tightness campaigns.
//
// Exit codes: 0 pass, 1 violations found, 2 usage or precondition error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "buzano/alpha_sets.hpp"
#include "buzano/decompositions.hpp"
#include "buzano/functionals.hpp"
#include "buzano/inequalities.hpp"
#include "buzano/io.hpp"
#include "buzano/suite.hpp"

namespace {

using namespace buzano;
using OJson = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

// 15 significant digits; integral values keep a ".0" so they read as reals.
std::string format_real(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

template <class J>
std::string emit(const J& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::number_float:
      return format_real(j.template get<double>());
    case nlohmann::json::value_t::array: {
      std::string out = "[";
      for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + emit(j[i]);
      return out + "]";
    }
    case nlohmann::json::value_t::object: {
      std::string out = "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out += (first ? "\"" : ", \"") + it.key() + "\": " + emit(it.value());
        first = false;
      }
      return out + "}";
    }
    default:
      return j.dump();
  }
}

OJson pair(Complex c) { return OJson::array({c.real(), c.imag()}); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<InequalityId> parse_suite(const std::string& text) {
  if (text == "all") return {all_inequalities().begin(), all_inequalities().end()};
  std::vector<InequalityId> ids;
  for (const std::string& name : split_list(text)) ids.push_back(parse_inequality(name));
  if (ids.empty()) throw std::invalid_argument("--suite lists no ids");
  return ids;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  for (const std::string& item : split_list(text)) {
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("--dims entries must be positive integers");
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw std::invalid_argument("--dims lists no dimensions");
  return dims;
}

// "re" or "re,im".
Complex parse_complex(const std::string& text) {
  const std::vector<std::string> parts = split_list(text);
  if (parts.empty() || parts.size() > 2) throw std::invalid_argument("expected re or re,im, got '" + text + "'");
  const double re = std::stod(parts[0]);
  const double im = parts.size() == 2 ? std::stod(parts[1]) : 0.0;
  return {re, im};
}

void print(const OJson& j) { std::cout << emit(j) << '\n'; }

// ---- verify ----

struct VerifyArgs {
  std::string suite = "all";
  std::string dims = "2,3,4";
  long trials = 100;
  std::uint64_t seed = 0;
  double tol = Tolerances{}.check_tol;
  std::string report;
  std::string csv;
  unsigned threads = 0;
};

int run_verify(const VerifyArgs& a) {
  SuiteConfig cfg;
  cfg.ids = parse_suite(a.suite);
  cfg.dims = parse_dims(a.dims);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.tol.check_tol = a.tol;
  cfg.threads = a.threads;
  const SuiteReport report = suite_run(cfg);
  const std::string text = report.to_json().dump(2);
  if (a.report.empty()) {
    std::cout << text << '\n';
  } else {
    write_text_file(a.report, text);
  }
  if (!a.csv.empty()) write_text_file(a.csv, report.to_csv());
  long trials = 0;
  for (const CellRecord& c : report.cells) trials += c.trials;
  std::cerr << "verify: " << report.cells.size() << " cells, " << trials << " trials, "
            << report.total_violations() << " violations, " << format_real(report.wall_time_s) << " s\n";
  return report.passed() ? kExitPass : kExitViolation;
}

// ---- compute ----

struct ComputeArgs {
  std::string what;
  std::string matrix;
  std::string matrix2;
  double tol = Tolerances{}.opt_tol;
  int restarts = 32;
  std::uint64_t seed = 0;
};

int run_compute(const ComputeArgs& a) {
  Tolerances tol;
  tol.opt_tol = a.tol;
  tol.validate();
  auto second = [&] {
    if (a.matrix2.empty()) throw std::invalid_argument("--what " + a.what + " needs --matrix2");
    return a.matrix2;
  };

  if (a.what == "dixmier") {
    const Subspace s = read_subspace_file(a.matrix, tol);
    const Subspace t = read_subspace_file(second(), tol);
    if (s.ambient_dim() != t.ambient_dim()) throw DimensionError("subspaces live in different dimensions");
    print(OJson{{"cos", dixmier_cos(s, t)}, {"angle", minimal_angle(s, t)}});
    return kExitPass;
  }

  const ComplexMatrix t = read_matrix_file(a.matrix);
  if (a.what == "omega") {
    print(OJson(numerical_radius(t, tol)));
  } else if (a.what == "norm") {
    print(OJson(op_norm(t)));
  } else if (a.what == "min-modulus") {
    print(OJson(min_modulus(t)));
  } else if (a.what == "center-of-mass") {
    const GammaResult r = center_of_mass(t, tol);
    print(OJson{{"gamma", pair(r.minimizer)}, {"dist", r.distance}});
  } else if (a.what == "dist-scalars") {
    const GammaResult r = dist_to_scalars(t, tol);
    print(OJson{{"beta", pair(r.minimizer)}, {"dist", r.distance}});
  } else if (a.what == "paul") {
    const ComplexMatrix t2 = read_matrix_file(second());
    if (t2.dim() != t.dim()) throw DimensionError("--matrix and --matrix2 differ in size");
    const double m = paul_functional(t, t2, a.restarts, a.seed, tol);
    const double d = distance_to_multiples(t, t2, 2.0 * op_norm(t) / min_modulus(t2), tol).distance;
    print(OJson{{"value", m}, {"dist", d}});
  } else if (a.what == "polar") {
    const PolarParts p = polar(t, tol);
    print(OJson{{"V", OJson::parse(to_json(p.v).dump())}, {"abs", OJson::parse(to_json(p.abs_t).dump())}});
  } else {
    throw std::invalid_argument("unknown --what '" + a.what + "'");
  }
  return kExitPass;
}

// ---- alpha ----

struct AlphaArgs {
  std::string matrix;
  std::string alpha;
};

OJson certificate_json(const AlphaCertificate& c) {
  OJson out{{"alpha", pair(c.alpha)}, {"defect", c.defect}, {"member", c.member}};
  out["witness"] = c.witness ? OJson::parse(to_json(*c.witness).dump()) : OJson(nullptr);
  return out;
}

int run_alpha_member(const AlphaArgs& a) {
  print(certificate_json(membership(read_matrix_file(a.matrix), parse_complex(a.alpha))));
  return kExitPass;
}

int run_alpha_optimal(const AlphaArgs& a) {
  const ComplexMatrix t = read_matrix_file(a.matrix);
  const GammaResult r = optimal_alpha(t);
  OJson out{{"alpha", pair(r.minimizer)}, {"defect", r.distance}};
  out["member"] = r.minimizer != Complex(0.0, 0.0) && membership(t, r.minimizer).member;
  print(out);
  return kExitPass;
}

int run_alpha_region(const AlphaArgs& a) {
  const AlphaRegion r = alpha_region(read_matrix_file(a.matrix));
  print(OJson{{"kind", to_string(r.kind)}, {"parameters", r.parameters}});
  return kExitPass;
}

// ---- tightness ----

struct TightnessArgs {
  std::string ineq;
  std::size_t dim = 2;
  int restarts = 64;
  std::uint64_t seed = 0;
  std::string report;
};

int run_tightness(const TightnessArgs& a) {
  const InequalityId id = parse_inequality(a.ineq);
  const TightnessResult r = tightness_search(id, a.dim, a.restarts, a.seed);
  Json out{{"id", to_string(id)},
           {"dim", a.dim},
           {"restarts", a.restarts},
           {"seed", a.seed},
           {"best_ratio", r.best_ratio},
           {"best_restart", r.restart},
           {"evaluations", r.evaluations},
           {"witness", to_json(id, r.witness)}};
  if (a.report.empty()) {
    std::cout << out.dump(2) << '\n';
  } else {
    write_text_file(a.report, out.dump(2));
  }
  std::cerr << "tightness: " << a.ineq << " dim " << a.dim << " best_ratio " << format_real(r.best_ratio) << '\n';
  return kExitPass;
}

// ---- evaluate / draw ----

struct EvaluateArgs {
  std::string ineq;
  std::string instance;
  double tol = Tolerances{}.check_tol;
};

int run_evaluate(const EvaluateArgs& a) {
  const Json j = read_json_file(a.instance);
  // Accept a bare instance or a tightness report carrying one as "witness".
  const Json& inst_json = j.contains("witness") ? j.at("witness") : j;
  std::string name = a.ineq;
  if (name.empty()) {
    if (!inst_json.contains("id")) throw std::invalid_argument("--ineq is required when the file names no id");
    name = inst_json.at("id").get<std::string>();
  }
  Tolerances tol;
  tol.check_tol = a.tol;
  const Verdict v = evaluate(parse_inequality(name), instance_from_json(inst_json), tol);
  std::cout << to_json(v).dump(2) << '\n';
  return v.holds ? kExitPass : kExitViolation;
}

struct DrawArgs {
  std::string ineq;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  int attempt = -1;
};

int run_draw(const DrawArgs& a) {
  const InequalityId id = parse_inequality(a.ineq);
  Instance inst;
  if (a.attempt >= 0) {
    inst = regenerate({a.seed, std::string(to_string(id)), a.dim, a.index, a.attempt});
  } else {
    inst = make_instance(id, a.dim, a.seed, a.index).instance;
  }
  std::cout << to_json(id, inst).dump(2) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Buzano-type inequalities and A_alpha sets", "buzano_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the randomized inequality suite and write a JSON report");
  verify->add_option("--suite", va.suite, "all, or a comma-separated list of ids")->capture_default_str();
  verify->add_option("--dims", va.dims, "Comma-separated dimensions")->capture_default_str();
  verify->add_option("--trials", va.trials, "Instances per (id, dim) cell")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--seed", va.seed, "Master seed")->capture_default_str();
  verify->add_option("--tol", va.tol, "check_tol (relative slack)")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--report", va.report, "Report path (stdout when omitted)");
  verify->add_option("--csv", va.csv, "Optional per-cell CSV path");
  verify->add_option("--threads", va.threads, "Worker threads (0: BUZANO_LAB_THREADS or all cores)");

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Evaluate one functional on a matrix file");
  compute->add_option("--what", ca.what, "omega|norm|min-modulus|center-of-mass|dist-scalars|paul|polar|dixmier")
      ->required()
      ->check(CLI::IsMember({"omega", "norm", "min-modulus", "center-of-mass", "dist-scalars", "paul", "polar",
                             "dixmier"}));
  compute->add_option("--matrix", ca.matrix, "Matrix file (subspace file for dixmier)")->required();
  compute->add_option("--matrix2", ca.matrix2, "Second operand: T for paul, second subspace for dixmier");
  compute->add_option("--tol", ca.tol, "opt_tol for scalar searches")->check(CLI::PositiveNumber)->capture_default_str();
  compute->add_option("--restarts", ca.restarts, "Random restarts for paul")->check(CLI::NonNegativeNumber)->capture_default_str();
  compute->add_option("--seed", ca.seed, "Seed for paul restarts")->capture_default_str();

  AlphaArgs aa;
  auto* alpha = app.add_subcommand("alpha", "Membership in A_alpha = {T : ||alpha T - I|| <= 1}");
  alpha->require_subcommand(1);
  auto* member = alpha->add_subcommand("member", "Defect and certificate for a given alpha");
  member->add_option("--matrix", aa.matrix, "Matrix file")->required();
  member->add_option("--alpha", aa.alpha, "alpha as re or re,im")->required();
  auto* optimal = alpha->add_subcommand("optimal", "Center of mass as the best alpha");
  optimal->add_option("--matrix", aa.matrix, "Matrix file")->required();
  auto* region = alpha->add_subcommand("region", "Exact alpha region for positive and rank-one inputs");
  region->add_option("--matrix", aa.matrix, "Matrix file")->required();

  TightnessArgs ta;
  auto* tight = app.add_subcommand("tightness", "Hill-climb lhs/rhs towards equality");
  tight->add_option("--ineq", ta.ineq, "Inequality id")->required();
  tight->add_option("--dim", ta.dim, "Dimension (>= 2)")->capture_default_str();
  tight->add_option("--restarts", ta.restarts, "Random restarts")->check(CLI::PositiveNumber)->capture_default_str();
  tight->add_option("--seed", ta.seed, "Master seed")->capture_default_str();
  tight->add_option("--report", ta.report, "Report path (stdout when omitted)");

  EvaluateArgs ea;
  auto* eval = app.add_subcommand("evaluate", "Evaluate one instance file (or a tightness witness)");
  eval->add_option("--ineq", ea.ineq, "Inequality id (defaults to the id stored in the file)");
  eval->add_option("--instance", ea.instance, "Instance or tightness report file")->required();
  eval->add_option("--tol", ea.tol, "check_tol")->check(CLI::PositiveNumber)->capture_default_str();

  DrawArgs da;
  auto* draw = app.add_subcommand("draw", "Print a generated instance, e.g. a report's worst_instance");
  draw->add_option("--ineq", da.ineq, "Inequality id")->required();
  draw->add_option("--dim", da.dim, "Dimension")->required();
  draw->add_option("--seed", da.seed, "Master seed")->capture_default_str();
  draw->add_option("--index", da.index, "Instance index")->capture_default_str();
  draw->add_option("--attempt", da.attempt, "Exact attempt from a fingerprint (default: first valid)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) return run_verify(va);
    if (*compute) return run_compute(ca);
    if (*member) return run_alpha_member(aa);
    if (*optimal) return run_alpha_optimal(aa);
    if (*region) return run_alpha_region(aa);
    if (*tight) return run_tightness(ta);
    if (*eval) return run_evaluate(ea);
    if (*draw) return run_draw(da);
  } catch (const std::exception& e) {
    std::cerr << "buzano_lab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
