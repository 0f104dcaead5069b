#include "torus_hypo/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torus_hypo/diophantine.hpp"
#include "torus_hypo/fourier_field.hpp"
#include "torus_hypo/normalform.hpp"
#include "torus_hypo/report.hpp"
#include "torus_hypo/singular.hpp"
#include "torus_hypo/solver.hpp"
#include "torus_hypo/spec_io.hpp"
#include "torus_hypo/system.hpp"

namespace torus_hypo::cli {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::OrderError:
    case ErrorKind::NonPositiveDigit: return kMalformed;
    case ErrorKind::SolvabilityError: return kSolvability;
    case ErrorKind::ProfileError:
    case ErrorKind::MeanNotZero:
    case ErrorKind::GeometryError: return kProfile;
    case ErrorKind::ZeroDivisorError: return kZeroDivisor;
    case ErrorKind::CompatibilityError: return kCompatibility;
    case ErrorKind::GridMismatch: return kGridMismatch;
    case ErrorKind::RefusedHypoelliptic: return kRefusedHypoelliptic;
    case ErrorKind::NoSolverApplies:
    case ErrorKind::MissingClassification: return kNoSolverApplies;
    default: return kOther;
  }
}

namespace {

struct Common {
  std::optional<std::string> s;
  std::string mode = "gevrey";
  int precision = 60;
  bool timing = false;
};

struct Outcome {
  json result;
  int code = kOk;
  std::vector<json> inputs;
};

void write_file(const std::string& path, const json& value) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  f << report::canonical_dump(value);
  if (!f) fail(ErrorKind::InvalidInput, "write failed for '" + path + "'");
}

system::Order resolve_order(const Common& c, const system::SystemSpec* spec) {
  if (c.mode == "smooth") return system::Order::smooth();
  if (c.mode != "gevrey") fail(ErrorKind::InvalidInput, "--mode must be gevrey or smooth");
  system::Order order = c.s ? system::Order::parse(*c.s) : (spec && spec->order ? *spec->order : system::Order::gevrey(2));
  order.checked_s();
  return order;
}

json order_json(const system::Order& o) {
  if (o.mode == system::Order::Mode::Smooth) return {{"mode", "smooth"}};
  return {{"mode", "gevrey"}, {"s", o.text}};
}

int verdict_code(system::Decision d) {
  switch (d) {
    case system::Decision::Hypoelliptic: return kOk;
    case system::Decision::NotHypoelliptic: return kNotHypoelliptic;
    default: return kUnknown;
  }
}

Outcome cmd_classify(const std::string& path, const Common& c) {
  json doc = read_json_file(path);
  auto spec = spec_from_json(doc);
  auto order = resolve_order(c, &spec);
  auto cls = system::classify(spec, order);
  json result = {{"spec", spec.name}, {"order", order_json(order)}, {"classification", system::to_json(cls)}};
  result["verdict"] = system::to_string(cls.verdict.decision);
  return {result, verdict_code(cls.verdict.decision), {doc}};
}

Outcome cmd_diagnose(const std::string& path, const Common& c) {
  json doc = read_json_file(path);
  auto spec = spec_from_json(doc);
  auto order = resolve_order(c, &spec);
  json tubes = json::array();
  for (std::size_t j = 0; j < spec.n(); ++j) {
    auto sign = system::sign_analysis(spec.tubes[j].b);
    tubes.push_back({{"tube", j + 1},
                     {"a", to_json(spec.tubes[j].a)},
                     {"b", to_json(spec.tubes[j].b)},
                     {"a0", system::average(spec.tubes[j].a).to_json()},
                     {"sign", system::to_json(sign)}});
  }
  auto cls = system::classify(spec, order);
  json comps = json::array();
  for (const auto& v : cls.components) comps.push_back(diophantine::to_json(v));
  json result = {{"spec", spec.name},
                 {"order", order_json(order)},
                 {"tubes", tubes},
                 {"analysis", system::to_json(cls.analysis)},
                 {"component_evidence", comps},
                 {"vector_evidence", cls.dio ? diophantine::to_json(*cls.dio) : json(nullptr)},
                 {"verdict", system::to_json(cls.verdict)}};
  return {result, kOk, {doc}};
}

json log_or_exact(const std::optional<BigInt>& v, LogReal log) {
  json j = {{"log", static_cast<double>(log)}};
  j["exact"] = v ? json(v->get_str()) : json(nullptr);
  return j;
}

Outcome cmd_cf(const std::string& sub, const std::string& digits, std::size_t n, const Common& c, double epsilon,
               std::size_t N) {
  diophantine::ContinuedFraction cf{diophantine::DigitStream::parse(digits), {}};
  if (n < 1) fail(ErrorKind::InvalidInput, "--n must be at least 1");
  json result = {{"digits", cf.digits.to_json()}, {"subcommand", sub}, {"n", n}};
  json input = {{"digits", cf.digits.to_json()}};
  if (sub == "convergents") {
    json rows = json::array();
    for (const auto& r : diophantine::convergents(cf, n)) {
      rows.push_back({{"n", r.n}, {"p", log_or_exact(r.p, r.log_p)}, {"q", log_or_exact(r.q, r.log_q)}});
    }
    result["rows"] = rows;
  } else if (sub == "bounds") {
    json rows = json::array();
    for (std::size_t k = 1; k <= n; ++k) {
      json row = {{"n", k}};
      auto li = diophantine::log_approx_interval(cf, k);
      row["log_lower"] = static_cast<double>(li.log_lower);
      row["log_upper"] = static_cast<double>(li.log_upper);
      try {
        auto iv = diophantine::approx_interval(cf, k);
        row["lower"] = to_string(iv.lower);
        row["upper"] = to_string(iv.upper);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OutOfRange) throw;
        row["lower"] = nullptr;
        row["upper"] = nullptr;
      }
      rows.push_back(row);
    }
    result["rows"] = rows;
  } else if (sub == "classify") {
    const double s = c.s ? system::Order::parse(*c.s).checked_s().value_or(2) : 2.0;
    auto mu = diophantine::liouville_exponent_trend(cf, n);
    auto beta = diophantine::exp_liouville_score(cf, s, n);
    json mu_rows = json::array(), beta_rows = json::array();
    for (const auto& r : mu) mu_rows.push_back(diophantine::to_json(r));
    for (const auto& r : beta) beta_rows.push_back(diophantine::to_json(r));
    result["s"] = s;
    result["liouville"] = {{"rows", mu_rows}, {"trend", diophantine::to_string(diophantine::classify_liouville_rows(mu))}};
    result["exp_liouville"] = {{"rows", beta_rows}, {"trend", diophantine::to_string(diophantine::classify_exp_rows(beta))}};
  } else if (sub == "condition-b") {
    const double s = c.s ? system::Order::parse(*c.s).checked_s().value_or(2) : 2.0;
    auto rows = diophantine::condition_B_check(cf, s, epsilon, N, n);
    json out = json::array();
    bool all = true;
    for (const auto& r : rows) {
      all = all && r.certified;
      out.push_back({{"n", r.n},
                     {"certified", r.certified},
                     {"lhs_log", static_cast<double>(r.lhs_log)},
                     {"rhs_log", static_cast<double>(r.rhs_log)}});
    }
    result["s"] = s;
    result["epsilon"] = epsilon;
    result["N"] = N;
    result["rows"] = out;
    result["all_certified"] = all;
  } else {
    fail(ErrorKind::InvalidInput, "unknown cf subcommand '" + sub + "'");
  }
  return {result, kOk, {input}};
}

Outcome cmd_solve(const std::string& spec_path, const std::string& rhs_path, const std::string& out_path, int nodes,
                  const Common& c) {
  json doc = read_json_file(spec_path);
  json rhs_doc = read_json_file(rhs_path);
  auto spec = spec_from_json(doc);
  if (!rhs_doc.is_object() || !rhs_doc.contains("fields") || !rhs_doc["fields"].is_array()) {
    fail(ErrorKind::InvalidInput, "rhs must be {\"fields\": [field or null per tube]}");
  }
  solver::RhsList f;
  for (const auto& entry : rhs_doc["fields"]) {
    if (entry.is_null()) {
      f.emplace_back();
    } else {
      f.emplace_back(field_from_json(entry));
    }
  }
  if (f.size() != spec.n()) fail(ErrorKind::InvalidInput, "rhs lists " + std::to_string(f.size()) + " fields for " + std::to_string(spec.n()) + " tubes");
  solver::SolverOptions opts;
  opts.min_nodes = nodes;
  opts.precision = c.precision;
  auto analysis = system::analyze(spec);
  json result = {{"spec", spec.name}, {"normal_form", normalform::to_json(normalform::build_normal_form(spec))}};
  FourierField u;
  std::optional<std::size_t> tube;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    auto p = analysis.tubes[j].sign.profile;
    if ((p == system::SignProfile::NonNegativeNotZero || p == system::SignProfile::NonPositiveNotZero) && f[j]) {
      tube = j;
      break;
    }
  }
  if (tube) {
    u = solver::solve_single_tube(*tube, spec, *f[*tube], opts);
    result["method"] = "single_tube";
    result["tube"] = *tube + 1;
  } else if (!analysis.J.empty()) {
    auto d = solver::solve_by_division(spec, f, opts);
    u = std::move(d.u);
    result["method"] = "division";
    json J = json::array();
    for (auto j : d.J) J.push_back(j + 1);
    result["J"] = J;
    result["mean_fixed"] = d.mean_fixed;
  } else {
    fail(ErrorKind::NoSolverApplies, "no sign-definite tube with a right side and no tube with b identically zero");
  }
  result["residual"] = solver::residual_json(solver::residual(spec, u, f));
  const double s = c.s ? system::Order::parse(*c.s).checked_s().value_or(2) : 2.0;
  try {
    result["decay_fit"] = gevrey::to_json(solver::decay_report(u, s));
  } catch (const Error& e) {
    result["decay_fit"] = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  result["blocks"] = u.size();
  write_file(out_path, to_json(u));
  result["out"] = out_path;
  return {result, kOk, {doc, rhs_doc}};
}

Outcome cmd_singular(const std::string& path, const std::string& out_path, double xi_max, int grid, std::size_t count,
                     const std::string& field_out, const Common& c) {
  json doc = read_json_file(path);
  auto spec = spec_from_json(doc);
  auto order = resolve_order(c, &spec);
  singular::BuildOptions opts;
  opts.xi_max = xi_max;
  auto u = singular::build_for_spec(spec, order, opts);
  json full = singular::to_json(u);
  write_file(out_path, full);
  json residuals = json::array();
  const std::size_t k = singular::dense_prefix(u, count);
  for (std::size_t j = 0; j < spec.n(); ++j) {
    residuals.push_back({{"tube", j + 1}, {"residual", singular::operator_residual(spec, j, u, k, grid)}});
  }
  json head = json::array();
  for (std::size_t i = 0; i < u.lower_bounds.size() && i < 16; ++i) {
    head.push_back({{"xi", u.lower_bounds[i].xi}, {"value", u.lower_bounds[i].value}, {"bound", u.lower_bounds[i].bound}});
  }
  json result = {{"spec", spec.name},
                 {"order", order_json(order)},
                 {"construction", full["construction"]},
                 {"m", u.m},
                 {"q", u.q.get_str()},
                 {"ladder_size", u.ladder.size()},
                 {"lower_bound_table_head", head},
                 {"certificates", u.certificates},
                 {"operator_residual", {{"grid", grid}, {"blocks", k}, {"tubes", residuals}}},
                 {"out", out_path}};
  if (full.contains("base")) result["base"] = full["base"];
  if (!field_out.empty()) {
    write_file(field_out, to_json(u.materialize(k, grid)));
    result["field_out"] = field_out;
  }
  return {result, kOk, {doc}};
}

Outcome cmd_normalform(const std::string& path, const std::string& field_path, double epsilon, int alpha_max,
                       const Common& c) {
  json doc = read_json_file(path);
  auto spec = spec_from_json(doc);
  auto nf = normalform::build_normal_form(spec);
  json result = {{"spec", spec.name}, {"normal_form", normalform::to_json(nf)}};
  std::vector<json> inputs{doc};
  const double s = c.s ? system::Order::parse(*c.s).checked_s().value_or(2) : 2.0;
  json checks = json::array();
  for (std::size_t j = 0; j < nf.A.size(); ++j) {
    if (nf.A[j].is_zero()) continue;
    auto chk = normalform::gauge_derivative_check(nf.A[j], s, epsilon, alpha_max, {1, 2, 4, 8, 16, 32});
    json row = normalform::to_json(chk);
    row["tube"] = j + 1;
    checks.push_back(row);
  }
  result["gauge_derivative_checks"] = checks;
  result["s"] = s;
  result["epsilon"] = epsilon;
  if (!field_path.empty()) {
    json fdoc = read_json_file(field_path);
    inputs.push_back(fdoc);
    result["conjugation_residual"] = normalform::to_json(normalform::conjugation_residual(spec, field_from_json(fdoc)));
  }
  return {result, kOk, inputs};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global hypoellipticity and solvability of tube-type systems on the torus", "torus-hypo"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--s", common.s, "Gevrey order s > 1 (decimal or p/q)");
    sub->add_option("--mode", common.mode, "gevrey or smooth")->check(CLI::IsMember({"gevrey", "smooth"}));
    sub->add_option("--precision", common.precision, "digits for real constants")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", common.timing, "add runtime to the report");
  };

  std::string spec_path, rhs_path, out_path, field_path, digits, cf_sub, field_out;
  std::size_t n = 5, N = 3, count = 4;
  double epsilon = 0.5, xi_max = 4096;
  int nodes = 1024, grid = 32, alpha_max = 12;

  auto* classify = app.add_subcommand("classify", "decide global s-hypoellipticity of a system");
  classify->add_option("spec", spec_path)->required();
  add_common(classify);

  auto* diagnose = app.add_subcommand("diagnose", "sign and Diophantine evidence for each tube");
  diagnose->add_option("spec", spec_path)->required();
  add_common(diagnose);

  auto* cf = app.add_subcommand("cf", "continued fraction tables");
  cf->add_option("subcommand", cf_sub)->required()->check(CLI::IsMember({"convergents", "bounds", "classify", "condition-b"}));
  cf->add_option("digits", digits, "factorial_pow10, constant:K, explicit:a,b,...")->required();
  cf->add_option("--n", n, "number of rows")->check(CLI::PositiveNumber);
  cf->add_option("--epsilon", epsilon);
  cf->add_option("--N", N);
  add_common(cf);

  auto* solve = app.add_subcommand("solve", "solve L_j u = f_j");
  solve->add_option("spec", spec_path)->required();
  solve->add_option("rhs", rhs_path)->required();
  solve->add_option("--out", out_path, "solution field JSON")->required();
  solve->add_option("--N", nodes, "minimum quadrature nodes")->check(CLI::PositiveNumber);
  add_common(solve);

  auto* sing = app.add_subcommand("singular", "build a singular solution of a non-hypoelliptic system");
  sing->add_option("spec", spec_path)->required();
  sing->add_option("--out", out_path, "factored solution JSON")->required();
  sing->add_option("--xi-max", xi_max)->check(CLI::PositiveNumber);
  sing->add_option("--grid", grid, "grid for residuals and materialized blocks");
  sing->add_option("--blocks", count, "ladder entries used for residuals and --field-out");
  sing->add_option("--field-out", field_out, "materialized field JSON");
  add_common(sing);

  auto* nf = app.add_subcommand("normalform", "normal form and gauge checks");
  nf->add_option("spec", spec_path)->required();
  nf->add_option("--field", field_path, "test field for the conjugation residual");
  nf->add_option("--epsilon", epsilon);
  nf->add_option("--alpha-max", alpha_max)->check(CLI::Range(1, 30));
  add_common(nf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kMalformed;
  }

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o;
    std::string name;
    if (*classify) {
      name = "classify";
      o = cmd_classify(spec_path, common);
    } else if (*diagnose) {
      name = "diagnose";
      o = cmd_diagnose(spec_path, common);
    } else if (*cf) {
      name = "cf";
      o = cmd_cf(cf_sub, digits, n, common, epsilon, N);
    } else if (*solve) {
      name = "solve";
      o = cmd_solve(spec_path, rhs_path, out_path, nodes, common);
    } else if (*sing) {
      name = "singular";
      o = cmd_singular(spec_path, out_path, xi_max, grid, count, field_out, common);
    } else {
      name = "normalform";
      o = cmd_normalform(spec_path, field_path, epsilon, alpha_max, common);
    }
    report::Report r;
    r.command = name;
    r.args = args;
    r.input_digest = report::input_digest(o.inputs);
    r.result = std::move(o.result);
    if (common.timing) r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << report::canonical_dump(report::to_json(r));
    return o.code;
  } catch (const Error& e) {
    err << "torus-hypo: " << e.what() << '\n';
    json j = {{"format_version", report::kFormatVersion},
              {"args", args},
              {"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
    out << report::canonical_dump(j);
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "torus-hypo: " << e.what() << '\n';
    return kOther;
  }
}

}  // namespace torus_hypo::cli
