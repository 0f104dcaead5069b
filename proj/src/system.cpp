#include "torus_hypo/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "torus_hypo/error.hpp"
#include "torus_hypo/polynomial.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo::system {

using diophantine::Trend;

namespace {

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

ExactTrig real_form(const TrigPoly& b) {
  if (b.is_exact()) return *b.exact_form();
  ExactTrig form;
  int d = b.degree();
  form.constant = from_double(b.coefficient(0).real());
  for (int k = 1; k <= d; ++k) {
    form.cos.push_back(from_double(2 * b.coefficient(k).real()));
    form.sin.push_back(from_double(-2 * b.coefficient(k).imag()));
  }
  return form;
}

/// b(t) (1 + x^2)^D with x = tan(t/2).
Polynomial weierstrass(const ExactTrig& form) {
  int d = static_cast<int>(std::max(form.cos.size(), form.sin.size()));
  Polynomial one_plus_x2({Rational(1), Rational(0), Rational(1)});
  std::vector<Polynomial> powers{Polynomial({Rational(1)})};
  for (int k = 1; k <= d; ++k) powers.push_back(powers.back() * one_plus_x2);
  Polynomial total = powers[static_cast<std::size_t>(d)].scaled(form.constant);
  for (int k = 1; k <= d; ++k) {
    Rational a = k <= static_cast<int>(form.cos.size()) ? form.cos[static_cast<std::size_t>(k - 1)] : Rational(0);
    Rational s = k <= static_cast<int>(form.sin.size()) ? form.sin[static_cast<std::size_t>(k - 1)] : Rational(0);
    if (a == 0 && s == 0) continue;
    std::vector<Rational> re(static_cast<std::size_t>(2 * k + 1), Rational(0));
    std::vector<Rational> im(static_cast<std::size_t>(2 * k + 1), Rational(0));
    for (int j = 0; j <= 2 * k; ++j) {
      Rational c(binomial(static_cast<unsigned long>(2 * k), static_cast<unsigned long>(j)));
      if (j % 2 == 0) {
        re[static_cast<std::size_t>(j)] = (j / 2) % 2 == 0 ? c : Rational(-c);
      } else {
        im[static_cast<std::size_t>(j)] = ((j - 1) / 2) % 2 == 0 ? c : Rational(-c);
      }
    }
    Polynomial term = Polynomial(re).scaled(a) + Polynomial(im).scaled(s);
    total = total + term * powers[static_cast<std::size_t>(d - k)];
  }
  return total;
}

SignProfile exact_profile(const TrigPoly& b) {
  Polynomial q = weierstrass(real_form(b));
  if (q.is_zero()) return SignProfile::IdenticallyZero;
  bool changes = q.degree() % 2 == 1;
  auto factors = square_free_factors(q);
  for (std::size_t i = 0; i < factors.size() && !changes; i += 2) {
    if (count_real_roots(factors[i]) > 0) changes = true;
  }
  if (changes) return SignProfile::ChangesSign;
  for (long x = 0;; ++x) {
    for (long v : {x, -x}) {
      Rational value = q(Rational(v));
      if (value != 0) return value > 0 ? SignProfile::NonNegativeNotZero : SignProfile::NonPositiveNotZero;
    }
  }
}

bool claim_applies(const VectorClaim& c, double s) {
  if (c.s_min && s < *c.s_min) return false;
  if (c.s_max && s > *c.s_max) return false;
  return true;
}

std::string claim_name(ClaimKind k) {
  switch (k) {
    case ClaimKind::ExpLiouville: return "exp_liouville";
    case ClaimKind::NotExpLiouville: return "not_exp_liouville";
    case ClaimKind::Liouville: return "liouville";
    case ClaimKind::NotLiouville: return "not_liouville";
  }
  return {};
}

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
  os << "}";
  return os.str();
}

}  // namespace

Order Order::gevrey(double s) {
  Order o;
  o.mode = Mode::Gevrey;
  o.s = s;
  std::ostringstream os;
  os << s;
  o.text = os.str();
  return o;
}

Order Order::smooth() {
  Order o;
  o.mode = Mode::Smooth;
  o.s = 0;
  o.text = "smooth";
  return o;
}

Order Order::parse(const std::string& text) {
  if (text == "smooth") return smooth();
  if (text == "analytic") {
    Order o;
    o.mode = Mode::Analytic;
    o.s = 1;
    o.text = "analytic";
    return o;
  }
  Order o;
  o.mode = Mode::Gevrey;
  o.s = to_double(parse_rational(text));
  o.text = text;
  return o;
}

std::optional<double> Order::checked_s() const {
  if (mode == Mode::Smooth) return std::nullopt;
  if (mode == Mode::Analytic) fail(ErrorKind::OrderError, "the analytic case is outside the decision procedure");
  if (!(s > 1)) fail(ErrorKind::OrderError, "Gevrey order must exceed 1");
  return s;
}

std::string to_string(SignProfile p) {
  switch (p) {
    case SignProfile::IdenticallyZero: return "IdenticallyZero";
    case SignProfile::NonNegativeNotZero: return "NonNegativeNotZero";
    case SignProfile::NonPositiveNotZero: return "NonPositiveNotZero";
    case SignProfile::ChangesSign: return "ChangesSign";
    case SignProfile::Unknown: return "Unknown";
  }
  return "Unknown";
}

SignResult sign_analysis(const TrigPoly& b, const SignOptions& options) {
  if (!b.is_real()) fail(ErrorKind::InvalidInput, "b must be real-valued");
  SignResult result;
  result.evidence.approximate = !b.is_exact();
  if (b.is_exact()) {
    if (b.is_zero()) {
      result.profile = SignProfile::IdenticallyZero;
      result.evidence.method = "exact";
      return result;
    }
  } else {
    bool tiny = true;
    for (auto c : b.coefficients()) tiny = tiny && std::abs(c) < 1e-14;
    if (tiny) {
      result.profile = SignProfile::IdenticallyZero;
      result.evidence.method = "threshold";
      return result;
    }
  }
  const double lipschitz = b.derivative_bound();
  double scale = 0;
  for (auto c : b.coefficients()) scale += std::abs(c);
  int n = next_pow2(64 * (b.degree() + 1));
  for (;;) {
    auto samples = b.sample(n);
    double threshold = lipschitz * kPi / n;
    double lo = samples[0].real(), hi = samples[0].real();
    bool pos = false, neg = false, all_strict = true;
    for (auto v : samples) {
      double x = v.real();
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      if (x > threshold) pos = true;
      if (x < -threshold) neg = true;
      if (std::fabs(x) <= threshold) all_strict = false;
    }
    result.evidence.grid = n;
    result.evidence.lipschitz = lipschitz;
    result.evidence.threshold = threshold;
    result.evidence.min_value = lo;
    result.evidence.max_value = hi;
    if (pos && neg) {
      result.evidence.method = "grid";
      result.profile = SignProfile::ChangesSign;
      return result;
    }
    if (all_strict) {
      result.evidence.method = "grid";
      result.profile = pos ? SignProfile::NonNegativeNotZero : SignProfile::NonPositiveNotZero;
      return result;
    }
    if (!b.is_exact()) {
      // Float data: an opposite excursion at rounding level is read as touching zero.
      double tol = 1e-12 * scale;
      if (pos && lo >= -tol) {
        result.evidence.method = "grid+rounding";
        result.profile = SignProfile::NonNegativeNotZero;
        return result;
      }
      if (neg && hi <= tol) {
        result.evidence.method = "grid+rounding";
        result.profile = SignProfile::NonPositiveNotZero;
        return result;
      }
    }
    if (options.exact_fallback) break;
    if (n >= options.max_grid) {
      fail(ErrorKind::UncertifiableSign, "sign of b not certified at grid " + std::to_string(n));
    }
    n *= 2;
  }
  result.evidence.method = b.is_exact() ? "exact" : "exact(rationalized)";
  result.profile = exact_profile(b);
  return result;
}

RealConstant average(const TrigPoly& p) {
  if (p.is_exact()) return RealConstant::rational(*p.exact_mean());
  return RealConstant::approx(p.mean().real());
}

RealConstant average(const Coefficient& a) {
  if (const auto* c = std::get_if<RealConstant>(&a)) return *c;
  return average(std::get<TrigPoly>(a));
}

Complex SystemAnalysis::c0(std::size_t j) const {
  return {tubes[j].a0.to_double(), tubes[j].b0.to_double()};
}

SystemAnalysis analyze(const SystemSpec& spec, const SignOptions& options) {
  if (spec.tubes.empty()) fail(ErrorKind::InvalidInput, "system needs at least one tube");
  SystemAnalysis out;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const auto& tube = spec.tubes[j];
    if (const auto* p = std::get_if<TrigPoly>(&tube.a); p && !p->is_real()) {
      fail(ErrorKind::InvalidInput, "a_" + std::to_string(j + 1) + " must be real-valued");
    }
    TubeAnalysis t;
    t.a0 = average(tube.a);
    t.sign = sign_analysis(tube.b, options);
    t.b0 = t.sign.profile == SignProfile::IdenticallyZero ? RealConstant::rational(Rational(0)) : average(tube.b);
    if (t.sign.profile == SignProfile::IdenticallyZero) out.J.push_back(j);
    out.tubes.push_back(std::move(t));
  }
  return out;
}

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Hypoelliptic: return "Hypoelliptic";
    case Decision::NotHypoelliptic: return "NotHypoelliptic";
    case Decision::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string to_string(WitnessKind w) {
  switch (w) {
    case WitnessKind::ConditionI: return "ConditionI";
    case WitnessKind::ConditionII: return "ConditionII";
    case WitnessKind::FailureBothConditions: return "FailureBothConditions";
    case WitnessKind::MissingClassification: return "MissingClassification";
  }
  return "MissingClassification";
}

DiophantineVerdict classify_vector(const std::vector<RealConstant>& components, const Order& order,
                                   const std::optional<VectorClaim>& claim, std::size_t horizon) {
  std::optional<double> s = order.checked_s();
  const bool smooth = !s.has_value();
  const Trend yes = smooth ? Trend::LiouvilleTrend : Trend::ExpLiouvilleTrend;
  const Trend no = smooth ? Trend::NotLiouvilleTrend : Trend::NotExpLiouvilleTrend;

  DiophantineVerdict out;
  out.s = s;
  out.n_used = horizon;
  if (components.empty()) fail(ErrorKind::InvalidInput, "empty average vector");

  if (claim) {
    std::optional<Trend> from_claim;
    switch (claim->kind) {
      case ClaimKind::NotLiouville: from_claim = no; break;
      case ClaimKind::Liouville:
        if (smooth) from_claim = yes;
        break;
      case ClaimKind::NotExpLiouville:
        if (!smooth && claim_applies(*claim, *s)) from_claim = no;
        break;
      case ClaimKind::ExpLiouville:
        if (smooth || claim_applies(*claim, *s)) from_claim = yes;
        break;
    }
    if (from_claim) {
      out.kind = *from_claim;
      out.note = "user claim " + claim_name(claim->kind);
      if (!claim->note.empty()) out.note += ": " + claim->note;
      if (claim->witness) {
        auto check = diophantine::verify_witness(*claim->witness, components, s.value_or(1.0));
        if (!check.unverifiable && !check.verified) {
          fail(ErrorKind::WitnessMismatch, "supplied witness fails its own inequality");
        }
        out.note += check.verified ? "; witness verified" : "; witness not checkable from finite data";
      }
      return out;
    }
  }

  bool all_rational = true;
  std::vector<std::size_t> irrational, unknown_rationality;
  std::vector<DiophantineVerdict> verdicts;
  for (std::size_t j = 0; j < components.size(); ++j) {
    auto r = components[j].is_rational();
    if (!r || !*r) all_rational = false;
    if (!r) unknown_rationality.push_back(j);
    if (r && !*r) irrational.push_back(j);
    verdicts.push_back(diophantine::classify_constant(components[j], s, horizon));
  }
  if (all_rational) {
    out.kind = Trend::Rational;
    out.note = "every component is an exact rational";
    return out;
  }
  for (std::size_t j = 0; j < verdicts.size(); ++j) {
    if (verdicts[j].kind == no) {
      out.kind = no;
      out.evidence = verdicts[j].evidence;
      out.note = "component " + std::to_string(j + 1) + " is " + diophantine::to_string(no) +
                 ", which the whole vector inherits; " + verdicts[j].note;
      return out;
    }
  }
  if (unknown_rationality.empty() && irrational.size() == 1 && verdicts[irrational[0]].kind == yes) {
    std::size_t j = irrational[0];
    out.kind = yes;
    out.evidence = verdicts[j].evidence;
    out.note = "single irrational component " + std::to_string(j + 1) + " with rational companions; " + verdicts[j].note;
    return out;
  }
  out.kind = Trend::Unknown;
  out.note = unknown_rationality.empty()
                 ? "component verdicts do not determine the vector verdict"
                 : "component " + std::to_string(unknown_rationality[0] + 1) +
                       " is a float approximation; no classification is possible without a claim";
  if (!unknown_rationality.empty() && !components[unknown_rationality[0]].label().empty()) {
    out.note += " (" + components[unknown_rationality[0]].label() + ")";
  }
  return out;
}

Verdict decide(const SystemAnalysis& analysis, const Order& order, const std::optional<DiophantineVerdict>& dio) {
  std::optional<double> s = order.checked_s();
  const bool smooth = !s.has_value();
  Verdict v;
  for (std::size_t j = 0; j < analysis.tubes.size(); ++j) {
    auto p = analysis.tubes[j].sign.profile;
    if (p == SignProfile::NonNegativeNotZero || p == SignProfile::NonPositiveNotZero) {
      v.decision = Decision::Hypoelliptic;
      v.witness = WitnessKind::ConditionI;
      v.tube = j;
      v.explanation = "b_" + std::to_string(j + 1) + " does not change sign and is not identically zero (" +
                      to_string(p) + ")";
      return v;
    }
    if (p == SignProfile::Unknown) fail(ErrorKind::UncertifiableSign, "tube " + std::to_string(j + 1));
  }
  if (analysis.J.empty()) {
    v.decision = Decision::NotHypoelliptic;
    v.witness = WitnessKind::FailureBothConditions;
    v.reasons = {"every b_j changes sign", "J is empty"};
    v.explanation = "every b_j changes sign, so neither condition can hold";
    return v;
  }
  if (!dio) fail(ErrorKind::MissingClassification, "J is nonempty but no classification of a_{J0} was supplied");
  const std::string vec = "a_{J0} with J = " + join_indices(analysis.J);
  const std::string question = smooth ? "Liouville" : "exponential Liouville of order " + order.text;
  switch (dio->kind) {
    case Trend::NotExpLiouvilleTrend:
      if (smooth) break;
      [[fallthrough]];
    case Trend::NotLiouvilleTrend:
      v.decision = Decision::Hypoelliptic;
      v.witness = WitnessKind::ConditionII;
      v.explanation = vec + " is irrational and not " + question + " (" + diophantine::to_string(dio->kind) + ")";
      return v;
    case Trend::Rational:
      v.decision = Decision::NotHypoelliptic;
      v.witness = WitnessKind::FailureBothConditions;
      v.reasons = {"every b_j with j outside J changes sign", vec + " is rational"};
      v.explanation = "no b_j has a sign and " + vec + " is rational";
      return v;
    case Trend::ExpLiouvilleTrend:
    case Trend::LiouvilleTrend:
      if (!smooth && dio->kind == Trend::LiouvilleTrend) break;
      v.decision = Decision::NotHypoelliptic;
      v.witness = WitnessKind::FailureBothConditions;
      v.reasons = {"every b_j with j outside J changes sign", vec + " is " + question};
      v.explanation = "no b_j has a sign and " + vec + " is " + question + " (" +
                      diophantine::to_string(dio->kind) + ")";
      return v;
    case Trend::Unknown: break;
  }
  v.decision = Decision::Unknown;
  v.witness = WitnessKind::MissingClassification;
  v.explanation = "no b_j has a sign and " + vec + " could not be classified as " + question + ": " + dio->note;
  return v;
}

Classification classify(const SystemSpec& spec, const Order& order, std::size_t horizon) {
  Classification c;
  c.analysis = analyze(spec, {});
  std::optional<double> s = order.checked_s();
  bool condition_one = std::any_of(c.analysis.tubes.begin(), c.analysis.tubes.end(), [](const TubeAnalysis& t) {
    return t.sign.profile == SignProfile::NonNegativeNotZero || t.sign.profile == SignProfile::NonPositiveNotZero;
  });
  if (!c.analysis.J.empty() && !condition_one) {
    std::vector<RealConstant> comps;
    for (auto j : c.analysis.J) {
      comps.push_back(c.analysis.tubes[j].a0);
      c.components.push_back(diophantine::classify_constant(c.analysis.tubes[j].a0, s, horizon));
    }
    c.dio = classify_vector(comps, order, spec.vector_claim, horizon);
  }
  c.verdict = decide(c.analysis, order, c.dio);
  return c;
}

nlohmann::json to_json(const SignResult& r) {
  return {{"profile", to_string(r.profile)},
          {"method", r.evidence.method},
          {"grid", r.evidence.grid},
          {"lipschitz", r.evidence.lipschitz},
          {"threshold", r.evidence.threshold},
          {"min_value", r.evidence.min_value},
          {"max_value", r.evidence.max_value},
          {"approximate", r.evidence.approximate}};
}

nlohmann::json to_json(const SystemAnalysis& a) {
  nlohmann::json tubes = nlohmann::json::array();
  for (std::size_t j = 0; j < a.tubes.size(); ++j) {
    const auto& t = a.tubes[j];
    tubes.push_back({{"tube", j + 1},
                     {"a0", t.a0.to_json()},
                     {"a0_kind", t.a0.kind() == RealConstant::Kind::ExactRational ? "ExactRational"
                                 : t.a0.kind() == RealConstant::Kind::CFDefined   ? "CFDefined"
                                                                                  : "FloatApprox"},
                     {"b0", t.b0.to_json()},
                     {"sign", to_json(t.sign)}});
  }
  nlohmann::json J = nlohmann::json::array();
  for (auto j : a.J) J.push_back(j + 1);
  return {{"tubes", tubes}, {"J", J}, {"ell", a.J.size()}};
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json w = {{"kind", to_string(v.witness)}};
  if (v.tube) w["tube"] = *v.tube + 1;
  if (!v.reasons.empty()) w["reasons"] = v.reasons;
  return {{"decision", to_string(v.decision)}, {"witness", w}, {"explanation", v.explanation}};
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j = {{"analysis", to_json(c.analysis)}, {"verdict", to_json(c.verdict)}};
  if (c.dio) j["vector_classification"] = diophantine::to_json(*c.dio);
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& v : c.components) comps.push_back(diophantine::to_json(v));
  j["component_classifications"] = comps;
  return j;
}

}  // namespace torus_hypo::system
