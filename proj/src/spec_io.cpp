#include "torus_hypo/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

using system::ClaimKind;
using system::SystemSpec;
using system::VectorClaim;

namespace {

bool is_trig_object(const nlohmann::json& j) {
  return j.is_object() && (j.contains("const") || j.contains("cos") || j.contains("sin") || j.contains("zero"));
}

}  // namespace

TrigPoly trig_from_json(const nlohmann::json& j) {
  if (j.is_string() || j.is_number()) return trig_from_json(nlohmann::json{{"const", j}});
  if (!is_trig_object(j)) fail(ErrorKind::InvalidInput, "not a trigonometric polynomial: " + j.dump());
  if (j.value("zero", false)) return TrigPoly::exact(ExactTrig{});
  bool exact = true;
  auto scan = [&](const nlohmann::json& v) {
    if (v.is_number() && !v.is_number_integer()) exact = false;
    else if (!v.is_string() && !v.is_number_integer()) fail(ErrorKind::InvalidInput, "bad coefficient " + v.dump());
  };
  nlohmann::json constant = j.value("const", nlohmann::json("0"));
  scan(constant);
  for (const char* key : {"cos", "sin"}) {
    if (!j.contains(key)) continue;
    if (!j.at(key).is_array()) fail(ErrorKind::InvalidInput, std::string(key) + " must be an array");
    for (const auto& v : j.at(key)) scan(v);
  }
  auto as_rational = [](const nlohmann::json& v) {
    return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(BigInt(std::to_string(v.get<long long>())));
  };
  if (exact) {
    ExactTrig form;
    form.constant = as_rational(constant);
    if (j.contains("cos")) for (const auto& v : j.at("cos")) form.cos.push_back(as_rational(v));
    if (j.contains("sin")) for (const auto& v : j.at("sin")) form.sin.push_back(as_rational(v));
    return TrigPoly::exact(std::move(form));
  }
  auto as_double = [&](const nlohmann::json& v) { return v.is_string() ? to_double(as_rational(v)) : v.get<double>(); };
  std::vector<double> cos, sin;
  if (j.contains("cos")) for (const auto& v : j.at("cos")) cos.push_back(as_double(v));
  if (j.contains("sin")) for (const auto& v : j.at("sin")) sin.push_back(as_double(v));
  return TrigPoly::real_form(as_double(constant), cos, sin);
}

nlohmann::json to_json(const TrigPoly& p) {
  if (p.is_zero()) return {{"zero", true}};
  nlohmann::json j;
  if (const auto& e = p.exact_form()) {
    j["const"] = to_string(e->constant);
    if (!e->cos.empty()) {
      j["cos"] = nlohmann::json::array();
      for (const auto& c : e->cos) j["cos"].push_back(to_string(c));
    }
    if (!e->sin.empty()) {
      j["sin"] = nlohmann::json::array();
      for (const auto& c : e->sin) j["sin"].push_back(to_string(c));
    }
    return j;
  }
  j["const"] = p.coefficient(0).real();
  if (p.degree() > 0) {
    j["cos"] = nlohmann::json::array();
    j["sin"] = nlohmann::json::array();
    for (int k = 1; k <= p.degree(); ++k) {
      j["cos"].push_back(2 * p.coefficient(k).real());
      j["sin"].push_back(-2 * p.coefficient(k).imag());
    }
  }
  return j;
}

nlohmann::json to_json(const system::Coefficient& a) {
  if (const auto* p = std::get_if<TrigPoly>(&a)) return to_json(*p);
  return std::get<diophantine::RealConstant>(a).to_json();
}

VectorClaim claim_from_json(const nlohmann::json& j) {
  VectorClaim c;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "exp_liouville") c.kind = ClaimKind::ExpLiouville;
  else if (kind == "not_exp_liouville") c.kind = ClaimKind::NotExpLiouville;
  else if (kind == "liouville") c.kind = ClaimKind::Liouville;
  else if (kind == "not_liouville") c.kind = ClaimKind::NotLiouville;
  else fail(ErrorKind::InvalidInput, "unknown claim kind " + kind);
  auto bound = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto& v = j.at(key);
    return v.is_string() ? to_double(parse_rational(v.get<std::string>())) : v.get<double>();
  };
  c.s_min = bound("s_min");
  c.s_max = bound("s_max");
  if (j.contains("witness")) c.witness = diophantine::witness_from_json(j.at("witness"));
  c.note = j.value("note", std::string());
  return c;
}

nlohmann::json to_json(const VectorClaim& c) {
  static const char* names[] = {"exp_liouville", "not_exp_liouville", "liouville", "not_liouville"};
  nlohmann::json j = {{"kind", names[static_cast<int>(c.kind)]}};
  if (c.s_min) j["s_min"] = *c.s_min;
  if (c.s_max) j["s_max"] = *c.s_max;
  if (c.witness) j["witness"] = diophantine::to_json(*c.witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

SystemSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("tubes") || !j.at("tubes").is_array()) {
    fail(ErrorKind::InvalidInput, "system spec needs a \"tubes\" array");
  }
  SystemSpec spec;
  spec.name = j.value("name", std::string());
  for (const auto& t : j.at("tubes")) {
    system::Tube tube;
    const auto& a = t.contains("a") ? t.at("a") : nlohmann::json("0");
    if (is_trig_object(a)) tube.a = trig_from_json(a);
    else tube.a = diophantine::RealConstant::from_json(a);
    tube.b = trig_from_json(t.contains("b") ? t.at("b") : nlohmann::json{{"zero", true}});
    if (!tube.b.is_real()) fail(ErrorKind::InvalidInput, "b must be real-valued");
    if (const auto* ap = std::get_if<TrigPoly>(&tube.a); ap && !ap->is_real()) fail(ErrorKind::InvalidInput, "a must be real-valued");
    spec.tubes.push_back(std::move(tube));
  }
  if (spec.tubes.empty()) fail(ErrorKind::InvalidInput, "a system needs at least one tube");
  if (j.contains("n") && (!j.at("n").is_number_unsigned() || j.at("n").get<std::size_t>() != spec.tubes.size())) {
    fail(ErrorKind::InvalidInput, "n does not match the number of tubes");
  }
  if (j.contains("s")) {
    const auto& s = j.at("s");
    spec.order = system::Order::parse(s.is_string() ? s.get<std::string>() : s.dump());
  }
  if (j.contains("vector_claim") && !j.at("vector_claim").is_null()) spec.vector_claim = claim_from_json(j.at("vector_claim"));
  return spec;
}

nlohmann::json to_json(const SystemSpec& spec) {
  nlohmann::json tubes = nlohmann::json::array();
  for (const auto& t : spec.tubes) tubes.push_back({{"a", to_json(t.a)}, {"b", to_json(t.b)}});
  nlohmann::json j = {{"n", spec.n()}, {"tubes", tubes}};
  if (!spec.name.empty()) j["name"] = spec.name;
  if (spec.order) j["s"] = spec.order->text;
  if (spec.vector_claim) j["vector_claim"] = to_json(*spec.vector_claim);
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace torus_hypo
