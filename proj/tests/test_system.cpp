#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "torus_hypo/error.hpp"
#include "torus_hypo/spec_io.hpp"
#include "torus_hypo/system.hpp"

using namespace torus_hypo;
using namespace torus_hypo::system;
using diophantine::RealConstant;
using diophantine::Trend;
using nlohmann::json;

namespace {

TrigPoly trig(const char* text) { return trig_from_json(json::parse(text)); }

SystemSpec spec(const char* text) { return spec_from_json(json::parse(text)); }

std::string fixture(const std::string& name) { return std::string(TORUS_HYPO_FIXTURES) + "/" + name; }

Order order_of(const std::string& key) {
  if (key == "smooth") return Order::smooth();
  return Order::parse(key.substr(key.find(':') + 1));
}

}  // namespace

TEST_CASE("averages") {
  CHECK(*average(trig(R"({"sin":["1"]})")).exact() == 0);
  CHECK(*average(trig(R"({"const":"1/2","cos":["1"]})")).exact() == Rational(1, 2));
  RealConstant cf = RealConstant::from_json(json::parse(R"({"cf":"factorial_pow10"})"));
  auto avg = average(Coefficient{cf});
  CHECK(avg.kind() == RealConstant::Kind::CFDefined);
  CHECK(avg.cf()->digits.describe() == cf.cf()->digits.describe());
}

TEST_CASE("sign analysis examples") {
  CHECK(sign_analysis(trig(R"({"sin":["1"]})")).profile == SignProfile::ChangesSign);
  CHECK(sign_analysis(trig(R"({"const":"1","cos":["1"]})")).profile == SignProfile::NonNegativeNotZero);
  CHECK(sign_analysis(trig(R"({"zero":true})")).profile == SignProfile::IdenticallyZero);
  CHECK(sign_analysis(trig(R"({"const":"-1/2","cos":["-1/2"]})")).profile == SignProfile::NonPositiveNotZero);
  // (1 - cos t)^2 = 3/2 - 2 cos t + cos(2t)/2 touches zero to second order.
  CHECK(sign_analysis(trig(R"({"const":"3/2","cos":["-2","1/2"]})")).profile == SignProfile::NonNegativeNotZero);
  // sin^3 t = (3 sin t - sin 3t)/4.
  CHECK(sign_analysis(trig(R"({"sin":["3/4","0","-1/4"]})")).profile == SignProfile::ChangesSign);
  auto approx = sign_analysis(trig(R"({"const":1.0,"cos":[1.0]})"));
  CHECK(approx.profile == SignProfile::NonNegativeNotZero);
  auto zero = sign_analysis(trig(R"({"const":1e-16})"));
  CHECK(zero.profile == SignProfile::IdenticallyZero);
  CHECK(zero.evidence.approximate);
}

TEST_CASE("sign analysis agrees with dense sampling on random polynomials") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    ExactTrig e;
    e.constant = Rational(coef(rng) + 6, 2);
    for (int k = 0; k < 3; ++k) {
      e.cos.emplace_back(coef(rng), 3);
      e.sin.emplace_back(coef(rng), 3);
    }
    TrigPoly p = TrigPoly::exact(e);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 20000; ++i) {
      double v = p.real_at(6.283185307179586 * i / 20000);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    auto r = sign_analysis(p).profile;
    if (lo < -1e-9 && hi > 1e-9) CHECK(r == SignProfile::ChangesSign);
    if (lo > 1e-9) CHECK(r == SignProfile::NonNegativeNotZero);
    if (hi < -1e-9) CHECK(r == SignProfile::NonPositiveNotZero);
  }
}

TEST_CASE("sign analysis is translation invariant") {
  TrigPoly b = trig(R"({"const":"1/3","cos":["1","-1/2"],"sin":["1/4"]})");
  auto base = sign_analysis(b).profile;
  for (int k = 1; k < 8; ++k) CHECK(sign_analysis(b.shifted(6.283185307179586 * k / 256)).profile == base);
}

TEST_CASE("analyze examples") {
  auto a = analyze(spec(R"({"tubes":[{"a":"1","b":{"sin":["1"]}},{"a":"1/2","b":{"zero":true}}]})"));
  REQUIRE(a.J.size() == 1);
  CHECK(a.J[0] == 1);
  CHECK(a.tubes[0].sign.profile == SignProfile::ChangesSign);
  CHECK(a.tubes[1].sign.profile == SignProfile::IdenticallyZero);
  auto b = analyze(spec(R"({"tubes":[{"a":"1","b":{"const":"1","cos":["1"]}}]})"));
  CHECK(b.J.empty());
  auto c = analyze(spec(R"({"tubes":[{"a":"1","b":{"zero":true}},{"a":"2","b":{"zero":true}},{"a":"1/3","b":{"zero":true}}]})"));
  CHECK(c.J.size() == 3);
  for (auto j : c.J) CHECK(*c.tubes[j].b0.exact() == 0);
}

TEST_CASE("decide examples") {
  auto ci = classify(spec(R"({"tubes":[{"a":"1","b":{"const":"1","cos":["1"]}},{"a":"1/2","b":{"sin":["1"]}}]})"), Order::gevrey(2));
  CHECK(ci.verdict.decision == Decision::Hypoelliptic);
  CHECK(ci.verdict.witness == WitnessKind::ConditionI);
  CHECK(*ci.verdict.tube == 0);
  auto rj = classify(spec(R"({"tubes":[{"a":"1/2","b":{"zero":true}},{"a":"1","b":{"sin":["1"]}}]})"), Order::gevrey(2));
  CHECK(rj.verdict.decision == Decision::NotHypoelliptic);
  auto ex = spec(R"({"tubes":[{"a":{"cf":"factorial_pow10"},"b":{"zero":true}},{"a":"2/5","b":{"zero":true}}]})");
  for (double s : {1.5, 2.0, 3.0}) CHECK(classify(ex, Order::gevrey(s)).verdict.decision == Decision::Hypoelliptic);
  CHECK(classify(ex, Order::smooth()).verdict.decision == Decision::NotHypoelliptic);
  auto all = classify(spec(R"({"tubes":[{"a":"1","b":{"sin":["1"]}},{"a":0.3,"b":{"cos":["1"]}}]})"), Order::gevrey(2));
  CHECK(all.verdict.decision == Decision::NotHypoelliptic);
  CHECK(all.verdict.witness == WitnessKind::FailureBothConditions);
}

TEST_CASE("decide requires a classification when J is nonempty") {
  auto a = analyze(spec(R"({"tubes":[{"a":"1/2","b":{"zero":true}}]})"));
  try {
    decide(a, Order::gevrey(2), std::nullopt);
    FAIL("missing classification accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingClassification);
  }
}

TEST_CASE("Gevrey orders at or below one are rejected") {
  auto s = spec(R"({"tubes":[{"a":"1/2","b":{"zero":true}}]})");
  CHECK_THROWS_AS(classify(s, Order::gevrey(1)), Error);
  CHECK_THROWS_AS(classify(s, Order::parse("analytic")), Error);
  CHECK(Order::parse("3/2").s == doctest::Approx(1.5));
}

TEST_CASE("condition I short-circuits under permutation") {
  const char* tubes[] = {R"({"a":"1","b":{"sin":["1"]}})", R"({"a":"1/3","b":{"zero":true}})",
                         R"({"a":"2","b":{"const":"1","cos":["1"]}})"};
  int perm[] = {0, 1, 2};
  do {
    std::string text = R"({"tubes":[)";
    for (int i = 0; i < 3; ++i) text += std::string(i ? "," : "") + tubes[perm[i]];
    text += "]}";
    auto c = classify(spec_from_json(json::parse(text)), Order::gevrey(2));
    CHECK(c.verdict.decision == Decision::Hypoelliptic);
    CHECK(c.verdict.witness == WitnessKind::ConditionI);
  } while (std::next_permutation(perm, perm + 3));
}

TEST_CASE("resolving Unknown never flips a decision") {
  auto a = analyze(spec(R"({"tubes":[{"a":0.3,"b":{"zero":true}},{"a":"1","b":{"sin":["1"]}}]})"));
  diophantine::DiophantineVerdict unknown;
  CHECK(decide(a, Order::gevrey(2), unknown).decision == Decision::Unknown);
  for (Trend t : {Trend::NotExpLiouvilleTrend, Trend::ExpLiouvilleTrend, Trend::Rational}) {
    diophantine::DiophantineVerdict v;
    v.kind = t;
    v.s = 2;
    CHECK(decide(a, Order::gevrey(2), v).decision != Decision::Unknown);
  }
  auto b = analyze(spec(R"({"tubes":[{"a":0.3,"b":{"zero":true}},{"a":"1","b":{"const":"2","sin":["1"]}}]})"));
  for (Trend t : {Trend::Unknown, Trend::NotExpLiouvilleTrend, Trend::ExpLiouvilleTrend, Trend::Rational}) {
    diophantine::DiophantineVerdict v;
    v.kind = t;
    v.s = 2;
    CHECK(decide(b, Order::gevrey(2), v).decision == Decision::Hypoelliptic);
  }
}

TEST_CASE("vector classification") {
  RealConstant fact = RealConstant::from_json(json::parse(R"({"cf":"factorial_pow10"})"));
  RealConstant half = RealConstant::rational(Rational(1, 2));
  RealConstant flt = RealConstant::approx(0.123);
  CHECK(classify_vector({half, RealConstant::rational(Rational(1, 3))}, Order::gevrey(2), std::nullopt).kind == Trend::Rational);
  CHECK(classify_vector({fact, half}, Order::gevrey(2), std::nullopt).kind == Trend::NotExpLiouvilleTrend);
  CHECK(classify_vector({fact, half}, Order::smooth(), std::nullopt).kind == Trend::LiouvilleTrend);
  CHECK(classify_vector({flt, flt}, Order::gevrey(2), std::nullopt).kind == Trend::Unknown);
  VectorClaim claim;
  claim.kind = ClaimKind::NotLiouville;
  CHECK(classify_vector({flt, flt}, Order::gevrey(2), claim).kind == Trend::NotExpLiouvilleTrend);
  VectorClaim narrow;
  narrow.kind = ClaimKind::NotExpLiouville;
  narrow.s_min = 1.2;
  narrow.s_max = 1.8;
  CHECK(classify_vector({flt}, Order::gevrey(2), narrow).kind == Trend::Unknown);
  CHECK(classify_vector({flt}, Order::gevrey(1.5), narrow).kind == Trend::NotExpLiouvilleTrend);
}

TEST_CASE("a false witness is rejected") {
  auto s = spec(R"({"tubes":[{"a":"1/3","b":{"zero":true}},{"a":"1","b":{"sin":["1"]}}],
    "vector_claim":{"kind":"exp_liouville","witness":{"delta":5,"pairs":[{"r":["-1"],"s":"4"}]}}})");
  try {
    classify(s, Order::gevrey(2));
    FAIL("false witness accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WitnessMismatch);
  }
}

TEST_CASE("fixture verdicts") {
  int checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(TORUS_HYPO_FIXTURES)) {
    json doc = read_json_file(entry.path().string());
    if (!doc.contains("expected") || !doc.contains("tubes")) continue;
    auto s = spec_from_json(doc);
    for (const auto& [key, value] : doc["expected"].items()) {
      CAPTURE(entry.path().filename().string());
      CAPTURE(key);
      CHECK(to_string(classify(s, order_of(key)).verdict.decision) == value.get<std::string>());
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("spec round trip") {
  auto s = spec_from_json(read_json_file(fixture("ex64_factorial.json")));
  auto again = spec_from_json(to_json(s));
  CHECK(to_json(again) == to_json(s));
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"tubes":[]})")), Error);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"tubes":[{"a":"1","b":{"sin":["x"]}}]})")), Error);
}
