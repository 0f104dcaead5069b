#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "torus_hypo/error.hpp"
#include "torus_hypo/normalform.hpp"
#include "torus_hypo/spec_io.hpp"

using namespace torus_hypo;
using namespace torus_hypo::normalform;
using nlohmann::json;
using test_support::random_field;

namespace {

system::SystemSpec spec(const char* text) { return spec_from_json(json::parse(text)); }
TrigPoly trig(const char* text) { return trig_from_json(json::parse(text)); }

double coefficient_distance(const TrigPoly& a, const TrigPoly& b) {
  double worst = 0;
  const int d = std::max(a.degree(), b.degree());
  for (int k = -d; k <= d; ++k) worst = std::max(worst, std::abs(a.coefficient(k) - b.coefficient(k)));
  return worst;
}

}  // namespace

TEST_CASE("normal form examples") {
  auto nf = build_normal_form(spec(R"({"tubes":[{"a":{"cos":["1"]},"b":{"sin":["1"]}}]})"));
  CHECK(coefficient_distance(nf.A[0], trig(R"({"sin":["1"]})")) < 1e-15);
  CHECK(*system::average(nf.normalized.tubes[0].a).exact() == 0);
  auto constant = build_normal_form(spec(R"({"tubes":[{"a":"3/7","b":{"sin":["1"]}}]})"));
  CHECK(constant.A[0].is_zero());
  CHECK(constant.trivial());
  auto shifted = build_normal_form(spec(R"({"tubes":[{"a":{"const":"1/2","cos":["0","1"]},"b":{"zero":true}}]})"));
  CHECK(coefficient_distance(shifted.A[0], trig(R"({"sin":["0","1/2"]})")) < 1e-15);
  CHECK(*system::average(shifted.normalized.tubes[0].a).exact() == Rational(1, 2));
}

TEST_CASE("normal form is idempotent") {
  auto nf = build_normal_form(spec(R"({"tubes":[{"a":{"const":"1/3","cos":["1","1/4"],"sin":["2"]},"b":{"sin":["1"]}},{"a":{"cos":["1"]},"b":{"zero":true}}]})"));
  auto again = build_normal_form(nf.normalized);
  for (const auto& A : again.A) CHECK(A.is_zero());
}

TEST_CASE("primitive derivative recovers a - a0") {
  TrigPoly a = trig(R"({"const":"2/3","cos":["1","-1/5","1/7"],"sin":["0","3"]})");
  auto nf = build_normal_form(spec(R"({"tubes":[{"a":{"const":"2/3","cos":["1","-1/5","1/7"],"sin":["0","3"]},"b":{"zero":true}}]})"));
  CHECK(coefficient_distance(nf.A[0].derivative(), a.without_mean()) < 1e-14);
}

TEST_CASE("gauge examples") {
  auto f = random_field(2, 4, {-3, 1, 5}, 1);
  auto same = apply_gauge(f, std::vector<TrigPoly>{TrigPoly(), TrigPoly()}, Direction::Forward);
  CHECK(test_support::max_difference(same, f) < 1e-14);

  FourierField one;
  one.dims = 1;
  one.grid = 64;
  MultiTrig b(std::vector<int>{0});
  b.data()[0] = 1;
  one.set(1, b);
  auto g = apply_gauge(one, trig(R"({"sin":["1"]})"), Direction::Forward);
  for (int i = 0; i < 40; ++i) {
    const double t = 0.157 * i;
    std::vector<double> pt{t};
    CHECK(std::abs((*g.find(1))(pt) - std::exp(Complex(0, std::sin(t)))) < 1e-13);
  }
}

TEST_CASE("gauge round trip and modulus") {
  std::vector<TrigPoly> A{trig(R"({"sin":["1","1/3"]})"), trig(R"({"cos":["1/2"]})")};
  for (unsigned seed = 0; seed < 5; ++seed) {
    auto f = random_field(2, 8, {-4, -1, 2, 7}, seed, 256);
    auto there = apply_gauge(f, A, Direction::Forward);
    auto back = apply_gauge(there, A, Direction::Inverse);
    CHECK(test_support::max_difference(back, f) <= 1e-13 * test_support::max_coefficient(f));
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto before = f.blocks[i].to_grid(f.grid);
      auto after = there.find(f.ladder[i])->to_grid(f.grid);
      double worst = 0;
      for (std::size_t k = 0; k < before.size(); ++k) {
        worst = std::max(worst, std::abs(std::abs(after[k]) - std::abs(before[k])) / std::max(1.0, std::abs(before[k])));
      }
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("gauge grid mismatch") {
  auto f = random_field(2, 2, {1}, 3);
  try {
    apply_gauge(f, std::vector<TrigPoly>{TrigPoly()}, Direction::Forward);
    FAIL("dimension mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("conjugation residual") {
  auto constant = spec(R"({"tubes":[{"a":"1/2","b":{"sin":["1"]}}]})");
  CHECK(conjugation_residual(constant, random_field(1, 6, {1, 2}, 4)).absolute == 0);
  auto cos_spec = spec(R"({"tubes":[{"a":{"cos":["1"]},"b":{"zero":true}}]})");
  FourierField u;
  u.dims = 1;
  u.grid = 64;
  MultiTrig b(std::vector<int>{1});
  b.data()[2] = 1;
  u.set(1, b);
  CHECK(conjugation_residual(cos_spec, u).relative <= 1e-10);
  auto two = spec(R"({"tubes":[{"a":{"cos":["1"]},"b":{"sin":["1"]}},{"a":{"const":"1/3","sin":["1/2"]},"b":{"zero":true}}]})");
  for (unsigned seed = 10; seed < 15; ++seed) {
    CHECK(conjugation_residual(two, random_field(2, 8, {-3, 1, 4}, seed)).relative <= 1e-10);
  }
}

TEST_CASE("gauge derivative growth") {
  std::vector<double> xis;
  for (double xi = 1; xi <= 1024; xi *= 2) xis.push_back(xi);
  auto check = gauge_derivative_check(trig(R"({"sin":["1"]})"), 2, 1, 8, xis);
  CHECK(check.finite);
  CHECK(check.C > 0);
  REQUIRE(check.rows.size() == 8);
  for (const auto& r : check.rows) CHECK(r.sup_ratio <= std::pow(check.C, r.alpha) * (1 + 1e-12));
}
