#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "torus_hypo/cli.hpp"
#include "torus_hypo/report.hpp"
#include "torus_hypo/spec_io.hpp"

using namespace torus_hypo;
using nlohmann::json;
using test_support::fixture;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "torus-hypo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("torus_hypo_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("classify exit codes follow the verdict") {
  CHECK(run({"classify", fixture("ex63.json"), "--s", "2"}).code == cli::kOk);
  CHECK(run({"classify", fixture("ex63.json"), "--mode", "smooth"}).code == cli::kNotHypoelliptic);
  CHECK(run({"classify", fixture("ex64_lemmaA_analytic.json"), "--s", "2"}).code == cli::kUnknown);
  CHECK(run({"classify", fixture("all_change_sign.json")}).code == cli::kNotHypoelliptic);
  auto r = run({"classify", fixture("remark64.json"), "--s", "3/2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.report()["result"]["verdict"] == "Hypoelliptic");
}

TEST_CASE("fixture verdicts through the command line") {
  int checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(TORUS_HYPO_FIXTURES)) {
    json doc = read_json_file(entry.path().string());
    if (!doc.contains("expected")) continue;
    for (const auto& [key, verdict] : doc["expected"].items()) {
      std::vector<std::string> args{"classify", entry.path().string()};
      if (key == "smooth") {
        args.insert(args.end(), {"--mode", "smooth"});
      } else {
        args.insert(args.end(), {"--s", key.substr(key.find(':') + 1)});
      }
      auto r = run(args);
      INFO(entry.path().filename().string() << " " << key);
      CHECK(r.report()["result"]["verdict"] == verdict);
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("reports are canonical and deterministic") {
  auto a = run({"diagnose", fixture("ex64_factorial.json"), "--s", "2"});
  auto b = run({"diagnose", fixture("ex64_factorial.json"), "--s", "2"});
  CHECK(a.out == b.out);
  auto j = a.report();
  CHECK(j["format_version"] == 1);
  CHECK(j["command"] == "diagnose");
  CHECK(j["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK_FALSE(j.contains("runtime_seconds"));
  CHECK(report::canonical_dump(j) == a.out);
  auto timed = run({"classify", fixture("ex63.json"), "--timing"}).report();
  CHECK(timed["runtime_seconds"].get<double>() >= 0);
  auto other = run({"diagnose", fixture("ex63.json"), "--s", "2"}).report();
  CHECK(other["input_digest"] != j["input_digest"]);
}

TEST_CASE("canonical dump format") {
  json v = {{"b", 1.5}, {"a", json::array({1, 2})}, {"c", {{"x", std::nan("")}}}, {"d", -0.0}};
  CHECK(report::canonical_dump(v) == "{\n  \"a\": [1, 2],\n  \"b\": 1.5,\n  \"c\": {\n    \"x\": null\n  },\n  \"d\": 0\n}\n");
  CHECK(report::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(report::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(report::hex_digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("continued fraction tables") {
  auto conv = run({"cf", "convergents", "constant:1", "--n", "6"});
  REQUIRE(conv.code == 0);
  const std::vector<std::string> fib{"1", "2", "3", "5", "8", "13"};
  auto rows = conv.report()["result"]["rows"];
  for (std::size_t i = 0; i < fib.size(); ++i) CHECK(rows[i]["q"]["exact"] == fib[i]);
  auto bounds = run({"cf", "bounds", "constant:1", "--n", "2"}).report()["result"]["rows"];
  CHECK(bounds[1]["lower"] == "1/6");
  CHECK(bounds[1]["upper"] == "1/2");
  auto cls = run({"cf", "classify", "factorial_pow10", "--s", "2", "--n", "5"});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("LiouvilleTrend") != std::string::npos);
  CHECK(cls.out.find("NotExpLiouvilleTrend") != std::string::npos);
  CHECK(run({"cf", "convergents", "constant:0"}).code == cli::kMalformed);
  CHECK(run({"cf", "bounds", "explicit:1,-2"}).code == cli::kMalformed);
}

TEST_CASE("solve writes the manufactured solution") {
  const std::string out = temp_path("u.json");
  auto r = run({"solve", fixture("manufactured_spec.json"), fixture("manufactured_rhs.json"), "--out", out});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["result"]["residual"][0]["max_norm"].get<double>() <= 1e-12);
  auto u = field_from_json(read_json_file(out));
  auto expected = read_json_file(fixture("manufactured_rhs.json"))["expected_u"];
  std::vector<int> eta{expected["eta"].get<int>()};
  const Complex got = u.find(expected["xi"].get<std::int64_t>())->at(eta);
  CHECK(std::abs(got - Complex(expected["re"].get<double>(), expected["im"].get<double>())) <= 1e-12);
  std::remove(out.c_str());
}

TEST_CASE("solve edge cases") {
  const std::string out = temp_path("zero.json");
  auto zero = run({"solve", fixture("manufactured_spec.json"), fixture("zero_rhs.json"), "--out", out});
  REQUIRE(zero.code == 0);
  CHECK(test_support::max_coefficient(field_from_json(read_json_file(out))) == 0);
  std::remove(out.c_str());
  auto mean = run({"solve", fixture("manufactured_spec.json"), fixture("mean_rhs.json"), "--out", out});
  CHECK(mean.code == cli::kSolvability);
  CHECK(mean.report()["error"]["kind"] == "SolvabilityError");
  CHECK_FALSE(mean.err.empty());
}

TEST_CASE("singular command") {
  const std::string out = temp_path("singular.json");
  auto r = run({"singular", fixture("rational_J.json"), "--xi-max", "256", "--out", out, "--grid", "64"});
  REQUIRE(r.code == 0);
  auto res = r.report()["result"];
  CHECK(res["construction"] == "RationalJ");
  CHECK(res["base"] == "Product");
  CHECK(res["q"] == "2");
  CHECK(res["operator_residual"]["tubes"][0]["residual"].get<double>() <= 1e-12);
  auto file = read_json_file(out);
  CHECK(file["format"] == "torus-hypo/singular");
  std::remove(out.c_str());
  CHECK(run({"singular", fixture("condition_I.json"), "--out", out}).code == cli::kRefusedHypoelliptic);
  CHECK(run({"singular", fixture("ex64_lemmaA_orders.json"), "--out", out}).code == cli::kNoSolverApplies);
}

TEST_CASE("malformed input") {
  const std::string bad = temp_path("bad.json");
  write_text(bad, "{bad");
  CHECK(run({"classify", bad}).code == cli::kMalformed);
  write_text(bad, R"({"tubes":[]})");
  CHECK(run({"classify", bad}).code == cli::kMalformed);
  write_text(bad, R"({"tubes":[{"a":"1","b":{"const":"-1"}}]})");
  CHECK(run({"classify", bad, "--s", "1"}).code == cli::kMalformed);
  CHECK(run({"classify", bad, "--s", "analytic"}).code == cli::kMalformed);
  std::remove(bad.c_str());
  CHECK(run({"classify", temp_path("missing.json")}).code == cli::kMalformed);
  CHECK(run({}).code == cli::kMalformed);
  CHECK(run({"classify"}).code == cli::kMalformed);
  CHECK(run({"frobnicate"}).code == cli::kMalformed);
}

TEST_CASE("exit code table") {
  CHECK(cli::exit_code(ErrorKind::ZeroDivisorError) == 32);
  CHECK(cli::exit_code(ErrorKind::CompatibilityError) == 33);
  CHECK(cli::exit_code(ErrorKind::GridMismatch) == 34);
  CHECK(cli::exit_code(ErrorKind::ProfileError) == 31);
  CHECK(cli::exit_code(ErrorKind::MissingClassification) == 41);
  CHECK(cli::exit_code(ErrorKind::NonPositiveDigit) == 2);
}
