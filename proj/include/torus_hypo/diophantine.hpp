#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torus_hypo/numeric.hpp"

namespace torus_hypo::diophantine {

/// One partial quotient: exact when small enough, always with its logarithm.
struct Digit {
  std::optional<BigInt> exact;
  LogReal log = 0;
};

/// Generator of positive partial quotients a_1, a_2, ... (1-based).
class DigitStream {
 public:
  struct Explicit {
    std::vector<BigInt> digits;
  };
  struct FactorialPow10 {};
  struct Constant {
    BigInt digit;
  };

  static DigitStream explicit_digits(std::vector<BigInt> digits);
  static DigitStream factorial_pow10();
  static DigitStream constant(BigInt digit);

  /// Digit a_n, or nullopt when a finite stream is exhausted.
  std::optional<Digit> digit(std::size_t n, std::size_t exact_digit_cap) const;
  bool finite() const { return std::holds_alternative<Explicit>(kind_); }
  std::size_t length() const;
  std::string describe() const;
  nlohmann::json to_json() const;
  static DigitStream from_json(const nlohmann::json& j);
  /// "factorial_pow10", "constant:1", "explicit:10,100", or a JSON object.
  static DigitStream parse(const std::string& text);

 private:
  explicit DigitStream(std::variant<Explicit, FactorialPow10, Constant> kind) : kind_(std::move(kind)) {}
  std::variant<Explicit, FactorialPow10, Constant> kind_;
};

struct CfOptions {
  /// Exact integers are dropped once they would exceed this many decimal digits.
  std::size_t exact_digit_cap = 100000;
};

/// alpha = 1/(a_1 + 1/(a_2 + ...)) in (0, 1).
struct ContinuedFraction {
  DigitStream digits;
  CfOptions options;
};

struct Convergent {
  std::size_t n = 0;
  std::optional<BigInt> p;
  std::optional<BigInt> q;
  LogReal log_p = 0;
  LogReal log_q = 0;
};

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t n);

/// Exact bounds on |p_n - alpha q_n|.
struct ApproxInterval {
  Rational lower;
  Rational upper;
};

ApproxInterval approx_interval(const ContinuedFraction& cf, std::size_t n);

/// ln of the bounds of approx_interval, available beyond the exact cap.
struct LogInterval {
  LogReal log_lower = 0;
  LogReal log_upper = 0;
};
LogInterval log_approx_interval(const ContinuedFraction& cf, std::size_t n);

struct TrendRow {
  std::size_t n = 0;
  LogReal value = 0;
  LogReal log_value = 0;
};

std::vector<TrendRow> liouville_exponent_trend(const ContinuedFraction& cf, std::size_t n_max);
std::vector<TrendRow> exp_liouville_score(const ContinuedFraction& cf, double s, std::size_t n_max);

struct ConditionBRow {
  std::size_t n = 0;
  bool certified = false;
  LogReal lhs_log = 0;
  LogReal rhs_log = 0;
};
std::vector<ConditionBRow> condition_B_check(const ContinuedFraction& cf, double s, double epsilon,
                                             std::size_t N, std::size_t n_max);

struct WitnessPair {
  std::vector<BigInt> r;
  BigInt s;
};

struct LiouvilleWitness {
  double delta = 0;
  std::vector<WitnessPair> pairs;
  /// The q this witness was scaled by (1 for a raw witness).
  BigInt scale = 1;
};

LiouvilleWitness scale_witness(const LiouvilleWitness& w, const BigInt& q, double s);
/// Pairs (-p_n, q_n) for the given convergent indices, exact digits required.
LiouvilleWitness witness_from_convergents(const ContinuedFraction& cf, double delta,
                                          const std::vector<std::size_t>& indices);
nlohmann::json to_json(const LiouvilleWitness& w);
LiouvilleWitness witness_from_json(const nlohmann::json& j);

enum class Trend {
  Rational,
  LiouvilleTrend,
  NotLiouvilleTrend,
  ExpLiouvilleTrend,
  NotExpLiouvilleTrend,
  Unknown,
};
std::string to_string(Trend t);

/// Liouville trend from mu rows: increasing over the last 3 rows with final mu > 3,
/// or bounded by 2.5 over the last 3 rows.
Trend classify_liouville_rows(const std::vector<TrendRow>& rows);
/// Exponential trend from beta rows per the documented thresholds.
Trend classify_exp_rows(const std::vector<TrendRow>& rows);

struct DiophantineVerdict {
  Trend kind = Trend::Unknown;
  /// Gevrey order for exp trends; nullopt in smooth mode.
  std::optional<double> s;
  std::vector<TrendRow> evidence;
  std::size_t n_used = 0;
  std::string note;
};

nlohmann::json to_json(const TrendRow& row);
nlohmann::json to_json(const DiophantineVerdict& v);

}  // namespace torus_hypo::diophantine
