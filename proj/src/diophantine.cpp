#include "torus_hypo/diophantine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "torus_hypo/error.hpp"

namespace torus_hypo::diophantine {

namespace {

constexpr LogReal kNegInf = -std::numeric_limits<LogReal>::infinity();
const LogReal kLn10 = std::log(static_cast<LogReal>(10));

BigInt parse_positive(const std::string& text) {
  BigInt v;
  if (text.empty() || v.set_str(text, 10) != 0) fail(ErrorKind::InvalidInput, "bad digit '" + text + "'");
  if (v <= 0) fail(ErrorKind::NonPositiveDigit, "digit " + text + " is not positive");
  return v;
}

std::string digit_text(const nlohmann::json& d) {
  if (d.is_string()) return d.get<std::string>();
  if (d.is_number_integer()) return std::to_string(d.get<long long>());
  fail(ErrorKind::InvalidInput, "digits must be decimal strings or integers");
}

Digit require_digit(const ContinuedFraction& cf, std::size_t n) {
  auto d = cf.digits.digit(n, cf.options.exact_digit_cap);
  if (!d) fail(ErrorKind::DigitStreamExhausted, "digit a_" + std::to_string(n) + " not available");
  return *d;
}

LogReal log_plus_two(const Digit& a) {
  if (a.exact) return log_abs(BigInt(*a.exact + 2));
  return a.log + std::log1p(2 * std::exp(-a.log));
}

}  // namespace

DigitStream DigitStream::explicit_digits(std::vector<BigInt> digits) {
  for (const auto& d : digits) {
    if (d <= 0) fail(ErrorKind::NonPositiveDigit, "digit " + d.get_str() + " is not positive");
  }
  return DigitStream(Explicit{std::move(digits)});
}

DigitStream DigitStream::factorial_pow10() { return DigitStream(FactorialPow10{}); }

DigitStream DigitStream::constant(BigInt digit) {
  if (digit <= 0) fail(ErrorKind::NonPositiveDigit, "digit " + digit.get_str() + " is not positive");
  return DigitStream(Constant{std::move(digit)});
}

std::optional<Digit> DigitStream::digit(std::size_t n, std::size_t exact_digit_cap) const {
  if (n == 0) fail(ErrorKind::OutOfRange, "digits are indexed from 1");
  if (const auto* e = std::get_if<Explicit>(&kind_)) {
    if (n > e->digits.size()) return std::nullopt;
    const BigInt& a = e->digits[n - 1];
    return Digit{a, log_abs(a)};
  }
  if (const auto* c = std::get_if<Constant>(&kind_)) return Digit{c->digit, log_abs(c->digit)};
  LogReal fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<LogReal>(k);
  Digit d;
  d.log = fact * kLn10;
  if (fact <= static_cast<LogReal>(exact_digit_cap)) d.exact = pow10(static_cast<unsigned long>(fact));
  return d;
}

std::size_t DigitStream::length() const {
  if (const auto* e = std::get_if<Explicit>(&kind_)) return e->digits.size();
  return std::numeric_limits<std::size_t>::max();
}

std::string DigitStream::describe() const {
  if (const auto* e = std::get_if<Explicit>(&kind_)) {
    std::ostringstream os;
    os << "explicit:";
    for (std::size_t i = 0; i < e->digits.size(); ++i) os << (i ? "," : "") << e->digits[i].get_str();
    return os.str();
  }
  if (const auto* c = std::get_if<Constant>(&kind_)) return "constant:" + c->digit.get_str();
  return "factorial_pow10";
}

nlohmann::json DigitStream::to_json() const {
  if (const auto* e = std::get_if<Explicit>(&kind_)) {
    nlohmann::json digits = nlohmann::json::array();
    for (const auto& d : e->digits) digits.push_back(d.get_str());
    return {{"kind", "explicit"}, {"digits", digits}};
  }
  if (const auto* c = std::get_if<Constant>(&kind_)) return {{"kind", "constant"}, {"digit", c->digit.get_str()}};
  return {{"kind", "factorial_pow10"}};
}

DigitStream DigitStream::from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) fail(ErrorKind::InvalidInput, "digit stream needs a kind");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "factorial_pow10") return factorial_pow10();
  if (kind == "constant") return constant(parse_positive(digit_text(j.at("digit"))));
  if (kind == "explicit") {
    std::vector<BigInt> digits;
    for (const auto& d : j.at("digits")) digits.push_back(parse_positive(digit_text(d)));
    if (digits.empty()) fail(ErrorKind::InvalidInput, "explicit digit list is empty");
    return explicit_digits(std::move(digits));
  }
  fail(ErrorKind::InvalidInput, "unknown digit stream kind '" + kind + "'");
}

DigitStream DigitStream::parse(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidInput, std::string("bad digit stream JSON: ") + e.what());
    }
    return from_json(j);
  }
  if (text == "factorial_pow10") return factorial_pow10();
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "constant") return constant(parse_positive(rest));
  if (head == "explicit") {
    std::vector<BigInt> digits;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) digits.push_back(parse_positive(item));
    if (digits.empty()) fail(ErrorKind::InvalidInput, "explicit digit list is empty");
    return explicit_digits(std::move(digits));
  }
  fail(ErrorKind::InvalidInput, "unknown digit stream '" + text + "'");
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t n) {
  if (n == 0) fail(ErrorKind::OutOfRange, "need at least one convergent");
  std::vector<Convergent> out;
  out.reserve(n);
  // Seeds (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (0, 1).
  std::optional<BigInt> p2 = BigInt(1), q2 = BigInt(0), p1 = BigInt(0), q1 = BigInt(1);
  LogReal lp2 = 0, lq2 = kNegInf, lp1 = kNegInf, lq1 = 0;
  bool exact = true;
  for (std::size_t k = 1; k <= n; ++k) {
    Digit a = require_digit(cf, k);
    Convergent c;
    c.n = k;
    if (exact && a.exact) {
      BigInt p = *a.exact * *p1 + *p2;
      BigInt q = *a.exact * *q1 + *q2;
      if (decimal_digits(q) <= cf.options.exact_digit_cap) {
        c.log_p = log_abs(p);
        c.log_q = log_abs(q);
        c.p = std::move(p);
        c.q = std::move(q);
      } else {
        exact = false;
      }
    } else {
      exact = false;
    }
    if (!exact) {
      c.log_p = log_add(a.log + lp1, lp2);
      c.log_q = log_add(a.log + lq1, lq2);
    }
    p2 = std::move(p1);
    q2 = std::move(q1);
    p1 = c.p;
    q1 = c.q;
    lp2 = lp1;
    lq2 = lq1;
    lp1 = c.log_p;
    lq1 = c.log_q;
    out.push_back(std::move(c));
  }
  return out;
}

ApproxInterval approx_interval(const ContinuedFraction& cf, std::size_t n) {
  auto conv = convergents(cf, n);
  Digit a = require_digit(cf, n + 1);
  const auto& q = conv.back().q;
  if (!q || !a.exact) {
    fail(ErrorKind::OutOfRange, "convergent " + std::to_string(n) + " exceeds the exact digit cap");
  }
  ApproxInterval iv;
  iv.lower = Rational(1, 1) / Rational((*a.exact + 2) * *q);
  iv.upper = Rational(1, 1) / Rational(*a.exact * *q);
  iv.lower.canonicalize();
  iv.upper.canonicalize();
  return iv;
}

LogInterval log_approx_interval(const ContinuedFraction& cf, std::size_t n) {
  auto conv = convergents(cf, n);
  Digit a = require_digit(cf, n + 1);
  LogReal lq = conv.back().log_q;
  return {-(log_plus_two(a) + lq), -(a.log + lq)};
}

std::vector<TrendRow> liouville_exponent_trend(const ContinuedFraction& cf, std::size_t n_max) {
  if (n_max < 2) fail(ErrorKind::OutOfRange, "liouville trend needs n_max >= 2");
  auto conv = convergents(cf, n_max);
  std::vector<TrendRow> rows;
  for (std::size_t n = 2; n <= n_max; ++n) {
    Digit a = require_digit(cf, n + 1);
    LogReal lq = conv[n - 1].log_q;
    LogReal mu = (a.log + 2 * lq) / lq;
    rows.push_back({n, mu, std::log(mu)});
  }
  return rows;
}

std::vector<TrendRow> exp_liouville_score(const ContinuedFraction& cf, double s, std::size_t n_max) {
  if (!(s >= 1)) fail(ErrorKind::OrderError, "exponential score needs s >= 1");
  if (n_max < 1) fail(ErrorKind::OutOfRange, "need at least one row");
  auto conv = convergents(cf, n_max);
  std::vector<TrendRow> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    Digit a = require_digit(cf, n + 1);
    LogReal lq = conv[n - 1].log_q;
    LogReal numerator = a.log + lq;
    LogReal log_beta = (numerator > 0 ? std::log(numerator) : kNegInf) - lq / static_cast<LogReal>(s);
    rows.push_back({n, std::exp(log_beta), log_beta});
  }
  return rows;
}

std::vector<ConditionBRow> condition_B_check(const ContinuedFraction& cf, double s, double epsilon,
                                             std::size_t N, std::size_t n_max) {
  if (!(epsilon > 0)) fail(ErrorKind::InvalidInput, "epsilon must be positive");
  if (!(s >= 1)) fail(ErrorKind::OrderError, "condition B needs s >= 1");
  if (N < 1 || N > n_max) fail(ErrorKind::OutOfRange, "need 1 <= N <= n_max");
  auto conv = convergents(cf, n_max);
  std::vector<ConditionBRow> rows;
  for (std::size_t n = N; n <= n_max; ++n) {
    Digit a = require_digit(cf, n + 1);
    LogReal lq = conv[n - 1].log_q;
    LogReal lq_prev = n >= 2 ? conv[n - 2].log_q : 0;
    ConditionBRow row;
    row.n = n;
    row.lhs_log = -(log_plus_two(a) + lq);
    row.rhs_log = -static_cast<LogReal>(epsilon) * std::exp(lq_prev / static_cast<LogReal>(s));
    LogReal margin = 1e-12L * std::max<LogReal>(1, std::fabs(row.rhs_log));
    row.certified = row.lhs_log >= row.rhs_log + margin;
    rows.push_back(row);
  }
  return rows;
}

LiouvilleWitness scale_witness(const LiouvilleWitness& w, const BigInt& q, double s) {
  if (q < 1) fail(ErrorKind::InvalidInput, "scale must be a positive integer");
  if (!(s >= 1)) fail(ErrorKind::OrderError, "witness order must be >= 1");
  if (!(w.delta > 0)) fail(ErrorKind::InvalidInput, "witness delta must be positive");
  LiouvilleWitness out;
  out.delta = w.delta / std::pow(to_double(Rational(q)), 1.0 / s);
  out.scale = w.scale * q;
  for (const auto& pair : w.pairs) {
    WitnessPair scaled;
    for (const auto& r : pair.r) scaled.r.push_back(r * q);
    scaled.s = pair.s * q;
    out.pairs.push_back(std::move(scaled));
  }
  return out;
}

LiouvilleWitness witness_from_convergents(const ContinuedFraction& cf, double delta,
                                          const std::vector<std::size_t>& indices) {
  LiouvilleWitness w;
  w.delta = delta;
  std::size_t n_max = 0;
  for (auto n : indices) n_max = std::max(n_max, n);
  if (n_max == 0) return w;
  auto conv = convergents(cf, n_max);
  for (auto n : indices) {
    const auto& c = conv[n - 1];
    if (!c.p || !c.q) fail(ErrorKind::OutOfRange, "convergent beyond exact cap cannot enter a witness");
    w.pairs.push_back({{BigInt(-*c.p)}, *c.q});
  }
  return w;
}

nlohmann::json to_json(const LiouvilleWitness& w) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : w.pairs) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : p.r) r.push_back(v.get_str());
    pairs.push_back({{"r", r}, {"s", p.s.get_str()}});
  }
  return {{"delta", w.delta}, {"pairs", pairs}, {"scale", w.scale.get_str()}};
}

LiouvilleWitness witness_from_json(const nlohmann::json& j) {
  LiouvilleWitness w;
  try {
    w.delta = j.at("delta").is_string() ? to_double(parse_rational(j.at("delta").get<std::string>()))
                                        : j.at("delta").get<double>();
    if (j.contains("scale")) w.scale = BigInt(j.at("scale").get<std::string>());
    for (const auto& p : j.at("pairs")) {
      WitnessPair pair;
      for (const auto& v : p.at("r")) pair.r.emplace_back(digit_text(v));
      pair.s = BigInt(digit_text(p.at("s")));
      if (pair.s <= 0) fail(ErrorKind::InvalidInput, "witness s_k must be positive");
      if (!w.pairs.empty() && pair.s <= w.pairs.back().s) {
        fail(ErrorKind::InvalidInput, "witness s_k must be strictly increasing");
      }
      w.pairs.push_back(std::move(pair));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed witness: ") + e.what());
  }
  return w;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::Rational: return "Rational";
    case Trend::LiouvilleTrend: return "LiouvilleTrend";
    case Trend::NotLiouvilleTrend: return "NotLiouvilleTrend";
    case Trend::ExpLiouvilleTrend: return "ExpLiouvilleTrend";
    case Trend::NotExpLiouvilleTrend: return "NotExpLiouvilleTrend";
    case Trend::Unknown: return "Unknown";
  }
  return "Unknown";
}

Trend classify_liouville_rows(const std::vector<TrendRow>& rows) {
  if (rows.size() < 3) return Trend::Unknown;
  const auto* last = &rows[rows.size() - 3];
  bool increasing = last[0].value < last[1].value && last[1].value < last[2].value;
  if (increasing && last[2].value > 3) return Trend::LiouvilleTrend;
  if (last[0].value <= 2.5L && last[1].value <= 2.5L && last[2].value <= 2.5L) return Trend::NotLiouvilleTrend;
  return Trend::Unknown;
}

Trend classify_exp_rows(const std::vector<TrendRow>& rows) {
  if (rows.size() < 3) return Trend::Unknown;
  const auto* last = &rows[rows.size() - 3];
  bool decreasing = last[0].log_value > last[1].log_value && last[1].log_value > last[2].log_value;
  if (decreasing && last[2].log_value < std::log(1e-3L)) return Trend::NotExpLiouvilleTrend;
  const LogReal floor = std::log(0.1L);
  if (last[0].log_value >= floor && last[1].log_value >= floor && last[2].log_value >= floor) {
    return Trend::ExpLiouvilleTrend;
  }
  return Trend::Unknown;
}

nlohmann::json to_json(const TrendRow& row) {
  return {{"n", row.n},
          {"value", static_cast<double>(row.value)},
          {"log_value", std::isfinite(static_cast<double>(row.log_value)) ? nlohmann::json(static_cast<double>(row.log_value))
                                                                           : nlohmann::json("-inf")}};
}

nlohmann::json to_json(const DiophantineVerdict& v) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : v.evidence) rows.push_back(to_json(r));
  nlohmann::json j = {{"kind", to_string(v.kind)}, {"evidence", rows}, {"n_used", v.n_used}, {"note", v.note}};
  if (v.s) j["s"] = *v.s;
  return j;
}

}  // namespace torus_hypo::diophantine
