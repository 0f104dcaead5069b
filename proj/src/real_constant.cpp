#include "torus_hypo/real_constant.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "torus_hypo/error.hpp"

namespace torus_hypo::diophantine {

namespace {

const LogReal kLn10 = std::log(static_cast<LogReal>(10));

Rational cf_value_exact(const ContinuedFraction& cf) {
  std::size_t len = cf.digits.length();
  ContinuedFraction uncapped = cf;
  uncapped.options.exact_digit_cap = std::numeric_limits<std::size_t>::max();
  auto conv = convergents(uncapped, len);
  Rational v(*conv.back().p, *conv.back().q);
  v.canonicalize();
  return v;
}

}  // namespace

RealConstant RealConstant::rational(Rational value) {
  RealConstant c;
  value.canonicalize();
  c.kind_ = Kind::ExactRational;
  c.exact_ = std::move(value);
  return c;
}

RealConstant RealConstant::continued_fraction(ContinuedFraction cf) {
  if (cf.digits.finite()) return rational(cf_value_exact(cf));
  RealConstant c;
  c.kind_ = Kind::CFDefined;
  c.cf_ = std::move(cf);
  return c;
}

RealConstant RealConstant::approx(double value, std::string label) {
  if (!std::isfinite(value)) fail(ErrorKind::InvalidInput, "non-finite constant");
  RealConstant c;
  c.kind_ = Kind::FloatApprox;
  c.approx_ = value;
  c.label_ = std::move(label);
  return c;
}

std::optional<bool> RealConstant::is_rational() const {
  switch (kind_) {
    case Kind::ExactRational: return true;
    case Kind::CFDefined: return false;
    case Kind::FloatApprox: return std::nullopt;
  }
  return std::nullopt;
}

double RealConstant::to_double() const {
  switch (kind_) {
    case Kind::ExactRational: return torus_hypo::to_double(exact_);
    case Kind::CFDefined: return torus_hypo::to_double(approximate(20));
    case Kind::FloatApprox: return approx_;
  }
  return 0;
}

Rational RealConstant::approximate(int digits) const {
  if (kind_ == Kind::ExactRational) return exact_;
  if (kind_ == Kind::FloatApprox) return from_double(approx_);
  const LogReal target = static_cast<LogReal>(digits) * kLn10;
  std::size_t n = 8;
  for (;;) {
    auto conv = convergents(*cf_, n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& c = conv[k - 1];
      auto a = cf_->digits.digit(k + 1, cf_->options.exact_digit_cap);
      if (!c.p || !c.q) {
        fail(ErrorKind::OutOfRange, "cannot reach " + std::to_string(digits) + " digits within the exact cap");
      }
      // |alpha - p_k/q_k| < 1/(a_{k+1} q_k^2).
      if (a->log + 2 * c.log_q > target) {
        Rational v(*c.p, *c.q);
        v.canonicalize();
        return v;
      }
    }
    n *= 2;
  }
}

std::string RealConstant::describe() const {
  switch (kind_) {
    case Kind::ExactRational: return torus_hypo::to_string(exact_);
    case Kind::CFDefined: return "cf[" + cf_->digits.describe() + "]";
    case Kind::FloatApprox: {
      std::ostringstream os;
      os.precision(17);
      os << "~" << approx_;
      if (!label_.empty()) os << " (" << label_ << ")";
      return os.str();
    }
  }
  return {};
}

nlohmann::json RealConstant::to_json() const {
  switch (kind_) {
    case Kind::ExactRational: return torus_hypo::to_string(exact_);
    case Kind::CFDefined: return {{"cf", cf_->digits.to_json()}};
    case Kind::FloatApprox: {
      nlohmann::json j = {{"float", approx_}};
      if (!label_.empty()) j["label"] = label_;
      return j;
    }
  }
  return nullptr;
}

RealConstant RealConstant::from_json(const nlohmann::json& j) {
  if (j.is_string()) return rational(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return rational(Rational(BigInt(std::to_string(j.get<long long>()))));
  if (j.is_number()) return approx(j.get<double>());
  if (j.is_object()) {
    if (j.contains("cf")) return continued_fraction({DigitStream::from_json(j.at("cf")), {}});
    if (j.contains("rational")) return rational(parse_rational(j.at("rational").get<std::string>()));
    if (j.contains("float")) return approx(j.at("float").get<double>(), j.value("label", std::string()));
  }
  fail(ErrorKind::InvalidInput, "cannot read a real constant from " + j.dump());
}

DiophantineVerdict classify_constant(const RealConstant& value, std::optional<double> s, std::size_t horizon) {
  DiophantineVerdict v;
  v.s = s;
  if (s && !(*s >= 1)) fail(ErrorKind::OrderError, "order must be >= 1");
  if (value.kind() == RealConstant::Kind::ExactRational) {
    v.kind = Trend::Rational;
    v.note = "exact rational " + value.describe();
    return v;
  }
  if (value.kind() == RealConstant::Kind::FloatApprox) {
    v.kind = Trend::Unknown;
    v.note = "float approximation " + value.describe() + ": rationality and approximation type are not decidable";
    return v;
  }
  const ContinuedFraction& cf = *value.cf();
  auto mu = liouville_exponent_trend(cf, horizon);
  Trend liouville = classify_liouville_rows(mu);
  if (!s) {
    v.kind = liouville;
    v.evidence = std::move(mu);
    v.n_used = horizon;
    v.note = "mu_n = ln(a_{n+1} q_n^2)/ln q_n over n = 2.." + std::to_string(horizon);
    return v;
  }
  auto beta = exp_liouville_score(cf, *s, horizon);
  v.kind = classify_exp_rows(beta);
  v.evidence = std::move(beta);
  v.n_used = horizon;
  v.note = "beta_n = ln(a_{n+1} q_n)/q_n^{1/s} over n = 1.." + std::to_string(horizon);
  if (v.kind == Trend::Unknown && liouville == Trend::NotLiouvilleTrend) {
    v.kind = Trend::NotExpLiouvilleTrend;
    v.note += "; exponent trend bounded, so no exponential approximation either";
  }
  return v;
}

WitnessCheck verify_witness(const LiouvilleWitness& w, const std::vector<RealConstant>& alpha, double s) {
  WitnessCheck check;
  if (w.pairs.empty()) {
    check.note = "empty witness";
    return check;
  }
  check.verified = true;
  for (const auto& pair : w.pairs) {
    if (pair.r.size() != alpha.size()) fail(ErrorKind::WitnessMismatch, "witness pair length differs from vector length");
    LogReal ls = log_abs(pair.s);
    LogReal bound_log = -static_cast<LogReal>(w.delta) * std::exp(ls / static_cast<LogReal>(s));
    bool ok = true;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const auto& a = alpha[j];
      if (a.kind() == RealConstant::Kind::FloatApprox) {
        check.unverifiable = true;
        ok = false;
        continue;
      }
      LogReal needed = (-bound_log + ls) / kLn10 + 30;
      if (needed > 20000) {
        check.unverifiable = true;
        ok = false;
        continue;
      }
      int digits = static_cast<int>(std::ceil(static_cast<double>(needed)));
      Rational approx = a.approximate(digits);
      Rational value = Rational(pair.r[j]) + Rational(pair.s) * approx;
      Rational err = a.kind() == RealConstant::Kind::ExactRational ? Rational(0)
                                                                    : Rational(pair.s) / Rational(pow10(static_cast<unsigned long>(digits)));
      Rational upper = abs(value) + err;
      if (!(log_abs(upper) <= bound_log)) ok = false;
    }
    check.rows.push_back(ok);
    check.verified = check.verified && ok;
  }
  if (check.unverifiable) check.note = "some components cannot be checked from finite data";
  return check;
}

}  // namespace torus_hypo::diophantine
