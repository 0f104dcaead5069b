#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torus_hypo/diophantine.hpp"

namespace torus_hypo::diophantine {

/// A real number tagged with how much we know about it.
class RealConstant {
 public:
  enum class Kind { ExactRational, CFDefined, FloatApprox };

  RealConstant() = default;
  static RealConstant rational(Rational value);
  /// A finite digit stream collapses to its exact rational value.
  static RealConstant continued_fraction(ContinuedFraction cf);
  static RealConstant approx(double value, std::string label = {});

  Kind kind() const { return kind_; }
  /// true / false when decided by the tag, nullopt for float approximations.
  std::optional<bool> is_rational() const;
  const Rational* exact() const { return kind_ == Kind::ExactRational ? &exact_ : nullptr; }
  const ContinuedFraction* cf() const { return cf_ ? &*cf_ : nullptr; }
  const std::string& label() const { return label_; }

  double to_double() const;
  /// Rational r with |value - r| <= 10^-digits (float approximations return their binary value).
  Rational approximate(int digits) const;

  std::string describe() const;
  nlohmann::json to_json() const;
  /// "1/2", 0.3, {"cf": ...}, {"float": x, "label": ...}, {"rational": "p/q"}.
  static RealConstant from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::ExactRational;
  Rational exact_;
  std::optional<ContinuedFraction> cf_;
  double approx_ = 0;
  std::string label_;
};

inline constexpr std::size_t kDefaultHorizon = 96;

/// Trend classification of a single constant; s = nullopt selects the Liouville (smooth) question.
DiophantineVerdict classify_constant(const RealConstant& value, std::optional<double> s,
                                     std::size_t horizon = kDefaultHorizon);

struct WitnessCheck {
  /// Every pair certified against every component.
  bool verified = false;
  /// Some component cannot be checked (float input or precision budget exceeded).
  bool unverifiable = false;
  std::vector<bool> rows;
  std::string note;
};

/// Checks max_j |r_j + s_k alpha_j| <= exp(-delta s_k^{1/s}) pair by pair.
WitnessCheck verify_witness(const LiouvilleWitness& w, const std::vector<RealConstant>& alpha, double s);

}  // namespace torus_hypo::diophantine
