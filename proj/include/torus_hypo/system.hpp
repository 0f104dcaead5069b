#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "torus_hypo/diophantine.hpp"
#include "torus_hypo/real_constant.hpp"
#include "torus_hypo/trig_poly.hpp"

namespace torus_hypo::system {

using diophantine::DiophantineVerdict;
using diophantine::RealConstant;

using Coefficient = std::variant<TrigPoly, RealConstant>;

/// L_j = d/dt_j + (a_j + i b_j)(t_j) d/dx.
struct Tube {
  Coefficient a;
  TrigPoly b;
};

struct Order {
  enum class Mode { Gevrey, Smooth, Analytic };
  Mode mode = Mode::Gevrey;
  double s = 2;
  std::string text = "2";

  static Order gevrey(double s);
  static Order smooth();
  /// "2", "3/2", "1.5", "smooth", "analytic".
  static Order parse(const std::string& text);
  /// Gevrey order for exponential questions, nullopt in smooth mode; rejects s <= 1.
  std::optional<double> checked_s() const;
};

enum class ClaimKind { ExpLiouville, NotExpLiouville, Liouville, NotLiouville };

/// User-supplied statement about the vector of real averages a_{J0}.
struct VectorClaim {
  ClaimKind kind = ClaimKind::NotExpLiouville;
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::optional<diophantine::LiouvilleWitness> witness;
  std::string note;
};

struct SystemSpec {
  std::string name;
  std::vector<Tube> tubes;
  std::optional<Order> order;
  std::optional<VectorClaim> vector_claim;
  std::size_t n() const { return tubes.size(); }
};

enum class SignProfile { IdenticallyZero, NonNegativeNotZero, NonPositiveNotZero, ChangesSign, Unknown };
std::string to_string(SignProfile p);

struct SignEvidence {
  std::string method;
  int grid = 0;
  double lipschitz = 0;
  double threshold = 0;
  double min_value = 0;
  double max_value = 0;
  bool approximate = false;
};

struct SignResult {
  SignProfile profile = SignProfile::Unknown;
  SignEvidence evidence;
};

struct SignOptions {
  /// Decide grid-inconclusive cases exactly via the tan(t/2) substitution.
  bool exact_fallback = true;
  int max_grid = 1 << 16;
};

SignResult sign_analysis(const TrigPoly& b, const SignOptions& options = {});

RealConstant average(const Coefficient& a);
RealConstant average(const TrigPoly& p);

struct TubeAnalysis {
  RealConstant a0;
  RealConstant b0;
  SignResult sign;
};

struct SystemAnalysis {
  std::vector<TubeAnalysis> tubes;
  /// Zero-based indices of tubes with b_j identically zero.
  std::vector<std::size_t> J;
  Complex c0(std::size_t j) const;
};

SystemAnalysis analyze(const SystemSpec& spec, const SignOptions& options = {});

enum class Decision { Hypoelliptic, NotHypoelliptic, Unknown };
enum class WitnessKind { ConditionI, ConditionII, FailureBothConditions, MissingClassification };
std::string to_string(Decision d);
std::string to_string(WitnessKind w);

struct Verdict {
  Decision decision = Decision::Unknown;
  WitnessKind witness = WitnessKind::MissingClassification;
  /// Tube index (zero-based) for ConditionI.
  std::optional<std::size_t> tube;
  std::vector<std::string> reasons;
  std::string explanation;
};

/// Classification of the vector a_{J0} for the question selected by `order`.
DiophantineVerdict classify_vector(const std::vector<RealConstant>& components, const Order& order,
                                   const std::optional<VectorClaim>& claim,
                                   std::size_t horizon = diophantine::kDefaultHorizon);

Verdict decide(const SystemAnalysis& analysis, const Order& order, const std::optional<DiophantineVerdict>& dio);

struct Classification {
  SystemAnalysis analysis;
  std::vector<DiophantineVerdict> components;
  std::optional<DiophantineVerdict> dio;
  Verdict verdict;
};

Classification classify(const SystemSpec& spec, const Order& order,
                        std::size_t horizon = diophantine::kDefaultHorizon);

nlohmann::json to_json(const SignResult& r);
nlohmann::json to_json(const SystemAnalysis& a);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const Classification& c);

}  // namespace torus_hypo::system
