#pragma once

#include <vector>

#include <json.hpp>

#include "torus_hypo/fourier_field.hpp"
#include "torus_hypo/system.hpp"
#include "torus_hypo/trig_poly.hpp"

namespace torus_hypo::normalform {

/// A(t) = sum_j A_j(t_j) with A_j' = a_j - a_j0.
struct NormalFormData {
  std::vector<TrigPoly> A;
  system::SystemSpec normalized;
  bool trivial() const;
};

NormalFormData build_normal_form(const system::SystemSpec& spec);

enum class Direction { Forward, Inverse };

/// Multiplies u^(., xi) by e^{+i xi A} (forward) or e^{-i xi A} (inverse) on the field grid.
FourierField apply_gauge(const FourierField& field, const std::vector<TrigPoly>& A, Direction direction);
FourierField apply_gauge(const FourierField& field, const TrigPoly& A, Direction direction);

struct ConjugationResidual {
  double absolute = 0;
  double relative = 0;
  std::vector<double> per_tube;
};

/// max_j |(T L_j T^{-1} - L~_j) u| over the grid, evaluated spectrally.
ConjugationResidual conjugation_residual(const system::SystemSpec& spec, const FourierField& test_field);

struct GaugeDerivativeRow {
  int alpha = 0;
  /// sup over xi of e^{-eps xi^{1/s}} sup_t |d^alpha e^{i xi A}| / (alpha!)^s.
  double sup_ratio = 0;
  double worst_xi = 0;
};

struct GaugeDerivativeCheck {
  std::vector<GaugeDerivativeRow> rows;
  /// Smallest C with sup_ratio <= C^alpha for every alpha >= 1.
  double C = 0;
  bool finite = false;
};

GaugeDerivativeCheck gauge_derivative_check(const TrigPoly& A, double s, double epsilon, int alpha_max,
                                            const std::vector<double>& xis, int grid = 256);

nlohmann::json to_json(const NormalFormData& data);
nlohmann::json to_json(const ConjugationResidual& r);
nlohmann::json to_json(const GaugeDerivativeCheck& c);

}  // namespace torus_hypo::normalform
