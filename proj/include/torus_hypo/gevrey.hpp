#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "torus_hypo/numeric.hpp"

namespace torus_hypo::gevrey {

/// (k_1, ..., k_m) with k_1 + 2 k_2 + ... + m k_m = m.
using DeltaTuple = std::vector<int>;

struct DeltaSet {
  int m = 0;
  std::vector<DeltaTuple> tuples;
};

DeltaSet enumerate_delta(int m);

/// (k!)^s prod_l (l!)^{(s-1) k_l} <= k! (m!)^{s-1}, exact for rational s.
bool check_lemma_product_bound(const DeltaTuple& tuple, const Rational& s);
/// Same inequality for a real order, compared in log space with a relative margin.
bool check_lemma_product_bound(const DeltaTuple& tuple, double s);

/// sum over Delta(m) of k!/(k_1! ... k_m!) R^k.
Rational sum_over_delta(int m, const Rational& R);

/// d^m e^g / e^g from g', ..., g^(m) (complete Bell polynomial).
Complex exp_composition_derivatives(std::span<const Complex> g_derivs, int m);
/// Y_0, ..., Y_m of the same recurrence.
std::vector<Complex> exp_composition_table(std::span<const Complex> g_derivs, int m);

struct SpectrumSample {
  double frequency = 0;
  double magnitude = 0;
};

struct GevreyWitness {
  double s = 1;
  /// Fitted rate of e^{-epsilon |xi|^{1/s}}; near zero or negative when no such decay is present.
  double epsilon = 0;
  double C = 1;
  /// Exponent kappa of the algebraic factor |xi|^{-kappa}.
  double algebraic_power = 0;
  double h = 1;
  bool h_fitted = false;
  double fit_r2 = 0;
  std::size_t points = 0;
  double xi_lo = 0;
  double xi_hi = 0;
};

struct DecayOptions {
  double xi_min = 16;
  double xi_max = std::numeric_limits<double>::infinity();
  /// Replace magnitudes by their tail supremum before fitting.
  bool envelope = false;
  /// sup |d^alpha f| for alpha = 0, 1, ...; enables the h estimate.
  std::vector<double> derivative_sup;
};

/// Least squares ln|c| = ln C - kappa ln|xi| - epsilon |xi|^{1/s} over the window.
GevreyWitness estimate_decay(std::span<const SpectrumSample> samples, double s, const DecayOptions& options = {});

struct PowerFit {
  double C = 0;
  double power = 0;
  double r2 = 0;
  std::size_t points = 0;
};

/// Least squares ln|c| = ln C + power ln|xi| over [xi_lo, xi_hi].
PowerFit fit_power_law(std::span<const SpectrumSample> samples, double xi_lo, double xi_hi);

nlohmann::json to_json(const GevreyWitness& w);
nlohmann::json to_json(const PowerFit& f);

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// phi = h((t-l)/(l'-l)) h((r-t)/(r-r')) with h built from exp(-x^{-1/(s-1)}).
class GevreyCutoff {
 public:
  GevreyCutoff(double s, Interval support, Interval plateau);

  double s() const { return s_; }
  Interval support() const { return support_; }
  Interval plateau() const { return plateau_; }
  double operator()(double t) const;
  /// |c_k| for k = 0..k_max of the 2 pi periodic extension, computed in quad precision.
  std::vector<double> fourier_magnitudes(int k_max) const;

 private:
  double s_;
  Interval support_;
  Interval plateau_;
};

GevreyCutoff make_cutoff(double s, Interval support, Interval plateau);

}  // namespace torus_hypo::gevrey
