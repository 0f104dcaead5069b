#pragma once

#include <optional>
#include <span>
#include <vector>

#include "torus_hypo/numeric.hpp"

namespace torus_hypo {

/// Exact real form: constant + sum cos[k] cos((k+1)t) + sin[k] sin((k+1)t).
struct ExactTrig {
  Rational constant;
  std::vector<Rational> cos;
  std::vector<Rational> sin;
};

/// Finite trigonometric polynomial sum_{|k|<=D} c_k e^{ikt}.
class TrigPoly {
 public:
  TrigPoly() : coeffs_{Complex{}} {}
  /// Coefficients c_{-D..D}, stored at k + D.
  explicit TrigPoly(std::vector<Complex> coeffs);

  static TrigPoly exact(ExactTrig form);
  static TrigPoly real_form(double constant, std::span<const double> cos, std::span<const double> sin);
  static TrigPoly constant(Complex value);

  int degree() const { return static_cast<int>(coeffs_.size() / 2); }
  Complex coefficient(int k) const;
  std::span<const Complex> coefficients() const { return coeffs_; }
  const std::optional<ExactTrig>& exact_form() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }
  bool is_real(double tol = 1e-14) const;
  bool is_zero() const;

  Complex operator()(double t) const;
  double real_at(double t) const { return (*this)(t).real(); }
  Complex mean() const { return coefficient(0); }
  std::optional<Rational> exact_mean() const;

  TrigPoly derivative() const;
  /// Zero-mean antiderivative of p - mean(p).
  TrigPoly primitive() const;
  /// t -> -t.
  TrigPoly reflected() const;
  /// t -> p(t - tau).
  TrigPoly shifted(double tau) const;
  TrigPoly without_mean() const;
  TrigPoly operator-() const;
  TrigPoly scaled(double factor) const;
  TrigPoly scaled_exact(const Rational& factor) const;
  TrigPoly operator+(const TrigPoly& other) const;
  TrigPoly operator-(const TrigPoly& other) const;
  TrigPoly operator*(const TrigPoly& other) const;

  /// sum |k| |c_k|, a bound on sup |p'|.
  double derivative_bound() const;
  /// Values on the uniform grid of n points.
  std::vector<Complex> sample(int n) const;

 private:
  void trim();

  std::vector<Complex> coeffs_;
  std::optional<ExactTrig> exact_;
};

}  // namespace torus_hypo
