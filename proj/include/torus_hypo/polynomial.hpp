#pragma once

#include <vector>

#include "torus_hypo/numeric.hpp"

namespace torus_hypo {

/// Dense polynomial with exact rational coefficients, c[i] multiplies x^i.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  Polynomial derivative() const;
  Polynomial monic() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& f) const;
  void divmod(const Polynomial& d, Polynomial& q, Polynomial& r) const;

 private:
  void trim();
  std::vector<Rational> c_;
};

Polynomial gcd(Polynomial a, Polynomial b);

/// Yun decomposition: factors[i] is square-free and collects roots of multiplicity i + 1.
std::vector<Polynomial> square_free_factors(const Polynomial& p);

/// Number of distinct real roots (Sturm sequence).
int count_real_roots(const Polynomial& p);

}  // namespace torus_hypo
