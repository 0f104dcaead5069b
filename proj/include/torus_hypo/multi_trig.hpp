#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "torus_hypo/numeric.hpp"
#include "torus_hypo/trig_poly.hpp"

namespace torus_hypo {

/// Dense trigonometric polynomial in d variables, coefficients over prod [-D_j, D_j].
class MultiTrig {
 public:
  MultiTrig() : MultiTrig(std::vector<int>{0}) {}
  explicit MultiTrig(std::vector<int> degrees);

  std::size_t dims() const { return degrees_.size(); }
  const std::vector<int>& degrees() const { return degrees_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<Complex> data() { return coeffs_; }
  std::span<const Complex> data() const { return coeffs_; }

  /// Flat offset of multi-index eta, or npos when outside the box.
  std::size_t offset(std::span<const int> eta) const;
  void multi_index(std::size_t flat, std::span<int> eta) const;
  Complex at(std::span<const int> eta) const;
  Complex& at(std::span<const int> eta);

  Complex operator()(std::span<const double> t) const;
  MultiTrig derivative(std::size_t dim) const;
  MultiTrig multiplied_along(std::size_t dim, const TrigPoly& p) const;
  MultiTrig resized(std::vector<int> degrees) const;

  /// Samples on the tensor grid of n points per variable (row-major).
  std::vector<Complex> to_grid(int n) const;
  /// Trig interpolant of tensor-grid samples; degree n/2 - 1 per variable.
  static MultiTrig from_grid(std::vector<Complex> samples, std::size_t dims, int n);

  /// Max modulus over a tensor grid fine enough to resolve the degree.
  double sup_norm() const;
  double max_coefficient() const;

  /// Coefficient line along `dim` with the other indices fixed by `base` (entries at dim ignored).
  TrigPoly line(std::size_t dim, std::span<const int> base) const;
  void set_line(std::size_t dim, std::span<const int> base, const TrigPoly& p);

  MultiTrig& operator+=(const MultiTrig& other);
  MultiTrig& operator-=(const MultiTrig& other);
  MultiTrig& operator*=(Complex factor);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<int> degrees_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> coeffs_;
};

MultiTrig operator+(MultiTrig a, const MultiTrig& b);
MultiTrig operator-(MultiTrig a, const MultiTrig& b);
MultiTrig operator*(Complex factor, MultiTrig a);

/// Grid size for resolving a block: power of two above twice the largest degree.
int resolving_grid(const std::vector<int>& degrees, int oversample = 2);

}  // namespace torus_hypo
