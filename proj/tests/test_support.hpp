#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "torus_hypo/fourier_field.hpp"
#include "torus_hypo/multi_trig.hpp"

namespace test_support {

using torus_hypo::Complex;
using torus_hypo::FourierField;
using torus_hypo::MultiTrig;

/// Gaussian coefficients of the given degree per variable on each listed frequency.
inline FourierField random_field(std::size_t dims, int degree, const std::vector<std::int64_t>& xis, unsigned seed,
                                 int grid = 64) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  FourierField f;
  f.dims = dims;
  f.grid = grid;
  for (auto xi : xis) {
    MultiTrig b(std::vector<int>(dims, degree));
    for (auto& c : b.data()) c = Complex(n01(rng), n01(rng));
    f.set(xi, std::move(b));
  }
  return f;
}

/// Max coefficient difference over the union of both supports.
inline double max_difference(const FourierField& a, const FourierField& b) {
  double worst = 0;
  auto compare = [&](const FourierField& x, const FourierField& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const MultiTrig* other = y.find(x.ladder[i]);
      std::vector<int> eta(x.dims);
      for (std::size_t k = 0; k < x.blocks[i].size(); ++k) {
        x.blocks[i].multi_index(k, eta);
        Complex o = other ? (other->offset(eta) == MultiTrig::npos ? Complex{} : other->at(eta)) : Complex{};
        worst = std::max(worst, std::abs(x.blocks[i].data()[k] - o));
      }
    }
  };
  compare(a, b);
  compare(b, a);
  return worst;
}

inline double max_coefficient(const FourierField& f) {
  double m = 0;
  for (const auto& b : f.blocks) m = std::max(m, b.max_coefficient());
  return m;
}

inline std::string fixture(const std::string& name) { return std::string(TORUS_HYPO_FIXTURES) + "/" + name; }

}  // namespace test_support
