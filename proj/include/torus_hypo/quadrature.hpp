#pragma once

#include <vector>

namespace torus_hypo {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Composite 16-point Gauss-Legendre rule with `panels` equal panels on [lo, hi].
QuadratureRule gauss_legendre(double lo, double hi, int panels);

}  // namespace torus_hypo
