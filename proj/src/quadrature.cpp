#include "torus_hypo/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

QuadratureRule gauss_legendre(double lo, double hi, int panels) {
  if (panels < 1 || !(hi > lo)) fail(ErrorKind::InvalidInput, "bad quadrature interval");
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  QuadratureRule out;
  out.nodes.reserve(static_cast<std::size_t>(panels) * 16);
  out.weights.reserve(static_cast<std::size_t>(panels) * 16);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.nodes.push_back(mid - 0.5 * h * x[i]);
      out.weights.push_back(0.5 * h * w[i]);
      if (x[i] != 0) {
        out.nodes.push_back(mid + 0.5 * h * x[i]);
        out.weights.push_back(0.5 * h * w[i]);
      }
    }
  }
  return out;
}

}  // namespace torus_hypo
