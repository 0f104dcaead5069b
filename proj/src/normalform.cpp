#include "torus_hypo/normalform.hpp"

#include <algorithm>
#include <cmath>

#include "torus_hypo/error.hpp"
#include "torus_hypo/gevrey.hpp"
#include "torus_hypo/spec_io.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo::normalform {

using diophantine::RealConstant;

namespace {

/// A(t) on the row-major tensor grid of n points per variable.
std::vector<double> gauge_values(const std::vector<TrigPoly>& A, int n) {
  std::size_t dims = A.size();
  std::vector<std::vector<double>> lines;
  auto grid = uniform_grid(n);
  for (const auto& a : A) {
    std::vector<double> line(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) line[static_cast<std::size_t>(m)] = a.real_at(grid[static_cast<std::size_t>(m)]);
    lines.push_back(std::move(line));
  }
  std::size_t total = 1;
  for (std::size_t j = 0; j < dims; ++j) total *= static_cast<std::size_t>(n);
  std::vector<double> out(total, 0.0);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rem = f;
    double sum = 0;
    for (std::size_t j = dims; j-- > 0;) {
      sum += lines[j][rem % static_cast<std::size_t>(n)];
      rem /= static_cast<std::size_t>(n);
    }
    out[f] = sum;
  }
  return out;
}

MultiTrig gauge_block(const MultiTrig& block, const std::vector<double>& A, double sign_xi, int n) {
  auto samples = block.to_grid(n);
  for (std::size_t f = 0; f < samples.size(); ++f) samples[f] *= std::polar(1.0, sign_xi * A[f]);
  return MultiTrig::from_grid(std::move(samples), block.dims(), n);
}

void check_grid(const FourierField& field, std::size_t parts) {
  if (parts != field.dims) fail(ErrorKind::GridMismatch, "gauge has " + std::to_string(parts) + " variables, field has " + std::to_string(field.dims));
  field.validate();
}

double tube_a0(const system::Tube& tube) { return system::average(tube.a).to_double(); }

}  // namespace

bool NormalFormData::trivial() const {
  return std::all_of(A.begin(), A.end(), [](const TrigPoly& p) { return p.is_zero(); });
}

NormalFormData build_normal_form(const system::SystemSpec& spec) {
  NormalFormData out;
  out.normalized = spec;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const auto& a = spec.tubes[j].a;
    if (const auto* p = std::get_if<TrigPoly>(&a)) {
      out.A.push_back(p->primitive());
    } else {
      out.A.push_back(TrigPoly::exact(ExactTrig{}));
    }
    out.normalized.tubes[j].a = system::average(a);
  }
  return out;
}

FourierField apply_gauge(const FourierField& field, const std::vector<TrigPoly>& A, Direction direction) {
  check_grid(field, A.size());
  bool identity = std::all_of(A.begin(), A.end(), [](const TrigPoly& p) { return p.is_zero(); });
  if (identity) return field;
  auto values = gauge_values(A, field.grid);
  FourierField out = field;
  double sign = direction == Direction::Forward ? 1.0 : -1.0;
  parallel_for(field.size(), [&](std::size_t i) {
    out.blocks[i] = gauge_block(field.blocks[i], values, sign * static_cast<double>(field.ladder[i]), field.grid);
  });
  return out;
}

FourierField apply_gauge(const FourierField& field, const TrigPoly& A, Direction direction) {
  return apply_gauge(field, std::vector<TrigPoly>{A}, direction);
}

ConjugationResidual conjugation_residual(const system::SystemSpec& spec, const FourierField& test_field) {
  if (spec.n() != test_field.dims) fail(ErrorKind::GridMismatch, "field dimension differs from the number of tubes");
  test_field.validate();
  NormalFormData nf = build_normal_form(spec);
  const int n = test_field.grid;
  ConjugationResidual out;
  out.per_tube.assign(spec.n(), 0.0);
  if (nf.trivial()) return out;
  auto values = gauge_values(nf.A, n);
  double scale = 0;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const auto& tube = spec.tubes[j];
    TrigPoly a = std::holds_alternative<TrigPoly>(tube.a) ? std::get<TrigPoly>(tube.a)
                                                          : TrigPoly::constant(tube_a0(tube));
    const double a0 = tube_a0(tube);
    std::vector<double> err(test_field.size(), 0.0), ref(test_field.size(), 0.0);
    parallel_for(test_field.size(), [&](std::size_t i) {
      const double xi = static_cast<double>(test_field.ladder[i]);
      const MultiTrig& v = test_field.blocks[i];
      // Normal-form operator applied directly.
      MultiTrig lt = v.derivative(j);
      lt += v.multiplied_along(j, tube.b.scaled(-xi));
      lt += Complex(0, xi * a0) * v;
      // T L_j T^{-1} v through the grid.
      MultiTrig w = gauge_block(v, values, -xi, n);
      MultiTrig lw = w.derivative(j);
      lw += Complex(0, xi) * w.multiplied_along(j, a);
      lw += w.multiplied_along(j, tube.b.scaled(-xi));
      MultiTrig lw_back = gauge_block(lw.resized(std::vector<int>(lw.dims(), n / 2 - 1)), values, xi, n);
      auto g1 = lw_back.to_grid(n);
      auto g2 = lt.to_grid(n);
      double e = 0, r = 0;
      for (std::size_t f = 0; f < g1.size(); ++f) {
        e = std::max(e, std::abs(g1[f] - g2[f]));
        r = std::max(r, std::abs(g2[f]));
      }
      err[i] = e;
      ref[i] = r;
    });
    for (std::size_t i = 0; i < err.size(); ++i) {
      out.per_tube[j] = std::max(out.per_tube[j], err[i]);
      scale = std::max(scale, ref[i]);
    }
    out.absolute = std::max(out.absolute, out.per_tube[j]);
  }
  out.relative = scale > 0 ? out.absolute / scale : out.absolute;
  return out;
}

GaugeDerivativeCheck gauge_derivative_check(const TrigPoly& A, double s, double epsilon, int alpha_max,
                                            const std::vector<double>& xis, int grid) {
  if (alpha_max < 1 || alpha_max > 30) fail(ErrorKind::OutOfRange, "alpha_max must lie in [1, 30]");
  std::vector<TrigPoly> derivs{A.derivative()};
  for (int l = 1; l < alpha_max; ++l) derivs.push_back(derivs.back().derivative());
  auto ts = uniform_grid(grid);
  GaugeDerivativeCheck out;
  out.rows.resize(static_cast<std::size_t>(alpha_max));
  for (int alpha = 1; alpha <= alpha_max; ++alpha) out.rows[static_cast<std::size_t>(alpha - 1)].alpha = alpha;
  for (double xi : xis) {
    std::vector<double> sup(static_cast<std::size_t>(alpha_max) + 1, 0.0);
    for (double t : ts) {
      std::vector<Complex> g(static_cast<std::size_t>(alpha_max));
      for (int l = 0; l < alpha_max; ++l) g[static_cast<std::size_t>(l)] = Complex(0, xi * derivs[static_cast<std::size_t>(l)].real_at(t));
      auto table = gevrey::exp_composition_table(g, alpha_max);
      for (int alpha = 1; alpha <= alpha_max; ++alpha) {
        sup[static_cast<std::size_t>(alpha)] = std::max(sup[static_cast<std::size_t>(alpha)], std::abs(table[static_cast<std::size_t>(alpha)]));
      }
    }
    for (int alpha = 1; alpha <= alpha_max; ++alpha) {
      double ratio = std::exp(-epsilon * std::pow(std::abs(xi), 1.0 / s) + std::log(sup[static_cast<std::size_t>(alpha)]) -
                              s * std::lgamma(alpha + 1.0));
      auto& row = out.rows[static_cast<std::size_t>(alpha - 1)];
      if (ratio > row.sup_ratio) {
        row.sup_ratio = ratio;
        row.worst_xi = xi;
      }
    }
  }
  out.finite = true;
  for (const auto& row : out.rows) {
    if (!std::isfinite(row.sup_ratio)) out.finite = false;
    out.C = std::max(out.C, std::pow(row.sup_ratio, 1.0 / row.alpha));
  }
  return out;
}

nlohmann::json to_json(const NormalFormData& data) {
  nlohmann::json A = nlohmann::json::array();
  for (const auto& p : data.A) A.push_back(torus_hypo::to_json(p));
  return {{"A", A}, {"normalized", torus_hypo::to_json(data.normalized)}};
}

nlohmann::json to_json(const ConjugationResidual& r) {
  return {{"absolute", r.absolute}, {"relative", r.relative}, {"per_tube", r.per_tube}};
}

nlohmann::json to_json(const GaugeDerivativeCheck& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : c.rows) rows.push_back({{"alpha", r.alpha}, {"sup_ratio", r.sup_ratio}, {"worst_xi", r.worst_xi}});
  return {{"rows", rows}, {"C", c.C}, {"finite", c.finite}};
}

}  // namespace torus_hypo::normalform
