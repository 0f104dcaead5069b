#include "torus_hypo/solver.hpp"

#include <algorithm>
#include <cmath>

#include "torus_hypo/error.hpp"
#include "torus_hypo/normalform.hpp"
#include "torus_hypo/quadrature.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo::solver {

using system::SignProfile;

namespace {

TrigPoly as_trig(const system::Coefficient& a) {
  if (const auto* p = std::get_if<TrigPoly>(&a)) return *p;
  return TrigPoly::constant(std::get<diophantine::RealConstant>(a).to_double());
}

/// Calls body(base) for every multi-index with base[dim] = 0.
template <class Body>
void for_each_line(const MultiTrig& block, std::size_t dim, Body body) {
  const auto& deg = block.degrees();
  std::vector<int> base(deg.size());
  for (std::size_t k = 0; k < deg.size(); ++k) base[k] = k == dim ? 0 : -deg[k];
  for (;;) {
    body(base);
    std::size_t k = deg.size();
    for (;;) {
      if (k == 0) return;
      --k;
      if (k == dim) continue;
      if (base[k] < deg[k]) {
        ++base[k];
        break;
      }
      base[k] = -deg[k];
    }
  }
}

struct Kernel {
  int degree = 0;
  int n = 0;
  /// G[m * (2D+1) + (eta + D)] so that u^(t_m) = sum_eta c_eta e^{i eta t_m} G(m, eta).
  std::vector<Complex> G;
};

Kernel build_kernel(double xi, double a0, const TrigPoly& b, int degree, int n, int min_nodes) {
  const double b0 = b.mean().real();
  const TrigPoly Bt = b.primitive();
  const bool backward = xi * b0 < 0;
  const int nodes = std::max(min_nodes, static_cast<int>(4 * std::abs(xi)));
  const auto rule = gauss_legendre(0, kTwoPi, (nodes + 15) / 16);
  const std::size_t Q = rule.nodes.size();
  const int width = 2 * degree + 1;
  const Complex c0(a0, b0);
  const Complex I(0, 1);
  const Complex prefactor = backward ? 1.0 / (1.0 - std::exp(-I * kTwoPi * xi * c0))
                                     : 1.0 / (std::exp(I * kTwoPi * xi * c0) - 1.0);
  auto grid = uniform_grid(n);
  // e^{-+ i eta tau} for eta = 1..D.
  std::vector<Complex> shift(Q * static_cast<std::size_t>(degree + 1));
  for (std::size_t q = 0; q < Q; ++q) {
    for (int eta = 0; eta <= degree; ++eta) {
      shift[q * static_cast<std::size_t>(degree + 1) + static_cast<std::size_t>(eta)] =
          std::polar(1.0, (backward ? -1.0 : 1.0) * eta * rule.nodes[q]);
    }
  }
  Kernel k;
  k.degree = degree;
  k.n = n;
  k.G.assign(static_cast<std::size_t>(n * width), Complex{});
  for (int m = 0; m < n; ++m) {
    const double t = grid[static_cast<std::size_t>(m)];
    const double Bt_t = Bt.real_at(t);
    std::vector<Complex> acc(static_cast<std::size_t>(width));
    for (std::size_t q = 0; q < Q; ++q) {
      const double tau = rule.nodes[q];
      Complex e;
      if (backward) {
        e = xi * (Complex(b0, -a0) * tau + (Bt_t - Bt.real_at(t - tau)));
      } else {
        e = I * xi * a0 * tau - xi * (b0 * tau + Bt.real_at(t + tau) - Bt_t);
      }
      const Complex kern = rule.weights[q] * std::exp(e);
      const Complex* row = &shift[q * static_cast<std::size_t>(degree + 1)];
      acc[static_cast<std::size_t>(degree)] += kern;
      for (int eta = 1; eta <= degree; ++eta) {
        acc[static_cast<std::size_t>(degree + eta)] += kern * row[eta];
        acc[static_cast<std::size_t>(degree - eta)] += kern * std::conj(row[eta]);
      }
    }
    for (int w = 0; w < width; ++w) k.G[static_cast<std::size_t>(m * width + w)] = prefactor * acc[static_cast<std::size_t>(w)];
  }
  return k;
}

TrigPoly solve_line(const Kernel& k, const TrigPoly& f) {
  const int n = k.n, width = 2 * k.degree + 1;
  std::vector<Complex> samples(static_cast<std::size_t>(n));
  auto grid = uniform_grid(n);
  for (int m = 0; m < n; ++m) {
    Complex sum{};
    for (int eta = -f.degree(); eta <= f.degree(); ++eta) {
      sum += f.coefficient(eta) * std::polar(1.0, eta * grid[static_cast<std::size_t>(m)]) *
             k.G[static_cast<std::size_t>(m * width + eta + k.degree)];
    }
    samples[static_cast<std::size_t>(m)] = sum;
  }
  std::vector<int> shape{n};
  dft_forward(samples, shape);
  std::vector<Complex> c(static_cast<std::size_t>(n - 1));
  for (int eta = -(n / 2 - 1); eta <= n / 2 - 1; ++eta) {
    c[static_cast<std::size_t>(eta + n / 2 - 1)] = samples[static_cast<std::size_t>(fft_slot(eta, n))];
  }
  return TrigPoly(std::move(c));
}

MultiTrig solve_zero_mode(const MultiTrig& block, std::size_t dim) {
  double scale = block.max_coefficient();
  MultiTrig out = block;
  for_each_line(block, dim, [&](const std::vector<int>& base) {
    TrigPoly line = block.line(dim, base);
    if (std::abs(line.mean()) > 1e-12 * std::max(1.0, scale)) {
      fail(ErrorKind::SolvabilityError, "xi = 0 data has nonzero mean along the solved variable");
    }
    out.set_line(dim, base, line.primitive());
  });
  return out;
}

}  // namespace

FourierField solve_single_tube(std::size_t j, const system::SystemSpec& spec, const FourierField& f,
                               const SolverOptions& options) {
  if (j >= spec.n()) fail(ErrorKind::OutOfRange, "tube index out of range");
  if (f.dims != spec.n()) fail(ErrorKind::GridMismatch, "rhs dimension differs from the number of tubes");
  f.validate();
  const auto& tube = spec.tubes[j];
  auto sign = system::sign_analysis(tube.b);
  if (sign.profile != SignProfile::NonNegativeNotZero && sign.profile != SignProfile::NonPositiveNotZero) {
    fail(ErrorKind::ProfileError, "b_" + std::to_string(j + 1) + " is " + system::to_string(sign.profile) +
                                      "; the integral formulas need a sign-definite b");
  }
  auto nf = normalform::build_normal_form(spec);
  const bool gauge = !nf.trivial();
  const FourierField rhs = gauge ? normalform::apply_gauge(f, nf.A, normalform::Direction::Forward) : f;
  const double a0 = system::average(tube.a).to_double();
  const int n = rhs.grid;

  FourierField u = rhs;
  parallel_for(rhs.size(), [&](std::size_t i) {
    const double xi = static_cast<double>(rhs.ladder[i]);
    const MultiTrig& block = rhs.blocks[i];
    if (rhs.ladder[i] == 0) {
      u.blocks[i] = solve_zero_mode(block, j);
      return;
    }
    if (2 * block.degrees()[j] >= n) fail(ErrorKind::GridMismatch, "grid too coarse for rhs degree");
    Kernel k = build_kernel(xi, a0, tube.b, block.degrees()[j], n, options.min_nodes);
    std::vector<int> deg = block.degrees();
    deg[j] = n / 2 - 1;
    MultiTrig out(deg);
    for_each_line(block, j, [&](const std::vector<int>& base) {
      out.set_line(j, base, solve_line(k, block.line(j, base)));
    });
    u.blocks[i] = std::move(out);
  });
  return gauge ? normalform::apply_gauge(u, nf.A, normalform::Direction::Inverse) : u;
}

DivisionResult solve_by_division(const system::SystemSpec& spec, const RhsList& f_list, const SolverOptions& options) {
  if (f_list.size() != spec.n()) fail(ErrorKind::InvalidInput, "need one rhs slot per tube");
  auto analysis = system::analyze(spec);
  DivisionResult out;
  out.J = analysis.J;
  if (out.J.empty()) fail(ErrorKind::NoSolverApplies, "division solver needs J nonempty");
  const FourierField* ref = nullptr;
  for (auto j : out.J) {
    if (!f_list[j]) fail(ErrorKind::InvalidInput, "missing rhs for tube " + std::to_string(j + 1));
    if (!ref) ref = &*f_list[j];
    if (f_list[j]->dims != spec.n()) fail(ErrorKind::GridMismatch, "rhs dimension differs from the number of tubes");
    if (f_list[j]->ladder != ref->ladder || f_list[j]->grid != ref->grid) fail(ErrorKind::GridMismatch, "rhs ladders differ");
    f_list[j]->validate();
  }
  auto nf = normalform::build_normal_form(spec);
  const bool gauge = !nf.trivial();
  std::vector<std::optional<FourierField>> rhs(spec.n());
  for (std::size_t j = 0; j < spec.n(); ++j) {
    if (!f_list[j]) continue;
    rhs[j] = gauge ? normalform::apply_gauge(*f_list[j], nf.A, normalform::Direction::Forward) : *f_list[j];
  }
  std::vector<bool> inJ(spec.n(), false);
  for (auto j : out.J) inJ[j] = true;
  std::vector<Rational> a(spec.n());
  for (auto j : out.J) a[j] = analysis.tubes[j].a0.approximate(options.precision);

  out.u = zero_like(*rhs[out.J.front()]);
  std::vector<int> deg(spec.n(), 0);
  for (auto j : out.J) {
    auto d = rhs[j]->max_degrees();
    for (std::size_t k = 0; k < deg.size(); ++k) deg[k] = std::max(deg[k], d[k]);
  }
  const auto& ladder = out.u.ladder;
  std::vector<char> fixed(ladder.size(), 0);
  parallel_for(ladder.size(), [&](std::size_t i) {
    const std::int64_t xi = ladder[i];
    std::vector<const MultiTrig*> blocks(spec.n(), nullptr);
    for (std::size_t j = 0; j < spec.n(); ++j) if (rhs[j]) blocks[j] = rhs[j]->find(xi);
    MultiTrig ublock(deg);
    std::vector<int> eta(spec.n());
    double scale = 0;
    for (auto j : out.J) if (blocks[j]) scale = std::max(scale, blocks[j]->max_coefficient());
    for (std::size_t flat = 0; flat < ublock.size(); ++flat) {
      ublock.multi_index(flat, eta);
      std::vector<Rational> d(spec.n());
      std::size_t M = out.J.front();
      bool zero_mode = xi == 0;
      for (auto j : out.J) {
        d[j] = Rational(eta[j]) + Rational(static_cast<long>(xi)) * a[j];
        if (abs(d[j]) > abs(d[M])) M = j;
        if (eta[j] != 0) zero_mode = false;
      }
      if (zero_mode) {
        // Remaining equations at xi = 0 reduce to d/dt_k for k outside J.
        std::size_t K = spec.n();
        for (std::size_t k = 0; k < spec.n(); ++k) {
          if (inJ[k] || eta[k] == 0) continue;
          if (K == spec.n() || std::abs(eta[k]) > std::abs(eta[K])) K = k;
        }
        if (K == spec.n()) {
          fixed[i] = 1;
          continue;
        }
        if (!rhs[K]) fail(ErrorKind::InvalidInput, "missing rhs for tube " + std::to_string(K + 1) + " at xi = 0");
        const MultiTrig* fk = rhs[K]->find(0);
        Complex value = fk ? fk->at(eta) : Complex{};
        ublock.data()[flat] = Complex(0, -1) * value / static_cast<double>(eta[K]);
        continue;
      }
      if (d[M] == 0) fail(ErrorKind::ZeroDivisorError, "xi a_j0 + eta_j vanishes for every j in J at xi = " + std::to_string(xi));
      const double dM = to_double(d[M]);
      if (std::abs(dM) < 1e-300) fail(ErrorKind::ZeroDivisorError, "divisor below 1e-300");
      const Complex fM = blocks[M] ? blocks[M]->at(eta) : Complex{};
      for (auto k : out.J) {
        if (k == M) continue;
        const Complex fk = blocks[k] ? blocks[k]->at(eta) : Complex{};
        const double dk = to_double(d[k]);
        const double lhs = std::abs(dM * fk - dk * fM);
        if (lhs > 1e-9 * (std::abs(dM * fk) + std::abs(dk * fM)) + 1e-13 * scale) {
          fail(ErrorKind::CompatibilityError, "f_" + std::to_string(k + 1) + " and f_" + std::to_string(M + 1) +
                                                  " are incompatible at xi = " + std::to_string(xi));
        }
      }
      ublock.data()[flat] = Complex(0, -1) * fM / dM;
    }
    out.u.blocks[i] = std::move(ublock);
  });
  out.mean_fixed = std::any_of(fixed.begin(), fixed.end(), [](char c) { return c != 0; });
  if (gauge) out.u = normalform::apply_gauge(out.u, nf.A, normalform::Direction::Inverse);
  return out;
}

FourierField apply_operator(const system::SystemSpec& spec, std::size_t j, const FourierField& u) {
  if (u.dims != spec.n()) fail(ErrorKind::GridMismatch, "field dimension differs from the number of tubes");
  const TrigPoly a = as_trig(spec.tubes[j].a);
  const TrigPoly& b = spec.tubes[j].b;
  FourierField out = u;
  parallel_for(u.size(), [&](std::size_t i) {
    const double xi = static_cast<double>(u.ladder[i]);
    const MultiTrig& v = u.blocks[i];
    MultiTrig lv = v.derivative(j);
    if (xi != 0) {
      lv += Complex(0, xi) * v.multiplied_along(j, a);
      lv += v.multiplied_along(j, b.scaled(-xi));
    }
    out.blocks[i] = std::move(lv);
  });
  return out;
}

std::vector<double> residual(const system::SystemSpec& spec, const FourierField& u, const RhsList& f_list) {
  if (!f_list.empty() && f_list.size() != spec.n()) fail(ErrorKind::InvalidInput, "need one rhs slot per tube");
  std::vector<double> out(spec.n(), 0.0);
  for (std::size_t j = 0; j < spec.n(); ++j) {
    FourierField lu = apply_operator(spec, j, u);
    const FourierField* f = f_list.empty() || !f_list[j] ? nullptr : &*f_list[j];
    if (f && f->dims != u.dims) fail(ErrorKind::GridMismatch, "rhs dimension differs from solution");
    std::vector<std::int64_t> xis = lu.ladder;
    if (f) xis.insert(xis.end(), f->ladder.begin(), f->ladder.end());
    std::sort(xis.begin(), xis.end());
    xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
    std::vector<double> per(xis.size(), 0.0);
    parallel_for(xis.size(), [&](std::size_t i) {
      const MultiTrig* l = lu.find(xis[i]);
      const MultiTrig* g = f ? f->find(xis[i]) : nullptr;
      MultiTrig diff = l ? *l : MultiTrig(std::vector<int>(u.dims, 0));
      if (g) diff -= *g;
      per[i] = diff.sup_norm();
    });
    for (double v : per) out[j] = std::max(out[j], v);
  }
  return out;
}

std::vector<gevrey::SpectrumSample> sup_spectrum(const FourierField& u) {
  std::vector<gevrey::SpectrumSample> out(u.size());
  parallel_for(u.size(), [&](std::size_t i) {
    out[i] = {static_cast<double>(u.ladder[i]), u.blocks[i].sup_norm()};
  });
  return out;
}

gevrey::GevreyWitness decay_report(const FourierField& u, double s, const gevrey::DecayOptions& options) {
  auto spectrum = sup_spectrum(u);
  return gevrey::estimate_decay(spectrum, s, options);
}

PrefactorCheck prefactor_bound(Complex c0, double xi) {
  PrefactorCheck out;
  out.value = 1.0 / std::abs(1.0 - std::exp(Complex(0, -1) * kTwoPi * xi * c0));
  out.bound = 1.0 / (1.0 - std::exp(kTwoPi * c0.imag()));
  return out;
}

nlohmann::json residual_json(const std::vector<double>& r) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t j = 0; j < r.size(); ++j) out.push_back({{"tube", j + 1}, {"max_norm", r[j]}});
  return out;
}

}  // namespace torus_hypo::solver
