#include "torus_hypo/singular.hpp"

#include <algorithm>
#include <cmath>

#include "torus_hypo/error.hpp"
#include "torus_hypo/quadrature.hpp"
#include "torus_hypo/solver.hpp"
#include "torus_hypo/spec_io.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo::singular {

using gevrey::SpectrumSample;

namespace {

double wrap(double x) { return x - kTwoPi * std::floor((x + kPi) / kTwoPi); }
double mod2pi(double x) {
  double y = x - kTwoPi * std::floor(x / kTwoPi);
  return y >= kTwoPi ? 0.0 : y;
}

double mean_of(const TrigPoly& b) { return b.mean().real(); }

bool mean_is_zero(const TrigPoly& b) {
  if (auto m = b.exact_mean()) return *m == 0;
  return std::abs(mean_of(b)) <= 1e-14;
}

LaplaceProfile locate_core(const TrigPoly& b) {
  const double b0 = mean_of(b);
  if (b0 > 1e-14) fail(ErrorKind::ProfileError, "positive mean needs the mirror profile");
  const TrigPoly Bt = b.primitive();
  const TrigPoly db = b.derivative();
  constexpr int N = 1024;
  std::vector<double> vals(N);
  for (int i = 0; i < N; ++i) vals[static_cast<std::size_t>(i)] = Bt.real_at(kTwoPi * i / N);
  double best = -std::numeric_limits<double>::infinity();
  int bi = 0, bk = 0;
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k <= N; ++k) {
      double F = b0 * kTwoPi * k / N + vals[static_cast<std::size_t>(i)] - vals[static_cast<std::size_t>(((i - k) % N + N) % N)];
      if (F > best) {
        best = F;
        bi = i;
        bk = k;
      }
    }
  }
  auto F = [&](double t, double r) { return b0 * r + Bt.real_at(t) - Bt.real_at(t - r); };
  double t = kTwoPi * bi / N, r = kTwoPi * bk / N;
  double value = F(t, r);
  for (int it = 0; it < 60; ++it) {
    const double g1 = b.real_at(t) - b.real_at(t - r), g2 = b.real_at(t - r);
    const double d1 = db.real_at(t), d2 = db.real_at(t - r);
    const double h11 = d1 - d2, h12 = d2, h22 = -d2;
    const double det = h11 * h22 - h12 * h12;
    if (std::abs(det) < 1e-300) break;
    double st = -(h22 * g1 - h12 * g2) / det;
    double sr = -(-h12 * g1 + h11 * g2) / det;
    double lambda = 1;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      double nt = t + lambda * st, nr = r + lambda * sr;
      double nv = F(nt, nr);
      if (nv >= value - 1e-15 && std::abs(lambda * st) < 0.1 && std::abs(lambda * sr) < 0.1) {
        t = nt;
        r = nr;
        value = std::max(value, nv);
        moved = true;
        break;
      }
      lambda /= 2;
    }
    if (!moved || std::hypot(lambda * st, lambda * sr) < 1e-13) break;
  }
  LaplaceProfile p;
  p.t0 = mod2pi(t);
  p.r0 = r;
  p.B0 = F(p.t0, p.r0);
  p.psi_curvature = -db.real_at(p.t0 - p.r0);
  if (!(p.B0 > 1e-12)) fail(ErrorKind::ProfileError, "no positive peak: b does not change sign");
  if (!(p.r0 > 0 && p.r0 < kTwoPi)) fail(ErrorKind::ProfileError, "peak has r_0 on the boundary");
  return p;
}

LaplaceProfile mirrored(const LaplaceProfile& w) {
  LaplaceProfile p = w;
  p.B0 = -w.B0;
  p.t0 = mod2pi(-w.t0);
  p.psi_curvature = -w.psi_curvature;
  p.mirror = true;
  return p;
}

TrigPoly reflect_negate(const TrigPoly& b) { return (-b).reflected(); }

std::vector<std::int64_t> make_ladder(std::int64_t q, double xi_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t xi = q; static_cast<double>(xi) <= xi_max; xi += q) out.push_back(xi);
  return out;
}

std::int64_t to_int64(const BigInt& v) {
  if (!v.fits_slong_p()) fail(ErrorKind::OutOfRange, "integer exceeds 64 bits");
  return v.get_si();
}

std::vector<std::int64_t> ladder_for(std::int64_t q, const BuildOptions& options) {
  if (options.ladder.empty()) return make_ladder(q, options.xi_max);
  std::int64_t prev = 0;
  for (auto xi : options.ladder) {
    if (xi <= prev || xi % q != 0) fail(ErrorKind::LadderMismatch, "explicit ladder must increase inside q N");
    prev = xi;
  }
  return options.ladder;
}

nlohmann::json try_fit(const std::vector<SpectrumSample>& samples, double s, double xi_min) {
  try {
    gevrey::DecayOptions opts;
    opts.xi_min = xi_min;
    return gevrey::to_json(gevrey::estimate_decay(samples, s, opts));
  } catch (const Error& e) {
    return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
}

nlohmann::json try_power(const std::vector<SpectrumSample>& samples, double lo, double hi) {
  try {
    return gevrey::to_json(gevrey::fit_power_law(samples, lo, hi));
  } catch (const Error& e) {
    return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
}

std::vector<SpectrumSample> value_samples(const std::vector<LowerBoundRow>& rows) {
  std::vector<SpectrumSample> out;
  for (const auto& r : rows) out.push_back({static_cast<double>(r.xi), r.value});
  return out;
}

nlohmann::json rows_json(const std::vector<LowerBoundRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) out.push_back({{"xi", r.xi}, {"value", r.value}, {"bound", r.bound}});
  return out;
}

/// ln max_j |r_j + s alpha_j| from below-and-above exact approximants; nullopt when not checkable.
std::optional<double> log_residual_upper(const diophantine::WitnessPair& pair, const std::vector<RealConstant>& alpha,
                                         double target_log) {
  double worst = -std::numeric_limits<double>::infinity();
  const double ls = static_cast<double>(log_abs(pair.s));
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const auto& a = alpha[j];
    if (a.kind() == RealConstant::Kind::FloatApprox) return std::nullopt;
    double needed = (std::max(0.0, -target_log) + ls) / std::log(10.0) + 30;
    if (needed > 20000) return std::nullopt;
    int digits = static_cast<int>(std::ceil(needed));
    Rational approx = a.approximate(digits);
    Rational value = Rational(pair.r[j]) + Rational(pair.s) * approx;
    Rational err = a.kind() == RealConstant::Kind::ExactRational ? Rational(0)
                                                                  : Rational(pair.s) / Rational(pow10(static_cast<unsigned long>(digits)));
    worst = std::max(worst, static_cast<double>(log_abs(Rational(abs(value) + err))));
  }
  return worst;
}

SingularSolution ladder_indicator(std::size_t dims, std::int64_t q, const BuildOptions& options) {
  SingularSolution u;
  u.construction = Construction::Product;
  u.dims = dims;
  u.q = q;
  u.ladder = ladder_for(q, options);
  u.t0.assign(dims, 0.0);
  for (auto xi : u.ladder) u.lower_bounds.push_back({xi, 1.0, 1.0});
  u.certificates = {{"m", 0}, {"note", "no complex tubes: ladder indicator"}};
  return u;
}

BigInt lcm_denominators(const std::vector<Rational>& values) {
  BigInt q = 1;
  for (const auto& v : values) {
    BigInt d = v.get_den();
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), d.get_mpz_t());
  }
  return q;
}

}  // namespace

std::string to_string(Construction c) {
  switch (c) {
    case Construction::Prop51: return "Prop51";
    case Construction::Prop52: return "Prop52";
    case Construction::Product: return "Product";
    case Construction::RationalJ: return "RationalJ";
    case Construction::ExpLiouvilleJ: return "ExpLiouvilleJ";
  }
  return "Product";
}

LaplaceProfile locate_laplace_profile(const TrigPoly& b, double /*a0*/, bool mirror) {
  if (!b.is_real()) fail(ErrorKind::InvalidInput, "b must be real-valued");
  if (!mirror) return locate_core(b);
  return mirrored(locate_core(reflect_negate(b)));
}

Prop51Kernel::Prop51Kernel(Rational a0, const TrigPoly& b) : a0_(std::move(a0)), b_(b) {
  if (!mean_is_zero(b)) fail(ErrorKind::MeanNotZero, "b must have zero mean");
  B_ = b.primitive();
  constexpr int N = 4096;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i) {
    double v = B_.real_at(kTwoPi * i / N);
    if (v > best) {
      best = v;
      t0_ = kTwoPi * i / N;
    }
  }
  const TrigPoly db = b.derivative();
  for (int it = 0; it < 50; ++it) {
    double d2 = db.real_at(t0_);
    if (d2 >= 0) break;
    double step = -b.real_at(t0_) / d2;
    if (std::abs(step) > 0.01) break;
    if (B_.real_at(t0_ + step) < B_.real_at(t0_) - 1e-15) break;
    t0_ += step;
    if (std::abs(step) < 1e-15) break;
  }
  t0_ = mod2pi(t0_);
  B_t0_ = B_.real_at(t0_);
}

Complex Prop51Kernel::value(double t, double xi) const {
  const double rate = to_double(a0_) * xi;
  return std::exp(Complex(xi * (B_.real_at(t) - B_t0_), -rate * t));
}

nlohmann::json Prop51Kernel::describe() const {
  return {{"kind", "Prop51"}, {"a0", torus_hypo::to_string(a0_)}, {"b", to_json(b_)}, {"t0", t0_}, {"B_t0", B_t0_}};
}

Prop52Kernel::Prop52Kernel(double a0, const TrigPoly& b, double s, const Prop52Options& options)
    : s_(s), cutoff_(gevrey::make_cutoff(2, {1, 3}, {1.5, 2.5})) {
  if (!(s > 1)) fail(ErrorKind::OrderError, "Gevrey order must exceed 1");
  auto sign = system::sign_analysis(b);
  if (sign.profile != system::SignProfile::ChangesSign) {
    fail(ErrorKind::ProfileError, "b must change sign, found " + system::to_string(sign.profile));
  }
  mirror_ = mean_of(b) > 0;
  a0w_ = mirror_ ? -a0 : a0;
  bw_ = mirror_ ? reflect_negate(b) : b;
  b0w_ = mean_of(bw_);
  Bt_ = bw_.primitive();
  work_ = locate_core(bw_);
  profile_ = mirror_ ? mirrored(work_) : work_;
  center_ = mod2pi(work_.t0 - work_.r0);
  const double limit = std::min({0.5, work_.r0 / 2, (kTwoPi - work_.r0) / 2});
  delta_ = options.delta.value_or(limit);
  if (!(delta_ > 0) || delta_ >= work_.r0 || delta_ >= kTwoPi - work_.r0 || delta_ >= kPi) {
    fail(ErrorKind::GeometryError, "cutoff half-width does not fit the peak window");
  }
  cutoff_ = gevrey::make_cutoff(s, {kPi - delta_, kPi + delta_}, {kPi - delta_ / 2, kPi + delta_ / 2});
}

Complex Prop52Kernel::g_work(double y, double xi) const {
  const double offset = wrap(y - center_);
  const double phi = cutoff_(offset + kPi);
  if (phi == 0) return {};
  const double rep = center_ + offset;
  return phi * std::polar(1.0, -xi * a0w_ * (rep - work_.t0));
}

Complex Prop52Kernel::u_work(double t, double xi) const {
  const double m = mod2pi(t - center_);
  std::vector<std::pair<double, double>> pieces;
  auto add = [&](double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, kTwoPi);
    if (hi > lo) pieces.emplace_back(lo, hi);
  };
  add(m - delta_, m + delta_);
  if (m - delta_ < 0) add(m - delta_ + kTwoPi, kTwoPi);
  if (m + delta_ > kTwoPi) add(0, m + delta_ - kTwoPi);
  const double Bt_t = Bt_.real_at(t);
  auto exponent = [&](double r) { return xi * (b0w_ * r + Bt_t - Bt_.real_at(t - r) - work_.B0); };
  Complex total{};
  for (auto [lo, hi] : pieces) {
    const int S = static_cast<int>(std::clamp((hi - lo) * std::sqrt(std::abs(xi)) * 4, 512.0, 1048576.0));
    int first = -1, last = -1;
    for (int i = 0; i < S; ++i) {
      double r = lo + (hi - lo) * i / (S - 1);
      if (exponent(r) >= -800) {
        if (first < 0) first = i;
        last = i;
      }
    }
    if (first < 0) continue;
    const double a = lo + (hi - lo) * std::max(first - 1, 0) / (S - 1);
    const double b = lo + (hi - lo) * std::min(last + 1, S - 1) / (S - 1);
    if (!(b > a)) continue;
    const int panels = std::max(32, static_cast<int>(std::ceil((b - a) * std::sqrt(std::abs(xi)) * 8)));
    auto rule = gauss_legendre(a, b, panels);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes[i];
      const Complex g = g_work(t - r, xi);
      if (g == Complex{}) continue;
      total += rule.weights[i] * std::exp(exponent(r)) * std::polar(1.0, -xi * a0w_ * r) * g;
    }
  }
  return total;
}

Complex Prop52Kernel::u_hat(double t, double xi) const { return mirror_ ? u_work(-t, xi) : u_work(t, xi); }

Complex Prop52Kernel::f_hat(double t, double xi) const {
  const Complex c0(a0w_, b0w_);
  const double y = mirror_ ? -t : t;
  Complex value = (1.0 - std::exp(Complex(0, -kTwoPi * xi) * c0)) * std::exp(-work_.B0 * xi) * g_work(y, xi);
  return mirror_ ? -value : value;
}

double Prop52Kernel::log_f_sup(double xi) const {
  const Complex c0(a0w_, b0w_);
  return std::log(std::abs(1.0 - std::exp(Complex(0, -kTwoPi * xi) * c0))) - work_.B0 * xi;
}

double Prop52Kernel::proof_constant() const {
  const TrigPoly db = bw_.derivative();
  double A = 0;
  for (int i = 0; i <= 1000; ++i) {
    double r = work_.r0 - delta_ + 2 * delta_ * i / 1000.0;
    A = std::max(A, std::abs(db.real_at(work_.t0 - r)) / 2);
  }
  if (A == 0) return 0;
  return std::sqrt(kPi / A) * std::erf(delta_ * std::sqrt(A) / 2);
}

nlohmann::json Prop52Kernel::describe() const {
  return {{"kind", "Prop52"},
          {"a0", a0()},
          {"b", to_json(mirror_ ? reflect_negate(bw_) : bw_)},
          {"s", s_},
          {"delta", delta_},
          {"mirror", mirror_},
          {"profile", to_json(profile_)},
          {"window_center", mirror_ ? mod2pi(-center_) : center_}};
}

Complex TubeFactor::value(double t, double xi) const {
  return kind == Construction::Prop51 ? p51->value(t, xi) : p52->u_hat(t, xi);
}

double TubeFactor::t0() const { return kind == Construction::Prop51 ? p51->t0() : p52->t0(); }

std::optional<std::size_t> SingularSolution::index_of(std::int64_t xi) const {
  auto it = std::lower_bound(ladder.begin(), ladder.end(), xi);
  if (it == ladder.end() || *it != xi) return std::nullopt;
  return static_cast<std::size_t>(it - ladder.begin());
}

Complex SingularSolution::value(std::span<const double> t, std::size_t idx) const {
  if (t.size() != dims) fail(ErrorKind::GridMismatch, "evaluation point dimension mismatch");
  const double xi = static_cast<double>(ladder.at(idx));
  Complex v(1, 0);
  for (const auto& f : factors) v *= f.value(t[f.tube], xi);
  for (std::size_t i = 0; i < J.size(); ++i) {
    const double x = t[J[i]];
    if (construction == Construction::ExpLiouvilleJ) {
      v *= std::polar(1.0, phases.at(idx)[i].get_d() * x);
    } else {
      v *= std::polar(1.0, -to_double(rates[i]) * xi * x);
    }
  }
  return v;
}

namespace {

constexpr std::int64_t kMaxDenseDegree = 1 << 20;

std::int64_t phase_frequency(const SingularSolution& u, std::size_t idx, std::size_t i) {
  if (u.construction == Construction::ExpLiouvilleJ) return u.phases[idx][i].fits_slong_p() ? u.phases[idx][i].get_si() : std::numeric_limits<std::int64_t>::max();
  Rational r = -u.rates[i] * Rational(static_cast<long>(u.ladder[idx]));
  if (r.get_den() != 1) fail(ErrorKind::IntegralityError, "phase frequency is not an integer");
  return to_int64(r.get_num());
}

FourierField materialize_impl(const SingularSolution& u, std::size_t count, int grid, std::optional<std::size_t> rhs_tube) {
  const auto& ladder = u.ladder;
  const auto& factors = u.factors;
  const auto& J = u.J;
  const std::size_t dims = u.dims;
  if (grid < 8 || (grid & (grid - 1)) != 0) fail(ErrorKind::GridMismatch, "grid must be a power of two >= 8");
  FourierField out;
  out.dims = dims;
  out.grid = grid;
  count = std::min(count, ladder.size());
  bool zero_rhs = rhs_tube.has_value();
  for (const auto& f : factors) {
    if (rhs_tube && f.tube == *rhs_tube && f.kind == Construction::Prop52) zero_rhs = false;
  }
  out.ladder.assign(ladder.begin(), ladder.begin() + static_cast<std::ptrdiff_t>(count));
  out.blocks.resize(count);
  auto ts = uniform_grid(grid);
  parallel_for(count, [&](std::size_t idx) {
    const double xi = static_cast<double>(ladder[idx]);
    std::vector<std::vector<Complex>> lines(dims, std::vector<Complex>{Complex(1, 0)});
    std::vector<int> degrees(dims, 0);
    for (const auto& f : factors) {
      const bool rhs = rhs_tube && f.tube == *rhs_tube && f.kind == Construction::Prop52;
      std::vector<Complex> samples(static_cast<std::size_t>(grid));
      for (int m = 0; m < grid; ++m) {
        const double t = ts[static_cast<std::size_t>(m)];
        samples[static_cast<std::size_t>(m)] = rhs ? f.p52->f_hat(t, xi) : f.value(t, xi);
      }
      std::vector<int> shape{grid};
      dft_forward(samples, shape);
      const int d = grid / 2 - 1;
      std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
      for (int eta = -d; eta <= d; ++eta) c[static_cast<std::size_t>(eta + d)] = samples[static_cast<std::size_t>(fft_slot(eta, grid))];
      lines[f.tube] = std::move(c);
      degrees[f.tube] = d;
    }
    for (std::size_t i = 0; i < J.size(); ++i) {
      const std::int64_t eta = phase_frequency(u, idx, i);
      if (std::abs(eta) > kMaxDenseDegree) fail(ErrorKind::OutOfRange, "phase frequency too large for a dense block");
      const int d = static_cast<int>(std::abs(eta));
      std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
      c[static_cast<std::size_t>(eta + d)] = 1;
      lines[J[i]] = std::move(c);
      degrees[J[i]] = d;
    }
    MultiTrig block(degrees);
    std::vector<int> eta(dims);
    for (std::size_t flat = 0; flat < block.size(); ++flat) {
      block.multi_index(flat, eta);
      Complex v(1, 0);
      for (std::size_t k = 0; k < dims && v != Complex{}; ++k) v *= lines[k][static_cast<std::size_t>(eta[k] + degrees[k])];
      block.data()[flat] = zero_rhs ? Complex{} : v;
    }
    out.blocks[idx] = std::move(block);
  });
  return out;
}

}  // namespace

FourierField SingularSolution::materialize(std::size_t count, int grid) const {
  return materialize_impl(*this, count, grid, std::nullopt);
}

FourierField SingularSolution::materialize_rhs(std::size_t j, std::size_t count, int grid) const {
  if (j >= dims) fail(ErrorKind::InvalidInput, "tube index out of range");
  return materialize_impl(*this, count, grid, j);
}

SingularSolution build_prop51(const Rational& a0, const TrigPoly& b, std::int64_t k_max, const BuildOptions& options) {
  (void)options;
  if (k_max < 1) fail(ErrorKind::InvalidInput, "k_max must be positive");
  SingularSolution u;
  u.construction = Construction::Prop51;
  u.q = a0.get_den();
  const std::int64_t q = to_int64(u.q);
  auto kernel = std::make_shared<const Prop51Kernel>(a0, b);
  u.factors.push_back({0, Construction::Prop51, kernel, nullptr});
  u.t0 = {kernel->t0()};
  for (std::int64_t k = 1; k <= k_max; ++k) u.ladder.push_back(q * k);
  double deviation = 0;
  for (auto xi : u.ladder) {
    double v = std::abs(kernel->value(kernel->t0(), static_cast<double>(xi)));
    deviation = std::max(deviation, std::abs(v - 1));
    u.lower_bounds.push_back({xi, v, 1.0});
  }
  u.certificates = {{"construction", "Prop51"}, {"m", 0}, {"t0", kernel->t0()}, {"unit_modulus_deviation", deviation}};
  return u;
}

namespace {

SingularSolution prop51_on_ladder(const Rational& a0, const TrigPoly& b, std::int64_t q, const BuildOptions& options) {
  Rational scaled = a0 * Rational(static_cast<long>(q));
  if (scaled.get_den() != 1) fail(ErrorKind::IntegralityError, "q a_0 is not an integer");
  SingularSolution u = build_prop51(a0, b, 1);
  u.q = q;
  u.ladder = ladder_for(q, options);
  u.lower_bounds.clear();
  double deviation = 0;
  for (auto xi : u.ladder) {
    const double v = std::abs(u.factors[0].p51->value(u.t0[0], static_cast<double>(xi)));
    deviation = std::max(deviation, std::abs(v - 1));
    u.lower_bounds.push_back({xi, v, 1.0});
  }
  u.certificates["unit_modulus_deviation"] = deviation;
  return u;
}

}  // namespace

SingularSolution build_prop52(const RealConstant& a0, const TrigPoly& b, double s, const BuildOptions& options, std::int64_t q) {
  if (q < 1) fail(ErrorKind::InvalidInput, "ladder step must be positive");
  if (a0.is_rational().value_or(false) && mean_is_zero(b)) {
    fail(ErrorKind::ProfileError, "c_0 is rational; the unit-modulus construction applies instead");
  }
  auto kernel = std::make_shared<const Prop52Kernel>(a0.to_double(), b, s, options.prop52);
  SingularSolution u;
  u.construction = Construction::Prop52;
  u.q = q;
  u.m = 1;
  u.ladder = ladder_for(q, options);
  if (u.ladder.empty()) fail(ErrorKind::InvalidInput, "xi_max below the ladder step");
  u.factors.push_back({0, Construction::Prop52, nullptr, kernel});
  u.t0 = {kernel->t0()};
  std::vector<double> values(u.ladder.size());
  parallel_for(u.ladder.size(), [&](std::size_t i) {
    values[i] = std::abs(kernel->u_hat(kernel->t0(), static_cast<double>(u.ladder[i])));
  });
  double C = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) C = std::min(C, values[i] * std::sqrt(static_cast<double>(u.ladder[i])));
  std::vector<SpectrumSample> fsup;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double xi = static_cast<double>(u.ladder[i]);
    u.lower_bounds.push_back({u.ladder[i], values[i], C / std::sqrt(xi)});
    fsup.push_back({xi, std::exp(kernel->log_f_sup(xi))});
  }
  auto samples = value_samples(u.lower_bounds);
  nlohmann::json f_rows = nlohmann::json::array();
  for (std::size_t i = 0; i < fsup.size() && i < 64; ++i) f_rows.push_back({{"xi", fsup[i].frequency}, {"log_sup", kernel->log_f_sup(fsup[i].frequency)}});
  u.certificates = {{"construction", "Prop52"},
                    {"m", 1},
                    {"kernel", kernel->describe()},
                    {"C_fit", C},
                    {"C_proof", kernel->proof_constant()},
                    {"u_power_fit", try_power(samples, options.fit_min, options.xi_max)},
                    {"u_decay_fit", try_fit(samples, s, options.fit_min)},
                    {"f_decay_fit", try_fit(fsup, s, 16)},
                    {"f_sup_table_head", f_rows}};
  return u;
}

SingularSolution build_product(std::size_t dims, const std::vector<std::size_t>& tubes,
                               const std::vector<SingularSolution>& per_tube, const BuildOptions& options) {
  if (per_tube.empty() || tubes.size() != per_tube.size()) fail(ErrorKind::InvalidInput, "one factor per listed tube");
  SingularSolution u;
  u.construction = Construction::Product;
  u.dims = dims;
  u.q = per_tube.front().q;
  u.ladder = per_tube.front().ladder;
  u.t0.assign(dims, 0.0);
  nlohmann::json parts = nlohmann::json::array();
  for (std::size_t i = 0; i < per_tube.size(); ++i) {
    const auto& p = per_tube[i];
    if (p.ladder != u.ladder || p.q != u.q) fail(ErrorKind::LadderMismatch, "factor ladders differ");
    if (p.factors.size() != 1 || tubes[i] >= dims) fail(ErrorKind::InvalidInput, "factors must be single-tube solutions");
    TubeFactor f = p.factors.front();
    f.tube = tubes[i];
    u.factors.push_back(f);
    u.t0[f.tube] = f.t0();
    u.m += p.m;
    nlohmann::json c = p.certificates;
    c["tube"] = tubes[i] + 1;
    parts.push_back(c);
  }
  for (std::size_t k = 0; k < u.ladder.size(); ++k) {
    double value = 1, bound = 1;
    for (const auto& p : per_tube) {
      value *= p.lower_bounds[k].value;
      bound *= p.lower_bounds[k].bound;
    }
    u.lower_bounds.push_back({u.ladder[k], value, bound});
  }
  u.certificates = {{"construction", "Product"},
                    {"m", u.m},
                    {"expected_power", -0.5 * static_cast<double>(u.m)},
                    {"power_fit", u.m > 0 ? try_power(value_samples(u.lower_bounds), options.fit_min, options.xi_max) : nlohmann::json(nullptr)},
                    {"factors", parts}};
  return u;
}

SingularSolution build_rational_J(const system::SystemSpec& spec, const std::vector<std::size_t>& J,
                                  const SingularSolution& v, const BigInt& q, const BuildOptions& options) {
  (void)options;
  if (J.empty()) fail(ErrorKind::InvalidInput, "J must be nonempty");
  SingularSolution u = v;
  u.construction = Construction::RationalJ;
  u.base = v.construction;
  u.dims = spec.n();
  u.J = J;
  u.t0.resize(spec.n(), 0.0);
  for (auto j : J) {
    auto a = system::average(spec.tubes[j].a);
    const Rational* r = a.exact();
    if (!r) fail(ErrorKind::IntegralityError, "a_" + std::to_string(j + 1) + "0 is not an exact rational");
    if (Rational(*r * Rational(q)).get_den() != 1) fail(ErrorKind::IntegralityError, "q a_j0 is not an integer for j = " + std::to_string(j + 1));
    u.rates.push_back(*r);
  }
  for (auto xi : v.ladder) {
    if (BigInt(static_cast<long>(xi)) % q != 0) fail(ErrorKind::LadderMismatch, "ladder is not contained in q N");
  }
  u.q = q;
  nlohmann::json Jj = nlohmann::json::array();
  for (auto j : J) Jj.push_back(j + 1);
  u.certificates = {{"construction", "RationalJ"}, {"base", v.certificates}, {"m", v.m}, {"J", Jj}, {"q", q.get_str()}};
  return u;
}

SingularSolution build_expliouville_J(const system::SystemSpec& spec, const std::vector<std::size_t>& J,
                                      const LiouvilleWitness& witness, const SingularSolution& v, const BigInt& q,
                                      double s, const BuildOptions& options) {
  if (witness.pairs.empty()) fail(ErrorKind::WitnessMismatch, "empty witness");
  if (witness.scale != q) fail(ErrorKind::WitnessMismatch, "witness scale " + witness.scale.get_str() + " differs from q = " + q.get_str());
  if (q % v.q != 0) fail(ErrorKind::WitnessMismatch, "q is not a multiple of the ladder step of v");
  if (!(witness.delta > 0)) fail(ErrorKind::WitnessMismatch, "witness delta must be positive");
  std::vector<RealConstant> alpha;
  for (auto j : J) alpha.push_back(system::average(spec.tubes[j].a));
  BigInt prev = 0;
  for (const auto& p : witness.pairs) {
    if (p.r.size() != J.size()) fail(ErrorKind::WitnessMismatch, "witness vector length differs from |J|");
    if (p.s <= prev) fail(ErrorKind::WitnessMismatch, "witness denominators must increase");
    prev = p.s;
    if (p.s % q != 0) fail(ErrorKind::WitnessMismatch, "witness denominator outside q N");
    for (const auto& r : p.r) {
      if (r % q != 0) fail(ErrorKind::WitnessMismatch, "witness numerator outside q Z");
    }
  }
  SingularSolution u;
  u.construction = Construction::ExpLiouvilleJ;
  u.base = v.construction;
  u.dims = spec.n();
  u.q = q;
  u.J = J;
  u.factors = v.factors;
  u.m = v.m;
  u.t0 = v.t0;
  u.t0.resize(spec.n(), 0.0);
  const double lq = static_cast<double>(log_abs(q));
  nlohmann::json rows = nlohmann::json::array();
  bool all_certified = true;
  for (std::size_t k = 0; k < witness.pairs.size(); ++k) {
    const auto& p = witness.pairs[k];
    const double ls = static_cast<double>(log_abs(p.s));
    const double rhs = lq - witness.delta * std::exp(ls / s);
    auto lhs = log_residual_upper(p, alpha, rhs);
    const bool ok = lhs && *lhs <= rhs;
    all_certified = all_certified && ok;
    nlohmann::json row = {{"k", k + 1}, {"q_k", p.s.get_str()}, {"log_rhs", rhs}, {"certified", ok}};
    row["log_lhs_upper"] = lhs ? nlohmann::json(*lhs) : nlohmann::json(nullptr);
    rows.push_back(row);
    if (static_cast<double>(ls) <= std::log(options.xi_max) + 1e-12 && p.s.fits_slong_p() &&
        static_cast<double>(p.s.get_si()) <= options.xi_max) {
      u.ladder.push_back(p.s.get_si());
      u.phases.push_back(p.r);
    }
  }
  // |v^(t_0'', q_k)| and sup_t'' |v^| on the kept ladder.
  nlohmann::json f_rows = nlohmann::json::array();
  auto ts = uniform_grid(64);
  for (std::size_t i = 0; i < u.ladder.size(); ++i) {
    const double xi = static_cast<double>(u.ladder[i]);
    double value = 1, sup = 1;
    for (const auto& f : u.factors) {
      value *= std::abs(f.value(f.t0(), xi));
      double m = 0;
      for (double t : ts) m = std::max(m, std::abs(f.value(t, xi)));
      sup *= std::max(m, std::abs(f.value(f.t0(), xi)));
    }
    u.lower_bounds.push_back({u.ladder[i], value, value});
    std::size_t k = 0;
    while (witness.pairs[k].s.get_si() != u.ladder[i]) ++k;
    auto lhs = rows[k]["log_lhs_upper"];
    nlohmann::json fr = {{"xi", u.ladder[i]}, {"sup_v", sup}};
    if (!lhs.is_null()) {
      fr["f_sup"] = std::exp(lhs.get<double>()) * sup;
      fr["bound"] = std::exp(rows[k]["log_rhs"].get<double>()) * sup;
      fr["within_bound"] = lhs.get<double>() <= rows[k]["log_rhs"].get<double>();
    }
    f_rows.push_back(fr);
  }
  if (u.ladder.empty()) fail(ErrorKind::WitnessMismatch, "no witness denominator lies below xi_max");
  nlohmann::json Jj = nlohmann::json::array();
  for (auto j : J) Jj.push_back(j + 1);
  u.certificates = {{"construction", "ExpLiouvilleJ"},
                    {"base", v.certificates},
                    {"m", v.m},
                    {"J", Jj},
                    {"q", q.get_str()},
                    {"witness", diophantine::to_json(witness)},
                    {"witness_rows", rows},
                    {"witness_certified", all_certified},
                    {"f_table", f_rows}};
  return u;
}

std::size_t dense_prefix(const SingularSolution& u, std::size_t count) {
  count = std::min(count, u.ladder.size());
  for (std::size_t idx = 0; idx < count; ++idx) {
    for (std::size_t i = 0; i < u.J.size(); ++i) {
      if (std::abs(phase_frequency(u, idx, i)) > kMaxDenseDegree) return idx;
    }
  }
  return count;
}

double operator_residual(const system::SystemSpec& spec, std::size_t j, const SingularSolution& u, std::size_t count, int grid) {
  FourierField field = u.materialize(count, grid);
  FourierField lu = solver::apply_operator(spec, j, field);
  const bool phase_tube = u.construction == Construction::ExpLiouvilleJ && std::find(u.J.begin(), u.J.end(), j) != u.J.end();
  if (!phase_tube) {
    FourierField f = u.materialize_rhs(j, count, grid);
    for (std::size_t k = 0; k < lu.blocks.size(); ++k) {
      std::vector<int> d = lu.blocks[k].degrees();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::max(d[i], f.blocks[k].degrees()[i]);
      MultiTrig l = lu.blocks[k].resized(d);
      l -= f.blocks[k].resized(d);
      lu.blocks[k] = std::move(l);
    }
  }
  double worst = 0;
  for (const auto& b : lu.blocks) worst = std::max(worst, b.sup_norm());
  return worst;
}

SingularSolution build_for_spec(const system::SystemSpec& spec, const system::Order& order, const BuildOptions& options) {
  auto c = system::classify(spec, order);
  if (c.verdict.decision == system::Decision::Hypoelliptic) {
    fail(ErrorKind::RefusedHypoelliptic, "the system is globally hypoelliptic (" + system::to_string(c.verdict.witness) +
                                             "), so it admits no singular solution: " + c.verdict.explanation);
  }
  if (c.verdict.decision == system::Decision::Unknown) {
    fail(ErrorKind::MissingClassification, "verdict is Unknown: " + c.verdict.explanation);
  }
  const double s = order.mode == system::Order::Mode::Gevrey ? order.s : 2.0;
  const auto& J = c.analysis.J;
  std::vector<bool> inJ(spec.n(), false);
  for (auto j : J) inJ[j] = true;

  std::vector<Rational> rationals;
  std::vector<std::size_t> complex_tubes;
  std::vector<bool> unit(spec.n(), false);
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const auto& a0 = c.analysis.tubes[j].a0;
    if (inJ[j]) {
      if (const Rational* r = a0.exact()) rationals.push_back(*r);
      continue;
    }
    complex_tubes.push_back(j);
    if (a0.exact() && mean_is_zero(spec.tubes[j].b)) {
      unit[j] = true;
      rationals.push_back(*a0.exact());
    }
  }
  const BigInt qb = lcm_denominators(rationals);
  const std::int64_t q = to_int64(qb);

  const bool exp_liouville = !J.empty() && c.dio && c.dio->kind == diophantine::Trend::ExpLiouvilleTrend;
  if (!J.empty() && !c.dio) fail(ErrorKind::MissingClassification, "no classification of a_J0");
  if (!J.empty() && !exp_liouville && c.dio->kind != diophantine::Trend::Rational) {
    fail(ErrorKind::NoSolverApplies, "no singular construction for classification " + diophantine::to_string(c.dio->kind));
  }
  BuildOptions base = options;
  LiouvilleWitness w;
  if (exp_liouville) {
    if (spec.vector_claim && spec.vector_claim->witness) {
      w = *spec.vector_claim->witness;
    } else if (J.size() == 1 && c.analysis.tubes[J[0]].a0.cf()) {
      const auto& cf = *c.analysis.tubes[J[0]].a0.cf();
      auto conv = diophantine::convergents(cf, 3);
      auto beta = diophantine::exp_liouville_score(cf, s, 3);
      std::vector<std::size_t> idx;
      double delta = std::numeric_limits<double>::infinity();
      for (std::size_t n = 1; n <= conv.size(); ++n) {
        if (!conv[n - 1].q || decimal_digits(*conv[n - 1].q) > 2000) break;
        if (!(static_cast<double>(beta[n - 1].value) > 0)) break;
        idx.push_back(n);
        delta = std::min(delta, static_cast<double>(beta[n - 1].value));
      }
      if (idx.empty() || !(delta > 0)) fail(ErrorKind::NoSolverApplies, "no usable convergent witness");
      w = diophantine::witness_from_convergents(cf, delta * (1 - 1e-9), idx);
    } else {
      fail(ErrorKind::NoSolverApplies, "an exponential Liouville witness for a_J0 is required");
    }
    w = diophantine::scale_witness(w, qb, s);
    base.ladder.clear();
    for (const auto& p : w.pairs) {
      if (p.s.fits_slong_p() && static_cast<double>(p.s.get_si()) <= options.xi_max) base.ladder.push_back(p.s.get_si());
    }
    if (base.ladder.empty()) fail(ErrorKind::WitnessMismatch, "no witness denominator lies below xi_max");
  }

  SingularSolution v;
  if (complex_tubes.empty()) {
    v = ladder_indicator(spec.n(), q, base);
  } else {
    std::vector<SingularSolution> parts(complex_tubes.size());
    for (std::size_t i = 0; i < complex_tubes.size(); ++i) {
      const std::size_t j = complex_tubes[i];
      if (unit[j]) {
        parts[i] = prop51_on_ladder(*c.analysis.tubes[j].a0.exact(), spec.tubes[j].b, q, base);
      } else {
        parts[i] = build_prop52(c.analysis.tubes[j].a0, spec.tubes[j].b, s, base, q);
      }
    }
    v = build_product(spec.n(), complex_tubes, parts, base);
  }
  if (J.empty()) return v;
  if (exp_liouville) return build_expliouville_J(spec, J, w, v, qb, s, options);
  return build_rational_J(spec, J, v, qb, options);
}

nlohmann::json to_json(const LaplaceProfile& p) {
  return {{"B0", p.B0}, {"t0", p.t0}, {"r0", p.r0}, {"psi_curvature", p.psi_curvature}, {"mirror", p.mirror}};
}

nlohmann::json to_json(const SingularSolution& u) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : u.factors) {
    nlohmann::json d = f.kind == Construction::Prop51 ? f.p51->describe() : f.p52->describe();
    d["tube"] = f.tube + 1;
    factors.push_back(d);
  }
  nlohmann::json phases = nlohmann::json::object();
  if (!u.J.empty()) {
    nlohmann::json Jj = nlohmann::json::array();
    for (auto j : u.J) Jj.push_back(j + 1);
    phases["J"] = Jj;
    if (u.construction == Construction::ExpLiouvilleJ) {
      nlohmann::json p = nlohmann::json::array();
      for (const auto& row : u.phases) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row) r.push_back(v.get_str());
        p.push_back(r);
      }
      phases["integers"] = p;
    } else {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& v : u.rates) r.push_back(torus_hypo::to_string(v));
      phases["rates"] = r;
    }
  }
  nlohmann::json j = {{"format", "torus-hypo/singular"},
                      {"version", 1},
                      {"construction", to_string(u.construction)},
                      {"dims", u.dims},
                      {"q", u.q.get_str()},
                      {"m", u.m},
                      {"ladder", u.ladder},
                      {"t0", u.t0},
                      {"factors", factors},
                      {"phases", phases},
                      {"lower_bound_table", rows_json(u.lower_bounds)},
                      {"certificates", u.certificates}};
  if (u.base) j["base"] = to_string(*u.base);
  return j;
}

}  // namespace torus_hypo::singular
