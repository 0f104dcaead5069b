#include "torus_hypo/gevrey.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "torus_hypo/error.hpp"

namespace torus_hypo::gevrey {

namespace {

void enumerate(int m, int level, int remaining, DeltaTuple& current, std::vector<DeltaTuple>& out) {
  if (level > m) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  for (int k = remaining / level; k >= 0; --k) {
    current[static_cast<std::size_t>(level - 1)] = k;
    enumerate(m, level + 1, remaining - k * level, current, out);
  }
  current[static_cast<std::size_t>(level - 1)] = 0;
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt power(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational power(const Rational& base, unsigned long e) {
  BigInt num = power(BigInt(base.get_num()), e);
  BigInt den = power(BigInt(base.get_den()), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

int weight_check(const DeltaTuple& tuple) {
  int m = static_cast<int>(tuple.size());
  long sum = 0;
  for (int l = 1; l <= m; ++l) {
    if (tuple[static_cast<std::size_t>(l - 1)] < 0) fail(ErrorKind::InvalidInput, "negative entry in Delta tuple");
    sum += static_cast<long>(l) * tuple[static_cast<std::size_t>(l - 1)];
  }
  if (sum != m) fail(ErrorKind::InvalidInput, "tuple is not in Delta(m)");
  return m;
}

struct Fit {
  Eigen::VectorXd coef;
  double r2 = 0;
};

Fit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Fit fit;
  fit.coef = X.colPivHouseholderQr().solve(y);
  Eigen::VectorXd res = y - X * fit.coef;
  double mean = y.mean();
  double ss_tot = (y.array() - mean).square().sum();
  double ss_res = res.squaredNorm();
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace

DeltaSet enumerate_delta(int m) {
  if (m < 1 || m > 30) fail(ErrorKind::OutOfRange, "enumerate_delta needs 1 <= m <= 30");
  DeltaSet set;
  set.m = m;
  DeltaTuple current(static_cast<std::size_t>(m), 0);
  enumerate(m, 1, m, current, set.tuples);
  return set;
}

bool check_lemma_product_bound(const DeltaTuple& tuple, const Rational& s) {
  int m = weight_check(tuple);
  if (!(s > 1)) fail(ErrorKind::OrderError, "lemma bound needs s > 1");
  Rational sc = s;
  sc.canonicalize();
  unsigned long a = mpz_get_ui(sc.get_num_mpz_t());
  unsigned long b = mpz_get_ui(sc.get_den_mpz_t());
  unsigned long k = 0;
  for (int v : tuple) k += static_cast<unsigned long>(v);
  // Raise both sides to the power b: (k!)^a prod (l!)^{(a-b) k_l} <= (k!)^b (m!)^{a-b}.
  BigInt kf = factorial(k);
  BigInt lhs = power(kf, a);
  for (int l = 1; l <= m; ++l) {
    unsigned long kl = static_cast<unsigned long>(tuple[static_cast<std::size_t>(l - 1)]);
    if (kl) lhs *= power(factorial(static_cast<unsigned long>(l)), (a - b) * kl);
  }
  BigInt rhs = power(kf, b) * power(factorial(static_cast<unsigned long>(m)), a - b);
  return lhs <= rhs;
}

bool check_lemma_product_bound(const DeltaTuple& tuple, double s) {
  int m = weight_check(tuple);
  if (!(s > 1)) fail(ErrorKind::OrderError, "lemma bound needs s > 1");
  long double k = 0;
  for (int v : tuple) k += v;
  long double ls = s;
  long double lhs = ls * std::lgamma(k + 1);
  for (int l = 1; l <= m; ++l) {
    int kl = tuple[static_cast<std::size_t>(l - 1)];
    if (kl) lhs += (ls - 1) * kl * std::lgamma(static_cast<long double>(l) + 1);
  }
  long double rhs = std::lgamma(k + 1) + (ls - 1) * std::lgamma(static_cast<long double>(m) + 1);
  return lhs <= rhs + 1e-12L * std::max<long double>(1, std::fabs(rhs));
}

Rational sum_over_delta(int m, const Rational& R) {
  if (m < 1 || m > 20) fail(ErrorKind::OutOfRange, "sum_over_delta needs 1 <= m <= 20");
  Rational total(0);
  for (const auto& tuple : enumerate_delta(m).tuples) {
    unsigned long k = 0;
    BigInt den(1);
    for (int v : tuple) {
      k += static_cast<unsigned long>(v);
      den *= factorial(static_cast<unsigned long>(v));
    }
    Rational term(factorial(k), den);
    term *= power(R, k);
    total += term;
  }
  total.canonicalize();
  return total;
}

std::vector<Complex> exp_composition_table(std::span<const Complex> g_derivs, int m) {
  if (m < 0 || m > 30) fail(ErrorKind::OutOfRange, "derivative order must be in [0, 30]");
  if (static_cast<int>(g_derivs.size()) < m) fail(ErrorKind::OutOfRange, "not enough derivatives of g");
  std::vector<Complex> y(static_cast<std::size_t>(m + 1));
  y[0] = 1;
  // Y_{j+1} = sum_i C(j, i) Y_{j-i} g^{(i+1)}.
  for (int j = 0; j < m; ++j) {
    Complex acc{};
    double binom = 1;
    for (int i = 0; i <= j; ++i) {
      acc += binom * y[static_cast<std::size_t>(j - i)] * g_derivs[static_cast<std::size_t>(i)];
      binom = binom * (j - i) / (i + 1);
    }
    y[static_cast<std::size_t>(j + 1)] = acc;
  }
  return y;
}

Complex exp_composition_derivatives(std::span<const Complex> g_derivs, int m) {
  if (m < 1) fail(ErrorKind::OutOfRange, "derivative order must be >= 1");
  return exp_composition_table(g_derivs, m).back();
}

GevreyWitness estimate_decay(std::span<const SpectrumSample> samples, double s, const DecayOptions& options) {
  if (!(s >= 1)) fail(ErrorKind::OrderError, "decay fit needs s >= 1");
  std::vector<SpectrumSample> pts;
  for (const auto& p : samples) {
    double x = std::fabs(p.frequency);
    if (x > 0 && std::isfinite(p.magnitude)) pts.push_back({x, std::fabs(p.magnitude)});
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
  if (options.envelope) {
    double running = 0;
    for (std::size_t i = pts.size(); i-- > 0;) {
      running = std::max(running, pts[i].magnitude);
      pts[i].magnitude = running;
    }
  }
  std::vector<SpectrumSample> used;
  for (const auto& p : pts) {
    if (p.frequency < options.xi_min || p.frequency > options.xi_max) continue;
    if (p.magnitude < 1e-300) continue;
    used.push_back(p);
  }
  if (used.size() < 8) {
    fail(ErrorKind::InsufficientData, "decay fit needs at least 8 nonzero coefficients in the window, got " +
                                          std::to_string(used.size()));
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(used.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = 1;
    X(r, 1) = -std::log(used[i].frequency);
    X(r, 2) = -std::pow(used[i].frequency, 1.0 / s);
    y(r) = std::log(used[i].magnitude);
  }
  Fit fit = least_squares(X, y);
  GevreyWitness w;
  w.s = s;
  w.C = std::exp(fit.coef(0));
  w.algebraic_power = fit.coef(1);
  w.epsilon = fit.coef(2);
  w.fit_r2 = std::clamp(fit.r2, 0.0, 1.0);
  w.points = used.size();
  w.xi_lo = used.front().frequency;
  w.xi_hi = used.back().frequency;
  if (options.derivative_sup.size() >= 3) {
    // ln D_alpha = c + alpha ln h + s ln alpha!.
    std::vector<double> a, v;
    for (std::size_t k = 0; k < options.derivative_sup.size(); ++k) {
      double d = options.derivative_sup[k];
      if (d > 0 && std::isfinite(d)) {
        a.push_back(static_cast<double>(k));
        v.push_back(std::log(d) - s * std::lgamma(static_cast<double>(k) + 1));
      }
    }
    if (a.size() >= 3) {
      Eigen::MatrixXd A(static_cast<Eigen::Index>(a.size()), 2);
      Eigen::VectorXd b(static_cast<Eigen::Index>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i) {
        A(static_cast<Eigen::Index>(i), 0) = 1;
        A(static_cast<Eigen::Index>(i), 1) = a[i];
        b(static_cast<Eigen::Index>(i)) = v[i];
      }
      Fit hf = least_squares(A, b);
      w.h = std::exp(hf.coef(1));
      w.h_fitted = true;
    }
  }
  return w;
}

PowerFit fit_power_law(std::span<const SpectrumSample> samples, double xi_lo, double xi_hi) {
  std::vector<SpectrumSample> used;
  for (const auto& p : samples) {
    double x = std::fabs(p.frequency);
    if (x >= xi_lo && x <= xi_hi && std::fabs(p.magnitude) >= 1e-300 && std::isfinite(p.magnitude)) {
      used.push_back({x, std::fabs(p.magnitude)});
    }
  }
  if (used.size() < 8) fail(ErrorKind::InsufficientData, "power fit needs at least 8 points");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(used.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = 1;
    X(r, 1) = std::log(used[i].frequency);
    y(r) = std::log(used[i].magnitude);
  }
  Fit fit = least_squares(X, y);
  return {std::exp(fit.coef(0)), fit.coef(1), std::clamp(fit.r2, 0.0, 1.0), used.size()};
}

nlohmann::json to_json(const GevreyWitness& w) {
  return {{"s", w.s},           {"epsilon", w.epsilon}, {"C", w.C},           {"algebraic_power", w.algebraic_power},
          {"h", w.h},           {"h_fitted", w.h_fitted}, {"fit_r2", w.fit_r2}, {"points", w.points},
          {"xi_lo", w.xi_lo},   {"xi_hi", w.xi_hi}};
}

nlohmann::json to_json(const PowerFit& f) {
  return {{"C", f.C}, {"power", f.power}, {"r2", f.r2}, {"points", f.points}};
}

}  // namespace torus_hypo::gevrey
