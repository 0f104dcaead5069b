#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "torus_hypo/error.hpp"
#include "torus_hypo/gevrey.hpp"
#include "torus_hypo/trig_poly.hpp"

using namespace torus_hypo;
using namespace torus_hypo::gevrey;

namespace {

/// Partition counts by the standard coin recurrence.
long partitions(int m) {
  std::vector<long> p(static_cast<std::size_t>(m) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= m; ++part) {
    for (int v = part; v <= m; ++v) p[static_cast<std::size_t>(v)] += p[static_cast<std::size_t>(v - part)];
  }
  return p[static_cast<std::size_t>(m)];
}

/// Fornberg weights for the m-th derivative at x0 on the given nodes.
std::vector<double> fornberg(int m, double x0, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<std::vector<double>>> d(static_cast<std::size_t>(m + 1),
                                                  std::vector<std::vector<double>>(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0)));
  auto D = [&](int k, int i, int j) -> double& { return d[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  D(0, 0, 0) = 1;
  double c1 = 1;
  for (int i = 1; i < n; ++i) {
    double c2 = 1;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      for (int k = 0; k <= std::min(i, m); ++k) {
        D(k, i, j) = ((x[static_cast<std::size_t>(i)] - x0) * D(k, i - 1, j) - (k ? k * D(k - 1, i - 1, j) : 0.0)) / c3;
      }
    }
    for (int k = 0; k <= std::min(i, m); ++k) {
      D(k, i, i) = c1 / c2 * ((k ? k * D(k - 1, i - 1, i - 1) : 0.0) - (x[static_cast<std::size_t>(i - 1)] - x0) * D(k, i - 1, i - 1));
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = D(m, n - 1, j);
  return w;
}

}  // namespace

TEST_CASE("Delta(m) enumeration") {
  auto one = enumerate_delta(1);
  REQUIRE(one.tuples.size() == 1);
  CHECK(one.tuples[0] == DeltaTuple{1});
  auto three = enumerate_delta(3);
  std::set<DeltaTuple> got(three.tuples.begin(), three.tuples.end());
  CHECK(got == std::set<DeltaTuple>{{3, 0, 0}, {1, 1, 0}, {0, 0, 1}});
  CHECK(enumerate_delta(6).tuples.size() == 11);
  for (int m = 1; m <= 20; ++m) {
    auto set = enumerate_delta(m);
    CHECK(static_cast<long>(set.tuples.size()) == partitions(m));
    std::set<DeltaTuple> unique(set.tuples.begin(), set.tuples.end());
    CHECK(unique.size() == set.tuples.size());
    for (const auto& t : set.tuples) {
      long w = 0;
      for (int l = 1; l <= m; ++l) w += l * t[static_cast<std::size_t>(l - 1)];
      CHECK(w == m);
    }
  }
  CHECK_THROWS_AS(enumerate_delta(0), Error);
  CHECK_THROWS_AS(enumerate_delta(31), Error);
}

TEST_CASE("product bound lemma") {
  CHECK(check_lemma_product_bound(DeltaTuple{0, 1}, Rational(2)));
  CHECK(check_lemma_product_bound(DeltaTuple{1}, Rational(7, 3)));
  for (int m = 1; m <= 12; ++m) {
    for (const auto& t : enumerate_delta(m).tuples) {
      for (const Rational& s : {Rational(3, 2), Rational(2), Rational(3)}) CHECK(check_lemma_product_bound(t, s));
      CHECK(check_lemma_product_bound(t, 2.5));
    }
  }
}

TEST_CASE("sum over Delta(m)") {
  CHECK(sum_over_delta(2, Rational(1)) == 2);
  CHECK(sum_over_delta(1, Rational(5, 9)) == Rational(5, 9));
  Rational r(3, 7), ten(10, 7);
  CHECK(sum_over_delta(5, r) == r * ten * ten * ten * ten);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    Rational R(num(rng), den(rng));
    R.canonicalize();
    for (int m = 1; m <= 20; ++m) {
      Rational closed = R;
      for (int i = 1; i < m; ++i) closed *= 1 + R;
      CHECK(sum_over_delta(m, R) == closed);
    }
  }
}

TEST_CASE("exp composition derivatives") {
  std::vector<Complex> g1{Complex(0.3, -1.2)};
  CHECK(std::abs(exp_composition_derivatives(g1, 1) - g1[0]) < 1e-15);
  std::vector<Complex> g2{Complex(1.5, 0.5), Complex(-0.25, 2)};
  CHECK(std::abs(exp_composition_derivatives(g2, 2) - (g2[0] * g2[0] + g2[1])) < 1e-14);
  std::vector<Complex> it{Complex(0, 1), 0, 0, 0};
  CHECK(std::abs(exp_composition_derivatives(it, 4) - Complex(1, 0)) < 1e-15);
}

TEST_CASE("exp composition matches finite differences") {
  TrigPoly g(std::vector<Complex>{Complex(0.1, 0.05), Complex(-0.2, 0.3), Complex(0.4, -0.1), Complex(0.2, 0),
                                  Complex(0.3, 0.2), Complex(-0.1, 0.15), Complex(0.05, -0.2)});
  const double t0 = 0.7;
  std::vector<Complex> derivs;
  TrigPoly d = g;
  for (int l = 1; l <= 6; ++l) {
    d = d.derivative();
    derivs.push_back(d(t0));
  }
  const double h = 0.04;
  std::vector<double> x;
  for (int k = -10; k <= 10; ++k) x.push_back(t0 + k * h);
  for (int m = 1; m <= 6; ++m) {
    auto w = fornberg(m, t0, x);
    Complex fd{};
    for (std::size_t i = 0; i < x.size(); ++i) fd += w[i] * std::exp(g(x[i]));
    Complex expected = fd / std::exp(g(t0));
    Complex got = exp_composition_derivatives(derivs, m);
    CHECK(std::abs(got - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("spectral derivative matches finite differences") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  std::vector<Complex> c(65);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double decay = std::exp(-0.15 * std::abs(static_cast<double>(k) - 32));
    c[k] = Complex(n01(rng), n01(rng)) * decay;
  }
  TrigPoly p(c);
  TrigPoly dp = p.derivative();
  const double h = 1e-3;
  std::vector<double> x;
  for (int k = -4; k <= 4; ++k) x.push_back(k * h);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const double t = 0.12 * i;
    auto w = fornberg(1, 0, x);
    Complex fd{};
    for (std::size_t j = 0; j < x.size(); ++j) fd += w[j] * p(t + x[j]);
    worst = std::max(worst, std::abs(fd - dp(t)));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("decay estimation") {
  std::vector<SpectrumSample> exact;
  for (int xi = 1; xi <= 4096; ++xi) exact.push_back({double(xi), std::exp(-2 * std::sqrt(double(xi)))});
  DecayOptions none;
  none.envelope = false;
  auto w = estimate_decay(exact, 2, none);
  CHECK(w.epsilon == doctest::Approx(2).epsilon(1e-6));
  CHECK(w.fit_r2 > 1 - 1e-9);
  CHECK_FALSE(w.h_fitted);
  std::vector<SpectrumSample> algebraic;
  for (int xi = 1; xi <= 4096; ++xi) algebraic.push_back({double(xi), 1 / std::sqrt(double(xi))});
  DecayOptions window;
  window.xi_min = 64;
  window.xi_max = 4096;
  CHECK(estimate_decay(algebraic, 2, window).epsilon <= 1e-3);
  std::vector<SpectrumSample> one{{5, 1}};
  try {
    estimate_decay(one, 2);
    FAIL("single coefficient fitted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  auto pf = fit_power_law(algebraic, 64, 4096);
  CHECK(pf.power == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(pf.r2 > 1 - 1e-12);
}

TEST_CASE("Gevrey cutoff contract") {
  const double pi = 3.14159265358979323846;
  auto phi = make_cutoff(2, {pi - 1, pi + 1}, {pi - 0.5, pi + 0.5});
  CHECK(phi(pi) == 1);
  CHECK(phi(pi - 1) == 0);
  CHECK(phi(pi + 1) == 0);
  CHECK(phi(0.3) == 0);
  double prev = 0;
  for (int i = 0; i <= 200; ++i) {
    double t = pi - 1 + 0.5 * i / 200.0;
    double v = phi(t);
    CHECK(v >= prev);
    CHECK(v <= 1);
    prev = v;
  }
  prev = 1;
  for (int i = 0; i <= 200; ++i) {
    double v = phi(pi + 0.5 + 0.5 * i / 200.0);
    CHECK(v <= prev);
    CHECK(v >= 0);
    prev = v;
  }
  try {
    make_cutoff(1, {1, 2}, {1.2, 1.8});
    FAIL("s = 1 accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OrderError);
  }
  try {
    make_cutoff(2, {1, 2}, {0.5, 1.8});
    FAIL("plateau outside support accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GeometryError);
  }
}

TEST_CASE("Gevrey cutoff Fourier decay") {
  const double pi = 3.14159265358979323846;
  auto phi = make_cutoff(2, {pi - 1, pi + 1}, {pi - 0.5, pi + 0.5});
  auto mags = phi.fourier_magnitudes(2048);
  std::vector<SpectrumSample> samples;
  for (std::size_t k = 1; k < mags.size(); ++k) samples.push_back({double(k), mags[k]});
  DecayOptions o;
  o.envelope = true;
  o.xi_min = 32;
  o.xi_max = 2048;
  auto w = estimate_decay(samples, 2, o);
  CHECK(w.epsilon >= 0.1);
  CHECK(w.fit_r2 >= 0.99);
}
