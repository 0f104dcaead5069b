#include <fftw3.h>
#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "torus_hypo/error.hpp"
#include "torus_hypo/gevrey.hpp"

namespace torus_hypo::gevrey {

namespace {

using Quad = __float128;

double exp_of(double x) { return std::exp(x); }
Quad exp_of(Quad x) { return expq(x); }
double pow_of(double x, double y) { return std::pow(x, y); }
Quad pow_of(Quad x, Quad y) { return powq(x, y); }

template <typename T>
T psi(T x, T inv) {
  if (x <= 0) return 0;
  return exp_of(-pow_of(x, -inv));
}

template <typename T>
T shoulder(T x, T inv) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  T a = psi(x, inv);
  T b = psi(T(1) - x, inv);
  return a / (a + b);
}

template <typename T>
T evaluate(T t, double s, Interval support, Interval plateau) {
  T inv = T(1) / (T(s) - T(1));
  T left = (t - T(support.lo)) / (T(plateau.lo) - T(support.lo));
  T right = (T(support.hi) - t) / (T(support.hi) - T(plateau.hi));
  return shoulder(left, inv) * shoulder(right, inv);
}

std::mutex& quad_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GevreyCutoff::GevreyCutoff(double s, Interval support, Interval plateau)
    : s_(s), support_(support), plateau_(plateau) {
  if (!(s > 1)) fail(ErrorKind::OrderError, "Gevrey cutoffs need s > 1");
  bool nested = 0 < support.lo && support.lo < plateau.lo && plateau.lo < plateau.hi && plateau.hi < support.hi &&
                support.hi < kTwoPi;
  if (!nested) fail(ErrorKind::GeometryError, "need 0 < l < l' < r' < r < 2 pi");
}

double GevreyCutoff::operator()(double t) const { return evaluate<double>(t, s_, support_, plateau_); }

std::vector<double> GevreyCutoff::fourier_magnitudes(int k_max) const {
  if (k_max < 0) fail(ErrorKind::OutOfRange, "k_max must be non-negative");
  int n = 1024;
  while (n < 4 * k_max) n <<= 1;
  std::vector<fftwq_complex> buf(static_cast<std::size_t>(n));
  Quad two_pi = 2 * acosq(Quad(-1));
  for (int m = 0; m < n; ++m) {
    Quad t = two_pi * m / n;
    buf[static_cast<std::size_t>(m)][0] = evaluate<Quad>(t, s_, support_, plateau_);
    buf[static_cast<std::size_t>(m)][1] = 0;
  }
  fftwq_plan plan;
  {
    std::lock_guard lock(quad_planner_mutex());
    plan = fftwq_plan_dft_1d(n, buf.data(), buf.data(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftwq_execute(plan);
  {
    std::lock_guard lock(quad_planner_mutex());
    fftwq_destroy_plan(plan);
  }
  std::vector<double> out(static_cast<std::size_t>(k_max + 1));
  for (int k = 0; k <= k_max; ++k) {
    Quad re = buf[static_cast<std::size_t>(k)][0] / n;
    Quad im = buf[static_cast<std::size_t>(k)][1] / n;
    out[static_cast<std::size_t>(k)] = static_cast<double>(sqrtq(re * re + im * im));
  }
  return out;
}

GevreyCutoff make_cutoff(double s, Interval support, Interval plateau) { return GevreyCutoff(s, support, plateau); }

}  // namespace torus_hypo::gevrey
