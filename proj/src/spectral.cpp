#include "torus_hypo/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void run_dft(std::span<Complex> data, std::span<const int> dims, int sign) {
  if (dims.empty()) fail(ErrorKind::GridMismatch, "empty DFT shape");
  std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                      [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
  if (total != data.size()) fail(ErrorKind::GridMismatch, "DFT shape does not match data size");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ptr, ptr, sign,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

void dft_forward(std::span<Complex> data, std::span<const int> dims) {
  run_dft(data, dims, FFTW_FORWARD);
  double scale = 1.0 / static_cast<double>(data.size());
  for (auto& c : data) c *= scale;
}

void dft_backward(std::span<Complex> data, std::span<const int> dims) {
  run_dft(data, dims, FFTW_BACKWARD);
}

int next_pow2(int value) {
  int p = 1;
  while (p < value) p <<= 1;
  return p;
}

std::vector<double> uniform_grid(int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) t[static_cast<std::size_t>(m)] = kTwoPi * m / n;
  return t;
}

}  // namespace torus_hypo
