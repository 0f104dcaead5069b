#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "torus_hypo/numeric.hpp"

namespace torus_hypo {

/// In-place DFT over a row-major tensor of extents `dims`.
/// Forward computes (1/size) * sum f(t) e^{-i k.t}; backward sums c_k e^{i k.t}.
void dft_forward(std::span<Complex> data, std::span<const int> dims);
void dft_backward(std::span<Complex> data, std::span<const int> dims);

/// Frequency stored at FFT slot `index` for a transform of length n.
inline int fft_frequency(int index, int n) { return index < n / 2 ? index : index - n; }
inline int fft_slot(int frequency, int n) { return frequency >= 0 ? frequency : frequency + n; }

/// Smallest power of two >= value.
int next_pow2(int value);

/// Uniform grid t_m = 2 pi m / n.
std::vector<double> uniform_grid(int n);

}  // namespace torus_hypo
