#include "torus_hypo/multi_trig.hpp"

#include <algorithm>
#include <cmath>

#include "torus_hypo/error.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo {

MultiTrig::MultiTrig(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) fail(ErrorKind::InvalidInput, "trig block needs at least one variable");
  strides_.assign(degrees_.size(), 1);
  std::size_t total = 1;
  for (std::size_t j = degrees_.size(); j-- > 0;) {
    if (degrees_[j] < 0) fail(ErrorKind::InvalidInput, "negative degree");
    strides_[j] = total;
    total *= static_cast<std::size_t>(2 * degrees_[j] + 1);
  }
  coeffs_.assign(total, Complex{});
}

std::size_t MultiTrig::offset(std::span<const int> eta) const {
  if (eta.size() != degrees_.size()) fail(ErrorKind::GridMismatch, "multi-index dimension mismatch");
  std::size_t off = 0;
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (eta[j] < -degrees_[j] || eta[j] > degrees_[j]) return npos;
    off += static_cast<std::size_t>(eta[j] + degrees_[j]) * strides_[j];
  }
  return off;
}

void MultiTrig::multi_index(std::size_t flat, std::span<int> eta) const {
  for (std::size_t j = 0; j < degrees_.size(); ++j) {
    eta[j] = static_cast<int>(flat / strides_[j]) - degrees_[j];
    flat %= strides_[j];
  }
}

Complex MultiTrig::at(std::span<const int> eta) const {
  std::size_t off = offset(eta);
  return off == npos ? Complex{} : coeffs_[off];
}

Complex& MultiTrig::at(std::span<const int> eta) {
  std::size_t off = offset(eta);
  if (off == npos) fail(ErrorKind::OutOfRange, "multi-index outside coefficient box");
  return coeffs_[off];
}

Complex MultiTrig::operator()(std::span<const double> t) const {
  if (t.size() != dims()) fail(ErrorKind::GridMismatch, "evaluation point dimension mismatch");
  std::vector<int> eta(dims());
  Complex sum{};
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == Complex{}) continue;
    multi_index(f, eta);
    double phase = 0;
    for (std::size_t j = 0; j < dims(); ++j) phase += eta[j] * t[j];
    sum += coeffs_[f] * std::polar(1.0, phase);
  }
  return sum;
}

MultiTrig MultiTrig::derivative(std::size_t dim) const {
  MultiTrig out = *this;
  std::vector<int> eta(dims());
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    multi_index(f, eta);
    out.coeffs_[f] *= Complex(0, eta[dim]);
  }
  return out;
}

MultiTrig MultiTrig::multiplied_along(std::size_t dim, const TrigPoly& p) const {
  std::vector<int> deg = degrees_;
  deg[dim] += p.degree();
  MultiTrig out(deg);
  std::vector<int> eta(dims());
  int dp = p.degree();
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == Complex{}) continue;
    multi_index(f, eta);
    int base = eta[dim];
    for (int k = -dp; k <= dp; ++k) {
      Complex c = p.coefficient(k);
      if (c == Complex{}) continue;
      eta[dim] = base + k;
      out.at(eta) += coeffs_[f] * c;
    }
    eta[dim] = base;
  }
  return out;
}

MultiTrig MultiTrig::resized(std::vector<int> degrees) const {
  MultiTrig out(std::move(degrees));
  if (out.dims() != dims()) fail(ErrorKind::GridMismatch, "resize dimension mismatch");
  std::vector<int> eta(dims());
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == Complex{}) continue;
    multi_index(f, eta);
    std::size_t off = out.offset(eta);
    if (off != npos) out.coeffs_[off] = coeffs_[f];
  }
  return out;
}

std::vector<Complex> MultiTrig::to_grid(int n) const {
  for (int d : degrees_) {
    if (n <= 2 * d) fail(ErrorKind::GridMismatch, "grid too coarse for coefficient degree");
  }
  std::size_t total = 1;
  for (std::size_t j = 0; j < dims(); ++j) total *= static_cast<std::size_t>(n);
  std::vector<Complex> buf(total);
  std::vector<int> eta(dims());
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == Complex{}) continue;
    multi_index(f, eta);
    std::size_t off = 0;
    for (std::size_t j = 0; j < dims(); ++j) off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(fft_slot(eta[j], n));
    buf[off] = coeffs_[f];
  }
  std::vector<int> shape(dims(), n);
  dft_backward(buf, shape);
  return buf;
}

MultiTrig MultiTrig::from_grid(std::vector<Complex> samples, std::size_t dims, int n) {
  std::vector<int> shape(dims, n);
  dft_forward(samples, shape);
  MultiTrig out(std::vector<int>(dims, n / 2 - 1));
  std::vector<int> eta(dims);
  for (std::size_t f = 0; f < samples.size(); ++f) {
    std::size_t rem = f;
    bool keep = true;
    for (std::size_t j = dims; j-- > 0;) {
      int slot = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
      eta[j] = fft_frequency(slot, n);
      if (eta[j] == -n / 2) keep = false;
    }
    if (keep) out.at(eta) = samples[f];
  }
  return out;
}

int resolving_grid(const std::vector<int>& degrees, int oversample) {
  int d = *std::max_element(degrees.begin(), degrees.end());
  return std::max(8, next_pow2(oversample * (2 * d + 1)));
}

double MultiTrig::sup_norm() const {
  std::vector<int> shape(dims());
  std::size_t total = 1;
  for (std::size_t j = 0; j < dims(); ++j) {
    shape[j] = resolving_grid({degrees_[j]});
    total *= static_cast<std::size_t>(shape[j]);
  }
  std::vector<Complex> buf(total);
  std::vector<int> eta(dims());
  for (std::size_t f = 0; f < coeffs_.size(); ++f) {
    if (coeffs_[f] == Complex{}) continue;
    multi_index(f, eta);
    std::size_t off = 0;
    for (std::size_t j = 0; j < dims(); ++j) off = off * static_cast<std::size_t>(shape[j]) + static_cast<std::size_t>(fft_slot(eta[j], shape[j]));
    buf[off] = coeffs_[f];
  }
  dft_backward(buf, shape);
  double m = 0;
  for (auto v : buf) m = std::max(m, std::abs(v));
  return m;
}

double MultiTrig::max_coefficient() const {
  double m = 0;
  for (auto v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

TrigPoly MultiTrig::line(std::size_t dim, std::span<const int> base) const {
  int d = degrees_[dim];
  std::vector<int> eta(base.begin(), base.end());
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) {
    eta[dim] = k;
    c[static_cast<std::size_t>(k + d)] = at(eta);
  }
  return TrigPoly(std::move(c));
}

void MultiTrig::set_line(std::size_t dim, std::span<const int> base, const TrigPoly& p) {
  int d = degrees_[dim];
  std::vector<int> eta(base.begin(), base.end());
  for (int k = -d; k <= d; ++k) {
    eta[dim] = k;
    at(eta) = p.coefficient(k);
  }
}

MultiTrig& MultiTrig::operator+=(const MultiTrig& other) {
  if (other.degrees_ == degrees_) {
    for (std::size_t f = 0; f < coeffs_.size(); ++f) coeffs_[f] += other.coeffs_[f];
    return *this;
  }
  std::vector<int> deg(dims());
  for (std::size_t j = 0; j < dims(); ++j) deg[j] = std::max(degrees_[j], other.degrees_[j]);
  MultiTrig a = resized(deg);
  MultiTrig b = other.resized(deg);
  for (std::size_t f = 0; f < a.coeffs_.size(); ++f) a.coeffs_[f] += b.coeffs_[f];
  *this = std::move(a);
  return *this;
}

MultiTrig& MultiTrig::operator-=(const MultiTrig& other) {
  MultiTrig neg = other;
  neg *= Complex(-1);
  return *this += neg;
}

MultiTrig& MultiTrig::operator*=(Complex factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

MultiTrig operator+(MultiTrig a, const MultiTrig& b) { return a += b; }
MultiTrig operator-(MultiTrig a, const MultiTrig& b) { return a -= b; }
MultiTrig operator*(Complex factor, MultiTrig a) { return a *= factor; }

}  // namespace torus_hypo
