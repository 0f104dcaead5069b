#include "torus_hypo/trig_poly.hpp"

#include <algorithm>
#include <cmath>

#include "torus_hypo/error.hpp"
#include "torus_hypo/spectral.hpp"

namespace torus_hypo {

namespace {

std::vector<Complex> complex_from_exact(const ExactTrig& form) {
  int d = static_cast<int>(std::max(form.cos.size(), form.sin.size()));
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  c[static_cast<std::size_t>(d)] = to_double(form.constant);
  for (int k = 1; k <= d; ++k) {
    double a = k <= static_cast<int>(form.cos.size()) ? to_double(form.cos[k - 1]) : 0.0;
    double b = k <= static_cast<int>(form.sin.size()) ? to_double(form.sin[k - 1]) : 0.0;
    c[static_cast<std::size_t>(d + k)] = Complex(a / 2, -b / 2);
    c[static_cast<std::size_t>(d - k)] = Complex(a / 2, b / 2);
  }
  return c;
}

void trim_exact(ExactTrig& form) {
  while (!form.cos.empty() && form.cos.back() == 0) form.cos.pop_back();
  while (!form.sin.empty() && form.sin.back() == 0) form.sin.pop_back();
}

ExactTrig map_exact(const ExactTrig& form, const Rational& c0_factor,
                    const std::function<std::pair<Rational, Rational>(int, const Rational&, const Rational&)>& f) {
  ExactTrig out;
  out.constant = form.constant * c0_factor;
  std::size_t d = std::max(form.cos.size(), form.sin.size());
  out.cos.assign(d, Rational(0));
  out.sin.assign(d, Rational(0));
  for (std::size_t k = 0; k < d; ++k) {
    Rational a = k < form.cos.size() ? form.cos[k] : Rational(0);
    Rational b = k < form.sin.size() ? form.sin[k] : Rational(0);
    auto [na, nb] = f(static_cast<int>(k + 1), a, b);
    out.cos[k] = na;
    out.sin[k] = nb;
  }
  trim_exact(out);
  return out;
}

}  // namespace

TrigPoly::TrigPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(Complex{});
  if (coeffs_.size() % 2 == 0) fail(ErrorKind::InvalidInput, "trig polynomial needs 2D+1 coefficients");
  trim();
}

TrigPoly TrigPoly::exact(ExactTrig form) {
  trim_exact(form);
  TrigPoly p(complex_from_exact(form));
  p.exact_ = std::move(form);
  return p;
}

TrigPoly TrigPoly::real_form(double constant, std::span<const double> cos, std::span<const double> sin) {
  int d = static_cast<int>(std::max(cos.size(), sin.size()));
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  c[static_cast<std::size_t>(d)] = constant;
  for (int k = 1; k <= d; ++k) {
    double a = k <= static_cast<int>(cos.size()) ? cos[k - 1] : 0.0;
    double b = k <= static_cast<int>(sin.size()) ? sin[k - 1] : 0.0;
    c[static_cast<std::size_t>(d + k)] = Complex(a / 2, -b / 2);
    c[static_cast<std::size_t>(d - k)] = Complex(a / 2, b / 2);
  }
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::constant(Complex value) { return TrigPoly(std::vector<Complex>{value}); }

void TrigPoly::trim() {
  while (coeffs_.size() > 1 && coeffs_.front() == Complex{} && coeffs_.back() == Complex{}) {
    coeffs_.erase(coeffs_.begin());
    coeffs_.pop_back();
  }
}

Complex TrigPoly::coefficient(int k) const {
  int d = degree();
  if (k < -d || k > d) return {};
  return coeffs_[static_cast<std::size_t>(k + d)];
}

bool TrigPoly::is_real(double tol) const {
  if (exact_) return true;
  int d = degree();
  double scale = 0;
  for (auto c : coeffs_) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= d; ++k) {
    if (std::abs(coefficient(k) - std::conj(coefficient(-k))) > tol * std::max(1.0, scale)) return false;
  }
  return true;
}

bool TrigPoly::is_zero() const {
  if (exact_) return exact_->constant == 0 && exact_->cos.empty() && exact_->sin.empty();
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) { return c == Complex{}; });
}

Complex TrigPoly::operator()(double t) const {
  int d = degree();
  Complex sum = coeffs_[static_cast<std::size_t>(d)];
  for (int k = 1; k <= d; ++k) {
    Complex e = std::polar(1.0, k * t);
    sum += coeffs_[static_cast<std::size_t>(d + k)] * e + coeffs_[static_cast<std::size_t>(d - k)] * std::conj(e);
  }
  return sum;
}

std::optional<Rational> TrigPoly::exact_mean() const {
  if (exact_) return exact_->constant;
  return std::nullopt;
}

TrigPoly TrigPoly::derivative() const {
  if (exact_) {
    return exact(map_exact(*exact_, Rational(0), [](int k, const Rational& a, const Rational& b) {
      return std::pair<Rational, Rational>(b * k, -a * k);
    }));
  }
  int d = degree();
  std::vector<Complex> c(coeffs_.size());
  for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = Complex(0, k) * coefficient(k);
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::primitive() const {
  if (exact_) {
    return exact(map_exact(*exact_, Rational(0), [](int k, const Rational& a, const Rational& b) {
      return std::pair<Rational, Rational>(-b / k, a / k);
    }));
  }
  int d = degree();
  std::vector<Complex> c(coeffs_.size());
  for (int k = -d; k <= d; ++k) {
    if (k != 0) c[static_cast<std::size_t>(k + d)] = coefficient(k) / Complex(0, k);
  }
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::reflected() const {
  if (exact_) {
    return exact(map_exact(*exact_, Rational(1), [](int, const Rational& a, const Rational& b) {
      return std::pair<Rational, Rational>(a, -b);
    }));
  }
  std::vector<Complex> c(coeffs_.rbegin(), coeffs_.rend());
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::shifted(double tau) const {
  int d = degree();
  std::vector<Complex> c(coeffs_.size());
  for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = coefficient(k) * std::polar(1.0, -k * tau);
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::without_mean() const {
  if (exact_) {
    ExactTrig form = *exact_;
    form.constant = 0;
    return exact(std::move(form));
  }
  std::vector<Complex> c = coeffs_;
  c[static_cast<std::size_t>(degree())] = 0;
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::operator-() const {
  if (exact_) return scaled_exact(Rational(-1));
  return scaled(-1.0);
}

TrigPoly TrigPoly::scaled(double factor) const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v *= factor;
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::scaled_exact(const Rational& factor) const {
  if (!exact_) return scaled(to_double(factor));
  return exact(map_exact(*exact_, factor, [&](int, const Rational& a, const Rational& b) {
    return std::pair<Rational, Rational>(a * factor, b * factor);
  }));
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  if (exact_ && other.exact_) {
    ExactTrig form;
    form.constant = exact_->constant + other.exact_->constant;
    std::size_t nc = std::max(exact_->cos.size(), other.exact_->cos.size());
    std::size_t ns = std::max(exact_->sin.size(), other.exact_->sin.size());
    form.cos.assign(nc, Rational(0));
    form.sin.assign(ns, Rational(0));
    for (std::size_t k = 0; k < nc; ++k) {
      if (k < exact_->cos.size()) form.cos[k] += exact_->cos[k];
      if (k < other.exact_->cos.size()) form.cos[k] += other.exact_->cos[k];
    }
    for (std::size_t k = 0; k < ns; ++k) {
      if (k < exact_->sin.size()) form.sin[k] += exact_->sin[k];
      if (k < other.exact_->sin.size()) form.sin[k] += other.exact_->sin[k];
    }
    return exact(std::move(form));
  }
  int d = std::max(degree(), other.degree());
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = coefficient(k) + other.coefficient(k);
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::operator-(const TrigPoly& other) const { return *this + (-other); }

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  int d1 = degree();
  int d2 = other.degree();
  int d = d1 + d2;
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int i = -d1; i <= d1; ++i) {
    for (int j = -d2; j <= d2; ++j) c[static_cast<std::size_t>(i + j + d)] += coefficient(i) * other.coefficient(j);
  }
  return TrigPoly(std::move(c));
}

double TrigPoly::derivative_bound() const {
  double m = 0;
  int d = degree();
  for (int k = -d; k <= d; ++k) m += std::abs(k) * std::abs(coefficient(k));
  return m;
}

std::vector<Complex> TrigPoly::sample(int n) const {
  int d = degree();
  if (n <= 2 * d) {
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) out[static_cast<std::size_t>(m)] = (*this)(kTwoPi * m / n);
    return out;
  }
  std::vector<Complex> buf(static_cast<std::size_t>(n));
  for (int k = -d; k <= d; ++k) buf[static_cast<std::size_t>(fft_slot(k, n))] = coefficient(k);
  int dims[1] = {n};
  dft_backward(buf, dims);
  return buf;
}

}  // namespace torus_hypo
