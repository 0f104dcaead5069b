#include "torus_hypo/polynomial.hpp"

#include <algorithm>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

namespace {

int sgn(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sign_changes(const std::vector<int>& signs) {
  int changes = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (c_.empty()) return {};
  return scaled(Rational(1) / leading());
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(Rational(-1)); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(const Rational& f) const {
  std::vector<Rational> r = c_;
  for (auto& v : r) v *= f;
  return Polynomial(std::move(r));
}

void Polynomial::divmod(const Polynomial& d, Polynomial& q, Polynomial& r) const {
  if (d.is_zero()) fail(ErrorKind::ZeroDivisorError, "polynomial division by zero");
  std::vector<Rational> rem = c_;
  int dd = d.degree();
  std::vector<Rational> quo(static_cast<std::size_t>(std::max(0, degree() - dd + 1)), Rational(0));
  for (int k = degree(); k >= dd; --k) {
    const Rational& lead = rem[static_cast<std::size_t>(k)];
    if (lead == 0) continue;
    Rational f = lead / d.leading();
    quo[static_cast<std::size_t>(k - dd)] = f;
    for (int i = 0; i <= dd; ++i) rem[static_cast<std::size_t>(k - dd + i)] -= f * d.c_[static_cast<std::size_t>(i)];
  }
  q = Polynomial(std::move(quo));
  r = Polynomial(std::move(rem));
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial q, r;
    a.divmod(b, q, r);
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

std::vector<Polynomial> square_free_factors(const Polynomial& p) {
  std::vector<Polynomial> out;
  if (p.degree() < 1) return out;
  Polynomial dp = p.derivative();
  Polynomial a = gcd(p, dp);
  Polynomial q, r;
  p.divmod(a, q, r);
  Polynomial b = q;
  Polynomial c;
  dp.divmod(a, c, r);
  Polynomial d = c - b.derivative();
  while (b.degree() >= 1) {
    Polynomial g = gcd(b, d);
    out.push_back(g);
    b.divmod(g, q, r);
    Polynomial nb = q;
    d.divmod(g, q, r);
    c = q;
    b = nb;
    d = c - b.derivative();
  }
  return out;
}

int count_real_roots(const Polynomial& p) {
  if (p.degree() < 1) return 0;
  std::vector<Polynomial> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Polynomial q, r;
    chain[chain.size() - 2].divmod(chain.back(), q, r);
    if (r.is_zero()) break;
    chain.push_back(r.scaled(Rational(-1)));
  }
  std::vector<int> at_neg, at_pos;
  for (const auto& f : chain) {
    int lead = sgn(f.leading());
    at_pos.push_back(lead);
    at_neg.push_back(f.degree() % 2 == 0 ? lead : -lead);
  }
  return sign_changes(at_neg) - sign_changes(at_pos);
}

}  // namespace torus_hypo
