#include "torus_hypo/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) {
      fail(ErrorKind::InvalidInput, "bad exponent in number '" + std::string(s) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  auto dot = s.find('.');
  if (dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
      (!frac_part.empty() && !all_digits(frac_part))) {
    fail(ErrorKind::InvalidInput, "cannot parse number '" + std::string(s) + "'");
  }
  std::string digits = std::string(int_part) + std::string(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  Rational value(BigInt(digits.empty() ? "0" : digits));
  if (exponent > 0) {
    value *= Rational(pow10(static_cast<unsigned long>(exponent)));
  } else if (exponent < 0) {
    value /= Rational(pow10(static_cast<unsigned long>(-exponent)));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) fail(ErrorKind::InvalidInput, "empty number");
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational num = parse_decimal(trim(s.substr(0, slash)));
  Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator in '" + std::string(s) + "'");
  Rational value = num / den;
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

double to_double(const Rational& value) { return mpq_get_d(value.get_mpq_t()); }

Rational from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorKind::InvalidInput, "non-finite coefficient");
  Rational r;
  mpq_set_d(r.get_mpq_t(), value);
  return r;
}

LogReal log_abs(const BigInt& value) {
  if (value == 0) return -std::numeric_limits<LogReal>::infinity();
  long exp2 = 0;
  double mantissa = mpz_get_d_2exp(&exp2, value.get_mpz_t());
  return std::log(static_cast<LogReal>(std::fabs(mantissa))) +
         static_cast<LogReal>(exp2) * std::log(static_cast<LogReal>(2));
}

LogReal log_abs(const Rational& value) {
  if (value == 0) return -std::numeric_limits<LogReal>::infinity();
  return log_abs(BigInt(value.get_num())) - log_abs(BigInt(value.get_den()));
}

LogReal log_add(LogReal a, LogReal b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  LogReal hi = std::max(a, b);
  LogReal lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

BigInt pow10(unsigned long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

std::size_t decimal_digits(const BigInt& value) {
  if (value == 0) return 1;
  return mpz_sizeinbase(value.get_mpz_t(), 10);
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TORUS_HYPO_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace torus_hypo
