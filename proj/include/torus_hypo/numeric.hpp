#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace torus_hypo {

using BigInt = mpz_class;
using Rational = mpq_class;
/// Extended precision used for log-scale mirrors of huge integers.
using LogReal = long double;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

/// Parses "p/q", "-7", "0.25", "1.5e-3" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

double to_double(const Rational& value);
Rational from_double(double value);

/// Natural log of |value|; -inf for zero.
LogReal log_abs(const BigInt& value);
LogReal log_abs(const Rational& value);

/// ln(e^a + e^b) without overflow.
LogReal log_add(LogReal a, LogReal b);

BigInt pow10(unsigned long exponent);
std::size_t decimal_digits(const BigInt& value);

/// Worker count: hardware concurrency capped by TORUS_HYPO_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, count); results must go to disjoint slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace torus_hypo
