#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vlkey {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Raised when a protocol, law or scheme violates one of its declared
// contracts (undeclared message, key out of range, disagreeing lengths, ...).
class contract_error : public std::runtime_error {
 public:
  explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an exact-enumeration request exceeds the configured limits.
class enumeration_limit_error : public std::runtime_error {
 public:
  explicit enumeration_limit_error(const std::string& what)
      : std::runtime_error(what) {}
};

double to_double(const Rational& q);
double to_double(const BigInt& n);

// 2^e as an exact rational, e may be negative.
Rational pow2(long long e);

// Exact floor(log2(q)) for q > 0.
long long floor_log2(const Rational& q);

// r^e for e >= 0.
Rational rational_pow(const Rational& r, unsigned long e);

std::string to_string(const Rational& q);

// Nearest rational with denominator <= max_den (continued fractions).
Rational rational_from_double(double x, long long max_den = 1000000000000LL);

// Checked narrowing.
long long to_int64(const BigInt& n);

}  // namespace vlkey
