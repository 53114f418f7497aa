#include "vlkey/rational.hpp"

#include <cmath>
#include <limits>

namespace vlkey {

double to_double(const Rational& q) { return q.convert_to<double>(); }
double to_double(const BigInt& n) { return n.convert_to<double>(); }

Rational pow2(long long e) {
  BigInt one = 1;
  if (e >= 0) return Rational(one << e);
  return Rational(one, one << (-e));
}

long long floor_log2(const Rational& q) {
  if (q <= 0) throw std::domain_error("floor_log2: argument must be positive");
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  long long e = static_cast<long long>(boost::multiprecision::msb(num)) -
                static_cast<long long>(boost::multiprecision::msb(den));
  // adjust so that 2^e <= q < 2^(e+1)
  while (pow2(e) > q) --e;
  while (pow2(e + 1) <= q) ++e;
  return e;
}

Rational rational_pow(const Rational& r, unsigned long e) {
  Rational acc = 1;
  Rational base = r;
  while (e) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

std::string to_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

Rational rational_from_double(double x, long long max_den) {
  if (!std::isfinite(x)) throw std::domain_error("rational_from_double: non-finite");
  const bool neg = x < 0;
  double v = neg ? -x : x;
  // continued fraction convergents
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double ipart = std::floor(frac);
    if (ipart > static_cast<double>(std::numeric_limits<long long>::max() / 4)) break;
    long long a = static_cast<long long>(ipart);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0 || p2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - ipart;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational r(p1, q1 == 0 ? 1 : q1);
  return neg ? -r : r;
}

long long to_int64(const BigInt& n) {
  if (n > std::numeric_limits<long long>::max() ||
      n < std::numeric_limits<long long>::min())
    throw std::overflow_error("to_int64: value out of range");
  return n.convert_to<long long>();
}

}  // namespace vlkey
