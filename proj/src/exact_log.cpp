#include "vlkey/exact_log.hpp"

#include <cmath>
#include <cstdlib>

namespace vlkey {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::lcm;
using boost::multiprecision::msb;
using boost::multiprecision::numerator;

}  // namespace

LogCmp compare_weighted_log(const std::vector<std::pair<Rational, Rational>>& terms,
                            const Rational& bound, std::size_t max_bits) {
  // Normalise weights and the bound to a common denominator D, then the
  // claim  sum (n_i/D) log2 r_i >= u/v  becomes
  //   prod num_i^(n_i v) * 2^(max(0,-Duv'...)) >= prod den_i^(n_i v) * 2^(Du)
  // with all exponents integral.
  BigInt D = 1;
  for (const auto& [w, r] : terms) {
    if (w < 0) throw std::domain_error("compare_weighted_log: negative weight");
    if (r <= 0) throw std::domain_error("compare_weighted_log: non-positive ratio");
    if (w != 0) D = lcm(D, denominator(w));
  }
  const BigInt u = numerator(bound);
  const BigInt v = denominator(bound);

  // Size estimate in bits.
  double bits = to_double(v) * 0.0;
  const double dv = to_double(v);
  const double dD = to_double(D);
  for (const auto& [w, r] : terms) {
    if (w == 0) continue;
    double e = to_double(numerator(w) * (D / denominator(w))) * dv;
    double sz = static_cast<double>(std::max(msb(numerator(r)), msb(denominator(r))) + 1);
    bits += e * sz;
  }
  double du = std::abs(to_double(u)) * dD;
  bits += du;
  if (!(bits < static_cast<double>(max_bits))) return LogCmp::undecided;

  BigInt lhs = 1, rhs = 1;
  for (const auto& [w, r] : terms) {
    if (w == 0) continue;
    const BigInt e = numerator(w) * (D / denominator(w)) * v;
    const unsigned long ee = e.convert_to<unsigned long>();
    lhs *= boost::multiprecision::pow(numerator(r), ee);
    rhs *= boost::multiprecision::pow(denominator(r), ee);
  }
  BigInt Du = D * u;
  if (Du >= 0) {
    rhs <<= Du.convert_to<unsigned long>();
  } else {
    lhs <<= (-Du).convert_to<unsigned long>();
  }
  if (lhs < rhs) return LogCmp::less;
  if (lhs == rhs) return LogCmp::equal;
  return LogCmp::greater;
}

bool weighted_log_at_least(const std::vector<std::pair<Rational, Rational>>& terms,
                           const Rational& bound, double tol) {
  const LogCmp c = compare_weighted_log(terms, bound);
  if (c != LogCmp::undecided) return c != LogCmp::less;
  double s = 0.0;
  for (const auto& [w, r] : terms) s += to_double(w) * std::log2(to_double(r));
  return s >= to_double(bound) - tol;
}

long long level_index(const Rational& p, const Rational& delta) {
  if (p <= 0 || p > 1) throw std::domain_error("level_index: p must be in (0,1]");
  if (delta <= 0 || delta > 1) throw std::domain_error("level_index: delta out of range");
  if (p == 1) return 0;
  // level n satisfies p <= 2^(-delta n), i.e. num^b * 2^(a n) <= den^b for
  // delta = a/b; take the largest such n.
  const BigInt a = boost::multiprecision::numerator(delta);
  const BigInt b = boost::multiprecision::denominator(delta);
  const unsigned long bu = b.convert_to<unsigned long>();
  const BigInt num_b = boost::multiprecision::pow(boost::multiprecision::numerator(p), bu);
  const BigInt den_b = boost::multiprecision::pow(boost::multiprecision::denominator(p), bu);
  auto holds = [&](long long n) {
    BigInt shift = a * n;
    return (num_b << shift.convert_to<unsigned long>()) <= den_b;
  };
  // -log2(p)/delta <= bits(den_b)/a + 1 gives a safe upper bracket.
  long long hi = 1;
  while (holds(hi)) hi <<= 1;
  long long lo = hi >> 1;  // holds(lo) true (or lo==0)
  if (!holds(0)) throw std::logic_error("level_index: internal bracket failure");
  while (lo + 1 < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (holds(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

long long level_index_nats(const Rational& p, const Rational& eps_prime) {
  if (p <= 0 || p > 1) throw std::domain_error("level_index_nats: p must be in (0,1]");
  if (eps_prime <= 0 || eps_prime >= 1)
    throw std::domain_error("level_index_nats: eps' out of range");
  if (p == 1) return 0;
  const long double ln_num =
      std::log(to_double(boost::multiprecision::numerator(p)));
  const long double ln_den =
      std::log(to_double(boost::multiprecision::denominator(p)));
  const long double scale = 5.0L / (2.0L * (long double)to_double(eps_prime));
  long double v = (ln_den - ln_num) * scale;
  const long double r = std::llround((double)v);
  if (std::abs((double)(v - r)) <= 1e-12 * std::max(1.0, std::abs((double)v)))
    return (long long)r;
  return (long long)std::floor(v);
}

}  // namespace vlkey
