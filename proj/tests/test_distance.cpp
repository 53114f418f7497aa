#include <doctest.h>

#include "vlkey/distance.hpp"

using namespace vlkey;

namespace {

KeyLaw perfect_key(int l) {
  KeyLaw law;
  const long long n = 1LL << l;
  for (long long a = 1; a <= n; ++a)
    law.outcomes.push_back({{}, l, a, a, Rational(1, n)});
  law.normalize();
  return law;
}

}  // namespace

TEST_CASE("perfect key has zero distance") {
  const IdealDistance d = distance_from_ideal(perfect_key(3));
  CHECK(d.sup == Rational(0));
  CHECK(d.per_l.at(3) == Rational(0));
}

TEST_CASE("always-empty key is vacuously ideal") {
  KeyLaw law;
  law.outcomes.push_back({{Message::of(4)}, 0, 1, 1, Rational(1)});
  law.normalize();
  CHECK(distance_from_ideal(law).sup == Rational(0));
}

TEST_CASE("keys out of range are a contract violation") {
  KeyLaw law;
  law.outcomes.push_back({{}, 1, 3, 1, Rational(1)});
  CHECK_THROWS_AS(distance_from_ideal(law), contract_error);
}

TEST_CASE("mixture of diagonal and independent keys") {
  // with probability 1-alpha the parties share a uniform key, otherwise the
  // keys are independent uniforms; the distance is alpha (1 - 2^-l)
  const int l = 2;
  const long long n = 1LL << l;
  const Rational alpha(1, 3);
  KeyLaw law;
  for (long long a = 1; a <= n; ++a)
    for (long long b = 1; b <= n; ++b) {
      Rational p = alpha / (n * n);
      if (a == b) p += (1 - alpha) / n;
      law.outcomes.push_back({{}, l, a, b, p});
    }
  law.normalize();
  const IdealDistance d = distance_from_ideal(law);
  CHECK(d.sup == alpha * (1 - Rational(1, n)));
}

TEST_CASE("averaged per-l distance never exceeds the sup") {
  KeyLaw law;
  law.outcomes.push_back({{}, 0, 1, 1, Rational(1, 4)});
  law.outcomes.push_back({{}, 1, 1, 1, Rational(1, 4)});
  law.outcomes.push_back({{}, 1, 2, 2, Rational(1, 4)});
  law.outcomes.push_back({{}, 1, 1, 2, Rational(1, 4)});
  law.normalize();
  const IdealDistance d = distance_from_ideal(law);
  Rational avg = 0;
  for (const auto& [l, v] : d.per_l) avg += d.p_l.at(l) * v;
  CHECK(avg <= d.sup);
}
