#include <doctest.h>

#include "vlkey/schemes.hpp"
#include "vlkey/verifier.hpp"

using namespace vlkey;

TEST_CASE("expected-length bounds from mutual information") {
  SUBCASE("I = 0") {
    const auto [lo, hi] = expected_length_bounds_from_mi(0.0, 0.5);
    CHECK(lo < 0);
    CHECK(hi == doctest::Approx((std::log2(3.0) + 1) / 0.5));
  }
  SUBCASE("the 500-bit instance") {
    const auto [lo, hi] = expected_length_bounds_from_mi(500.0, 1.0 / 500);
    CHECK(lo == doctest::Approx(440.1624310510902).epsilon(1e-12));
    CHECK(lo >= 440.0);
    CHECK(hi > 500.0);
  }
  SUBCASE("I = 10, eps = 0.1 arithmetic") {
    const auto [lo, hi] = expected_length_bounds_from_mi(10.0, 0.1);
    CHECK(lo == doctest::Approx(10 - 3 * std::log2(11.0) - 2 * std::log2(10.0) - 15));
    CHECK(hi == doctest::Approx((10 + std::log2(3.0) + 1) / 0.9));
  }
}

TEST_CASE("regime bounds and preconditions") {
  const auto [lo1, hi1] = expected_length_bounds_regime(2.0, 1, 1.0);
  CHECK(lo1 == doctest::Approx(2 - 5 * std::log2(3.0) - 15));
  CHECK(hi1 == doctest::Approx(10.0));
  const auto [lo2, hi2] = expected_length_bounds_regime(2.0, 2, 0.5);
  CHECK(lo2 == doctest::Approx(-3 * std::log2(3.0) - 15));
  CHECK(hi2 == doctest::Approx(10.0));
  CHECK_THROWS_AS(expected_length_bounds_regime(1.0, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(expected_length_bounds_regime(1.0, 2, 0.5), std::domain_error);
  CHECK_THROWS_AS(expected_length_bounds_regime(2.0, 3, 0.5), std::domain_error);
}

TEST_CASE("coinciding-entropy bounds from I") {
  const auto [lo0, hi0] = coinciding_entropy_bounds_from_mi(0.0);
  CHECK(hi0 == doctest::Approx(1.0));
  const auto [lo2, hi2] = coinciding_entropy_bounds_from_mi(2.0);
  CHECK(lo2 < 0);  // vacuous below I = 2, as expected
  CHECK(hi2 == doctest::Approx(3.0));
  const auto [lo20, hi20] = coinciding_entropy_bounds_from_mi(20.0);
  CHECK(lo20 == doctest::Approx(20 - 2 * std::log2(21.0) - 7.034));
}

TEST_CASE("length bounds from a coinciding-entropy proxy") {
  const auto [lo, hi] = expected_length_bounds_from_heq(3.0, 0.5);
  CHECK(lo == doctest::Approx(3 - 2 - 2 - 7.082));
  CHECK(hi == doctest::Approx((3 + std::log2(3.0)) * 2));
  const auto [lo2, hi2] = expected_length_bounds_from_heq(20.0, 0.1);
  CHECK(lo2 == doctest::Approx(1.8818263874465150).epsilon(1e-9));
  (void)hi2;
  const auto [lo0, hi0] = expected_length_bounds_from_heq(0.0, 0.3);
  CHECK(lo0 < 0);
  (void)hi0;
}

TEST_CASE("bound formula monotonicity") {
  // lower bound nondecreasing in I past 3 log2(e); upper increasing in both
  double prev = -1e300;
  for (double I = 4.4; I <= 80; I += 0.7) {
    const double lo = expected_length_bounds_from_mi(I, 0.25).first;
    CHECK(lo >= prev - 1e-12);
    prev = lo;
  }
  double prev_hi = 0;
  for (double I = 0; I <= 50; I += 1.3) {
    const double hi = expected_length_bounds_from_mi(I, 0.25).second;
    CHECK(hi > prev_hi);
    prev_hi = hi;
  }
  double prev_eps = 0;
  for (double eps = 0.05; eps < 0.95; eps += 0.05) {
    const double hi = expected_length_bounds_from_mi(5.0, eps).second;
    CHECK(hi > prev_eps);
    prev_eps = hi;
  }
}

TEST_CASE("audit of the erasure scheme") {
  const int m = 4;
  const Rational eps(1, 4);
  auto [alice, bob] = erasure_scheme(m, eps);
  const JointSource src = erasure_pair_source(m, eps);
  const KeyLaw law = enumerate_protocol(src, alice, bob);
  const auto reports = audit_scheme(src, law);
  REQUIRE(!reports.empty());
  const BoundReport& upper = reports.front();
  CHECK(upper.name == "expected_length_upper_from_mi");
  CHECK(upper.measured == doctest::Approx(4.0));
  CHECK(upper.bound == doctest::Approx((3 + std::log2(3.0) + 1) /
                                       (1 - 15.0 / 64)));
  CHECK(upper.satisfied);
}

TEST_CASE("audit of a perfect key against the upper bound") {
  // X = Y uniform on 2^k values, keys copied straight from the source
  const int k = 4;
  Party alice, bob;
  alice.act = [k](long long obs, std::span<const long long>, const Transcript&) {
    return PartyAction::stop(k, obs + 1);
  };
  bob.act = alice.act;
  const JointSource src = identity_source(1 << k);
  const KeyLaw law = enumerate_protocol(src, alice, bob);
  const auto reports = audit_scheme(src, law);
  CHECK(reports.front().satisfied);  // k <= k + log2(3) + 1
}
