#pragma once

#include <map>

#include "vlkey/channel.hpp"

namespace vlkey {

// Conditional density table of the dithered source value given Y: constant
// on each x-quantile interval with value p(x|y)/p(x).  Mutual information is
// preserved by construction.
struct QuantileTable {
  std::size_t nx = 0, ny = 0;
  std::vector<std::vector<Rational>> f;  // [x][y]; zero rows for dropped x
  Dist px, py;

  double mutual_information() const;
};

QuantileTable quantile_reduce(const JointSource& source);

// Bob stops as soon as the highest-posterior candidate reaches mass 1-eps.
struct StopRule {
  Rational eps;  // 0 < eps < 1/2
};

// Interactive candidate-halving protocol: Alice publishes shrinking
// candidate sets seeded with 2^m - 1 dummies, Bob declares stop/continue.
struct HalvingProtocol {
  Party alice, bob;
  ProtocolOptions options;
  int m = 0;
  Rational eps;
};

// exact_arithmetic selects rational posteriors (exact enumeration) versus
// double posteriors (Monte Carlo paths).
HalvingProtocol make_halving_protocol(const JointSource& source, int m,
                                      const StopRule& rule,
                                      bool exact_arithmetic = true);

struct EntropyModelKeys {
  KeyLaw law;  // outcomes carry (K_A, K_B) in (a, b); L = m - T + 1
  int m = 0;
  Rational eps;
  bool exact = true;
};

// Exhaustive enumeration; offered only for m <= 3 and |X| <= 8.
EntropyModelKeys run_halving_exact(const JointSource& source, int m,
                                   const StopRule& rule);

struct HalvingStats {
  double p_disagree = 0;
  double e_stop_time = 0;
  std::map<int, std::uint64_t> stop_histogram;
  std::uint64_t trials = 0;
};

struct HeqEstimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
};

struct HalvingMcResult {
  HalvingStats stats;
  HeqEstimate h_eq;
};

// Monte Carlo run; the coinciding-entropy estimate averages the exact
// per-transcript integrand over `heq_trials` sampled transcripts.
HalvingMcResult run_halving_mc(const JointSource& source, int m,
                               const StopRule& rule, std::uint64_t seed,
                               std::uint64_t trials, std::uint64_t heq_trials = 2000);

// P{K_A = K_B} H(K_A | W, K_A = K_B), computed per transcript then averaged.
double coinciding_entropy(const KeyLaw& law);

// 1-based position of `slot` in the ascending candidate-set listing.
long long rank_in_set(const std::vector<long long>& slots_ascending, long long slot);

// Exhaustive check (all (2^m)! halving permutations) that each admissible
// next candidate set is selected with identical frequency.  m <= 3.
bool halving_plan_uniform(int m);

}  // namespace vlkey
