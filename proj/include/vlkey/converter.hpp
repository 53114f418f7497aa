#pragma once

#include <functional>
#include <map>

#include "vlkey/dist.hpp"
#include "vlkey/distance.hpp"
#include "vlkey/entropy_model.hpp"

namespace vlkey {

// Quantised log-probability level: l(k) = floor(-log2(p(k)) / delta).
using LevelFn = std::function<long long(const Rational& p)>;
LevelFn make_level_fn(const Rational& delta);             // exact, rational delta
LevelFn make_level_fn_eps_prime(const Rational& eps_prime);  // delta = (2/5) eps' log2 e

// Group keys by level, then cut each level class into power-of-two chunks
// (binary decomposition, descending sizes, probability-descending order,
// ties broken by key order).  Returns the chunks in construction order.
std::vector<std::vector<long long>> build_level_partition(const Dist& cond_law,
                                                          const LevelFn& level);
std::vector<std::vector<long long>> build_level_partition(const Dist& cond_law,
                                                          const Rational& delta);

// m_i = max{ floor(log2(eps rho_i |S_i|)), 0 }, exactly.
long long choose_block_length(const Rational& eps, const Rational& rho,
                              long long size);

// Restriction of the joint key law to one subset: masses indexed by (kA, kB),
// conditioned on both keys lying in the subset.
using RestrictedJoint = std::map<std::pair<long long, long long>, Rational>;

struct SubblockResult {
  std::vector<std::vector<long long>> blocks;
  Rational achieved_error;  // P{K_A != K_B | some block holds both}
  bool satisfied = false;
  bool exhaustive = false;
};

// Finds an equal-size-2^m_i partition of `subset` meeting the conditional
// error bound: exhaustive search when the partition count is small, seeded
// random draws otherwise.  Falls back to best-found when the budget runs out.
SubblockResult find_subblock_partition(const RestrictedJoint& joint,
                                       const std::vector<long long>& subset,
                                       long long m_i, const Rational& eps,
                                       std::uint64_t seed);

struct SubsetPlan {
  std::vector<long long> keys;  // probability-descending order
  long long level = 0;
  Rational rho;
  long long block_bits = 0;  // m_i
  std::vector<std::vector<long long>> blocks;
  Rational achieved_error;
  bool error_bound_met = false;
};

// The two-layer partition for one conditional law.
struct PartitionPlan {
  Rational eps;
  std::vector<SubsetPlan> subsets;
  std::map<long long, std::pair<std::size_t, std::size_t>> index;  // k -> (i, j)
  std::map<long long, long long> level_of;
  std::map<long long, long long> level_class_size;
};

PartitionPlan build_partition_plan(const Dist& cond_eq, const RestrictedJoint& joint,
                                   const Rational& eps, const LevelFn& level,
                                   std::uint64_t seed);

// Exact check of the grouping bound:
//   E[log2 |S_{c(K)}|] >= E[log2 |level class of K|] - 2 under cond_eq.
bool check_grouping_bound(const PartitionPlan& plan, const Dist& cond_eq);

struct ConverterOutput {
  KeyLaw law;
  Rational expected_length;
  IdealDistance distance;
  double h_eq_input = 0;        // P{K_A=K_B} H(K_A | W, K_A=K_B) of the input
  double length_lower_bound = 0;  // h - log2(h+1) - 2 log2(1/eps') - 7.082
  bool length_bound_satisfied = false;
  bool error_bound_satisfied = false;  // P{A != B, L > 0} <= eps' P{L > 0}
  bool all_partitions_ok = true;
  std::map<std::string, PartitionPlan> plans;  // by transcript key
};

// The coinciding-entropy-to-secret-key conversion: per prior transcript,
// both parties announce (subset, block) or the failure symbol, matching
// announcements yield the in-block index as the key.
ConverterOutput convert(const EntropyModelKeys& keys, const Rational& eps_prime,
                        std::uint64_t seed);

}  // namespace vlkey
