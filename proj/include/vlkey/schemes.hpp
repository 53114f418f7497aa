#pragma once

#include "vlkey/channel.hpp"

namespace vlkey {

// X ~ Unif[0:2^m), and Y = X with probability 1/8, otherwise Y is a fresh
// uniform symbol (so Y may still collide with X).
JointSource matched_pair_source(int m);

// X ~ Unif[0:2^m); Y = X with probability 1-eps, else the erasure symbol,
// which is the extra y-label 2^m.
JointSource erasure_pair_source(int m, const Rational& eps);

// X = Y ~ Unif[0:n).
JointSource identity_source(long long n);

struct PrefixSchemeConfig {
  int m = 0;  // source bit-width
  int t = 0;  // prefix bits exchanged
};

// Both parties publish their t-bit prefix; on match the remaining m-t bits
// (most-significant-first) become the key, otherwise L = 0.
std::pair<Party, Party> prefix_matching_scheme(const PrefixSchemeConfig& cfg);
ProtocolOptions prefix_scheme_options(const PrefixSchemeConfig& cfg);

// Alice outputs her full m-bit symbol; Bob copies Y when it is not the
// erasure symbol and otherwise outputs a fresh uniform m-bit value.  No
// public discussion; L = m always.
std::pair<Party, Party> erasure_scheme(int m, const Rational& eps);

// Numerical minimisation of
//   max{1/2 - ab, 0} + max{1/2 - (1-a)(1-b), 0}
// over the unit square; the inner minimum is sqrt(2)-1 and the headline
// constant subtracts 1/4.
struct GapConstant {
  double alpha = 0, beta = 0;
  double inner_min = 0;
  double headline = 0;
};
GapConstant fixed_length_gap_constant(double grid = 1e-4);
double gap_objective(double alpha, double beta);
// Restricted search along alpha == beta (independent 1-D oracle path).
double gap_min_diagonal(double grid = 1e-4);

}  // namespace vlkey
