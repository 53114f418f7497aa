#pragma once

#include <map>
#include <string>
#include <vector>

#include "vlkey/converter.hpp"
#include "vlkey/dist.hpp"
#include "vlkey/distance.hpp"

namespace vlkey {

struct BoundReport {
  std::string name;
  std::map<std::string, double> inputs;
  double bound = 0;
  double measured = 0;
  bool is_lower = false;  // lower bounds on the measured quantity
  bool satisfied = false;
  double slack = 0;
  bool advisory = false;  // reported but not binding (unverifiable premise)
};

// Closed-form bounds on the maximal expected key length in terms of the
// mutual information I and the distance budget eps:
//   lower: I - 3 log2(I+1) - 2 log2(1/eps) - 15
//   upper: (1-eps)^-1 (I + log2 3 + 1)
std::pair<double, double> expected_length_bounds_from_mi(double I, double eps);

// The two parameterised regimes eps = I^-lambda (regime 1, lambda >= 1,
// I >= 2) and eps = 2^(-nu I) (regime 2, nu > 0, I >= 1/nu).
std::pair<double, double> expected_length_bounds_regime(double I, int regime,
                                                        double param);

// Bounds on the maximal expected key length in terms of the coinciding
// entropy (an achievable proxy stands in for the supremum):
//   lower: h - log2(h+1) - 2 log2(1/eps) - 7.082
//   upper: (1-eps)^-1 (h + log2 3), valid only if h dominates the supremum.
std::pair<double, double> expected_length_bounds_from_heq(double h_eq, double eps);

// Bounds on the maximal coinciding entropy in terms of I:
//   lower: I - 2 log2(I+1) - 7.034;  upper: I + 1.
std::pair<double, double> coinciding_entropy_bounds_from_mi(double I);

// Measures a finished scheme law against the closed-form bounds.
std::vector<BoundReport> audit_scheme(const JointSource& source, const KeyLaw& law);

// Converter-output checks (distance target, length lower bound, error control).
std::vector<BoundReport> audit_converter(const ConverterOutput& out,
                                         const Rational& eps_prime);

double bound_check_tolerance();  // 1e-9 absolute, double-mode checks

}  // namespace vlkey
