#include "vlkey/verifier.hpp"

#include <cmath>

namespace vlkey {

double bound_check_tolerance() { return 1e-9; }

std::pair<double, double> expected_length_bounds_from_mi(double I, double eps) {
  if (!(I >= 0) || !std::isfinite(I))
    throw std::domain_error("bounds: I must be finite and nonnegative");
  if (!(eps > 0 && eps < 1)) throw std::domain_error("bounds: eps must be in (0,1)");
  const double lower = I - 3 * std::log2(I + 1) - 2 * std::log2(1 / eps) - 15;
  const double upper = (I + std::log2(3.0) + 1) / (1 - eps);
  return {lower, upper};
}

std::pair<double, double> expected_length_bounds_regime(double I, int regime,
                                                        double param) {
  if (!(I >= 0) || !std::isfinite(I))
    throw std::domain_error("bounds: I must be finite and nonnegative");
  if (regime == 1) {
    const double lambda = param;
    if (!(lambda >= 1) || !(I >= 2))
      throw std::domain_error("regime 1 requires lambda >= 1 and I >= 2");
    return {I - (3 + 2 * lambda) * std::log2(I + 1) - 15, I + 8};
  }
  if (regime == 2) {
    const double nu = param;
    if (!(nu > 0) || !(I >= 1 / nu))
      throw std::domain_error("regime 2 requires nu > 0 and I >= 1/nu");
    return {(1 - 2 * nu) * I - 3 * std::log2(I + 1) - 15, I + 1 / nu + 6};
  }
  throw std::domain_error("bounds: regime must be 1 or 2");
}

std::pair<double, double> expected_length_bounds_from_heq(double h_eq, double eps) {
  if (!(h_eq >= 0)) throw std::domain_error("bounds: h_eq must be nonnegative");
  if (!(eps > 0 && eps < 1)) throw std::domain_error("bounds: eps must be in (0,1)");
  const double lower =
      h_eq - std::log2(h_eq + 1) - 2 * std::log2(1 / eps) - 7.082;
  const double upper = (h_eq + std::log2(3.0)) / (1 - eps);
  return {lower, upper};
}

std::pair<double, double> coinciding_entropy_bounds_from_mi(double I) {
  if (!(I >= 0) || !std::isfinite(I))
    throw std::domain_error("bounds: I must be finite and nonnegative");
  return {I - 2 * std::log2(I + 1) - 7.034, I + 1};
}

std::vector<BoundReport> audit_scheme(const JointSource& source, const KeyLaw& law) {
  std::vector<BoundReport> reports;
  const double I = mutual_information(source);
  const IdealDistance dist = distance_from_ideal(law);
  const double eps = to_double(dist.sup);
  const double e_L = to_double(law.expected_length());

  {
    // achievability-side consistency: E[L] <= L* <= upper bound at measured eps
    BoundReport r;
    r.name = "expected_length_upper_from_mi";
    r.inputs = {{"I", I}, {"eps", eps}, {"E_L", e_L}};
    const double eps_eff = std::min(eps, 1 - 1e-12);
    r.bound = (I + std::log2(3.0) + 1) / (1 - eps_eff);
    r.measured = e_L;
    r.is_lower = false;
    r.slack = r.bound - r.measured;
    r.satisfied = r.slack >= -bound_check_tolerance();
    reports.push_back(r);
  }
  {
    // the lower bound is a statement about the optimum, not this scheme;
    // reported for context
    BoundReport r;
    r.name = "optimal_length_lower_from_mi";
    r.inputs = {{"I", I}, {"eps", std::max(eps, 1e-12)}};
    r.bound = expected_length_bounds_from_mi(I, std::max(eps, 1e-12)).first;
    r.measured = e_L;
    r.is_lower = true;
    r.slack = r.measured - r.bound;
    r.satisfied = true;
    r.advisory = true;
    reports.push_back(r);
  }
  return reports;
}

std::vector<BoundReport> audit_converter(const ConverterOutput& out,
                                         const Rational& eps_prime) {
  std::vector<BoundReport> reports;
  const double epsp = to_double(eps_prime);
  {
    BoundReport r;
    r.name = "converter_distance";
    r.inputs = {{"eps_prime", epsp}};
    r.bound = epsp;
    r.measured = to_double(out.distance.sup);
    r.is_lower = false;
    r.slack = r.bound - r.measured;
    r.satisfied = out.distance.sup <= eps_prime;
    reports.push_back(r);
  }
  {
    BoundReport r;
    r.name = "converter_length_lower";
    r.inputs = {{"h_eq", out.h_eq_input}, {"eps_prime", epsp}};
    r.bound = out.length_lower_bound;
    r.measured = to_double(out.expected_length);
    r.is_lower = true;
    r.slack = r.measured - r.bound;
    r.satisfied = r.slack >= -bound_check_tolerance();
    reports.push_back(r);
  }
  {
    BoundReport r;
    r.name = "converter_error_control";
    r.inputs = {{"eps_prime", epsp}};
    r.bound = epsp * to_double(out.law.prob_length_positive());
    r.measured = to_double(out.law.prob_disagree_with_key());
    r.is_lower = false;
    r.slack = r.bound - r.measured;
    r.satisfied = out.error_bound_satisfied;
    reports.push_back(r);
  }
  return reports;
}

}  // namespace vlkey
