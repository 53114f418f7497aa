#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vlkey/rational.hpp"

namespace vlkey {

// Exact finite distribution over integer-labelled outcomes.  Support is kept
// sorted by label so enumeration order is deterministic.
class Dist {
 public:
  Dist() = default;

  // Validates: unique labels, masses nonnegative summing to exactly 1.
  static Dist from_pairs(std::vector<std::pair<long long, Rational>> mass);

  static Dist uniform(long long n);                     // labels 0..n-1
  static Dist point(long long label);
  static Dist bernoulli(const Rational& p_one);         // labels 0,1

  const std::vector<std::pair<long long, Rational>>& support() const { return mass_; }
  Rational mass(long long label) const;
  std::size_t size() const { return mass_.size(); }

 private:
  std::vector<std::pair<long long, Rational>> mass_;  // sorted, masses > 0
};

// Exact joint probability table over two finite alphabets, indexed
// 0..nx-1 and 0..ny-1.
class JointSource {
 public:
  JointSource() = default;
  JointSource(std::size_t nx, std::size_t ny);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  Rational& at(std::size_t x, std::size_t y) { return mass_[x * ny_ + y]; }
  const Rational& at(std::size_t x, std::size_t y) const { return mass_[x * ny_ + y]; }

  // Throws if masses are negative or do not sum to exactly 1.
  void validate() const;

  Dist marginal_x() const;
  Dist marginal_y() const;

  // Exact product test: p(x,y) == p(x) p(y) everywhere.
  bool factorizes() const;

 private:
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<Rational> mass_;
};

// H(d) in bits, 0 log 0 := 0.
double entropy(const Dist& d);

// Entropy of an unnormalised nonnegative vector after normalisation.
double entropy_of_weights(const std::vector<Rational>& w);
double entropy_of_weights(const std::vector<double>& w);

// H_b(p); rejects p outside [0,1].
double binary_entropy(double p);

// I(X;Y) = H(X) + H(Y) - H(X,Y), exact table arithmetic, log in double.
double mutual_information(const JointSource& s);

// Exact half-L1 distance over the union support.
Rational tv_distance(const Dist& p, const Dist& q);

// Merge x-symbols under a surjection onto 0..k-1 (for data-processing checks).
JointSource coarsen_x(const JointSource& s, const std::vector<long long>& image,
                      std::size_t k);

// Exact check that I(X;Y) >= I(g(X);Y), via integer power comparison.
bool coarsening_never_gains(const JointSource& fine,
                            const std::vector<long long>& image, std::size_t k);

// Exact check that I(X;Y) >= 0 with equality iff the law factorizes.
bool mutual_information_nonnegative_exact(const JointSource& s);

}  // namespace vlkey
