#pragma once

#include <utility>
#include <vector>

#include "vlkey/rational.hpp"

namespace vlkey {

// Tri-state result of an exact comparison that may decline (size budget).
enum class LogCmp { less, equal, greater, undecided };

// Exact sign of  sum_i w_i * log2(r_i)  -  bound,  where all w_i >= 0 and
// r_i > 0 are rational.  Decided by integer power comparison; declines with
// `undecided` when the intermediate products would exceed `max_bits`.
LogCmp compare_weighted_log(const std::vector<std::pair<Rational, Rational>>& terms,
                            const Rational& bound, std::size_t max_bits = 40000000);

// Convenience: true if sum w_i log2 r_i >= bound, decided exactly when
// possible, by double arithmetic with `tol` otherwise.
bool weighted_log_at_least(const std::vector<std::pair<Rational, Rational>>& terms,
                           const Rational& bound, double tol = 1e-9);

// Exact floor(-log2(p)/delta) for rational delta in (0,1] and p in (0,1].
long long level_index(const Rational& p, const Rational& delta);

// floor(-log2(p)/delta) for delta = (2/5) eps' log2(e).  Equivalent to
// floor((5/(2 eps')) * ln(1/p)); evaluated in extended precision with a
// 1e-12 snap-to-integer guard before flooring.
long long level_index_nats(const Rational& p, const Rational& eps_prime);

}  // namespace vlkey
