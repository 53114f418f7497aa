#pragma once

#include <map>

#include "vlkey/transcript.hpp"

namespace vlkey {

// Per-length breakdown of the distance from the ideal distribution:
// for each l with P(L=l) > 0, the exact TV distance between the conditional
// law of (A, B, W) and the law where A = B is uniform on [1:2^l] and
// independent of W.  `sup` is the maximum over l.
struct IdealDistance {
  Rational sup;
  std::map<long long, Rational> per_l;
  std::map<long long, Rational> p_l;  // P(L = l)
};

// Throws contract_error if any outcome has a or b outside [1:2^L].
IdealDistance distance_from_ideal(const KeyLaw& law);

}  // namespace vlkey
