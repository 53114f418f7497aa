#include "vlkey/distance.hpp"

#include <string>
#include <unordered_map>

namespace vlkey {

IdealDistance distance_from_ideal(const KeyLaw& law) {
  // Group outcomes by length.
  std::map<long long, std::vector<const KeyOutcome*>> by_l;
  for (const auto& o : law.outcomes) {
    if (o.L < 0 || o.L > 62) throw contract_error("distance_from_ideal: bad length");
    const long long cap = 1LL << o.L;
    if (o.a < 1 || o.a > cap || o.b < 1 || o.b > cap)
      throw contract_error("distance_from_ideal: key outside [1:2^L]");
    if (o.p == 0) continue;
    by_l[o.L].push_back(&o);
  }

  IdealDistance result;
  result.sup = 0;
  for (const auto& [l, group] : by_l) {
    Rational p_l = 0;
    std::unordered_map<std::string, Rational> p_w;  // transcript mass within L=l
    for (const auto* o : group) {
      p_l += o->p;
      p_w[transcript_key(o->w)] += o->p;
    }
    // d_TV(p, q) = sum over the actual support of max(p - q, 0); the ideal
    // law q places mass 2^-l * p(w | L=l) on each diagonal (a, a, w).
    const Rational unif = pow2(-l);
    Rational tv = 0;
    for (const auto* o : group) {
      const Rational p_cond = o->p / p_l;
      Rational q_cond = 0;
      if (o->a == o->b) q_cond = unif * (p_w[transcript_key(o->w)] / p_l);
      if (p_cond > q_cond) tv += p_cond - q_cond;
    }
    result.per_l[l] = tv;
    result.p_l[l] = p_l;
    if (tv > result.sup) result.sup = tv;
  }
  return result;
}

}  // namespace vlkey
