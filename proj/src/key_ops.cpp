#include "vlkey/key_ops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "vlkey/exact_log.hpp"

namespace vlkey {

KeyLaw concat_keys(const KeyLaw& k1, const KeyLaw& k2) { return product_law(k1, k2); }

int key_bit(long long a, long long l, long long i) {
  if (i < 1 || i > l) throw std::invalid_argument("key_bit: index out of range");
  return static_cast<int>(((a - 1) >> (l - i)) & 1);
}

PerBitReport per_bit_guarantees(const KeyLaw& law) {
  PerBitReport report;
  std::map<long long, std::vector<const KeyOutcome*>> by_l;
  for (const auto& o : law.outcomes)
    if (o.p != 0) by_l[o.L].push_back(&o);

  for (const auto& [l, group] : by_l) {
    Rational p_l = 0;
    for (const auto* o : group) p_l += o->p;
    report.p_l[l] = p_l;
    if (l == 0) continue;  // empty tables for keyless outcomes

    std::vector<Rational> bits(l, Rational(0));
    for (const auto* o : group)
      for (long long i = 1; i <= l; ++i)
        if (key_bit(o->a, l, i) != key_bit(o->b, l, i)) bits[i - 1] += o->p;
    for (auto& v : bits) v /= p_l;
    report.bit_error[l] = std::move(bits);

    // H(A | W, L=l) and H(B | W, L=l), per transcript then averaged
    std::unordered_map<std::string, std::unordered_map<long long, Rational>> wa, wb;
    std::unordered_map<std::string, Rational> wmass;
    for (const auto* o : group) {
      const std::string key = transcript_key(o->w);
      wa[key][o->a] += o->p;
      wb[key][o->b] += o->p;
      wmass[key] += o->p;
    }
    double ha = 0, hb = 0;
    for (const auto& [key, mass] : wmass) {
      std::vector<Rational> va, vb;
      for (const auto& [a, p] : wa[key]) va.push_back(p);
      for (const auto& [b, p] : wb[key]) vb.push_back(p);
      const double wshare = to_double(mass / p_l);
      ha += wshare * entropy_of_weights(va);
      hb += wshare * entropy_of_weights(vb);
    }
    report.entropy_a[l] = ha;
    report.entropy_b[l] = hb;
  }
  return report;
}

void check_per_bit_against(PerBitReport& report, const KeyLaw& law,
                           const Rational& eps) {
  report.checked = true;
  report.bit_errors_ok = true;
  for (const auto& [l, bits] : report.bit_error)
    for (const auto& v : bits)
      if (v > eps) report.bit_errors_ok = false;

  // entropy side: sum_w p(w|l) H(A | w, l) >= l (1 - 2 eps); assemble the
  // weighted-log terms exactly from the conditional masses
  report.entropies_ok = true;
  std::map<long long, std::vector<const KeyOutcome*>> by_l;
  for (const auto& o : law.outcomes)
    if (o.p != 0 && o.L > 0) by_l[o.L].push_back(&o);
  for (const auto& [l, group] : by_l) {
    Rational p_l = 0;
    for (const auto* o : group) p_l += o->p;
    const Rational bound = Rational(l) * (1 - 2 * eps);
    if (bound <= 0) continue;
    for (int side = 0; side < 2; ++side) {
      std::unordered_map<std::string, std::unordered_map<long long, Rational>> per_w;
      std::unordered_map<std::string, Rational> wmass;
      for (const auto* o : group) {
        const std::string key = transcript_key(o->w);
        per_w[key][side == 0 ? o->a : o->b] += o->p;
        wmass[key] += o->p;
      }
      // sum over w, a of  p(w|l) p(a|w,l) log2( 1 / p(a|w,l) )
      std::vector<std::pair<Rational, Rational>> terms;
      for (const auto& [key, m] : per_w) {
        const Rational& mw = wmass[key];
        for (const auto& [a, p] : m) {
          (void)a;
          const Rational cond = p / mw;
          terms.emplace_back((mw / p_l) * cond, 1 / cond);
        }
      }
      if (!weighted_log_at_least(terms, bound)) report.entropies_ok = false;
    }
  }
}

std::vector<long long> split_segments(long long a, long long L, int t) {
  if (t < 1) throw std::invalid_argument("split_segments: t must be >= 1");
  const long long m = L / t;
  std::vector<long long> segs;
  segs.reserve(m);
  const long long bits = a - 1;
  for (long long i = 0; i < m; ++i) {
    const long long shift = L - (i + 1) * t;
    segs.push_back(((bits >> shift) & ((1LL << t) - 1)) + 1);
  }
  return segs;
}

FixedLengthOutcome syndrome_fixed_length(const std::vector<StreamKey>& keys,
                                         const BinaryCode& code,
                                         const AffineCoords& ac,
                                         const std::vector<Word>& leaders) {
  FixedLengthOutcome out;
  // pack the first n bits of A_1 || A_2 || ... (zero-padded)
  int pos = 0;
  for (const auto& key : keys) {
    for (long long i = 1; i <= key.L && pos < code.n; ++i, ++pos) {
      if (key_bit(key.a, key.L, i)) out.word_a |= Word(1) << pos;
      if (key_bit(key.b, key.L, i)) out.word_b |= Word(1) << pos;
    }
    if (pos >= code.n) break;
  }
  out.disagreement_weight = std::popcount(out.word_a ^ out.word_b);

  const Word syn_a = code.syndrome(out.word_a);  // Alice's public message
  const Word diff = code.syndrome(out.word_b) ^ syn_a;
  const Word leader = leaders[diff];
  out.decoded = out.word_b ^ leader;

  out.key_a = static_cast<long long>(coords_of(ac, out.word_a)) + 1;
  out.key_b = static_cast<long long>(coords_of(ac, out.decoded)) + 1;
  out.agree = out.key_a == out.key_b;
  return out;
}

PayoffGame guessing_game(int t) {
  PayoffGame game;
  game.t = t;
  const long long n = 1LL << t;
  for (long long v = 1; v <= n; ++v) game.actions.push_back(v);
  game.payoff = [](long long a, long long, long long v) { return a == v ? 1.0 : 0.0; };
  game.g_min = 0;
  game.g_max = 1;
  return game;
}

double game_value_ideal(const PayoffGame& game) {
  const long long n = 1LL << game.t;
  double best = 1e300;
  for (long long v : game.actions) {
    double acc = 0;
    for (long long c = 1; c <= n; ++c) acc += game.payoff(c, c, v);
    best = std::min(best, acc / static_cast<double>(n));
  }
  return best;
}

Adversary fixed_guess_adversary(long long v0) {
  return {"fixed", [v0](const Transcript&, std::span<const long long>,
                        std::span<const long long>, std::span<const long long>,
                        std::mt19937_64&) { return v0; }};
}

Adversary replay_adversary(long long v0) {
  return {"replay", [v0](const Transcript&, std::span<const long long> a_hist,
                         std::span<const long long>, std::span<const long long>,
                         std::mt19937_64&) {
            return a_hist.empty() ? v0 : a_hist.back();
          }};
}

Adversary random_adversary(std::vector<long long> actions) {
  return {"random", [actions](const Transcript&, std::span<const long long>,
                              std::span<const long long>, std::span<const long long>,
                              std::mt19937_64& rng) {
            return actions[next_below(rng, actions.size())];
          }};
}

GameResult run_payoff_game(const KeyLaw& law, const PayoffGame& game,
                           const Adversary& adversary, std::uint64_t seed,
                           std::uint64_t trials) {
  if (trials < 1) throw std::invalid_argument("run_payoff_game: trials >= 1");
  GameResult result;
  result.g_star = game_value_ideal(game);
  const IdealDistance dist = distance_from_ideal(law);
  result.eps = to_double(dist.sup);
  result.expected_length = to_double(law.expected_length());
  result.bound = ((result.expected_length + 1) / game.t - 1) *
                 (result.g_star - result.eps * (game.g_max - game.g_min));

  // cumulative over outcomes for sampling
  std::vector<double> cum;
  cum.reserve(law.outcomes.size());
  double acc = 0;
  for (const auto& o : law.outcomes) {
    acc += to_double(o.p);
    cum.push_back(acc);
  }

  double sum = 0, sq = 0, rounds = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(derive_seed(seed, trial));
    const double u = next_unit_double(rng);
    const std::size_t idx = std::min<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin(),
        law.outcomes.size() - 1);
    const KeyOutcome& o = law.outcomes[idx];
    const std::vector<long long> segs_a = split_segments(o.a, o.L, game.t);
    const std::vector<long long> segs_b = split_segments(o.b, o.L, game.t);
    std::vector<long long> v_hist;
    double total = 0;
    for (std::size_t i = 0; i < segs_a.size(); ++i) {
      const long long v = adversary.next(o.w, std::span(segs_a.data(), i),
                                         std::span(segs_b.data(), i), v_hist, rng);
      v_hist.push_back(v);
      total += game.payoff(segs_a[i], segs_b[i], v);
    }
    rounds += static_cast<double>(segs_a.size());
    sum += total;
    sq += total * total;
  }
  result.mean_payoff = sum / trials;
  result.mean_rounds = rounds / trials;
  if (trials > 1) {
    const double var = (sq - sum * sum / trials) / (trials - 1);
    result.std_error = std::sqrt(std::max(var, 0.0) / trials);
  }
  result.bound_holds_3sigma =
      result.mean_payoff >= result.bound - 3 * result.std_error - 1e-12;
  return result;
}

}  // namespace vlkey
