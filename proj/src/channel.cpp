#include "vlkey/channel.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace vlkey {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return splitmix64(master ^ splitmix64(salt + 0x12fa9d7e3c5b8a61ULL));
}

double next_unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  // rejection sampling keeps the draw exactly uniform and portable
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

long long sample_dist(const Dist& d, std::mt19937_64& rng) {
  const double u = next_unit_double(rng);
  double acc = 0.0;
  for (const auto& [label, p] : d.support()) {
    acc += to_double(p);
    if (u < acc) return label;
  }
  return d.support().back().first;
}

namespace {

struct Engine {
  const Party& alice;
  const Party& bob;
  const ProtocolOptions& opts;
  bool use_cache = false;

  // caches for parties without local randomness
  std::unordered_map<std::string, PartyAction> cache_a, cache_b;

  PartyAction call(bool is_alice, long long obs, std::span<const long long> rnd,
                   const Transcript& t) {
    const Party& p = is_alice ? alice : bob;
    if (use_cache && p.memoizable && p.rand_spaces.empty()) {
      std::string key = transcript_key(t);
      key.push_back(':');
      key.append(reinterpret_cast<const char*>(&obs), sizeof(obs));
      auto& cache = is_alice ? cache_a : cache_b;
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      PartyAction act = p.act(obs, rnd, t);
      cache.emplace(std::move(key), act);
      return act;
    }
    return p.act(obs, rnd, t);
  }

  KeyOutcome run(long long x, long long y, std::span<const long long> ra,
                 std::span<const long long> rb) {
    Transcript t;
    int round = 1;
    while (true) {
      if (round > opts.round_cap)
        throw contract_error("protocol exceeded round cap (nontermination?)");
      const bool alice_turn = (round % 2) == 1;
      const long long obs = alice_turn ? x : y;
      PartyAction act = call(alice_turn, obs, alice_turn ? ra : rb, t);
      if (act.stops) {
        PartyAction other =
            call(!alice_turn, alice_turn ? y : x, alice_turn ? rb : ra, t);
        if (!other.stops)
          throw contract_error("one party stopped while the other kept talking");
        if (act.L != other.L)
          throw contract_error("parties disagree on the key length");
        if (act.L < 0 || act.L > 62) throw contract_error("key length out of range");
        const long long cap = 1LL << act.L;
        const long long a = alice_turn ? act.key : other.key;
        const long long b = alice_turn ? other.key : act.key;
        if (a < 1 || a > cap || b < 1 || b > cap)
          throw contract_error("key value outside [1:2^L]");
        return KeyOutcome{std::move(t), act.L, a, b, Rational(0)};
      }
      if (opts.validate && !opts.validate(round, act.msg))
        throw contract_error("undeclared message value at round " +
                             std::to_string(round));
      t.push_back(std::move(act.msg));
      ++round;
    }
  }
};

std::vector<long long> default_sample(const Party& p, std::mt19937_64& rng) {
  if (p.sampler) return p.sampler(rng);
  std::vector<long long> r;
  r.reserve(p.rand_spaces.size());
  for (const auto& d : p.rand_spaces) r.push_back(sample_dist(d, rng));
  return r;
}

void check_prefix_freeness(const KeyLaw& law) {
  std::set<std::string> keys;
  for (const auto& o : law.outcomes) keys.insert(transcript_key(o.w));
  // A transcript key extends another's key iff the transcript extends it,
  // because the encoding is self-delimiting per message.
  for (const auto& o : law.outcomes) {
    Transcript prefix;
    for (std::size_t i = 0; i + 1 < o.w.size(); ++i) {
      prefix.push_back(o.w[i]);
      if (keys.count(transcript_key(prefix)))
        throw contract_error("transcript support is not prefix-unambiguous");
    }
  }
}

}  // namespace

KeyOutcome run_interaction(long long x, long long y,
                           std::span<const long long> rand_a,
                           std::span<const long long> rand_b, const Party& alice,
                           const Party& bob, const ProtocolOptions& opts) {
  Engine eng{alice, bob, opts, false, {}, {}};
  return eng.run(x, y, rand_a, rand_b);
}

KeyLaw enumerate_protocol(const JointSource& source, const Party& alice,
                          const Party& bob, const ProtocolOptions& opts) {
  source.validate();
  if (alice.sampler || bob.sampler) {
    // the declared spaces are still authoritative; the sampler is a
    // Monte-Carlo shortcut and must not be needed here
  }
  std::size_t branches = 0;
  {
    double count = 0;
    for (std::size_t x = 0; x < source.nx(); ++x)
      for (std::size_t y = 0; y < source.ny(); ++y)
        if (source.at(x, y) != 0) count += 1;
    for (const auto& d : alice.rand_spaces) count *= static_cast<double>(d.size());
    for (const auto& d : bob.rand_spaces) count *= static_cast<double>(d.size());
    if (count > static_cast<double>(opts.max_branches))
      throw enumeration_limit_error("enumeration would need " +
                                    std::to_string(count) + " branches");
    branches = static_cast<std::size_t>(count);
  }
  (void)branches;

  Engine eng{alice, bob, opts, true, {}, {}};

  // odometer over the declared randomness spaces of both parties
  const std::size_t na = alice.rand_spaces.size();
  const std::size_t nb = bob.rand_spaces.size();
  std::vector<const Dist*> spaces;
  for (const auto& d : alice.rand_spaces) spaces.push_back(&d);
  for (const auto& d : bob.rand_spaces) spaces.push_back(&d);

  std::unordered_map<std::string, std::size_t> index;
  KeyLaw law;
  std::unordered_map<std::string, long long> l_of_xw, l_of_yw;

  std::vector<std::size_t> idx(spaces.size(), 0);
  std::vector<long long> rnd(spaces.size(), 0);
  for (std::size_t x = 0; x < source.nx(); ++x) {
    for (std::size_t y = 0; y < source.ny(); ++y) {
      const Rational& pxy = source.at(x, y);
      if (pxy == 0) continue;
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        Rational mass = pxy;
        for (std::size_t i = 0; i < spaces.size(); ++i) {
          const auto& [label, pr] = spaces[i]->support()[idx[i]];
          rnd[i] = label;
          mass *= pr;
        }
        KeyOutcome out = eng.run(
            static_cast<long long>(x), static_cast<long long>(y),
            std::span<const long long>(rnd.data(), na),
            std::span<const long long>(rnd.data() + na, nb));
        out.p = mass;

        const std::string wkey = transcript_key(out.w);
        {
          std::string kx = wkey + "#x" + std::to_string(x);
          auto [it, fresh] = l_of_xw.emplace(std::move(kx), out.L);
          if (!fresh && it->second != out.L)
            throw contract_error("L is not a deterministic function of (X, W)");
          std::string ky = wkey + "#y" + std::to_string(y);
          auto [it2, fresh2] = l_of_yw.emplace(std::move(ky), out.L);
          if (!fresh2 && it2->second != out.L)
            throw contract_error("L is not a deterministic function of (Y, W)");
        }

        std::string okey = wkey;
        okey.push_back('|');
        okey.append(reinterpret_cast<const char*>(&out.L), 8);
        okey.append(reinterpret_cast<const char*>(&out.a), 8);
        okey.append(reinterpret_cast<const char*>(&out.b), 8);
        auto [it, fresh] = index.emplace(std::move(okey), law.outcomes.size());
        if (fresh) {
          law.outcomes.push_back(std::move(out));
        } else {
          law.outcomes[it->second].p += out.p;
        }

        // advance odometer
        std::size_t i = 0;
        for (; i < spaces.size(); ++i) {
          if (++idx[i] < spaces[i]->size()) break;
          idx[i] = 0;
        }
        if (i == spaces.size()) break;
        if (spaces.empty()) break;
      }
    }
  }
  law.normalize();
  check_prefix_freeness(law);
  return law;
}

SampleResult sample_protocol(const JointSource& source, const Party& alice,
                             const Party& bob, std::uint64_t seed,
                             std::uint64_t trials, const ProtocolOptions& opts,
                             bool keep_stream) {
  if (trials < 1) throw std::invalid_argument("sample_protocol: trials must be >= 1");
  source.validate();

  // flat cumulative over the joint support for fast (x, y) draws
  std::vector<double> cum;
  std::vector<std::pair<long long, long long>> cells;
  cum.reserve(source.nx() * source.ny());
  double acc = 0.0;
  for (std::size_t x = 0; x < source.nx(); ++x)
    for (std::size_t y = 0; y < source.ny(); ++y) {
      const Rational& p = source.at(x, y);
      if (p == 0) continue;
      acc += to_double(p);
      cum.push_back(acc);
      cells.emplace_back(x, y);
    }

  Engine eng{alice, bob, opts, false, {}, {}};
  std::unordered_map<std::string, std::size_t> index;
  SampleResult result;
  const Rational unit(1, static_cast<long long>(trials));
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    const double u = next_unit_double(rng);
    const std::size_t cell =
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    const auto [x, y] = cells[std::min(cell, cells.size() - 1)];
    const std::vector<long long> ra = default_sample(alice, rng);
    const std::vector<long long> rb = default_sample(bob, rng);
    KeyOutcome out = eng.run(x, y, ra, rb);
    out.p = unit;
    if (keep_stream) result.stream.push_back(out);

    std::string okey = transcript_key(out.w);
    okey.push_back('|');
    okey.append(reinterpret_cast<const char*>(&out.L), 8);
    okey.append(reinterpret_cast<const char*>(&out.a), 8);
    okey.append(reinterpret_cast<const char*>(&out.b), 8);
    auto [it, fresh] = index.emplace(std::move(okey), result.empirical.outcomes.size());
    if (fresh) {
      result.empirical.outcomes.push_back(std::move(out));
    } else {
      result.empirical.outcomes[it->second].p += unit;
    }
  }
  result.empirical.normalize();
  return result;
}

}  // namespace vlkey
