#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>

#include "vlkey/dist.hpp"
#include "vlkey/transcript.hpp"

namespace vlkey {

// What a party does at its turn: send the next message, or stop and output
// (L, key).  Once one party stops, the other is asked to stop on the same
// transcript; disagreement on L is a contract violation.
struct PartyAction {
  bool stops = false;
  Message msg;
  long long L = 0;
  long long key = 1;

  static PartyAction send(Message m) { return {false, std::move(m), 0, 1}; }
  static PartyAction stop(long long L, long long key) { return {true, {}, L, key}; }
};

// A party is a deterministic function of (observation, local randomness,
// transcript-so-far).  Local randomness is a list of declared independent
// finite draws, so exact enumeration is possible; `sampler` may override the
// default per-space sampling when the declared spaces are too large to walk
// (Monte Carlo only).
struct Party {
  std::vector<Dist> rand_spaces;
  std::function<PartyAction(long long obs, std::span<const long long> rnd,
                            const Transcript& t)>
      act;
  std::function<std::vector<long long>(std::mt19937_64&)> sampler;  // optional
  bool memoizable = false;  // safe to cache on (obs, transcript) when no randomness
};

struct ProtocolOptions {
  int round_cap = 64;
  std::size_t max_branches = 10'000'000;
  // Declared per-round message check; round is 1-based. Unset = accept all.
  std::function<bool(int round, const Message&)> validate;
};

// Runs one interaction to completion; used by both execution modes.
KeyOutcome run_interaction(long long x, long long y,
                           std::span<const long long> rand_a,
                           std::span<const long long> rand_b, const Party& alice,
                           const Party& bob, const ProtocolOptions& opts);

// Exhaustive branch enumeration weighted by source mass and declared
// local-randomness mass.  Checks, per branch, that both parties agree on L,
// that L is a deterministic function of (own observation, transcript), and
// that no transcript in the support is a strict prefix of another.
KeyLaw enumerate_protocol(const JointSource& source, const Party& alice,
                          const Party& bob, const ProtocolOptions& opts = {});

struct SampleResult {
  KeyLaw empirical;                 // masses are exact counts/trials
  std::vector<KeyOutcome> stream;   // per-trial outcomes when requested
};

// Reproducible Monte Carlo: trial i derives its randomness from (seed, i)
// only, so identical seeds give byte-identical outcome streams.
SampleResult sample_protocol(const JointSource& source, const Party& alice,
                             const Party& bob, std::uint64_t seed,
                             std::uint64_t trials, const ProtocolOptions& opts = {},
                             bool keep_stream = false);

// Seed derivation and portable sampling helpers.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt);
double next_unit_double(std::mt19937_64& rng);           // in [0,1)
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n);
long long sample_dist(const Dist& d, std::mt19937_64& rng);

}  // namespace vlkey
