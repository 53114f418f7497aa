#pragma once

#include <map>

#include "vlkey/channel.hpp"
#include "vlkey/distance.hpp"
#include "vlkey/gf2.hpp"

namespace vlkey {

// Product of two independent key laws: A = A1 || A2 (MSB-first), L = L1 + L2,
// transcripts concatenated.
KeyLaw concat_keys(const KeyLaw& k1, const KeyLaw& k2);

// i-th bit (1-based, MSB-first) of a key value a in [1:2^l].
int key_bit(long long a, long long l, long long i);

// Exact per-(l, i) bit-error table and per-l conditional entropies of both
// keys given the transcript.
struct PerBitReport {
  std::map<long long, Rational> p_l;
  std::map<long long, std::vector<Rational>> bit_error;  // index i-1
  std::map<long long, double> entropy_a, entropy_b;
  // exact verdicts of H(A | W, L=l) >= l (1 - 2 eps), filled by check_against
  bool checked = false;
  bool bit_errors_ok = false;
  bool entropies_ok = false;
};

PerBitReport per_bit_guarantees(const KeyLaw& law);

// Verifies the table against a distance bound eps: every bit error <= eps
// and every conditional entropy >= l (1 - 2 eps); entropy side decided by
// exact integer-power comparison when affordable.
void check_per_bit_against(PerBitReport& report, const KeyLaw& law,
                           const Rational& eps);

// MSB-first consecutive t-bit segments of a key value; leftovers discarded.
std::vector<long long> split_segments(long long a, long long L, int t);

// --- fixed-length keys from a stream of variable-length keys ---

struct StreamKey {
  long long L = 0;
  long long a = 1;
  long long b = 1;
};

struct FixedLengthOutcome {
  Word word_a = 0;   // padded bit block at Alice
  Word word_b = 0;   // Bob's block before decoding
  Word decoded = 0;  // Bob's corrected block
  long long key_a = 0, key_b = 0;  // affine coordinates, in [1:2^k]
  int disagreement_weight = 0;
  bool agree = false;
};

// One run of the syndrome construction: pack the first n_code bits of the
// concatenated keys (zero-padded), publish the syndrome, decode to the
// nearest coset element, output affine coordinates under the shared basis.
FixedLengthOutcome syndrome_fixed_length(const std::vector<StreamKey>& keys,
                                         const BinaryCode& code,
                                         const AffineCoords& ac,
                                         const std::vector<Word>& leaders);

// --- repeated-task payoff game ---

struct PayoffGame {
  int t = 1;                       // per-round key bits
  std::vector<long long> actions;  // finite adversary action set
  std::function<double(long long a_seg, long long b_seg, long long v)> payoff;
  double g_min = 0, g_max = 1;
};

PayoffGame guessing_game(int t);

// inf over actions of E[g(C, C, v)] with C uniform; exact finite minimisation.
double game_value_ideal(const PayoffGame& game);

// Strictly causal adversary: sees the transcript and all strictly previous
// segments and own actions.  The interface cannot express consulting the
// current round's keys.
struct Adversary {
  std::string name;
  std::function<long long(const Transcript& w, std::span<const long long> a_hist,
                          std::span<const long long> b_hist,
                          std::span<const long long> v_hist, std::mt19937_64& rng)>
      next;
};

Adversary fixed_guess_adversary(long long v0);
Adversary replay_adversary(long long v0);
Adversary random_adversary(std::vector<long long> actions);

struct GameResult {
  double mean_payoff = 0;
  double std_error = 0;
  double bound = 0;  // ((E[L]+1)/t - 1)(g* - eps (g_max - g_min))
  double g_star = 0;
  double eps = 0;
  double expected_length = 0;
  double mean_rounds = 0;
  bool bound_holds_3sigma = false;
};

GameResult run_payoff_game(const KeyLaw& law, const PayoffGame& game,
                           const Adversary& adversary, std::uint64_t seed,
                           std::uint64_t trials);

}  // namespace vlkey
