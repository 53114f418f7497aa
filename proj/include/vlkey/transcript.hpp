#pragma once

#include <map>
#include <string>
#include <vector>

#include "vlkey/rational.hpp"

namespace vlkey {

// One public-discussion message: a finite discrete payload, or the reserved
// failure symbol.
struct Message {
  std::vector<long long> payload;
  bool failure = false;

  static Message of(long long v) { return Message{{v}, false}; }
  static Message of(std::vector<long long> v) { return Message{std::move(v), false}; }
  static Message fail() { return Message{{}, true}; }

  bool operator==(const Message& o) const = default;
  auto operator<=>(const Message& o) const = default;
};

// Ordered message sequence; senders alternate starting with Alice.
using Transcript = std::vector<Message>;

// Deterministic binary key for hashing/grouping transcripts.
std::string transcript_key(const Transcript& t);

// One realization of a variable-length key scheme with its exact mass.
struct KeyOutcome {
  Transcript w;
  long long L = 0;
  long long a = 1;
  long long b = 1;
  Rational p;
};

// Exact (or empirical, with p = count/trials) joint law of (W, L, A, B).
struct KeyLaw {
  std::vector<KeyOutcome> outcomes;

  // Merge equal (w, L, a, b) entries and sort canonically.
  void normalize();

  Rational total_mass() const;
  Rational expected_length() const;
  Rational prob_length_positive() const;
  Rational prob_disagree() const;                 // P{A != B}
  Rational prob_disagree_with_key() const;        // P{A != B, L > 0}
};

// Product law of two independent keys: transcripts concatenated, lengths
// added, key values concatenated MSB-first.
KeyLaw product_law(const KeyLaw& k1, const KeyLaw& k2);

}  // namespace vlkey
