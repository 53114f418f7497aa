#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlkey/rational.hpp"

namespace vlkey {

// Words are bit vectors of length <= 63, bit j = coordinate j.
using Word = std::uint64_t;

// Binary linear code given by its parity-check matrix ((n-k) x n, full rank);
// the minimum distance is verified by exhaustive weight enumeration.
struct BinaryCode {
  int n = 0;
  int k = 0;
  std::vector<Word> parity;     // n-k rows
  std::vector<Word> generator;  // k rows spanning the code
  int min_distance = 0;         // verified

  Word syndrome(Word v) const;  // n-k bits
};

int gf2_rank(std::vector<Word> rows, int n);
std::vector<Word> gf2_nullspace(const std::vector<Word>& rows, int n);

// Exhaustive minimum weight of the span of `generator` (2^k - 1 combinations).
int exhaustive_min_distance(const std::vector<Word>& generator, int n);

// Standard existence test: sum_{j=0}^{d-2} C(n-1, j) < 2^(n-k).
bool gv_feasible(int n, int k, int d);

// Constructs an [n, k, >=d] code: deterministic repetition/Hamming fallback
// when the parameters match a known family, otherwise greedy random codeword
// accumulation with exhaustive verification; bounded seeded retries.
// Throws on GV-infeasible parameters.  Requires n <= 24.
BinaryCode gv_parity_check(int n, int k, int d, std::uint64_t seed);

// Minimum-weight coset leader per syndrome; ties resolved toward the
// lexicographically smallest error pattern (bit 0 first).
std::vector<Word> coset_leader_table(const BinaryCode& code);

// Shared affine-coordinate basis from the parity-check matrix alone:
// Gaussian elimination chooses pivot columns; free columns (ascending)
// carry the coordinates.
struct AffineCoords {
  int n = 0, k = 0;
  std::vector<int> pivot_cols, free_cols;
  std::vector<Word> rref;       // reduced rows, aligned with pivot_cols
  std::vector<Word> transform;  // T with rref = T * parity (row ops on syndromes)
};

AffineCoords affine_basis(const BinaryCode& code);
Word coords_of(const AffineCoords& ac, Word v);                     // k bits
Word word_from_coords(const AffineCoords& ac, Word coords, Word syndrome);

std::string word_to_bits(Word w, int n);  // row-major bit string
Word bits_to_word(const std::string& s);

}  // namespace vlkey
