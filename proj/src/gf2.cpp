#include "vlkey/gf2.hpp"

#include <algorithm>
#include <bit>

#include "vlkey/channel.hpp"

namespace vlkey {

Word BinaryCode::syndrome(Word v) const {
  Word s = 0;
  for (std::size_t r = 0; r < parity.size(); ++r)
    s |= static_cast<Word>(std::popcount(parity[r] & v) & 1) << r;
  return s;
}

int gf2_rank(std::vector<Word> rows, int n) {
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    const Word bit = Word(1) << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    ++rank;
  }
  return rank;
}

std::vector<Word> gf2_nullspace(const std::vector<Word>& rows, int n) {
  // reduced row echelon, then read a basis of the solution space
  std::vector<Word> rref = rows;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rref.size()); ++col) {
    const Word bit = Word(1) << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rref.size()); ++r)
      if (rref[r] & bit) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rref[rank], rref[pivot]);
    for (int r = 0; r < static_cast<int>(rref.size()); ++r)
      if (r != rank && (rref[r] & bit)) rref[r] ^= rref[rank];
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<Word> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Word v = Word(1) << free;
    for (int r = 0; r < rank; ++r)
      if (rref[r] & (Word(1) << free)) v |= Word(1) << pivot_col[r];
    basis.push_back(v);
  }
  return basis;
}

int exhaustive_min_distance(const std::vector<Word>& generator, int n) {
  (void)n;
  const std::size_t k = generator.size();
  if (k == 0 || k > 24)
    throw std::invalid_argument("exhaustive_min_distance: dimension out of range");
  int best = 1 << 30;
  // Gray-code walk over all nonzero combinations
  Word word = 0;
  for (std::uint64_t i = 1; i < (1ull << k); ++i) {
    word ^= generator[std::countr_zero(i)];
    if (word != 0) best = std::min(best, std::popcount(word));
  }
  return best;
}

bool gv_feasible(int n, int k, int d) {
  if (n < 1 || k < 1 || k > n || d < 1 || d > n) return false;
  BigInt sum = 0, binom = 1;
  for (int j = 0; j <= d - 2; ++j) {
    if (j > 0) binom = binom * (n - j) / j;  // C(n-1, j)
    sum += binom;
  }
  return sum < (BigInt(1) << (n - k));
}

namespace {

BinaryCode finish_code(int n, int k, std::vector<Word> generator) {
  BinaryCode code;
  code.n = n;
  code.k = k;
  code.generator = std::move(generator);
  code.parity = gf2_nullspace(code.generator, n);
  if (static_cast<int>(code.parity.size()) != n - k ||
      gf2_rank(code.parity, n) != n - k)
    throw std::logic_error("gv_parity_check: parity derivation failed");
  code.min_distance = exhaustive_min_distance(code.generator, n);
  return code;
}

bool is_hamming(int n, int k) {
  for (int r = 2; r <= 5; ++r)
    if (n == (1 << r) - 1 && k == n - r) return true;
  return false;
}

}  // namespace

BinaryCode gv_parity_check(int n, int k, int d, std::uint64_t seed) {
  if (n < 2 || n > 24) throw std::invalid_argument("gv_parity_check: need 2 <= n <= 24");
  if (d > n) throw std::invalid_argument("gv_parity_check: d > n is infeasible");
  if (!gv_feasible(n, k, d))
    throw std::invalid_argument("gv_parity_check: (n,k,d) fails the GV condition");

  if (k == 1) {
    // repetition code achieves d = n >= requested
    return finish_code(n, 1, {(Word(1) << n) - 1});
  }
  if (d <= 3 && is_hamming(n, k)) {
    // parity rows are the binary column patterns 1..n
    const int r = n - k;
    std::vector<Word> parity(r, 0);
    for (int col = 0; col < n; ++col) {
      const int pattern = col + 1;
      for (int row = 0; row < r; ++row)
        if (pattern & (1 << row)) parity[row] |= Word(1) << col;
    }
    BinaryCode code;
    code.n = n;
    code.k = k;
    code.parity = parity;
    code.generator = gf2_nullspace(parity, n);
    code.min_distance = exhaustive_min_distance(code.generator, n);
    if (code.min_distance < d) throw std::logic_error("hamming fallback failed");
    return code;
  }

  // greedy random accumulation: extend a partial basis while the span keeps
  // minimum weight >= d
  for (int restart = 0; restart < 64; ++restart) {
    std::mt19937_64 rng(derive_seed(seed, restart));
    std::vector<Word> basis;
    int stall = 0;
    while (static_cast<int>(basis.size()) < k && stall < 4000) {
      const Word cand = next_below(rng, (Word(1) << n) - 1) + 1;
      std::vector<Word> trial = basis;
      trial.push_back(cand);
      if (gf2_rank(trial, n) != static_cast<int>(trial.size())) {
        ++stall;
        continue;
      }
      if (exhaustive_min_distance(trial, n) < d) {
        ++stall;
        continue;
      }
      basis = std::move(trial);
      stall = 0;
    }
    if (static_cast<int>(basis.size()) == k) return finish_code(n, k, basis);
  }
  throw std::runtime_error("gv_parity_check: search failed under feasible parameters");
}

std::vector<Word> coset_leader_table(const BinaryCode& code) {
  const int r = code.n - code.k;
  if (r > 24) throw std::invalid_argument("coset_leader_table: syndrome space too large");
  std::vector<Word> table(Word(1) << r, ~Word(0));
  std::size_t filled = 0;
  const std::size_t want = table.size();
  // enumerate error patterns by weight, lexicographically within a weight
  for (int w = 0; w <= code.n && filled < want; ++w) {
    // first subset of size w in lex order on bit strings b_0 b_1 ...:
    // lexicographically smallest pattern has its ones at the lowest indices
    std::vector<int> pos(w);
    for (int i = 0; i < w; ++i) pos[i] = i;
    while (true) {
      Word e = 0;
      for (int i = 0; i < w; ++i) e |= Word(1) << pos[i];
      const Word s = code.syndrome(e);
      if (table[s] == ~Word(0)) {
        table[s] = e;
        if (++filled == want) break;
      }
      if (w == 0) break;
      // next combination
      int i = w - 1;
      while (i >= 0 && pos[i] == code.n - w + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return table;
}

AffineCoords affine_basis(const BinaryCode& code) {
  AffineCoords ac;
  ac.n = code.n;
  ac.k = code.k;
  const int rows = code.n - code.k;
  ac.rref = code.parity;
  ac.transform.assign(rows, 0);
  for (int r = 0; r < rows; ++r) ac.transform[r] = Word(1) << r;

  int rank = 0;
  for (int col = 0; col < code.n && rank < rows; ++col) {
    const Word bit = Word(1) << col;
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (ac.rref[r] & bit) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(ac.rref[rank], ac.rref[pivot]);
    std::swap(ac.transform[rank], ac.transform[pivot]);
    for (int r = 0; r < rows; ++r)
      if (r != rank && (ac.rref[r] & bit)) {
        ac.rref[r] ^= ac.rref[rank];
        ac.transform[r] ^= ac.transform[rank];
      }
    ac.pivot_cols.push_back(col);
    ++rank;
  }
  if (rank != rows) throw contract_error("affine_basis: parity matrix not full rank");
  std::vector<bool> is_pivot(code.n, false);
  for (int c : ac.pivot_cols) is_pivot[c] = true;
  for (int c = 0; c < code.n; ++c)
    if (!is_pivot[c]) ac.free_cols.push_back(c);
  return ac;
}

Word coords_of(const AffineCoords& ac, Word v) {
  Word out = 0;
  for (std::size_t i = 0; i < ac.free_cols.size(); ++i)
    if (v & (Word(1) << ac.free_cols[i])) out |= Word(1) << i;
  return out;
}

Word word_from_coords(const AffineCoords& ac, Word coords, Word syndrome) {
  Word v = 0;
  for (std::size_t i = 0; i < ac.free_cols.size(); ++i)
    if (coords & (Word(1) << i)) v |= Word(1) << ac.free_cols[i];
  // transformed right-hand side, then back-substitute the pivot bits
  for (std::size_t r = 0; r < ac.rref.size(); ++r) {
    const Word rhs = static_cast<Word>(std::popcount(ac.transform[r] & syndrome) & 1);
    const Word row_dot = static_cast<Word>(std::popcount(ac.rref[r] & v) & 1);
    if ((rhs ^ row_dot) & 1) v |= Word(1) << ac.pivot_cols[r];
  }
  return v;
}

std::string word_to_bits(Word w, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (w & (Word(1) << i)) s[i] = '1';
  return s;
}

Word bits_to_word(const std::string& s) {
  Word w = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '1') w |= Word(1) << i;
  return w;
}

}  // namespace vlkey
