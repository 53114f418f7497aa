#pragma once

#include <random>
#include <vector>

#include "vlkey/channel.hpp"
#include "vlkey/dist.hpp"

namespace vlkey::testutil {

// Random distribution with masses k_i / D over a power-of-two denominator,
// so downstream exact log comparisons stay small.
inline Dist random_dist(std::mt19937_64& rng, int max_support = 8, int denom_bits = 8) {
  const long long D = 1LL << denom_bits;
  const int support = 2 + static_cast<int>(next_below(rng, max_support - 1));
  std::vector<long long> cuts{0, D};
  for (int i = 0; i < support - 1; ++i)
    cuts.push_back(1 + static_cast<long long>(next_below(rng, D - 1)));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<long long, Rational>> mass;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const long long w = cuts[i + 1] - cuts[i];
    if (w > 0) mass.emplace_back(static_cast<long long>(mass.size()), Rational(w, D));
  }
  return Dist::from_pairs(std::move(mass));
}

inline JointSource random_source(std::mt19937_64& rng, int max_n = 5,
                                 int denom_bits = 7) {
  const std::size_t nx = 2 + next_below(rng, max_n - 1);
  const std::size_t ny = 2 + next_below(rng, max_n - 1);
  const long long D = 1LL << denom_bits;
  std::vector<long long> cuts{0, D};
  for (std::size_t i = 0; i < nx * ny - 1; ++i)
    cuts.push_back(static_cast<long long>(next_below(rng, D + 1)));
  std::sort(cuts.begin(), cuts.end());
  JointSource s(nx, ny);
  std::size_t cell = 0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y, ++cell)
      s.at(x, y) = Rational(cuts[cell + 1] - cuts[cell], D);
  s.validate();
  return s;
}

}  // namespace vlkey::testutil
