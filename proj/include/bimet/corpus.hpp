#pragma once

#include "bimet/fingen.hpp"
#include "bimet/fraisse.hpp"
#include "bimet/graev.hpp"

#include <cstdint>

namespace bimet {

// Seeded sample objects shared by the acceptance suite and the tests. Draws use raw
// mt19937_64 output so the corpus is identical across standard libraries.

// 1..3 points plus the basepoint; shortest-path closure of random values p/q, q <= 4.
PointedSpace random_space(std::uint64_t seed);

// Rank 1 or 2, |A| = 5, unbounded, tightened (always validates).
FinGenMetric random_table(std::uint64_t seed);

// Generators of the given rank plus, on odd seeds, one word of length 2; values in
// (0, K] with denominators <= max_den; tightened.
FinGenMetric random_bounded_table(std::uint64_t seed, int rank, const Rational& K = Rational(1),
                                  std::int64_t max_den = 4);

// Support of 1..max_support distinct nonidentity words from W_2 of m's rank, values
// in [1/4, 1] with denominators <= 4, redrawn until the Katetov inequalities hold.
KatetovMap random_katetov(const FinGenMetric& m, std::uint64_t seed, std::size_t max_support = 3);

} // namespace bimet
