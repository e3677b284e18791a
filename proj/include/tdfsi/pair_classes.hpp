// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_PAIR_CLASSES_HPP
#define TDFSI_PAIR_CLASSES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "tdfsi/quadrature.hpp"

namespace tdfsi
{

// Ordered triangle pairs that are congruent under a signed axis permutation
// plus a translation (optionally with X and Y exchanged) have identical shell
// moments up to a relabelling of the hats.
struct PairKey
{
  std::array<std::int64_t, 24> k{};
  bool operator==(const PairKey &o) const { return k == o.k; }
};

struct PairKeyHash
{
  std::size_t operator()(const PairKey &p) const;
};

struct CanonicalPair
{
  PairKey key;
  // Representative pair in canonical position; vertex order sorted.
  Triangle rep_x, rep_y;
  // rep_x vertex i is vertex perm_x[i] of the original X (or of Y when swapped).
  std::array<int, 3> perm_x{}, perm_y{};
  bool swapped = false;
};

CanonicalPair canonicalize_pair(const Triangle &x, const Triangle &y, double quantum,
                                bool allow_swap = true);

// Moments of the original pair from the representative's moments.
ShellMoments map_moments(const ShellMoments &rep, const CanonicalPair &c);

}  // namespace tdfsi

#endif  // TDFSI_PAIR_CLASSES_HPP
