#pragma once

#include <cstdint>
#include <vector>

#include "mixest/empirical.hpp"

namespace mixest {

/// Result of maximizing |sum of entries over a row subset x column subset|.
/// The reported sets witness the value: summing the matrix over
/// argmax_rows x argmax_cols and taking the absolute value recovers it.
struct SupResult {
  double value = 0.0;
  std::vector<std::uint32_t> argmax_rows;
  std::vector<std::uint32_t> argmax_cols;
  bool exact = false;
};

/// Exact maximum of |sum over A x B| over all subset pairs.  Enumerates all
/// subsets of the smaller side; for each, the best complementary subset
/// keeps exactly the indices with positive restricted sums.  Both signs of
/// the matrix are scanned so the absolute value is maximized.  Requires
/// min(rows, cols) <= exact_cap; ties resolve to the first maximizer in
/// enumeration order (subsets by ascending bitmask, original sign first).
SupResult bilinear_sup_exact(const DependenceMatrix& d, int exact_cap = 16);

/// Alternating-ascent lower bound for the same objective.  From a column
/// set, rows with positive restricted sums are kept (zero sums drop the
/// index); then columns are re-chosen against the rows, until a fixed
/// point.  Runs from `restarts` random column sets plus the all-columns
/// start, on the matrix and its negation, and keeps the best value seen,
/// breaking ties toward the earliest start.  Deterministic given the seed;
/// never exceeds the exact maximum.
SupResult bilinear_sup_heuristic(const DependenceMatrix& d, int restarts = 32,
                                 std::uint64_t seed = 0);

/// Half the sum of absolute entries.
double half_abs_sum(const DependenceMatrix& d);

}  // namespace mixest
