#include "mixest/solver.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>
#include <string>

namespace mixest {

namespace {

// Orientation helper: presents the matrix with a chosen side as "columns"
// so the exact enumeration always walks the smaller side.
struct View {
  const DependenceMatrix* d;
  bool transposed;

  std::size_t rows() const { return transposed ? d->cols() : d->rows(); }
  std::size_t cols() const { return transposed ? d->rows() : d->cols(); }
  double at(std::size_t r, std::size_t c) const {
    return transposed ? d->at(c, r) : d->at(r, c);
  }
};

std::vector<std::uint32_t> mask_bits(std::uint32_t mask) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t b = 0; mask != 0; ++b, mask >>= 1) {
    if (mask & 1u) out.push_back(b);
  }
  return out;
}

}  // namespace

SupResult bilinear_sup_exact(const DependenceMatrix& d, int exact_cap) {
  if (exact_cap < 1 || exact_cap > 30) {
    throw std::invalid_argument("exact_cap must lie in [1, 30]");
  }
  const std::size_t small = std::min(d.rows(), d.cols());
  if (small > static_cast<std::size_t>(exact_cap)) {
    throw std::invalid_argument(
        "exact solver needs min(rows, cols) <= " + std::to_string(exact_cap) +
        ", got " + std::to_string(small));
  }
  const View v{&d, d.cols() > d.rows()};  // enumerate the smaller side
  const std::size_t nc = v.cols();
  const std::size_t nr = v.rows();

  double best_value = 0.0;
  std::uint32_t best_mask = 0;
  int best_sign = +1;

  std::vector<double> row_sum(nr);
  // Subsets in Gray-code order so each step updates one column's
  // contribution; both signs scanned, original sign first.  Strictly
  // greater values win, so the first maximizer in this order is kept.
  for (int sign = +1; sign >= -1; sign -= 2) {
    std::fill(row_sum.begin(), row_sum.end(), 0.0);
    std::uint32_t gray = 0;
    const std::uint64_t count = std::uint64_t{1} << nc;
    for (std::uint64_t i = 1; i < count; ++i) {
      const auto next = static_cast<std::uint32_t>(i ^ (i >> 1));
      const std::uint32_t flipped_bit = gray ^ next;
      const int c = std::countr_zero(flipped_bit);
      const double dir = (next & flipped_bit) ? 1.0 : -1.0;
      for (std::size_t r = 0; r < nr; ++r) {
        row_sum[r] += dir * sign * v.at(r, c);
      }
      gray = next;
      double value = 0.0;
      for (std::size_t r = 0; r < nr; ++r) {
        if (row_sum[r] > 0.0) value += row_sum[r];
      }
      if (value > best_value) {
        best_value = value;
        best_mask = gray;
        best_sign = sign;
      }
    }
  }

  // Rebuild the witness sets for the winning mask and sign.
  std::vector<std::uint32_t> small_set = mask_bits(best_mask);
  std::vector<std::uint32_t> large_set;
  for (std::size_t r = 0; r < nr; ++r) {
    double s = 0.0;
    for (std::uint32_t c : small_set) s += best_sign * v.at(r, c);
    if (s > 0.0) large_set.push_back(static_cast<std::uint32_t>(r));
  }

  SupResult result;
  result.value = best_value;
  result.exact = true;
  if (v.transposed) {
    result.argmax_rows = std::move(small_set);
    result.argmax_cols = std::move(large_set);
  } else {
    result.argmax_rows = std::move(large_set);
    result.argmax_cols = std::move(small_set);
  }
  return result;
}

SupResult bilinear_sup_heuristic(const DependenceMatrix& d, int restarts,
                                 std::uint64_t seed) {
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
  const std::size_t nr = d.rows();
  const std::size_t nc = d.cols();

  // Start sets: all columns first, then `restarts` random column subsets
  // drawn from a single seeded stream.
  std::vector<std::vector<char>> starts;
  starts.emplace_back(nc, 1);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::vector<char> cols(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      cols[c] = static_cast<char>(rng() & 1u);
    }
    starts.push_back(std::move(cols));
  }

  SupResult best;
  best.value = 0.0;
  best.exact = false;
  bool have_candidate = false;

  std::vector<char> rows(nr), cols(nc), next_cols(nc);
  for (const auto& start : starts) {
    for (int sign = +1; sign >= -1; sign -= 2) {
      cols = start;
      const int max_rounds = 4 * static_cast<int>(nr + nc) + 16;
      for (int round = 0; round < max_rounds; ++round) {
        for (std::size_t r = 0; r < nr; ++r) {
          double s = 0.0;
          for (std::size_t c = 0; c < nc; ++c) {
            if (cols[c]) s += sign * d.at(r, c);
          }
          rows[r] = static_cast<char>(s > 0.0);  // zero sums drop the index
        }
        for (std::size_t c = 0; c < nc; ++c) {
          double s = 0.0;
          for (std::size_t r = 0; r < nr; ++r) {
            if (rows[r]) s += sign * d.at(r, c);
          }
          next_cols[c] = static_cast<char>(s > 0.0);
        }
        if (next_cols == cols) break;
        cols = next_cols;
      }
      // Final row pick against the settled columns, then the witness value.
      double value = 0.0;
      for (std::size_t r = 0; r < nr; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
          if (cols[c]) s += sign * d.at(r, c);
        }
        rows[r] = static_cast<char>(s > 0.0);
        if (s > 0.0) value += s;
      }
      if (!have_candidate || value > best.value) {
        have_candidate = true;
        best.value = value;
        best.argmax_rows.clear();
        best.argmax_cols.clear();
        for (std::size_t r = 0; r < nr; ++r) {
          if (rows[r]) best.argmax_rows.push_back(static_cast<std::uint32_t>(r));
        }
        for (std::size_t c = 0; c < nc; ++c) {
          if (cols[c]) best.argmax_cols.push_back(static_cast<std::uint32_t>(c));
        }
      }
    }
  }
  return best;
}

double half_abs_sum(const DependenceMatrix& d) { return 0.5 * d.abs_sum(); }

}  // namespace mixest
