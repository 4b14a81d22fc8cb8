#include "mixest/empirical.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixest {

namespace detail {
std::uint64_t atom_index_unchecked(const double* point, int dimension,
                                   int level);
}

namespace {

constexpr int kMaxSideBits = 22;

void check_blocking(int k, int ell, long t) {
  if (k < 1) throw std::invalid_argument("block length must be >= 1");
  if (ell < 1) throw std::invalid_argument("level must be >= 1");
  if (t < 1) throw std::invalid_argument("block count must be >= 1");
  if (static_cast<long>(k) * ell > kMaxSideBits) {
    throw std::invalid_argument(
        "atom space too large to materialize: k * ell = " +
        std::to_string(static_cast<long>(k) * ell) + " > " +
        std::to_string(kMaxSideBits));
  }
}

void check_split(int n, int m, int j) {
  if (m < 1) throw std::invalid_argument("gap m must be >= 1");
  if (n < m + 2) {
    throw std::invalid_argument("block length n must be >= m + 2 (n = " +
                                std::to_string(n) + ", m = " +
                                std::to_string(m) + ")");
  }
  if (j < 1 || j > n - m - 1) {
    throw std::invalid_argument("split j must lie in [1, n - m - 1], got " +
                                std::to_string(j));
  }
}

void check_length(const SamplePath& x, long t, int k) {
  const auto required = static_cast<std::uint64_t>(t) *
                        static_cast<std::uint64_t>(k);
  if (x.length() < required) {
    throw InsufficientSampleError(required, x.length());
  }
}

}  // namespace

DependenceMatrix::DependenceMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> entries,
                                   std::optional<MatrixMeta> meta)
    : rows_(rows), cols_(cols), entries_(std::move(entries)),
      meta_(std::move(meta)) {
  if (rows_ < 1 || cols_ < 1) {
    throw std::invalid_argument("dependence matrix must be non-empty");
  }
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("entry count does not match matrix shape");
  }
  double total = 0.0;
  for (double d : entries_) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("dependence matrix entry is not finite");
    }
    if (std::abs(d) > 1.0 + 1e-12) {
      throw std::invalid_argument("dependence matrix entry " +
                                  std::to_string(d) +
                                  " exceeds 1 in absolute value");
    }
    total += std::abs(d);
  }
  if (total > 2.0 + 1e-9) {
    throw std::invalid_argument("absolute entries sum to " +
                                std::to_string(total) + " > 2");
  }
}

double DependenceMatrix::abs_sum() const {
  double total = 0.0;
  for (double d : entries_) total += std::abs(d);
  return total;
}

std::vector<std::uint64_t> block_histogram(const SamplePath& x, int k, int ell,
                                           long t) {
  check_blocking(k, ell, t);
  check_length(x, t, k);
  std::vector<std::uint64_t> counts(
      std::size_t{1} << (static_cast<unsigned>(k) * ell), 0);
  const double* v = x.values().data();
  for (long i = 0; i < t; ++i) {
    ++counts[detail::atom_index_unchecked(v + i * k, k, ell)];
  }
  return counts;
}

double empirical_block_measure(const SamplePath& x, int k, int ell,
                               const AtomSet& a, long t) {
  check_blocking(k, ell, t);
  if (a.grid() != DyadicGrid(k, ell)) {
    throw std::invalid_argument("atom set grid does not match the blocking");
  }
  check_length(x, t, k);
  const double* v = x.values().data();
  std::uint64_t hits = 0;
  for (long i = 0; i < t; ++i) {
    if (a.contains(detail::atom_index_unchecked(v + i * k, k, ell))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(t);
}

std::vector<std::uint64_t> joint_block_histogram(const SamplePath& x, long t,
                                                 int n, int m, int j,
                                                 int ell) {
  check_split(n, m, j);
  const int jp = n - m - j;
  check_blocking(j, ell, t);
  check_blocking(jp, ell, t);
  check_length(x, t, n);
  const std::size_t cols = std::size_t{1} << (static_cast<unsigned>(jp) * ell);
  const std::size_t rows = std::size_t{1} << (static_cast<unsigned>(j) * ell);
  if (rows > (std::size_t{1} << kMaxSideBits) / cols) {
    throw std::invalid_argument("joint atom space too large to materialize");
  }
  std::vector<std::uint64_t> counts(rows * cols, 0);
  const double* v = x.values().data();
  for (long i = 0; i < t; ++i) {
    const double* block = v + i * n;
    const std::uint64_t a = detail::atom_index_unchecked(block, j, ell);
    const std::uint64_t b =
        detail::atom_index_unchecked(block + j + m, jp, ell);
    ++counts[a * cols + b];
  }
  return counts;
}

double joint_block_measure(const SamplePath& x, long t, int n, int m, int j,
                           int ell, const AtomSet& a, const AtomSet& b) {
  check_split(n, m, j);
  const int jp = n - m - j;
  if (a.grid() != DyadicGrid(j, ell)) {
    throw std::invalid_argument("leading atom set grid must be (j, ell)");
  }
  if (b.grid() != DyadicGrid(jp, ell)) {
    throw std::invalid_argument(
        "trailing atom set grid must be (n - m - j, ell)");
  }
  check_blocking(j, ell, t);
  check_blocking(jp, ell, t);
  check_length(x, t, n);
  const double* v = x.values().data();
  std::uint64_t hits = 0;
  for (long i = 0; i < t; ++i) {
    const double* block = v + i * n;
    if (a.contains(detail::atom_index_unchecked(block, j, ell)) &&
        b.contains(detail::atom_index_unchecked(block + j + m, jp, ell))) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(t);
}

DependenceMatrix build_dependence_matrix(const SamplePath& x, long t, int n,
                                         int m, int j, int ell) {
  const int jp = n - m - j;  // validated inside joint_block_histogram
  const std::vector<std::uint64_t> joint =
      joint_block_histogram(x, t, n, m, j, ell);
  const std::vector<std::uint64_t> lead = block_histogram(x, j, ell, t);
  const std::vector<std::uint64_t> trail = block_histogram(x, jp, ell, t);
  const std::size_t rows = lead.size();
  const std::size_t cols = trail.size();
  const double td = static_cast<double>(t);
  std::vector<double> entries(rows * cols);
  for (std::size_t a = 0; a < rows; ++a) {
    const double pa = static_cast<double>(lead[a]) / td;
    for (std::size_t b = 0; b < cols; ++b) {
      const double pb = static_cast<double>(trail[b]) / td;
      entries[a * cols + b] =
          static_cast<double>(joint[a * cols + b]) / td - pa * pb;
    }
  }
  return DependenceMatrix(rows, cols, std::move(entries),
                          MatrixMeta{t, n, m, j, ell});
}

}  // namespace mixest
