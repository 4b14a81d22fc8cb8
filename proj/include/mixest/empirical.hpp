#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixest/core.hpp"

namespace mixest {

/// Blocking parameters a dependence matrix was built with.  j' = n - m - j
/// is the length of the trailing sub-block.
struct MatrixMeta {
  long t = 0;  // block count; 0 marks an exact (model-derived) matrix
  int n = 0;
  int m = 0;
  int j = 0;
  int ell = 0;

  int j_prime() const { return n - m - j; }
};

/// Signed differences joint - product-of-marginals over one pair of atom
/// spaces.  Row a, column b holds the measure of "leading sub-block in atom
/// a and trailing sub-block in atom b" minus the product of the two
/// marginal atom measures.  Every entry lies in [-1, 1] and the absolute
/// entries sum to at most 2.
class DependenceMatrix {
 public:
  DependenceMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> entries,
                   std::optional<MatrixMeta> meta = std::nullopt);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }
  const std::vector<double>& entries() const { return entries_; }
  const std::optional<MatrixMeta>& meta() const { return meta_; }

  /// Sum of |entry| over the whole matrix.
  double abs_sum() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
  std::optional<MatrixMeta> meta_;
};

/// Occurrence counts of the t non-overlapping length-k blocks
/// (X_{ik+1},...,X_{(i+1)k}), i = 0..t-1, per atom of the (k, ell) grid.
/// The counts partition t exactly.  Requires k * ell <= 22.
std::vector<std::uint64_t> block_histogram(const SamplePath& x, int k, int ell,
                                           long t);

/// Empirical measure of A under the non-overlapping length-k blocking:
/// the fraction of the first t blocks that fall in an atom of A.
double empirical_block_measure(const SamplePath& x, int k, int ell,
                               const AtomSet& a, long t);

/// Joint occurrence counts over t non-overlapping length-n blocks: the
/// leading j coordinates of each block index the row, the trailing
/// n - m - j coordinates index the column; the m coordinates between them
/// are skipped.  Returned row-major, 2^{j*ell} x 2^{(n-m-j)*ell}.
std::vector<std::uint64_t> joint_block_histogram(const SamplePath& x, long t,
                                                 int n, int m, int j, int ell);

/// Empirical joint measure of (A, B) under the gapped blocking above.
double joint_block_measure(const SamplePath& x, long t, int n, int m, int j,
                           int ell, const AtomSet& a, const AtomSet& b);

/// Builds the empirical dependence matrix for gap m and split j inside
/// blocks of length n: entry (a, b) is the joint block measure of the atom
/// pair minus the product of the two one-sided empirical block measures,
/// where each marginal uses its own non-overlapping blocking (length j and
/// length n - m - j respectively) over the same sample prefix.  Because the
/// three blockings differ, empirical rows and columns need not sum to zero.
DependenceMatrix build_dependence_matrix(const SamplePath& x, long t, int n,
                                         int m, int j, int ell);

}  // namespace mixest
