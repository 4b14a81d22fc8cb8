#include "mixest/empirical.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "mixest/core.hpp"
#include "mixest/synthetic.hpp"

namespace {

using mixest::AtomSet;
using mixest::block_histogram;
using mixest::build_dependence_matrix;
using mixest::DependenceMatrix;
using mixest::DyadicGrid;
using mixest::empirical_block_measure;
using mixest::FiniteChain;
using mixest::gen_chain;
using mixest::InsufficientSampleError;
using mixest::joint_block_histogram;
using mixest::joint_block_measure;
using mixest::SamplePath;

TEST(BlockHistogram, FrozenPairBlocking) {
  const SamplePath x({0.1, 0.6, 0.2, 0.7, 0.3, 0.8});
  // All three pair blocks have first coordinate low, second high: atom 2.
  const auto counts = block_histogram(x, 2, 1, 3);
  EXPECT_EQ(counts, (std::vector<std::uint64_t>{0, 0, 3, 0}));

  const DyadicGrid grid(2, 1);
  EXPECT_DOUBLE_EQ(empirical_block_measure(x, 2, 1, AtomSet::single(grid, 2), 3),
                   1.0);
  EXPECT_DOUBLE_EQ(empirical_block_measure(x, 2, 1, AtomSet(grid, {0, 1}), 3),
                   0.0);
}

TEST(BlockHistogram, CountsPartitionTheBlocks) {
  const SamplePath x = mixest::gen_iid(2000, 13);
  for (int k : {1, 2, 3}) {
    for (int ell : {1, 2}) {
      const long t = static_cast<long>(x.length()) / k;
      const auto counts = block_histogram(x, k, ell, t);
      std::uint64_t total = 0;
      for (auto c : counts) total += c;
      EXPECT_EQ(total, static_cast<std::uint64_t>(t));

      const DyadicGrid grid(k, ell);
      EXPECT_DOUBLE_EQ(
          empirical_block_measure(x, k, ell, AtomSet::full(grid), t), 1.0);
      EXPECT_DOUBLE_EQ(
          empirical_block_measure(x, k, ell, AtomSet::empty(grid), t), 0.0);
    }
  }
}

TEST(BlockMeasure, AdditiveOverDisjointAtomSets) {
  const SamplePath x = mixest::gen_iid(1200, 29);
  const DyadicGrid grid(2, 2);
  const long t = 600;
  const AtomSet a(grid, {0, 3, 7, 9});
  const AtomSet b(grid, {1, 4, 8, 12, 15});
  std::vector<std::uint64_t> both = a.members();
  both.insert(both.end(), b.members().begin(), b.members().end());
  const double split = empirical_block_measure(x, 2, 2, a, t) +
                       empirical_block_measure(x, 2, 2, b, t);
  const double joined =
      empirical_block_measure(x, 2, 2, AtomSet(grid, both), t);
  EXPECT_NEAR(split, joined, 1e-12);
}

TEST(JointBlockHistogram, FrozenGapBlocking) {
  const SamplePath x({0.1, 0.9, 0.2, 0.8, 0.3, 0.7});
  // Blocks (0.1, 0.9, 0.2) and (0.8, 0.3, 0.7); the middle coordinate is
  // skipped, so the pairs are (low, low) and (high, high).
  const auto counts = joint_block_histogram(x, 2, 3, 1, 1, 1);
  EXPECT_EQ(counts, (std::vector<std::uint64_t>{1, 0, 0, 1}));

  const DyadicGrid axis(1, 1);
  EXPECT_DOUBLE_EQ(joint_block_measure(x, 2, 3, 1, 1, 1,
                                       AtomSet::single(axis, 0),
                                       AtomSet::single(axis, 0)),
                   0.5);
  EXPECT_DOUBLE_EQ(joint_block_measure(x, 2, 3, 1, 1, 1, AtomSet::full(axis),
                                       AtomSet::full(axis)),
                   1.0);
}

TEST(JointBlockMeasure, RejectsMismatchedGrids) {
  const SamplePath x = mixest::gen_iid(40, 3);
  const DyadicGrid wrong(2, 1), axis(1, 1);
  EXPECT_THROW(joint_block_measure(x, 10, 4, 1, 1, 1, AtomSet::full(wrong),
                                   AtomSet::full(wrong)),
               std::invalid_argument);
  EXPECT_NO_THROW(joint_block_measure(x, 10, 4, 1, 1, 1, AtomSet::full(axis),
                                      AtomSet::full(wrong)));
}

TEST(BuildDependenceMatrix, FrozenAsymmetricValues) {
  // Leading and trailing marginals come from their own length-1 blockings
  // of the prefix, which both sit low here, while the joint blocking sees
  // one low and one high pair.
  const SamplePath x({0.1, 0.2, 0.3, 0.6, 0.7, 0.8});
  const DependenceMatrix d = build_dependence_matrix(x, 2, 3, 1, 1, 1);
  ASSERT_EQ(d.rows(), 2u);
  ASSERT_EQ(d.cols(), 2u);
  EXPECT_DOUBLE_EQ(d.at(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(d.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(d.at(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(d.at(1, 1), 0.5);
  ASSERT_TRUE(d.meta().has_value());
  EXPECT_EQ(d.meta()->t, 2);
  EXPECT_EQ(d.meta()->j_prime(), 1);

  // Empirical rows may carry nonzero sums; only exact matrices center.
  EXPECT_NEAR(d.at(0, 0) + d.at(0, 1), -0.5, 1e-15);
}

TEST(BuildDependenceMatrix, ConstantSampleHasNoDependence) {
  const SamplePath x(std::vector<double>(30, 0.3));
  const DependenceMatrix d = build_dependence_matrix(x, 10, 3, 1, 1, 1);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) EXPECT_EQ(d.at(r, c), 0.0);
  }
}

// Each entry must equal the joint measure of its atom pair minus the
// product of the two marginal block measures.
TEST(BuildDependenceMatrix, EntriesMatchTheirDefinition) {
  const FiniteChain chain = FiniteChain::two_state(0.3, 0.1);
  const SamplePath x = gen_chain(chain, 260, 17);
  const long t = 60;
  for (int j : {1, 2}) {
    const int n = 4, m = 1, ell = 1;
    const int jp = n - m - j;
    const DependenceMatrix d = build_dependence_matrix(x, t, n, m, j, ell);
    const DyadicGrid lead_grid(j, ell), trail_grid(jp, ell);
    for (std::size_t a = 0; a < d.rows(); ++a) {
      for (std::size_t b = 0; b < d.cols(); ++b) {
        const double joint = joint_block_measure(
            x, t, n, m, j, ell, AtomSet::single(lead_grid, a),
            AtomSet::single(trail_grid, b));
        const double pa =
            empirical_block_measure(x, j, ell, AtomSet::single(lead_grid, a), t);
        const double pb = empirical_block_measure(
            x, jp, ell, AtomSet::single(trail_grid, b), t);
        EXPECT_NEAR(d.at(a, b), joint - pa * pb, 1e-12);
      }
    }
  }
}

TEST(Empirical, ReportsRequiredLengthWhenSampleIsShort) {
  const SamplePath x({0.1, 0.2, 0.3, 0.4, 0.5});
  try {
    block_histogram(x, 2, 1, 3);
    FAIL() << "expected InsufficientSampleError";
  } catch (const InsufficientSampleError& e) {
    EXPECT_EQ(e.required_length(), 6u);
    EXPECT_EQ(e.actual_length(), 5u);
  }
  EXPECT_THROW(build_dependence_matrix(x, 2, 3, 1, 1, 1),
               InsufficientSampleError);
}

TEST(Empirical, RejectsBadBlockingParameters) {
  const SamplePath x = mixest::gen_iid(100, 1);
  EXPECT_THROW(joint_block_histogram(x, 5, 3, 1, 2, 1), std::invalid_argument);
  EXPECT_THROW(joint_block_histogram(x, 5, 2, 1, 1, 1), std::invalid_argument);
  EXPECT_THROW(joint_block_histogram(x, 5, 3, 0, 1, 1), std::invalid_argument);
  EXPECT_THROW(block_histogram(x, 23, 1, 4), std::invalid_argument);
  EXPECT_THROW(block_histogram(x, 12, 2, 4), std::invalid_argument);
}

TEST(DependenceMatrix, ValidatesShapeAndMass) {
  EXPECT_THROW(DependenceMatrix(2, 2, {0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(DependenceMatrix(1, 1, {1.5}), std::invalid_argument);
  EXPECT_THROW(DependenceMatrix(1, 1, {std::nan("")}), std::invalid_argument);
  EXPECT_THROW(DependenceMatrix(2, 2, {0.9, -0.9, 0.9, -0.9}),
               std::invalid_argument);
  EXPECT_NO_THROW(DependenceMatrix(2, 2, {0.5, -0.5, 0.5, -0.5}));
  const DependenceMatrix d(1, 2, {0.25, -0.5});
  EXPECT_DOUBLE_EQ(d.abs_sum(), 0.75);
}

}  // namespace
