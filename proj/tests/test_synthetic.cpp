#include "mixest/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "mixest/solver.hpp"

namespace {

using mixest::DependenceMatrix;
using mixest::exact_cylinder_prob;
using mixest::exact_dependence_matrix;
using mixest::exact_level_coefficients;
using mixest::FiniteChain;
using mixest::gen_chain;
using mixest::gen_iid;
using mixest::gen_ma;
using mixest::SamplePath;

FiniteChain three_state() {
  return FiniteChain({0.1, 0.5, 0.9}, {{0.6, 0.3, 0.1},
                                       {0.2, 0.5, 0.3},
                                       {0.1, 0.4, 0.5}});
}

TEST(FiniteChain, TwoStateHasExpectedStationaryLaw) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  ASSERT_EQ(chain.state_count(), 2u);
  EXPECT_DOUBLE_EQ(chain.states()[0], 0.25);
  EXPECT_DOUBLE_EQ(chain.states()[1], 0.75);
  EXPECT_NEAR(chain.initial()[0], 0.5, 1e-12);
  EXPECT_NEAR(chain.initial()[1], 0.5, 1e-12);

  const FiniteChain skewed = FiniteChain::two_state(0.3, 0.1);
  EXPECT_NEAR(skewed.initial()[0], 0.25, 1e-12);
  EXPECT_NEAR(skewed.initial()[1], 0.75, 1e-12);
}

TEST(FiniteChain, StationaryDistributionComputedWhenOmitted) {
  const FiniteChain chain({0.25, 0.75}, {{0.7, 0.3}, {0.1, 0.9}});
  EXPECT_NEAR(chain.initial()[0], 0.25, 1e-9);
  EXPECT_NEAR(chain.initial()[1], 0.75, 1e-9);

  const FiniteChain bigger = three_state();
  const std::vector<double>& pi = bigger.initial();
  double mass = 0.0;
  for (double p : pi) mass += p;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  // Stationarity: pi P = pi.
  const auto& P = bigger.transition();
  for (std::size_t s = 0; s < 3; ++s) {
    double next = 0.0;
    for (std::size_t r = 0; r < 3; ++r) next += pi[r] * P[r][s];
    EXPECT_NEAR(next, pi[s], 1e-9);
  }
}

TEST(FiniteChain, RejectsInvalidDescriptions) {
  EXPECT_THROW(FiniteChain({0.25, 0.75}, {{0.9, 0.2}, {0.2, 0.8}}),
               std::domain_error);
  EXPECT_THROW(FiniteChain({0.25, 0.75}, {{1.2, -0.2}, {0.2, 0.8}}),
               std::domain_error);
  EXPECT_THROW(FiniteChain({0.25, 0.75}, {{1.0}, {0.2, 0.8}}),
               std::invalid_argument);
  EXPECT_THROW(FiniteChain({0.25, 1.75}, {{0.8, 0.2}, {0.2, 0.8}}),
               std::domain_error);
  EXPECT_THROW(FiniteChain({0.25, 0.75}, {{0.8, 0.2}, {0.2, 0.8}},
                           std::vector<double>{0.9, 0.1}),
               std::domain_error);
  EXPECT_THROW(FiniteChain({0.25, 0.75}, {{0.8, 0.2}, {0.2, 0.8}},
                           std::vector<double>{0.7, 0.7}),
               std::domain_error);
  EXPECT_THROW(FiniteChain::two_state(0.0, 0.0), std::domain_error);
}

TEST(FiniteChain, CylinderProbabilities) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  EXPECT_NEAR(exact_cylinder_prob(chain, {0, 0}), 0.4, 1e-15);
  EXPECT_NEAR(exact_cylinder_prob(chain, {0, 1, 0}), 0.02, 1e-15);
  EXPECT_NEAR(exact_cylinder_prob(chain, {1}), 0.5, 1e-15);

  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) total += exact_cylinder_prob(chain, {a, b, c});
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-12);

  EXPECT_THROW(exact_cylinder_prob(chain, {}), std::invalid_argument);
  EXPECT_THROW(exact_cylinder_prob(chain, {2}), std::invalid_argument);
}

TEST(ExactDependenceMatrix, FrozenTwoStateValues) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  const DependenceMatrix d = exact_dependence_matrix(chain, 3, 1, 1, 1);
  ASSERT_EQ(d.rows(), 2u);
  ASSERT_EQ(d.cols(), 2u);
  EXPECT_NEAR(d.at(0, 0), 0.09, 1e-12);
  EXPECT_NEAR(d.at(0, 1), -0.09, 1e-12);
  EXPECT_NEAR(d.at(1, 0), -0.09, 1e-12);
  EXPECT_NEAR(d.at(1, 1), 0.09, 1e-12);
  ASSERT_TRUE(d.meta().has_value());
  EXPECT_EQ(d.meta()->t, 0);
  EXPECT_EQ(d.meta()->n, 3);
  EXPECT_EQ(d.meta()->m, 1);
  EXPECT_EQ(d.meta()->j, 1);
  EXPECT_EQ(d.meta()->ell, 1);
  EXPECT_EQ(d.meta()->j_prime(), 1);
}

TEST(ExactDependenceMatrix, RowsAndColumnsSumToZero) {
  const std::vector<FiniteChain> chains = {
      FiniteChain::two_state(0.2, 0.2), FiniteChain::two_state(0.3, 0.1),
      three_state()};
  for (const FiniteChain& chain : chains) {
    for (int n : {3, 4}) {
      for (int ell : {1, 2}) {
        for (int j = 1; j <= n - 2; ++j) {
          const DependenceMatrix d = exact_dependence_matrix(chain, n, 1, j, ell);
          for (std::size_t r = 0; r < d.rows(); ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < d.cols(); ++c) sum += d.at(r, c);
            EXPECT_NEAR(sum, 0.0, 1e-12);
          }
          for (std::size_t c = 0; c < d.cols(); ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < d.rows(); ++r) sum += d.at(r, c);
            EXPECT_NEAR(sum, 0.0, 1e-12);
          }
        }
      }
    }
  }
}

TEST(ExactLevelCoefficients, FrozenTwoStateValues) {
  const auto [alpha, beta] =
      exact_level_coefficients(FiniteChain::two_state(0.2, 0.2), 3, 1, 1);
  EXPECT_NEAR(alpha, 0.09, 1e-12);
  EXPECT_NEAR(beta, 0.18, 1e-12);

  const auto [slow_alpha, slow_beta] =
      exact_level_coefficients(FiniteChain::two_state(0.05, 0.05), 3, 1, 1);
  EXPECT_NEAR(slow_alpha, 0.2025, 1e-12);
  EXPECT_NEAR(slow_beta, 0.405, 1e-12);
}

// For a two-state chain at gap 1 the extra block coordinates and finer
// grid cells carry no additional dependence, so the level coefficients
// stay flat as n and ell grow.
TEST(ExactLevelCoefficients, StableAcrossBlockLengthAndLevel) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  for (int n : {3, 4, 5}) {
    const auto [alpha, beta] = exact_level_coefficients(chain, n, 1, 1);
    EXPECT_NEAR(alpha, 0.09, 1e-12) << "n=" << n;
    EXPECT_NEAR(beta, 0.18, 1e-12) << "n=" << n;
  }
  for (int ell : {1, 2}) {
    const auto [alpha, beta] = exact_level_coefficients(chain, 3, ell, 1);
    EXPECT_NEAR(alpha, 0.09, 1e-12) << "ell=" << ell;
    EXPECT_NEAR(beta, 0.18, 1e-12) << "ell=" << ell;
  }
}

TEST(ExactLevelCoefficients, AlphaAtMostBetaAndAtMostQuarter) {
  const std::vector<FiniteChain> chains = {
      FiniteChain::two_state(0.2, 0.2), FiniteChain::two_state(0.05, 0.05),
      FiniteChain::two_state(0.3, 0.1), three_state()};
  for (const FiniteChain& chain : chains) {
    for (int n : {3, 4}) {
      for (int ell : {1, 2}) {
        const auto [alpha, beta] = exact_level_coefficients(chain, n, ell, 1);
        EXPECT_LE(alpha, beta + 1e-12);
        EXPECT_LE(alpha, 0.25 + 1e-12);
        EXPECT_GE(alpha, 0.0);
      }
    }
  }
}

TEST(Generators, DeterministicGivenSeed) {
  const SamplePath a = gen_iid(100, 7);
  const SamplePath b = gen_iid(100, 7);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_NE(gen_iid(100, 8).values(), a.values());

  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  EXPECT_EQ(gen_chain(chain, 50, 3).values(), gen_chain(chain, 50, 3).values());
  EXPECT_EQ(gen_ma(2, 50, 3).values(), gen_ma(2, 50, 3).values());
}

TEST(Generators, ChainEmitsOnlyStateValues) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  for (double v : gen_chain(chain, 500, 1).values()) {
    EXPECT_TRUE(v == 0.25 || v == 0.75);
  }
}

TEST(Generators, ChainFrequenciesMatchStationaryLaw) {
  const FiniteChain chain = FiniteChain::two_state(0.2, 0.2);
  const SamplePath x = gen_chain(chain, 100000, 5);
  double low = 0.0;
  for (double v : x.values()) low += v == 0.25 ? 1.0 : 0.0;
  EXPECT_NEAR(low / 100000.0, 0.5, 0.02);
}

TEST(Generators, MovingAverageStaysInUnitInterval) {
  const SamplePath x = gen_ma(3, 1000, 9);
  for (double v : x.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(gen_ma(-1, 10, 0), std::invalid_argument);
}

TEST(FiniteChainFiles, ParseTextRoundTrip) {
  const std::string text =
      "# two-state chain\n"
      "states= 0.25 0.75\n"
      "initial= 0.5 0.5\n"
      "0.8 0.2\n"
      "0.2 0.8\n";
  const FiniteChain chain = FiniteChain::parse_text(text);
  EXPECT_EQ(chain.state_count(), 2u);
  EXPECT_DOUBLE_EQ(chain.transition()[0][1], 0.2);
  EXPECT_DOUBLE_EQ(chain.initial()[0], 0.5);

  EXPECT_THROW(FiniteChain::parse_text("0.8 0.2\n0.2 0.8\n"),
               std::runtime_error);
  EXPECT_THROW(FiniteChain::parse_text("states= 0.25 bad\n"),
               std::runtime_error);
  EXPECT_THROW(
      FiniteChain::parse_text("states= 0.1\nstates= 0.2\n1.0\n"),
      std::runtime_error);
}

}  // namespace
