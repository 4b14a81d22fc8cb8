#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixest/empirical.hpp"

namespace mixest {

/// Stationary finite-state Markov chain emitting fixed values in [0, 1].
/// Rows of the transition matrix sum to 1 within 1e-12 and the initial
/// distribution is stationary within 1e-10; when no initial distribution
/// is supplied the stationary one is computed by power iteration.
class FiniteChain {
 public:
  FiniteChain(std::vector<double> states,
              std::vector<std::vector<double>> transition,
              std::optional<std::vector<double>> initial = std::nullopt);

  /// Two-state chain that leaves state 0 with probability p and state 1
  /// with probability q, emitting the two given values.
  static FiniteChain two_state(double p, double q, double value0 = 0.25,
                               double value1 = 0.75);

  /// Text format: optional '#' comments, a "states=" line listing the
  /// emitted values, one transition row per remaining line, and an
  /// optional "initial=" line (validated for stationarity).
  static FiniteChain load_file(const std::string& path);
  static FiniteChain parse_text(const std::string& text);

  std::size_t state_count() const { return states_.size(); }
  const std::vector<double>& states() const { return states_; }
  const std::vector<std::vector<double>>& transition() const {
    return transition_;
  }
  const std::vector<double>& initial() const { return initial_; }

 private:
  std::vector<double> states_;
  std::vector<std::vector<double>> transition_;
  std::vector<double> initial_;
};

/// Independent uniform [0, 1) values; deterministic given the seed.
SamplePath gen_iid(std::size_t length, std::uint64_t seed);

/// Trajectory of the chain started from its initial distribution.
SamplePath gen_chain(const FiniteChain& chain, std::size_t length,
                     std::uint64_t seed);

/// Moving average of q + 1 consecutive uniform [0, 1) draws; dependence
/// vanishes by construction once the gap exceeds q.
SamplePath gen_ma(int q, std::size_t length, std::uint64_t seed);

/// Probability that the chain starts with exactly this state word.
double exact_cylinder_prob(const FiniteChain& chain,
                           const std::vector<int>& word);

/// Model-exact dependence matrix for the same blocking the empirical
/// builder uses: entry (a, b) is the probability of "first j coordinates
/// in atom a, coordinates j+m+1..n in atom b" minus the product of the two
/// marginal probabilities.  The gap is bridged by the (m+1)-step
/// transition matrix, and stationarity supplies the marginals.  Rows and
/// columns each sum to zero up to rounding.
DependenceMatrix exact_dependence_matrix(const FiniteChain& chain, int n,
                                         int m, int j, int ell);

/// Exact level-(n, ell) coefficient pair (alpha, beta) at gap m: the
/// maxima over splits j of the exact bilinear maximum and of half the
/// absolute entry sum.
std::pair<double, double> exact_level_coefficients(const FiniteChain& chain,
                                                   int n, int ell, int m,
                                                   int exact_cap = 16);

}  // namespace mixest
