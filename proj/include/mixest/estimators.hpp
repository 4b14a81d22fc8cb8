#pragma once

#include <cstdint>
#include <map>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "mixest/core.hpp"
#include "mixest/solver.hpp"

namespace mixest {

using BigInt = boost::multiprecision::cpp_int;

/// Which family of coefficients an estimate or run targets.
enum class Kind { Alpha, Beta };

enum class SolverPolicy {
  Auto,       // exact when the smaller matrix side fits the cap, else ascent
  Exact,      // always exact; errors when the cap is exceeded
  Heuristic,  // always alternating ascent
};

struct EstimatorOptions {
  SolverPolicy policy = SolverPolicy::Auto;
  int exact_cap = 16;
  int restarts = 32;
  std::uint64_t seed = 0;
};

/// A single finite-level coefficient estimate.
struct MixingEstimate {
  Kind kind = Kind::Alpha;
  int m = 0;
  double value = 0.0;
  long t = 0;
  int n = 0;
  int ell = 0;
  bool exact_solver = false;  // true when no ascent fallback was involved
};

/// Estimates the level-(n, ell) alpha coefficient at gap m from t
/// non-overlapping blocks: the maximum over splits j = 1..n-m-1 of the
/// bilinear subset maximum of the empirical dependence matrix.
MixingEstimate alpha_hat_fixed(const SamplePath& x, long t, int n, int ell,
                               int m, const EstimatorOptions& opts = {});

/// Beta analogue: maximum over splits of half the absolute entry sum.
MixingEstimate beta_hat_fixed(const SamplePath& x, long t, int n, int ell,
                              int m, const EstimatorOptions& opts = {});

MixingEstimate mixing_estimate(Kind kind, const SamplePath& x, long t, int n,
                               int ell, int m,
                               const EstimatorOptions& opts = {});

/// Concentration constant m * 2^(2^(n*ell) + 2^(m*ell + 1) + 1) for the
/// alpha deviation bound.  Exact arbitrary-precision value; the exponent is
/// capped at 2^26 bits because anything larger cannot be materialized.
BigInt alpha_concentration_constant(int m, int ell, int n);

/// Beta counterpart m * 2^(2^(2*k*ell + 1) + 2^(m*ell + 1) + 2) over
/// length-k blocks.
BigInt beta_concentration_constant(int m, int ell, int k);

/// Theoretical per-coefficient block budget at time t: the concentration
/// constant for (m, ell(t), n(t)) divided by m * eps(t)^2 * delta(t),
/// rounded up, treating the doubles as exact rationals.  Astronomically
/// large for all but toy schedules; practical runs supply a budget instead.
BigInt theoretical_coefficient_budget(const Schedule& schedule, int m, long t,
                                      Kind kind);

/// Theoretical budget for the time-t partial sum: the constant at gap
/// horizon M(t) divided by eps(t)^2 * delta(t), rounded up.
BigInt theoretical_sum_budget(const Schedule& schedule, long t, Kind kind);

/// How many blocks each estimate inside a sequential run may consume.
struct BudgetPolicy {
  enum class Mode { Practical, Theoretical };
  Mode mode = Mode::Practical;
  long blocks = 0;  // Practical: fixed block count per estimate

  static BudgetPolicy practical(long blocks);
  static BudgetPolicy theoretical();

  /// Block budget for time t, or InsufficientSampleError when the sample
  /// cannot cover it.
  long resolve(const Schedule& schedule, long t, Kind kind,
               std::size_t sample_length) const;
};

/// Memoizes fixed-parameter estimates for one sample so sequential runs
/// and hypothesis tests recompute nothing; results are bit-identical to
/// direct calls with the same options.
class EstimateCache {
 public:
  EstimateCache(const SamplePath& x, EstimatorOptions opts = {});

  const MixingEstimate& get(Kind kind, long t, int n, int ell, int m);
  std::size_t size() const { return memo_.size(); }

 private:
  const SamplePath* sample_;
  EstimatorOptions opts_;
  std::map<std::tuple<int, long, int, int, int>, MixingEstimate> memo_;
};

/// Partial-sum statistic at time t: the sum over m = 1..M(t) of the
/// fixed-parameter estimate at (block_budget, n(t), ell(t), m).  Requires
/// n(t) >= M(t) + 2 so every summand has an admissible split.
double theta_partial_sum(const SamplePath& x, const Schedule& schedule, long t,
                         Kind kind, long block_budget,
                         const EstimatorOptions& opts = {},
                         EstimateCache* cache = nullptr);

}  // namespace mixest
