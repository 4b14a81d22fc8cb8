#pragma once

#include <string>
#include <vector>

#include "mixest/estimators.hpp"
#include "mixest/sequential.hpp"

namespace mixest {

/// Candidate decay rate for the mixing coefficients: explicit values for
/// gaps 1..M plus a tail rule for larger gaps.  All values lie in [0, 1].
class RateFunction {
 public:
  enum class Tail {
    Constant,   // gamma(m) = gamma(M) beyond the table
    Geometric,  // gamma(m) = gamma(M) * ratio^(m - M), ratio in (0, 1]
  };

  RateFunction(std::vector<double> values, Tail tail = Tail::Constant,
               double ratio = 1.0);

  /// Flat rate: the same bound at every gap.
  static RateFunction constant(double gamma);

  /// Two-column text: gap index and value per line, '#' comments, plus an
  /// optional "tail=constant" or "tail=geometric RATIO" directive.  Gap
  /// indices must run 1..M contiguously.
  static RateFunction load_file(const std::string& path);
  static RateFunction parse_text(const std::string& text);

  double at(int m) const;
  int table_size() const { return static_cast<int>(values_.size()); }
  Tail tail() const { return tail_; }
  double ratio() const { return ratio_; }

 private:
  std::vector<double> values_;
  Tail tail_;
  double ratio_;
};

struct TestOptions {
  long block_budget = 0;  // practical per-estimate budget; must be >= 1
  EstimatorOptions estimator;
  EstimateCache* cache = nullptr;
};

/// Does the process mix at least as fast as gamma?  Accepts (+1) exactly
/// when every gap m = 1..M(t) has its coefficient estimate within
/// gamma(m) + eps(t); rejects (-1) otherwise.  Evidence holds each
/// (estimate, bound) pair, so the decision can be recomputed from it.
TestVerdict rate_test(const SamplePath& x, const RateFunction& gamma,
                      const Schedule& schedule, long t, Kind kind,
                      const TestOptions& opts);

/// Is the summed dependence below the threshold?  Runs the strong
/// sequential estimator to horizon t and accepts exactly when its final
/// value is within gamma + zeta(t).
TestVerdict threshold_test(const SamplePath& x, double gamma,
                           const Schedule& schedule, long t, Kind kind,
                           const TestOptions& opts);

/// Threshold test against zero summed alpha dependence.
TestVerdict independence_test(const SamplePath& x, const Schedule& schedule,
                              long t, const TestOptions& opts);

}  // namespace mixest
