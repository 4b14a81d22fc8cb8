#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mixest/estimators.hpp"

namespace mixest {

/// Deterministic enumeration of the non-negative dyadic rationals, dense in
/// [0, infinity).  Index 1 is 0; afterwards lowest-terms values k / 2^d are
/// emitted along anti-diagonals of the (level, numerator-rank) table,
/// finest level first, so small values appear early:
///   0, 1, 1/2, 2, 1/4, 3/2, 3, 1/8, 3/4, 5/2, 4, 1/16, ...
/// Each dyadic appears exactly once (its lowest-terms form skips all
/// duplicate representations).
class DenseDyadics {
 public:
  /// Value at 1-based index i; memoized, so repeated access is cheap.
  double value_at(std::size_t i);

 private:
  void extend(std::size_t upto);
  std::vector<double> cache_;
  std::uint64_t next_diagonal_ = 0;
};

/// Triangular revisit schedule over enumeration indices: times are grouped
/// into rows of growing length and row r sweeps indices 1..r, so every
/// index is revisited infinitely often.  t = 1, 2, 3, ... maps to
/// 1; 1, 2; 1, 2, 3; ...
std::size_t visit_index(long t);

/// One weak-estimator update: raise the running value to s when the
/// statistic clears the acceptance band above s, otherwise keep it.
/// Never decreases.
double psi_step(double prev, double s, double theta, double eps);

/// Accept/reject record per tested value; re-testing overwrites.
struct BitLedger {
  struct Entry {
    bool accepted = false;
    long last_tested = 0;
  };
  std::map<double, Entry> bits;

  /// Smallest tested value currently accepted; 0 when none is.
  double infimum_accepted() const;
};

/// One strong-estimator update at tested value s: record whether theta
/// stays within the band, then return the infimum of accepted values.
double xi_step(BitLedger& ledger, double s, long t, double theta, double eps);

struct StepRecord {
  long t = 0;
  double s = 0.0;       // value tested at this step
  double theta = 0.0;
  double threshold = 0.0;  // s + eps(t) * sqrt(s)
  bool decision = false;   // weak: band cleared; strong: value accepted
  double estimate = 0.0;   // psi_t or xi_t after the update
};

struct Trajectory {
  std::vector<StepRecord> steps;
  bool truncated = false;
  std::string truncate_reason;

  double final_estimate() const {
    return steps.empty() ? 0.0 : steps.back().estimate;
  }
};

struct RunOptions {
  long horizon = 0;
  Kind kind = Kind::Alpha;
  BudgetPolicy budget;
  EstimatorOptions estimator;
  EstimateCache* cache = nullptr;  // optional; a run-local cache is used
                                   // when absent
};

/// Weak consistency run: at step t the t-th enumerated value is tested and
/// the estimate ratchets upward.  A step whose budget the sample cannot
/// cover truncates the trajectory with a reason instead of throwing.
Trajectory run_weak(const SamplePath& x, const Schedule& schedule,
                    const RunOptions& opts);

/// Strong consistency run: values revisit along the triangular schedule,
/// the accept/reject ledger is rewritten at each revisit, and the estimate
/// is the infimum of currently accepted values.
Trajectory run_strong(const SamplePath& x, const Schedule& schedule,
                      const RunOptions& opts);

/// One JSON object per line with fields t, s, theta, threshold, decision,
/// estimate.
void write_trajectory_jsonl(const Trajectory& trajectory, std::ostream& out);

}  // namespace mixest
