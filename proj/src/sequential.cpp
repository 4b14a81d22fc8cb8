#include "mixest/sequential.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace mixest {

double DenseDyadics::value_at(std::size_t i) {
  if (i < 1) throw std::invalid_argument("enumeration index must be >= 1");
  extend(i);
  return cache_[i - 1];
}

void DenseDyadics::extend(std::size_t upto) {
  if (cache_.empty()) cache_.push_back(0.0);
  while (cache_.size() < upto) {
    ++next_diagonal_;
    // Diagonal c emits the lowest-terms values (2r - 1) / 2^d with
    // d + r = c, walking d downward: the freshest refinement level first,
    // then coarser levels, ending with the integer c at level 0.
    const std::uint64_t c = next_diagonal_;
    for (std::uint64_t d = c - 1;; --d) {
      const std::uint64_t r = c - d;
      const double value =
          d == 0 ? static_cast<double>(r)
                 : static_cast<double>(2 * r - 1) /
                       static_cast<double>(std::uint64_t{1} << d);
      cache_.push_back(value);
      if (d == 0) break;
    }
  }
}

std::size_t visit_index(long t) {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  // Row r covers times r(r-1)/2 + 1 .. r(r+1)/2 and visits indices 1..r.
  auto r = static_cast<long>(
      (std::sqrt(8.0 * static_cast<double>(t) - 7.0) + 1.0) / 2.0);
  while (r * (r - 1) / 2 >= t) --r;
  while (r * (r + 1) / 2 < t) ++r;
  return static_cast<std::size_t>(t - r * (r - 1) / 2);
}

double psi_step(double prev, double s, double theta, double eps) {
  if (s < 0.0) throw std::invalid_argument("tested value must be >= 0");
  if (theta > s + eps * std::sqrt(s)) return std::max(s, prev);
  return prev;
}

double BitLedger::infimum_accepted() const {
  for (const auto& [value, entry] : bits) {
    if (entry.accepted) return value;
  }
  return 0.0;
}

double xi_step(BitLedger& ledger, double s, long t, double theta, double eps) {
  if (s < 0.0) throw std::invalid_argument("tested value must be >= 0");
  ledger.bits[s] = BitLedger::Entry{theta <= s + eps * std::sqrt(s), t};
  return ledger.infimum_accepted();
}

namespace {

Trajectory run_sequential(const SamplePath& x, const Schedule& schedule,
                          const RunOptions& opts, bool strong) {
  if (opts.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  EstimateCache local_cache(x, opts.estimator);
  EstimateCache* cache = opts.cache != nullptr ? opts.cache : &local_cache;

  Trajectory trajectory;
  DenseDyadics dyadics;
  BitLedger ledger;
  double psi = 0.0;
  for (long t = 1; t <= opts.horizon; ++t) {
    StepRecord rec;
    rec.t = t;
    const std::size_t index =
        strong ? visit_index(t) : static_cast<std::size_t>(t);
    rec.s = dyadics.value_at(index);
    double theta = 0.0;
    try {
      const long budget =
          opts.budget.resolve(schedule, t, opts.kind, x.length());
      theta = theta_partial_sum(x, schedule, t, opts.kind, budget,
                                opts.estimator, cache);
    } catch (const InsufficientSampleError& e) {
      trajectory.truncated = true;
      trajectory.truncate_reason =
          "step " + std::to_string(t) + ": " + e.what();
      break;
    }
    const double eps = schedule.eps(t);
    rec.theta = theta;
    rec.threshold = rec.s + eps * std::sqrt(rec.s);
    if (strong) {
      rec.decision = theta <= rec.threshold;
      rec.estimate = xi_step(ledger, rec.s, t, theta, eps);
    } else {
      rec.decision = theta > rec.threshold;
      psi = psi_step(psi, rec.s, theta, eps);
      rec.estimate = psi;
    }
    trajectory.steps.push_back(rec);
  }
  return trajectory;
}

}  // namespace

Trajectory run_weak(const SamplePath& x, const Schedule& schedule,
                    const RunOptions& opts) {
  return run_sequential(x, schedule, opts, /*strong=*/false);
}

Trajectory run_strong(const SamplePath& x, const Schedule& schedule,
                      const RunOptions& opts) {
  return run_sequential(x, schedule, opts, /*strong=*/true);
}

void write_trajectory_jsonl(const Trajectory& trajectory, std::ostream& out) {
  for (const StepRecord& rec : trajectory.steps) {
    nlohmann::ordered_json line;
    line["t"] = rec.t;
    line["s"] = rec.s;
    line["theta"] = rec.theta;
    line["threshold"] = rec.threshold;
    line["decision"] = rec.decision;
    line["estimate"] = rec.estimate;
    out << line.dump() << "\n";
  }
}

}  // namespace mixest
