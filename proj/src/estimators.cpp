#include "mixest/estimators.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace mixest {

using boost::multiprecision::cpp_rational;

MixingEstimate mixing_estimate(Kind kind, const SamplePath& x, long t, int n,
                               int ell, int m, const EstimatorOptions& opts) {
  if (m < 1) throw std::invalid_argument("gap m must be >= 1");
  if (n < m + 2) {
    throw std::invalid_argument(
        "block length n must be >= m + 2 so a split exists (n = " +
        std::to_string(n) + ", m = " + std::to_string(m) + ")");
  }
  MixingEstimate est;
  est.kind = kind;
  est.m = m;
  est.t = t;
  est.n = n;
  est.ell = ell;
  est.exact_solver = true;
  double best = 0.0;
  for (int j = 1; j <= n - m - 1; ++j) {
    const DependenceMatrix d = build_dependence_matrix(x, t, n, m, j, ell);
    double value = 0.0;
    if (kind == Kind::Beta) {
      value = half_abs_sum(d);
    } else {
      const std::size_t small = std::min(d.rows(), d.cols());
      const bool fits = small <= static_cast<std::size_t>(opts.exact_cap);
      const bool use_exact =
          opts.policy == SolverPolicy::Exact ||
          (opts.policy == SolverPolicy::Auto && fits);
      if (use_exact) {
        value = bilinear_sup_exact(d, opts.exact_cap).value;
      } else {
        value = bilinear_sup_heuristic(d, opts.restarts, opts.seed).value;
        est.exact_solver = false;
      }
    }
    best = std::max(best, value);
  }
  est.value = best;
  return est;
}

MixingEstimate alpha_hat_fixed(const SamplePath& x, long t, int n, int ell,
                               int m, const EstimatorOptions& opts) {
  return mixing_estimate(Kind::Alpha, x, t, n, ell, m, opts);
}

MixingEstimate beta_hat_fixed(const SamplePath& x, long t, int n, int ell,
                              int m, const EstimatorOptions& opts) {
  return mixing_estimate(Kind::Beta, x, t, n, ell, m, opts);
}

namespace {

// Largest inner exponent the constants will materialize; 2^26 bits is a
// few megabytes, enough for any desk-scale parameter choice.
constexpr int kMaxInnerExponent = 26;

std::uint64_t checked_power_exponent(long e, const char* what) {
  if (e > kMaxInnerExponent) {
    throw std::domain_error(std::string(what) + " = " + std::to_string(e) +
                            " makes the constant too large to materialize");
  }
  return std::uint64_t{1} << static_cast<unsigned>(e);
}

BigInt ceil_of(const cpp_rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt quot = num / den;
  if (quot * den != num && num > 0) ++quot;
  return quot;
}

cpp_rational positive_rational(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
  return cpp_rational(v);  // exact binary value of the double
}

}  // namespace

BigInt alpha_concentration_constant(int m, int ell, int n) {
  if (m < 1 || ell < 1 || n < 1) {
    throw std::invalid_argument("m, ell, n must all be >= 1");
  }
  const std::uint64_t e1 =
      checked_power_exponent(static_cast<long>(n) * ell, "n * ell");
  const std::uint64_t e2 =
      checked_power_exponent(static_cast<long>(m) * ell + 1, "m * ell + 1");
  return BigInt(m) << (e1 + e2 + 1);
}

BigInt beta_concentration_constant(int m, int ell, int k) {
  if (m < 1 || ell < 1 || k < 1) {
    throw std::invalid_argument("m, ell, k must all be >= 1");
  }
  const std::uint64_t e1 = checked_power_exponent(
      2L * k * ell + 1, "2 * k * ell + 1");
  const std::uint64_t e2 =
      checked_power_exponent(static_cast<long>(m) * ell + 1, "m * ell + 1");
  return BigInt(m) << (e1 + e2 + 2);
}

BigInt theoretical_coefficient_budget(const Schedule& schedule, int m, long t,
                                      Kind kind) {
  if (m < 1) throw std::invalid_argument("gap m must be >= 1");
  const int ell = schedule.ell(t);
  const int n = schedule.n(t);
  const BigInt c = kind == Kind::Alpha
                       ? alpha_concentration_constant(m, ell, n)
                       : beta_concentration_constant(m, ell, n);
  const cpp_rational eps = positive_rational(schedule.eps(t), "eps(t)");
  const cpp_rational delta = positive_rational(schedule.delta(t), "delta(t)");
  return ceil_of(cpp_rational(c) / (cpp_rational(m) * eps * eps * delta));
}

BigInt theoretical_sum_budget(const Schedule& schedule, long t, Kind kind) {
  const int ell = schedule.ell(t);
  const int n = schedule.n(t);
  const int M = schedule.M(t);
  const BigInt c = kind == Kind::Alpha
                       ? alpha_concentration_constant(M, ell, n)
                       : beta_concentration_constant(M, ell, n);
  const cpp_rational eps = positive_rational(schedule.eps(t), "eps(t)");
  const cpp_rational delta = positive_rational(schedule.delta(t), "delta(t)");
  return ceil_of(cpp_rational(c) / (eps * eps * delta));
}

BudgetPolicy BudgetPolicy::practical(long blocks) {
  if (blocks < 1) throw std::invalid_argument("block budget must be >= 1");
  return BudgetPolicy{Mode::Practical, blocks};
}

BudgetPolicy BudgetPolicy::theoretical() {
  return BudgetPolicy{Mode::Theoretical, 0};
}

long BudgetPolicy::resolve(const Schedule& schedule, long t, Kind kind,
                           std::size_t sample_length) const {
  const int n = schedule.n(t);
  if (mode == Mode::Practical) {
    if (blocks < 1) throw std::invalid_argument("block budget must be >= 1");
    const auto required = static_cast<std::uint64_t>(blocks) *
                          static_cast<std::uint64_t>(n);
    if (sample_length < required) {
      throw InsufficientSampleError(required, sample_length);
    }
    return blocks;
  }
  const BigInt budget = theoretical_sum_budget(schedule, t, kind);
  const BigInt usable = BigInt(sample_length) / n;
  if (budget > usable) {
    const BigInt required = budget * n;
    const auto reported =
        required > std::numeric_limits<std::uint64_t>::max()
            ? std::numeric_limits<std::uint64_t>::max()
            : required.convert_to<std::uint64_t>();
    throw InsufficientSampleError(reported, sample_length);
  }
  return budget.convert_to<long>();
}

EstimateCache::EstimateCache(const SamplePath& x, EstimatorOptions opts)
    : sample_(&x), opts_(opts) {}

const MixingEstimate& EstimateCache::get(Kind kind, long t, int n, int ell,
                                         int m) {
  const auto key = std::make_tuple(static_cast<int>(kind), t, n, ell, m);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    it = memo_.emplace(key, mixing_estimate(kind, *sample_, t, n, ell, m,
                                            opts_))
             .first;
  }
  return it->second;
}

double theta_partial_sum(const SamplePath& x, const Schedule& schedule, long t,
                         Kind kind, long block_budget,
                         const EstimatorOptions& opts, EstimateCache* cache) {
  const int n = schedule.n(t);
  const int ell = schedule.ell(t);
  const int M = schedule.M(t);
  if (n < M + 2) {
    throw std::invalid_argument(
        "schedule leaves no admissible split: n(t) = " + std::to_string(n) +
        " < M(t) + 2 = " + std::to_string(M + 2));
  }
  double total = 0.0;
  for (int m = 1; m <= M; ++m) {
    if (cache != nullptr) {
      total += cache->get(kind, block_budget, n, ell, m).value;
    } else {
      total += mixing_estimate(kind, x, block_budget, n, ell, m, opts).value;
    }
  }
  return total;
}

}  // namespace mixest
