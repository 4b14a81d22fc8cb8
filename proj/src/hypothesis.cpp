#include "mixest/hypothesis.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mixest {

RateFunction::RateFunction(std::vector<double> values, Tail tail, double ratio)
    : values_(std::move(values)), tail_(tail), ratio_(ratio) {
  if (values_.empty()) {
    throw std::invalid_argument("rate function needs at least one value");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("rate values must lie in [0, 1]");
    }
  }
  if (tail_ == Tail::Geometric && !(ratio_ > 0.0 && ratio_ <= 1.0)) {
    throw std::invalid_argument("geometric tail ratio must lie in (0, 1]");
  }
}

RateFunction RateFunction::constant(double gamma) {
  return RateFunction({gamma}, Tail::Constant);
}

double RateFunction::at(int m) const {
  if (m < 1) throw std::invalid_argument("gap m must be >= 1");
  const int size = table_size();
  if (m <= size) return values_[static_cast<std::size_t>(m - 1)];
  if (tail_ == Tail::Constant) return values_.back();
  return values_.back() * std::pow(ratio_, m - size);
}

RateFunction RateFunction::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  Tail tail = Tail::Constant;
  double ratio = 1.0;
  const auto fail = [&](const std::string& what) {
    throw std::runtime_error("rate file line " + std::to_string(lineno) +
                             ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#') continue;
    if (first.rfind("tail=", 0) == 0) {
      const std::string rule = first.substr(5);
      if (rule == "constant") {
        tail = Tail::Constant;
      } else if (rule == "geometric") {
        tail = Tail::Geometric;
        if (!(fields >> ratio)) fail("geometric tail needs a ratio");
      } else {
        fail("unknown tail rule '" + rule + "'");
      }
      std::string extra;
      if (fields >> extra) fail("trailing junk after tail directive");
      continue;
    }
    int m = 0;
    double value = 0.0;
    try {
      m = std::stoi(first);
    } catch (const std::exception&) {
      fail("expected a gap index, got '" + first + "'");
    }
    if (!(fields >> value)) fail("expected a value after the gap index");
    std::string extra;
    if (fields >> extra) fail("trailing junk after the value");
    if (m != static_cast<int>(values.size()) + 1) {
      fail("gap indices must run 1..M contiguously");
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw std::runtime_error("rate file holds no rate values");
  }
  return RateFunction(std::move(values), tail, ratio);
}

RateFunction RateFunction::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rate file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

TestVerdict rate_test(const SamplePath& x, const RateFunction& gamma,
                      const Schedule& schedule, long t, Kind kind,
                      const TestOptions& opts) {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  const long budget =
      BudgetPolicy::practical(opts.block_budget)
          .resolve(schedule, t, kind, x.length());
  const int n = schedule.n(t);
  const int ell = schedule.ell(t);
  const int M = schedule.M(t);
  if (n < M + 2) {
    throw std::invalid_argument("schedule leaves no admissible split at t");
  }
  const double eps = schedule.eps(t);
  EstimateCache local_cache(x, opts.estimator);
  EstimateCache* cache = opts.cache != nullptr ? opts.cache : &local_cache;

  TestVerdict verdict;
  verdict.at_time = t;
  verdict.evidence["M"] = M;
  verdict.evidence["eps"] = eps;
  bool all_within = true;
  for (int m = 1; m <= M; ++m) {
    const double estimate = cache->get(kind, budget, n, ell, m).value;
    const double bound = gamma.at(m) + eps;
    verdict.evidence["estimate_m" + std::to_string(m)] = estimate;
    verdict.evidence["bound_m" + std::to_string(m)] = bound;
    if (estimate > bound) all_within = false;
  }
  verdict.decision = all_within ? +1 : -1;
  return verdict;
}

TestVerdict threshold_test(const SamplePath& x, double gamma,
                           const Schedule& schedule, long t, Kind kind,
                           const TestOptions& opts) {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  RunOptions run;
  run.horizon = t;
  run.kind = kind;
  run.budget = BudgetPolicy::practical(opts.block_budget);
  run.estimator = opts.estimator;
  run.cache = opts.cache;
  const Trajectory trajectory = run_strong(x, schedule, run);
  if (trajectory.truncated) {
    const auto required = static_cast<std::uint64_t>(opts.block_budget) *
                          static_cast<std::uint64_t>(schedule.n(t));
    throw InsufficientSampleError(required, x.length());
  }
  const double xi = trajectory.final_estimate();
  const double zeta = schedule.zeta(t);
  TestVerdict verdict;
  verdict.at_time = t;
  verdict.evidence["xi"] = xi;
  verdict.evidence["gamma"] = gamma;
  verdict.evidence["zeta"] = zeta;
  verdict.evidence["bound"] = gamma + zeta;
  verdict.decision = xi <= gamma + zeta ? +1 : -1;
  return verdict;
}

TestVerdict independence_test(const SamplePath& x, const Schedule& schedule,
                              long t, const TestOptions& opts) {
  return threshold_test(x, 0.0, schedule, t, Kind::Alpha, opts);
}

}  // namespace mixest
