// Command-line front end: simulate synthetic processes, estimate mixing
// coefficients and their l1 sums, run hypothesis tests, and print exact
// model values for finite chains.  Reports are JSON with a schema tag and
// an echo of the effective configuration; all randomness flows from the
// --seed flag, so identical invocations produce identical bytes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixest/core.hpp"
#include "mixest/empirical.hpp"
#include "mixest/estimators.hpp"
#include "mixest/hypothesis.hpp"
#include "mixest/sequential.hpp"
#include "mixest/solver.hpp"
#include "mixest/synthetic.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mixest;

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move output into place: " + path);
  }
}

json schedule_to_json(const Schedule& s) {
  json out;
  out["ell_base"] = s.ell_base;
  out["ell_log_div"] = s.ell_log_div;
  out["n_base"] = s.n_base;
  out["n_step"] = s.n_step;
  out["M_base"] = s.M_base;
  out["M_step"] = s.M_step;
  out["eps_scale"] = s.eps_scale;
  out["eps_exponent"] = s.eps_exponent;
  out["delta_total"] = s.delta_total;
  out["zeta_scale"] = s.zeta_scale;
  out["zeta_exponent"] = s.zeta_exponent;
  return out;
}

json estimate_to_json(const MixingEstimate& e) {
  json out;
  out["kind"] = e.kind == Kind::Alpha ? "alpha" : "beta";
  out["m"] = e.m;
  out["value"] = e.value;
  out["t"] = e.t;
  out["n"] = e.n;
  out["ell"] = e.ell;
  out["exact_solver"] = e.exact_solver;
  return out;
}

json trajectory_to_json(const Trajectory& trajectory) {
  json steps = json::array();
  for (const StepRecord& rec : trajectory.steps) {
    json step;
    step["t"] = rec.t;
    step["s"] = rec.s;
    step["theta"] = rec.theta;
    step["threshold"] = rec.threshold;
    step["decision"] = rec.decision;
    step["estimate"] = rec.estimate;
    steps.push_back(std::move(step));
  }
  json out;
  out["final_estimate"] = trajectory.final_estimate();
  out["truncated"] = trajectory.truncated;
  if (trajectory.truncated) out["truncate_reason"] = trajectory.truncate_reason;
  out["trajectory"] = std::move(steps);
  return out;
}

json verdict_to_json(const TestVerdict& verdict) {
  json out;
  out["decision"] = verdict.decision;
  out["at_time"] = verdict.at_time;
  json evidence;
  for (const auto& [key, value] : verdict.evidence) evidence[key] = value;
  out["evidence"] = std::move(evidence);
  return out;
}

json report_skeleton(const std::string& command, const std::string& sub) {
  json report;
  report["schema"] = 1;
  report["command"] = command;
  report["subcommand"] = sub;
  return report;
}

void emit_report(const std::string& output, json report) {
  write_text_atomic(output, report.dump(2) + "\n");
}

Kind parse_kind(const std::string& name) {
  if (name == "alpha") return Kind::Alpha;
  if (name == "beta") return Kind::Beta;
  throw std::runtime_error("unknown kind: " + name);
}

SolverPolicy parse_solver(const std::string& name) {
  if (name == "auto") return SolverPolicy::Auto;
  if (name == "exact") return SolverPolicy::Exact;
  if (name == "heuristic") return SolverPolicy::Heuristic;
  throw std::runtime_error("unknown solver policy: " + name);
}

// Options shared by every command that reads a sample and estimates.
struct AnalysisOptions {
  std::string input;
  bool rescale = false;
  std::string schedule_file;
  std::string solver = "auto";
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "sample file, one value per line")
        ->required();
    cmd->add_flag("--rescale", rescale,
                  "affinely map the sample onto [0, 1] first");
    cmd->add_option("--schedule", schedule_file,
                    "schedule config overriding the default sequences");
    cmd->add_option("--solver", solver, "subset maximizer: auto|exact|heuristic")
        ->check(CLI::IsMember({"auto", "exact", "heuristic"}));
    cmd->add_option("--restarts", restarts,
                    "random restarts for the heuristic maximizer")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", seed, "seed for the heuristic maximizer");
    cmd->add_option("--output", output, "write the report here (default stdout)");
  }

  SamplePath load_sample() const { return load_sample_file(input, rescale); }

  Schedule load_schedule() const {
    return schedule_file.empty() ? Schedule{}
                                 : load_schedule_file(schedule_file);
  }

  EstimatorOptions estimator_options() const {
    EstimatorOptions opts;
    opts.policy = parse_solver(solver);
    opts.restarts = restarts;
    opts.seed = seed;
    return opts;
  }

  json config_json() const {
    json out;
    out["input"] = input;
    out["rescale"] = rescale;
    out["solver"] = solver;
    out["restarts"] = restarts;
    out["seed"] = seed;
    return out;
  }
};

int run_simulate(const std::string& sub, const std::string& chain_file, int q,
                 long length, std::uint64_t seed, const std::string& output) {
  if (length < 1) throw std::runtime_error("--length must be >= 1");
  SamplePath sample = [&] {
    const auto len = static_cast<std::size_t>(length);
    if (sub == "iid") return gen_iid(len, seed);
    if (sub == "ma") return gen_ma(q, len, seed);
    return gen_chain(FiniteChain::load_file(chain_file), len, seed);
  }();
  std::ostringstream out;
  out << "# mixest simulate " << sub;
  if (sub == "chain") out << " --file " << chain_file;
  if (sub == "ma") out << " --q " << q;
  out << " --length " << length << " --seed " << seed << "\n";
  for (double v : sample.values()) out << format_value(v) << "\n";
  write_text_atomic(output, out.str());
  return 0;
}

int run_estimate_fixed(const std::string& sub, const AnalysisOptions& common,
                       int n, int ell, int m, int M, long t_budget) {
  const SamplePath sample = common.load_sample();
  const Kind kind = parse_kind(sub);
  const EstimatorOptions opts = common.estimator_options();
  if (n < 1) throw std::runtime_error("--n must be >= 1");
  long budget = t_budget;
  if (budget == 0) {
    budget = static_cast<long>(sample.length()) / n;
    if (budget < 1) {
      throw InsufficientSampleError(static_cast<std::uint64_t>(n),
                                    sample.length());
    }
  }

  json report = report_skeleton("estimate", sub);
  json config = common.config_json();
  config["n"] = n;
  config["ell"] = ell;
  config["t_budget"] = budget;
  json results;
  if (M > 0) {
    config["M"] = M;
    json estimates = json::array();
    double theta = 0.0;
    for (int gap = 1; gap <= M; ++gap) {
      const MixingEstimate e =
          mixing_estimate(kind, sample, budget, n, ell, gap, opts);
      theta += e.value;
      estimates.push_back(estimate_to_json(e));
    }
    results["estimates"] = std::move(estimates);
    results["theta"] = theta;
  } else {
    config["m"] = m;
    const MixingEstimate e =
        mixing_estimate(kind, sample, budget, n, ell, m, opts);
    results["estimates"] = json::array({estimate_to_json(e)});
  }
  report["config"] = std::move(config);
  report["results"] = std::move(results);
  emit_report(common.output, std::move(report));
  return 0;
}

int run_estimate_l1(const std::string& sub, const AnalysisOptions& common,
                    const std::string& kind_name, long horizon, long t_budget,
                    const std::string& trajectory_file) {
  const SamplePath sample = common.load_sample();
  const Schedule schedule = common.load_schedule();
  RunOptions run;
  run.horizon = horizon;
  run.kind = parse_kind(kind_name);
  run.budget = BudgetPolicy::practical(t_budget);
  run.estimator = common.estimator_options();
  const bool weak = sub == "l1-weak";
  const Trajectory trajectory = weak ? run_weak(sample, schedule, run)
                                     : run_strong(sample, schedule, run);
  if (!trajectory_file.empty()) {
    std::ostringstream lines;
    write_trajectory_jsonl(trajectory, lines);
    write_text_atomic(trajectory_file, lines.str());
  }

  json report = report_skeleton("estimate", sub);
  json config = common.config_json();
  config["kind"] = kind_name;
  config["horizon"] = horizon;
  config["t_budget"] = t_budget;
  config["schedule"] = schedule_to_json(schedule);
  report["config"] = std::move(config);
  report["results"] = trajectory_to_json(trajectory);
  emit_report(common.output, std::move(report));
  return 0;
}

int run_test(const std::string& sub, const AnalysisOptions& common,
             const std::string& kind_name, long t, long t_budget, double gamma,
             const std::string& gamma_file) {
  const SamplePath sample = common.load_sample();
  const Schedule schedule = common.load_schedule();
  TestOptions opts;
  opts.block_budget = t_budget;
  opts.estimator = common.estimator_options();

  json report = report_skeleton("test", sub);
  json config = common.config_json();
  config["t"] = t;
  config["t_budget"] = t_budget;
  config["schedule"] = schedule_to_json(schedule);

  TestVerdict verdict;
  if (sub == "rate") {
    const Kind kind = parse_kind(kind_name);
    config["kind"] = kind_name;
    const RateFunction rate = gamma_file.empty()
                                  ? RateFunction::constant(gamma)
                                  : RateFunction::load_file(gamma_file);
    if (gamma_file.empty()) {
      config["gamma"] = gamma;
    } else {
      config["gamma_file"] = gamma_file;
      json table = json::array();
      for (int m = 1; m <= rate.table_size(); ++m) table.push_back(rate.at(m));
      config["gamma_table"] = std::move(table);
      config["gamma_tail"] =
          rate.tail() == RateFunction::Tail::Constant ? "constant" : "geometric";
      if (rate.tail() == RateFunction::Tail::Geometric) {
        config["gamma_tail_ratio"] = rate.ratio();
      }
    }
    verdict = rate_test(sample, rate, schedule, t, kind, opts);
  } else if (sub == "threshold") {
    const Kind kind = parse_kind(kind_name);
    config["kind"] = kind_name;
    config["gamma"] = gamma;
    verdict = threshold_test(sample, gamma, schedule, t, kind, opts);
  } else {
    verdict = independence_test(sample, schedule, t, opts);
  }
  report["config"] = std::move(config);
  report["results"] = verdict_to_json(verdict);
  emit_report(common.output, std::move(report));
  return 0;
}

int run_oracle(const std::string& sub, const std::string& chain_file, int n,
               int ell, int m, int j, const std::string& output) {
  const FiniteChain chain = FiniteChain::load_file(chain_file);
  json report = report_skeleton("oracle", sub);
  json config;
  config["file"] = chain_file;
  config["n"] = n;
  config["ell"] = ell;
  config["m"] = m;
  json results;
  if (sub == "coeffs") {
    json splits = json::array();
    for (int split = 1; split <= n - m - 1; ++split) {
      const DependenceMatrix d = exact_dependence_matrix(chain, n, m, split, ell);
      json entry;
      entry["j"] = split;
      entry["alpha"] = bilinear_sup_exact(d).value;
      entry["beta"] = half_abs_sum(d);
      splits.push_back(std::move(entry));
    }
    const auto [alpha, beta] = exact_level_coefficients(chain, n, ell, m);
    results["alpha"] = alpha;
    results["beta"] = beta;
    results["splits"] = std::move(splits);
  } else {
    config["j"] = j;
    const DependenceMatrix d = exact_dependence_matrix(chain, n, m, j, ell);
    json entries = json::array();
    std::vector<double> row_sums(d.rows(), 0.0), col_sums(d.cols(), 0.0);
    for (std::size_t r = 0; r < d.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < d.cols(); ++c) {
        row.push_back(d.at(r, c));
        row_sums[r] += d.at(r, c);
        col_sums[c] += d.at(r, c);
      }
      entries.push_back(std::move(row));
    }
    results["rows"] = d.rows();
    results["cols"] = d.cols();
    results["entries"] = std::move(entries);
    results["row_sums"] = row_sums;
    results["col_sums"] = col_sums;
  }
  report["config"] = std::move(config);
  report["results"] = std::move(results);
  emit_report(output, std::move(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixing-coefficient estimation from a single sample path"};
  app.require_subcommand(1);
  std::function<int()> action;

  // simulate -------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "generate a sample file");
  simulate->require_subcommand(1);
  long sim_length = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_output, sim_chain_file;
  int sim_q = 1;
  for (const std::string sub : {"iid", "chain", "ma"}) {
    auto* cmd = simulate->add_subcommand(
        sub, sub == "iid"   ? "independent uniform values"
             : sub == "ma"  ? "moving average of uniform noise"
                            : "finite-state chain from a chain file");
    cmd->add_option("--length", sim_length, "number of values")->required();
    cmd->add_option("--seed", sim_seed, "generator seed")->required();
    cmd->add_option("--output", sim_output, "sample file (default stdout)");
    if (sub == "chain") {
      cmd->add_option("--file", sim_chain_file, "chain description file")
          ->required();
    }
    if (sub == "ma") {
      cmd->add_option("--q", sim_q, "window order; averages q+1 draws")
          ->check(CLI::NonNegativeNumber);
    }
    cmd->callback([&, sub] {
      action = [&, sub] {
        return run_simulate(sub, sim_chain_file, sim_q, sim_length, sim_seed,
                            sim_output);
      };
    });
  }

  // estimate -------------------------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "estimate coefficients");
  estimate->require_subcommand(1);
  AnalysisOptions est_common;
  int est_n = 3, est_ell = 1, est_m = 1, est_M = 0;
  long est_budget = 0;
  std::string est_kind = "alpha", est_trajectory;
  long est_horizon = 0;
  for (const std::string sub : {"alpha", "beta"}) {
    auto* cmd = estimate->add_subcommand(
        sub, "fixed-parameter " + sub + " coefficient estimate");
    est_common.attach(cmd);
    cmd->add_option("--n", est_n, "block length");
    cmd->add_option("--ell", est_ell, "discretization level");
    cmd->add_option("--m", est_m, "gap (ignored when --M is given)");
    cmd->add_option("--M", est_M, "estimate every gap 1..M and their sum");
    cmd->add_option("--t-budget", est_budget,
                    "blocks to consume (default: as many as fit)");
    cmd->callback([&, sub] {
      action = [&, sub] {
        return run_estimate_fixed(sub, est_common, est_n, est_ell, est_m,
                                  est_M, est_budget);
      };
    });
  }
  for (const std::string sub : {"l1-weak", "l1-strong"}) {
    auto* cmd = estimate->add_subcommand(
        sub, std::string("sequential l1-norm estimate (") +
                 (sub == "l1-weak" ? "ratchet" : "accept-set infimum") + ")");
    est_common.attach(cmd);
    cmd->add_option("--kind", est_kind, "coefficient family: alpha|beta")
        ->check(CLI::IsMember({"alpha", "beta"}));
    cmd->add_option("--horizon", est_horizon, "number of sequential steps")
        ->required();
    cmd->add_option("--t-budget", est_budget, "blocks per estimate")
        ->required();
    cmd->add_option("--trajectory", est_trajectory,
                    "write per-step JSON lines here");
    cmd->callback([&, sub] {
      action = [&, sub] {
        return run_estimate_l1(sub, est_common, est_kind, est_horizon,
                               est_budget, est_trajectory);
      };
    });
  }

  // test -----------------------------------------------------------------
  auto* test = app.add_subcommand("test", "hypothesis tests");
  test->require_subcommand(1);
  AnalysisOptions test_common;
  std::string test_kind = "alpha", test_gamma_file;
  long test_t = 8, test_budget = 0;
  double test_gamma = 0.0;
  for (const std::string sub : {"rate", "threshold", "independence"}) {
    auto* cmd = test->add_subcommand(
        sub, sub == "rate"        ? "does the process mix at rate gamma(m)?"
             : sub == "threshold" ? "is the summed dependence below gamma?"
                                  : "is the process independent?");
    test_common.attach(cmd);
    cmd->add_option("--t", test_t, "time index driving the schedule");
    cmd->add_option("--t-budget", test_budget, "blocks per estimate")
        ->required();
    if (sub != "independence") {
      cmd->add_option("--kind", test_kind, "coefficient family: alpha|beta")
          ->check(CLI::IsMember({"alpha", "beta"}));
    }
    if (sub == "rate") {
      auto* gamma_opt =
          cmd->add_option("--gamma", test_gamma, "constant rate bound");
      auto* file_opt =
          cmd->add_option("--gamma-file", test_gamma_file, "rate function file");
      gamma_opt->excludes(file_opt);
      cmd->callback([&] {
        action = [&, gamma_opt, file_opt] {
          if (gamma_opt->count() == 0 && file_opt->count() == 0) {
            throw std::runtime_error(
                "test rate needs --gamma or --gamma-file");
          }
          return run_test("rate", test_common, test_kind, test_t, test_budget,
                          test_gamma, test_gamma_file);
        };
      });
      continue;
    }
    if (sub == "threshold") {
      cmd->add_option("--gamma", test_gamma, "threshold")->required();
    }
    cmd->callback([&, sub] {
      action = [&, sub] {
        return run_test(sub, test_common, test_kind, test_t, test_budget,
                        test_gamma, test_gamma_file);
      };
    });
  }

  // oracle ---------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "exact chain values");
  oracle->require_subcommand(1);
  std::string orc_file, orc_output;
  int orc_n = 3, orc_ell = 1, orc_m = 1, orc_j = 1;
  for (const std::string sub : {"coeffs", "matrix"}) {
    auto* cmd = oracle->add_subcommand(
        sub, sub == "coeffs" ? "exact level coefficients of a chain"
                             : "exact dependence matrix of a chain");
    cmd->add_option("--file", orc_file, "chain description file")->required();
    cmd->add_option("--n", orc_n, "block length");
    cmd->add_option("--ell", orc_ell, "discretization level");
    cmd->add_option("--m", orc_m, "gap");
    if (sub == "matrix") cmd->add_option("--j", orc_j, "split position");
    cmd->add_option("--output", orc_output, "write the report here");
    cmd->callback([&, sub] {
      action = [&, sub] {
        return run_oracle(sub, orc_file, orc_n, orc_ell, orc_m, orc_j,
                          orc_output);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const InsufficientSampleError& e) {
    json report;
    report["schema"] = 1;
    report["error"] = "insufficient_sample";
    report["required_length"] = e.required_length();
    report["actual_length"] = e.actual_length();
    std::cout << report.dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
