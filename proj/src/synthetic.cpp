#include "mixest/synthetic.hpp"

#include "mixest/solver.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mixest {

namespace detail {
std::uint64_t atom_index_unchecked(const double* point, int dimension,
                                   int level);
}

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-10;

// 53-bit uniform draw in [0, 1); keeps generation identical across
// platforms, unlike the distribution adapters.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> multiply_left(const std::vector<double>& pi,
                                  const std::vector<std::vector<double>>& p) {
  const std::size_t s = pi.size();
  std::vector<double> out(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t k = 0; k < s; ++k) out[k] += pi[i] * p[i][k];
  }
  return out;
}

std::vector<std::vector<double>> multiply(
    const std::vector<std::vector<double>>& a,
    const std::vector<std::vector<double>>& b) {
  const std::size_t s = a.size();
  std::vector<std::vector<double>> out(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t k = 0; k < s; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t l = 0; l < s; ++l) out[i][l] += aik * b[k][l];
    }
  }
  return out;
}

std::vector<std::vector<double>> matrix_power(
    const std::vector<std::vector<double>>& p, int e) {
  const std::size_t s = p.size();
  std::vector<std::vector<double>> out(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) out[i][i] = 1.0;
  for (int i = 0; i < e; ++i) out = multiply(out, p);
  return out;
}

std::vector<double> stationary_by_iteration(
    const std::vector<std::vector<double>>& p) {
  const std::size_t s = p.size();
  std::vector<double> pi(s, 1.0 / static_cast<double>(s));
  for (int iter = 0; iter < 200000; ++iter) {
    // Damped update keeps periodic chains convergent.
    std::vector<double> next = multiply_left(pi, p);
    double diff = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      next[i] = 0.5 * (next[i] + pi[i]);
      diff += std::abs(next[i] - pi[i]);
    }
    pi = std::move(next);
    if (diff < 1e-15) break;
  }
  return pi;
}

int sample_categorical(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

void check_oracle_split(const FiniteChain& chain, int n, int m, int j,
                        int ell) {
  if (m < 1) throw std::invalid_argument("gap m must be >= 1");
  if (n < m + 2) {
    throw std::invalid_argument("block length n must be >= m + 2");
  }
  if (j < 1 || j > n - m - 1) {
    throw std::invalid_argument("split j must lie in [1, n - m - 1]");
  }
  if (ell < 1) throw std::invalid_argument("level must be >= 1");
  const int jp = n - m - j;
  if (static_cast<long>(j) * ell > 22 || static_cast<long>(jp) * ell > 22 ||
      static_cast<long>(j + jp) * ell > 22) {
    throw std::invalid_argument("atom space too large to materialize");
  }
  double words = 1.0;
  for (int i = 0; i < n - m; ++i) {
    words *= static_cast<double>(chain.state_count());
  }
  if (words > 4e6) {
    throw std::invalid_argument("state word space too large to enumerate");
  }
}

// All length-w state words with their atom index, their probability
// conditional on nothing (path product of transitions), and endpoints.
struct WordTable {
  std::vector<std::uint64_t> atom;
  std::vector<double> path;  // product of transitions inside the word
  std::vector<int> first;
  std::vector<int> last;
};

WordTable enumerate_words(const FiniteChain& chain, int w, int ell) {
  const auto s = static_cast<std::uint64_t>(chain.state_count());
  std::uint64_t count = 1;
  for (int i = 0; i < w; ++i) count *= s;
  WordTable table;
  table.atom.resize(count);
  table.path.resize(count);
  table.first.resize(count);
  table.last.resize(count);
  std::vector<int> word(static_cast<std::size_t>(w));
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (int i = 0; i < w; ++i) {  // digit i is the i-th coordinate
      word[static_cast<std::size_t>(i)] = static_cast<int>(rest % s);
      rest /= s;
    }
    double path = 1.0;
    std::uint64_t atom = 0;
    for (int i = w - 1; i >= 0; --i) {
      const int state = word[static_cast<std::size_t>(i)];
      const double value = chain.states()[static_cast<std::size_t>(state)];
      const std::uint64_t cells = std::uint64_t{1} << ell;
      auto cell = static_cast<std::uint64_t>(value * static_cast<double>(cells));
      cell = std::min(cell, cells - 1);
      atom = (atom << ell) | cell;
      if (i + 1 < w) {
        path *= chain.transition()[static_cast<std::size_t>(state)]
                                  [static_cast<std::size_t>(
                                      word[static_cast<std::size_t>(i + 1)])];
      }
    }
    table.atom[idx] = atom;
    table.path[idx] = path;
    table.first[idx] = word.front();
    table.last[idx] = word.back();
  }
  return table;
}

}  // namespace

FiniteChain::FiniteChain(std::vector<double> states,
                         std::vector<std::vector<double>> transition,
                         std::optional<std::vector<double>> initial)
    : states_(std::move(states)), transition_(std::move(transition)) {
  const std::size_t s = states_.size();
  if (s < 1) throw std::invalid_argument("chain needs at least one state");
  for (double v : states_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("state values must lie in [0, 1]");
    }
  }
  if (transition_.size() != s) {
    throw std::invalid_argument("transition matrix must be square");
  }
  for (const auto& row : transition_) {
    if (row.size() != s) {
      throw std::invalid_argument("transition matrix must be square");
    }
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) {
        throw std::domain_error("transition probabilities must be >= 0");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::domain_error("transition row sums to " +
                              std::to_string(sum) + ", not 1");
    }
  }
  if (initial.has_value()) {
    initial_ = std::move(*initial);
    if (initial_.size() != s) {
      throw std::invalid_argument("initial distribution size mismatch");
    }
    double sum = 0.0;
    for (double p : initial_) {
      if (!(p >= 0.0)) {
        throw std::domain_error("initial probabilities must be >= 0");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw std::domain_error("initial distribution sums to " +
                              std::to_string(sum) + ", not 1");
    }
  } else {
    initial_ = stationary_by_iteration(transition_);
  }
  const std::vector<double> advanced = multiply_left(initial_, transition_);
  for (std::size_t i = 0; i < s; ++i) {
    if (std::abs(advanced[i] - initial_[i]) > kStationaryTolerance) {
      throw std::domain_error("initial distribution is not stationary");
    }
  }
}

FiniteChain FiniteChain::two_state(double p, double q, double value0,
                                   double value1) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("transition probabilities must lie in [0, 1]");
  }
  if (p + q <= 0.0) {
    throw std::domain_error("two-state chain needs p + q > 0");
  }
  return FiniteChain(
      {value0, value1}, {{1.0 - p, p}, {q, 1.0 - q}},
      std::vector<double>{q / (p + q), p / (p + q)});
}

FiniteChain FiniteChain::parse_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> states;
  std::optional<std::vector<double>> initial;
  std::vector<std::vector<double>> rows;
  const auto fail = [&](const std::string& what) {
    throw std::runtime_error("chain file line " + std::to_string(lineno) +
                             ": " + what);
  };
  const auto numbers_after = [&](const std::string& body) {
    std::istringstream fields(body);
    std::vector<double> out;
    double v = 0.0;
    while (fields >> v) out.push_back(v);
    if (!fields.eof()) fail("malformed number");
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string body = line.substr(first);
    if (body.rfind("states=", 0) == 0) {
      if (!states.empty()) fail("duplicate states= line");
      states = numbers_after(body.substr(7));
      if (states.empty()) fail("states= line lists no values");
      continue;
    }
    if (body.rfind("initial=", 0) == 0) {
      if (initial.has_value()) fail("duplicate initial= line");
      initial = numbers_after(body.substr(8));
      continue;
    }
    rows.push_back(numbers_after(body));
    if (rows.back().empty()) fail("empty transition row");
  }
  if (states.empty()) {
    throw std::runtime_error("chain file is missing a states= line");
  }
  return FiniteChain(std::move(states), std::move(rows), std::move(initial));
}

FiniteChain FiniteChain::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

SamplePath gen_iid(std::size_t length, std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> values(length);
  for (double& v : values) v = uniform01(rng);
  return SamplePath(std::move(values));
}

SamplePath gen_chain(const FiniteChain& chain, std::size_t length,
                     std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> values(length);
  int state = sample_categorical(chain.initial(), uniform01(rng));
  values[0] = chain.states()[static_cast<std::size_t>(state)];
  for (std::size_t i = 1; i < length; ++i) {
    state = sample_categorical(
        chain.transition()[static_cast<std::size_t>(state)], uniform01(rng));
    values[i] = chain.states()[static_cast<std::size_t>(state)];
  }
  return SamplePath(std::move(values));
}

SamplePath gen_ma(int q, std::size_t length, std::uint64_t seed) {
  if (q < 0) throw std::invalid_argument("moving-average order must be >= 0");
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  std::mt19937_64 rng(seed);
  const std::size_t window = static_cast<std::size_t>(q) + 1;
  std::vector<double> noise(length + static_cast<std::size_t>(q));
  for (double& u : noise) u = uniform01(rng);
  std::vector<double> values(length);
  double acc = 0.0;
  for (std::size_t i = 0; i < window; ++i) acc += noise[i];
  values[0] = acc / static_cast<double>(window);
  for (std::size_t i = 1; i < length; ++i) {
    acc += noise[i + window - 1] - noise[i - 1];
    values[i] = acc / static_cast<double>(window);
  }
  return SamplePath(std::move(values));
}

double exact_cylinder_prob(const FiniteChain& chain,
                           const std::vector<int>& word) {
  if (word.empty()) throw std::invalid_argument("word must be non-empty");
  for (int w : word) {
    if (w < 0 || static_cast<std::size_t>(w) >= chain.state_count()) {
      throw std::invalid_argument("state index out of range");
    }
  }
  double prob = chain.initial()[static_cast<std::size_t>(word[0])];
  for (std::size_t i = 1; i < word.size(); ++i) {
    prob *= chain.transition()[static_cast<std::size_t>(word[i - 1])]
                              [static_cast<std::size_t>(word[i])];
  }
  return prob;
}

DependenceMatrix exact_dependence_matrix(const FiniteChain& chain, int n,
                                         int m, int j, int ell) {
  check_oracle_split(chain, n, m, j, ell);
  const int jp = n - m - j;
  const WordTable lead = enumerate_words(chain, j, ell);
  const WordTable trail = enumerate_words(chain, jp, ell);
  const auto bridge = matrix_power(chain.transition(), m + 1);

  const std::size_t rows = std::size_t{1} << (static_cast<unsigned>(j) * ell);
  const std::size_t cols = std::size_t{1} << (static_cast<unsigned>(jp) * ell);
  std::vector<double> joint(rows * cols, 0.0);
  std::vector<double> lead_marginal(rows, 0.0);
  std::vector<double> trail_marginal(cols, 0.0);

  std::vector<double> lead_prob(lead.atom.size());
  for (std::size_t w = 0; w < lead.atom.size(); ++w) {
    lead_prob[w] =
        chain.initial()[static_cast<std::size_t>(lead.first[w])] *
        lead.path[w];
    lead_marginal[lead.atom[w]] += lead_prob[w];
  }
  for (std::size_t v = 0; v < trail.atom.size(); ++v) {
    trail_marginal[trail.atom[v]] +=
        chain.initial()[static_cast<std::size_t>(trail.first[v])] *
        trail.path[v];
  }
  for (std::size_t w = 0; w < lead.atom.size(); ++w) {
    if (lead_prob[w] == 0.0) continue;
    const auto& from = bridge[static_cast<std::size_t>(lead.last[w])];
    for (std::size_t v = 0; v < trail.atom.size(); ++v) {
      joint[lead.atom[w] * cols + trail.atom[v]] +=
          lead_prob[w] * from[static_cast<std::size_t>(trail.first[v])] *
          trail.path[v];
    }
  }

  std::vector<double> entries(rows * cols);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      entries[a * cols + b] =
          joint[a * cols + b] - lead_marginal[a] * trail_marginal[b];
    }
  }
  return DependenceMatrix(rows, cols, std::move(entries),
                          MatrixMeta{0, n, m, j, ell});
}

std::pair<double, double> exact_level_coefficients(const FiniteChain& chain,
                                                   int n, int ell, int m,
                                                   int exact_cap) {
  if (n < m + 2) {
    throw std::invalid_argument("block length n must be >= m + 2");
  }
  double alpha = 0.0;
  double beta = 0.0;
  for (int j = 1; j <= n - m - 1; ++j) {
    const DependenceMatrix d = exact_dependence_matrix(chain, n, m, j, ell);
    alpha = std::max(alpha, bilinear_sup_exact(d, exact_cap).value);
    beta = std::max(beta, half_abs_sum(d));
  }
  return {alpha, beta};
}

}  // namespace mixest
