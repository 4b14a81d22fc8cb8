#include "mixest/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mixest {

InsufficientSampleError::InsufficientSampleError(std::uint64_t required,
                                                std::uint64_t actual)
    : std::runtime_error("sample too short: need " + std::to_string(required) +
                         " values, have " + std::to_string(actual)),
      required_(required),
      actual_(actual) {}

SamplePath::SamplePath(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("sample path must contain at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) {
      throw std::domain_error("sample value at line " + std::to_string(i + 1) +
                              " is not finite");
    }
    if (v < 0.0 || v > 1.0) {
      throw std::domain_error("sample value " + std::to_string(v) +
                              " at position " + std::to_string(i + 1) +
                              " lies outside [0, 1]");
    }
  }
}

SamplePath validate_sample(std::vector<double> raw, bool rescale) {
  if (raw.empty()) {
    throw std::invalid_argument("sample path must contain at least one value");
  }
  if (rescale) {
    double lo = raw[0], hi = raw[0];
    for (double v : raw) {
      if (!std::isfinite(v)) {
        throw std::domain_error("cannot rescale a non-finite value");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) {
      std::fill(raw.begin(), raw.end(), 0.5);
    } else {
      const double span = hi - lo;
      for (double& v : raw) v = (v - lo) / span;
    }
  }
  return SamplePath(std::move(raw));
}

SamplePath load_sample_file(const std::string& path, bool rescale) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open sample file: " + path);
  }
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(line.substr(first), &consumed);
    } catch (const std::exception&) {
      throw std::runtime_error("unparseable number at " + path + ":" +
                               std::to_string(lineno));
    }
    const auto rest = line.find_first_not_of(" \t\r", first + consumed);
    if (rest != std::string::npos) {
      throw std::runtime_error("trailing junk at " + path + ":" +
                               std::to_string(lineno));
    }
    values.push_back(v);
  }
  return validate_sample(std::move(values), rescale);
}

DyadicGrid::DyadicGrid(int dimension, int level)
    : dimension_(dimension), level_(level) {
  if (dimension < 1) {
    throw std::invalid_argument("grid dimension must be >= 1");
  }
  if (level < 1) {
    throw std::invalid_argument("grid level must be >= 1");
  }
  // Keep the atom index representable in 64 bits.
  if (static_cast<long>(dimension) * level > 62) {
    throw std::invalid_argument("grid has too many atoms: dimension * level " +
                                std::to_string(static_cast<long>(dimension) *
                                               level) +
                                " exceeds 62");
  }
}

namespace detail {

// Cell digit of one coordinate; assumes x in [0, 1].
inline std::uint64_t cell_digit(double x, int level) {
  const std::uint64_t cells = std::uint64_t{1} << level;
  auto c = static_cast<std::uint64_t>(x * static_cast<double>(cells));
  return std::min(c, cells - 1);
}

// Atom index without range checks for pre-validated coordinates.
std::uint64_t atom_index_unchecked(const double* point, int dimension,
                                   int level) {
  std::uint64_t index = 0;
  for (int j = dimension - 1; j >= 0; --j) {
    index = (index << level) | cell_digit(point[j], level);
  }
  return index;
}

}  // namespace detail

std::uint64_t atom_of(std::span<const double> point, const DyadicGrid& grid) {
  if (point.size() != static_cast<std::size_t>(grid.dimension())) {
    throw std::invalid_argument("point dimension " +
                                std::to_string(point.size()) +
                                " does not match grid dimension " +
                                std::to_string(grid.dimension()));
  }
  for (double x : point) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::domain_error("coordinate " + std::to_string(x) +
                              " lies outside [0, 1]");
    }
  }
  return detail::atom_index_unchecked(point.data(), grid.dimension(),
                                      grid.level());
}

AtomSet::AtomSet(DyadicGrid grid, std::vector<std::uint64_t> members)
    : grid_(grid), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
  if (!members_.empty() && members_.back() >= grid_.atom_count()) {
    throw std::invalid_argument("atom index " +
                                std::to_string(members_.back()) +
                                " out of range for grid with " +
                                std::to_string(grid_.atom_count()) + " atoms");
  }
}

AtomSet AtomSet::empty(DyadicGrid grid) { return AtomSet(grid, {}); }

AtomSet AtomSet::full(DyadicGrid grid) {
  if (grid.atom_count() > (std::uint64_t{1} << 22)) {
    throw std::invalid_argument("grid too large to materialize all atoms");
  }
  std::vector<std::uint64_t> all(grid.atom_count());
  for (std::uint64_t a = 0; a < grid.atom_count(); ++a) all[a] = a;
  return AtomSet(grid, std::move(all));
}

AtomSet AtomSet::single(DyadicGrid grid, std::uint64_t atom) {
  return AtomSet(grid, {atom});
}

bool AtomSet::contains(std::uint64_t atom) const {
  return std::binary_search(members_.begin(), members_.end(), atom);
}

int Schedule::ell(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  return ell_base + static_cast<int>(std::floor(
                        std::log2(1.0 + static_cast<double>(t)) /
                        static_cast<double>(ell_log_div)));
}

int Schedule::n(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  return n_base + static_cast<int>(t / n_step);
}

int Schedule::M(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  return M_base + static_cast<int>(t / M_step);
}

double Schedule::eps(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  return eps_scale * std::pow(static_cast<double>(t), -eps_exponent);
}

double Schedule::delta(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  constexpr double pi = 3.14159265358979323846;
  const double td = static_cast<double>(t);
  return delta_total * 6.0 / (pi * pi * td * td);
}

double Schedule::zeta(long t) const {
  if (t < 1) throw std::invalid_argument("time index must be >= 1");
  return zeta_scale * std::pow(static_cast<double>(t), -zeta_exponent);
}

void Schedule::validate() const {
  if (ell_base < 1) throw std::invalid_argument("ell_base must be >= 1");
  if (ell_log_div < 1) throw std::invalid_argument("ell_log_div must be >= 1");
  if (n_base < 1) throw std::invalid_argument("n_base must be >= 1");
  if (n_step < 1) throw std::invalid_argument("n_step must be >= 1");
  if (M_base < 1) throw std::invalid_argument("M_base must be >= 1");
  if (M_step < 1) throw std::invalid_argument("M_step must be >= 1");
  if (!(eps_scale > 0.0)) throw std::invalid_argument("eps_scale must be > 0");
  if (!(eps_exponent > 0.0)) {
    throw std::invalid_argument("eps_exponent must be > 0");
  }
  if (!(delta_total > 0.0 && delta_total < 1.0)) {
    throw std::invalid_argument("delta_total must lie in (0, 1)");
  }
  if (!(zeta_scale > 0.0)) {
    throw std::invalid_argument("zeta_scale must be > 0");
  }
  if (!(zeta_exponent > 0.0)) {
    throw std::invalid_argument("zeta_exponent must be > 0");
  }
}

namespace {

void apply_schedule_key(Schedule& s, const std::string& key,
                        const std::string& value, std::size_t lineno) {
  const auto bad = [&](const char* what) {
    throw std::runtime_error("schedule config line " + std::to_string(lineno) +
                             ": " + what);
  };
  double num = 0.0;
  try {
    std::size_t consumed = 0;
    num = std::stod(value, &consumed);
    if (consumed != value.size()) bad("malformed numeric value");
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    bad("malformed numeric value");
  }
  const auto as_int = [&]() {
    if (num != std::floor(num)) bad("expected an integer value");
    return static_cast<long>(num);
  };
  if (key == "ell_base") {
    s.ell_base = static_cast<int>(as_int());
  } else if (key == "ell_log_div") {
    s.ell_log_div = static_cast<int>(as_int());
  } else if (key == "n_base") {
    s.n_base = static_cast<int>(as_int());
  } else if (key == "n_step") {
    s.n_step = as_int();
  } else if (key == "M_base") {
    s.M_base = static_cast<int>(as_int());
  } else if (key == "M_step") {
    s.M_step = as_int();
  } else if (key == "eps_scale") {
    s.eps_scale = num;
  } else if (key == "eps_exponent") {
    s.eps_exponent = num;
  } else if (key == "delta_total") {
    s.delta_total = num;
  } else if (key == "zeta_scale") {
    s.zeta_scale = num;
  } else if (key == "zeta_exponent") {
    s.zeta_exponent = num;
  } else {
    bad(("unknown schedule key '" + key + "'").c_str());
  }
}

std::string trimmed(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace

Schedule parse_schedule_text(const std::string& text) {
  Schedule schedule;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trimmed(line);
    if (body.empty() || body[0] == '#') continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw std::runtime_error("schedule config line " +
                                 std::to_string(lineno) +
                                 ": unterminated section header");
      }
      section = trimmed(body.substr(1, body.size() - 2));
      if (section != "schedule") {
        throw std::runtime_error("schedule config line " +
                                 std::to_string(lineno) +
                                 ": unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("schedule config line " +
                               std::to_string(lineno) +
                               ": expected key=value");
    }
    if (section.empty()) {
      throw std::runtime_error("schedule config line " +
                               std::to_string(lineno) +
                               ": key outside any section");
    }
    apply_schedule_key(schedule, trimmed(body.substr(0, eq)),
                       trimmed(body.substr(eq + 1)), lineno);
  }
  schedule.validate();
  return schedule;
}

Schedule load_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open schedule config: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_schedule_text(buffer.str());
}

}  // namespace mixest
