#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixest {

/// Thrown when an operation needs more data than the sample provides.
/// Carries the minimum length that would have sufficed.
class InsufficientSampleError : public std::runtime_error {
 public:
  InsufficientSampleError(std::uint64_t required, std::uint64_t actual);

  std::uint64_t required_length() const { return required_; }
  std::uint64_t actual_length() const { return actual_; }

 private:
  std::uint64_t required_;
  std::uint64_t actual_;
};

/// One observed trajectory of a real-valued process, every value in [0, 1].
/// Construction validates; downstream code may assume the range holds.
class SamplePath {
 public:
  explicit SamplePath(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t length() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Validates a raw series as a sample path.  With rescale=false, any value
/// outside [0, 1] is an error.  With rescale=true the series is first mapped
/// affinely onto [0, 1] (a constant series maps to 0.5).
SamplePath validate_sample(std::vector<double> raw, bool rescale = false);

/// Reads a sample from a text file: one decimal number per line, blank lines
/// and '#'-prefixed comment lines ignored.
SamplePath load_sample_file(const std::string& path, bool rescale = false);

/// The partition of [0,1]^k into 2^{k*ell} half-open dyadic cubes of side
/// 2^{-ell}.  Atoms are indexed little-endian by coordinate: the cell index
/// of coordinate 1 is the least significant digit, each digit in base 2^ell.
class DyadicGrid {
 public:
  DyadicGrid(int dimension, int level);

  int dimension() const { return dimension_; }
  int level() const { return level_; }

  /// 2^ell cells per axis.
  std::uint64_t cells_per_axis() const { return std::uint64_t{1} << level_; }

  /// 2^{k*ell} atoms in total.
  std::uint64_t atom_count() const {
    return std::uint64_t{1} << (static_cast<unsigned>(dimension_) *
                                static_cast<unsigned>(level_));
  }

  bool operator==(const DyadicGrid& other) const = default;

 private:
  int dimension_;
  int level_;
};

/// Index of the atom containing `point`.  The top boundary closes upward:
/// a coordinate equal to 1.0 belongs to the last cell of its axis, so the
/// atoms cover [0,1]^k exactly.  point.size() must equal the grid dimension.
std::uint64_t atom_of(std::span<const double> point, const DyadicGrid& grid);

/// A finite union of atoms of one grid, kept as sorted unique indices.
class AtomSet {
 public:
  AtomSet(DyadicGrid grid, std::vector<std::uint64_t> members);

  static AtomSet empty(DyadicGrid grid);
  static AtomSet full(DyadicGrid grid);  // grid.atom_count() must be modest
  static AtomSet single(DyadicGrid grid, std::uint64_t atom);

  const DyadicGrid& grid() const { return grid_; }
  const std::vector<std::uint64_t>& members() const { return members_; }
  bool contains(std::uint64_t atom) const;
  std::size_t size() const { return members_.size(); }

 private:
  DyadicGrid grid_;
  std::vector<std::uint64_t> members_;
};

/// Deterministic parameter sequences driving the sequential procedures.
/// All six sequences are derived from the family parameters below; the
/// defaults keep block length ahead of the gap horizon (n(t) >= M(t) + 2
/// for every t) so every summand of the partial-sum statistic is defined.
struct Schedule {
  // ell(t) = ell_base + floor(log2(1 + t) / ell_log_div); non-decreasing,
  // unbounded, growing slowly so the atom spaces stay materializable.
  int ell_base = 1;
  int ell_log_div = 8;

  // n(t) = n_base + floor(t / n_step); non-decreasing block length.
  int n_base = 3;
  long n_step = 1000;

  // M(t) = M_base + floor(t / M_step); non-decreasing gap horizon.
  int M_base = 1;
  long M_step = 2000;

  // eps(t) = eps_scale * t^{-eps_exponent}; decreasing to 0.
  double eps_scale = 1.0;
  double eps_exponent = 0.25;

  // delta(t) = delta_total * 6 / (pi^2 t^2); summable, total mass
  // delta_total.
  double delta_total = 0.05;

  // zeta(t) = zeta_scale * t^{-zeta_exponent}; decreasing to 0.
  double zeta_scale = 1.0;
  double zeta_exponent = 0.25;

  int ell(long t) const;
  int n(long t) const;
  int M(long t) const;
  double eps(long t) const;
  double delta(long t) const;
  double zeta(long t) const;

  /// Rejects non-positive or otherwise unusable family parameters.
  void validate() const;
};

/// Parses a schedule config: '#' comments, a [schedule] section, key=value
/// lines overriding individual family parameters.  Unknown sections or keys
/// are errors, as are malformed values.
Schedule load_schedule_file(const std::string& path);
Schedule parse_schedule_text(const std::string& text);

/// Outcome of a hypothesis test at a given time index.
struct TestVerdict {
  int decision = 0;  // +1 accept, -1 reject
  std::map<std::string, double> evidence;
  long at_time = 0;
};

}  // namespace mixest
