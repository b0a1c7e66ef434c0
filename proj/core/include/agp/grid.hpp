#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace agp {

/// Uniform time grid t_k = k * dt, k = 0 .. floor(t_max / dt).
struct Grid {
  double t_max = 0.0;
  double dt = 0.0;

  /// Throws InvalidParameter unless 0 < dt < t_max.
  void validate() const;
  std::size_t size() const;
  double t(std::size_t k) const { return static_cast<double>(k) * dt; }

  /// Index of the grid point equal to `time`, or throws if `time` is not a
  /// grid point (to 1e-9 cells).
  std::size_t index_of(double time) const;
  bool contains_point(double time) const;

  /// Default warranty grid: `cells_per_period` cells across [0, period] and
  /// `span` periods in total.
  static Grid for_period(double period, std::size_t cells_per_period = 4096, double span = 3.0);
};

enum class GridKind { cdf, density, plain };

/// Function tabulated on a Grid. Values beyond the tabulated prefix are not
/// defined; `at` interpolates linearly between grid points.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values, GridKind kind);

  const Grid& grid() const noexcept { return grid_; }
  GridKind kind() const noexcept { return kind_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  double at(double t) const;

  /// Checks the invariants of `kind` to within `tol`; throws
  /// std::invalid_argument describing the first violation.
  void validate(double tol = 1e-12) const;

  /// Two-column CSV: t,value with a header row.
  void write_csv(std::ostream& out) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  GridKind kind_;
};

/// Controls where an infinite series over cycle index n is cut.
struct SeriesTruncation {
  double epsilon = 1e-9;
  std::size_t n_max = 256;

  void validate() const;
};

}  // namespace agp
