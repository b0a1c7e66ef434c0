#include "agp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "agp/errors.hpp"

namespace agp {

void Grid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("grid.dt", "must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw InvalidParameter("grid.t_max", "must be > 0");
  }
  if (dt >= t_max) throw InvalidParameter("grid.dt", "must be smaller than grid.t_max");
}

std::size_t Grid::size() const {
  return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
}

bool Grid::contains_point(double time) const {
  const double cells = time / dt;
  return time >= 0.0 && std::fabs(cells - std::round(cells)) <= 1e-9 * std::max(1.0, cells) &&
         static_cast<std::size_t>(std::llround(cells)) < size();
}

std::size_t Grid::index_of(double time) const {
  if (!contains_point(time)) {
    throw InvalidParameter("grid", "time " + std::to_string(time) +
                                       " is not a grid point (choose dt dividing it)");
  }
  return static_cast<std::size_t>(std::llround(time / dt));
}

Grid Grid::for_period(double period, std::size_t cells_per_period, double span) {
  if (!(period > 0.0)) throw InvalidParameter("policy.T", "must be > 0");
  if (cells_per_period < 1) throw InvalidParameter("grid", "cells_per_period must be >= 1");
  Grid g{span * period, period / static_cast<double>(cells_per_period)};
  g.validate();
  return g;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, GridKind kind)
    : grid_(grid), values_(std::move(values)), kind_(kind) {
  grid_.validate();
  if (values_.empty() || values_.size() > grid_.size()) {
    throw std::invalid_argument("GridFunction: value count does not fit the grid");
  }
}

double GridFunction::at(double t) const {
  if (t <= 0.0) return values_.front();
  const double x = t / grid_.dt;
  const auto k = static_cast<std::size_t>(x);
  if (k + 1 >= values_.size()) {
    if (k + 1 == values_.size() && x - static_cast<double>(k) <= 1e-9) return values_.back();
    if (x <= static_cast<double>(values_.size() - 1) * (1.0 + 1e-12)) return values_.back();
    throw std::out_of_range("GridFunction::at: t beyond tabulated range");
  }
  const double w = x - static_cast<double>(k);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

void GridFunction::validate(double tol) const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GridFunction: non-finite value at index " + std::to_string(k));
    }
    switch (kind_) {
      case GridKind::cdf:
        if (v < -tol || v > 1.0 + tol) {
          throw std::invalid_argument("GridFunction: CDF value outside [0,1] at index " +
                                      std::to_string(k));
        }
        if (k > 0 && v < values_[k - 1] - tol) {
          throw std::invalid_argument("GridFunction: CDF decreases at index " +
                                      std::to_string(k));
        }
        break;
      case GridKind::density:
        if (v < -tol) {
          throw std::invalid_argument("GridFunction: negative density at index " +
                                      std::to_string(k));
        }
        break;
      case GridKind::plain: break;
    }
  }
  if (kind_ == GridKind::density) {
    double integral = 0.0;
    for (std::size_t k = 1; k < values_.size(); ++k) {
      integral += 0.5 * (values_[k - 1] + values_[k]) * grid_.dt;
    }
    if (integral > 1.0 + 1e-6) {
      throw std::invalid_argument("GridFunction: density integrates above 1");
    }
  }
}

void GridFunction::write_csv(std::ostream& out) const {
  out << "t,value\n";
  char buf[64];
  for (std::size_t k = 0; k < values_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid_.t(k), values_[k]);
    out << buf;
  }
}

void SeriesTruncation::validate() const {
  if (!(epsilon > 0.0)) throw InvalidParameter("truncation.epsilon", "must be > 0");
  if (n_max < 1) throw InvalidParameter("truncation.n_max", "must be >= 1");
}

}  // namespace agp
