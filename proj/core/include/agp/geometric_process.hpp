#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "agp/distributions.hpp"

namespace agp {

/// Geometric process {Z_i}: ratio^(i-1) * Z_i are i.i.d. with law `base`, so
/// F_{Z_i}(t) = F_{Z_1}(ratio^(i-1) t). Indices are 1-based.
///
/// ratio > 1 gives stochastically decreasing terms, ratio < 1 increasing ones,
/// ratio == 1 a renewal process. Any ratio > 0 is accepted here; the on/off
/// direction constraints are checked by AgpModel.
class GeometricProcess {
 public:
  GeometricProcess(Distribution base, double ratio);

  const Distribution& base() const noexcept { return base_; }
  double ratio() const noexcept { return ratio_; }

  /// ratio^(i-1). Built by repeated multiplication and cached, so a given
  /// index always maps to the same bits.
  double scale(std::size_t index) const;

  double cdf(std::size_t index, double t) const;
  double survival(std::size_t index, double t) const;
  double mean(std::size_t index) const;
  double sample(std::size_t index, double u) const;

  /// Integral of the survival function of Z_index over [0, w].
  double integrated_survival(std::size_t index, double w) const;

 private:
  Distribution base_;
  double ratio_;
  std::shared_ptr<const std::vector<double>> powers_;
};

/// Alternating geometric process: on-times X_i (ratio a >= 1) alternating with
/// off-times Y_i (ratio 0 < b <= 1), the two sequences independent.
class AgpModel {
 public:
  AgpModel(GeometricProcess on, GeometricProcess off);

  const GeometricProcess& on() const noexcept { return on_; }
  const GeometricProcess& off() const noexcept { return off_; }
  double a() const noexcept { return on_.ratio(); }
  double b() const noexcept { return off_.ratio(); }

 private:
  GeometricProcess on_;
  GeometricProcess off_;
};

}  // namespace agp
