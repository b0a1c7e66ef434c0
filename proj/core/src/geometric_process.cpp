#include "agp/geometric_process.hpp"

#include <cmath>
#include <stdexcept>

#include "agp/errors.hpp"

namespace agp {

namespace {

// Indices beyond the table fall back to std::pow; by then the power has long
// overflowed or underflowed for any ratio a warranty model would use.
constexpr std::size_t kPowerTableSize = 8192;

void require_index(std::size_t index) {
  if (index < 1) throw std::invalid_argument("geometric process index must be >= 1");
}

}  // namespace

GeometricProcess::GeometricProcess(Distribution base, double ratio)
    : base_(base), ratio_(ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw InvalidParameter("ratio", "must be a finite number > 0");
  }
  auto powers = std::make_shared<std::vector<double>>(kPowerTableSize);
  double p = 1.0;
  for (std::size_t i = 0; i < kPowerTableSize; ++i) {
    (*powers)[i] = p;
    p *= ratio;
  }
  powers_ = std::move(powers);
}

double GeometricProcess::scale(std::size_t index) const {
  require_index(index);
  if (index <= powers_->size()) return (*powers_)[index - 1];
  return std::pow(ratio_, static_cast<double>(index - 1));
}

double GeometricProcess::cdf(std::size_t index, double t) const {
  if (!(t > 0.0)) return 0.0;
  return base_.cdf(scale(index) * t);
}

double GeometricProcess::survival(std::size_t index, double t) const {
  if (!(t > 0.0)) return 1.0;
  return base_.survival(scale(index) * t);
}

double GeometricProcess::mean(std::size_t index) const { return base_.mean() / scale(index); }

double GeometricProcess::sample(std::size_t index, double u) const {
  return base_.sample(u) / scale(index);
}

double GeometricProcess::integrated_survival(std::size_t index, double w) const {
  if (!(w > 0.0)) return 0.0;
  const double s = scale(index);
  if (std::isinf(s)) return 0.0;  // Z_index is 0 a.s.
  if (s == 0.0) return w;         // Z_index is +inf a.s.
  return base_.limited_mean(s * w) / s;
}

AgpModel::AgpModel(GeometricProcess on, GeometricProcess off)
    : on_(std::move(on)), off_(std::move(off)) {
  if (!(on_.ratio() >= 1.0)) {
    throw InvalidParameter("on.ratio_a", "on-time ratio a must be >= 1 (decreasing process)");
  }
  if (!(off_.ratio() > 0.0 && off_.ratio() <= 1.0)) {
    throw InvalidParameter("off.ratio_b",
                           "off-time ratio b must lie in (0, 1] (increasing process)");
  }
}

}  // namespace agp
