#pragma once

#include <map>
#include <string>
#include <string_view>

namespace agp {

enum class Family { exponential, weibull, gamma, lognormal };

std::string_view family_name(Family family) noexcept;

/// Parametric lifetime law on [0, inf).
///
/// Parameters are validated at construction; every evaluation method is total.
/// Parameter names (used by the config format):
///   exponential: rate
///   weibull:     shape, scale
///   gamma:       shape, scale
///   lognormal:   log_mean, log_sd
class Distribution {
 public:
  static Distribution exponential(double rate);
  static Distribution weibull(double shape, double scale);
  static Distribution gamma(double shape, double scale);
  static Distribution lognormal(double log_mean, double log_sd);

  /// Builds a distribution from a family name and named parameters. Throws
  /// InvalidParameter naming `path` (or `path.params.<name>`) on bad input.
  static Distribution from_params(std::string_view family,
                                  const std::map<std::string, double>& params,
                                  const std::string& path = "dist");

  Family family() const noexcept { return family_; }
  std::map<std::string, double> params() const;

  /// F(t); zero for t <= 0.
  double cdf(double t) const;
  /// 1 - F(t). The smaller tail is evaluated directly and the other derived
  /// from it, so cdf(t) + survival(t) == 1.
  double survival(double t) const;
  double mean() const;
  double variance() const;

  /// Inverse-CDF transform of u in (0, 1).
  double sample(double u) const;

  /// E[min(X, w)] = integral of the survival function over [0, w].
  double limited_mean(double w) const;

 private:
  Distribution(Family family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}

  // Returns the smaller of {F(t), 1 - F(t)} and whether it is the upper tail.
  double lower_tail(double t) const;
  double upper_tail(double t) const;
  double numeric_quantile(double u) const;

  Family family_;
  double p1_;
  double p2_;
};

}  // namespace agp
