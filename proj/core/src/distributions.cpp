#include "agp/distributions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>

#include "agp/errors.hpp"

namespace agp {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(field, "must be a finite number > 0");
  }
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::exponential: return "exponential";
    case Family::weibull: return "weibull";
    case Family::gamma: return "gamma";
    case Family::lognormal: return "lognormal";
  }
  return "unknown";
}

Distribution Distribution::exponential(double rate) {
  require_positive(rate, "rate");
  return {Family::exponential, rate, 0.0};
}

Distribution Distribution::weibull(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return {Family::weibull, shape, scale};
}

Distribution Distribution::gamma(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return {Family::gamma, shape, scale};
}

Distribution Distribution::lognormal(double log_mean, double log_sd) {
  if (!std::isfinite(log_mean)) throw InvalidParameter("log_mean", "must be finite");
  require_positive(log_sd, "log_sd");
  return {Family::lognormal, log_mean, log_sd};
}

Distribution Distribution::from_params(std::string_view family,
                                       const std::map<std::string, double>& params,
                                       const std::string& path) {
  auto get = [&](const char* name) {
    auto it = params.find(name);
    if (it == params.end()) {
      throw InvalidParameter(path + ".params." + name, "missing parameter");
    }
    return it->second;
  };
  auto expect_count = [&](std::size_t n) {
    if (params.size() != n) {
      throw InvalidParameter(path + ".params", "expected " + std::to_string(n) +
                                                   " parameters for family '" +
                                                   std::string(family) + "'");
    }
  };
  try {
    if (family == "exponential") {
      expect_count(1);
      return exponential(get("rate"));
    }
    if (family == "weibull") {
      expect_count(2);
      return weibull(get("shape"), get("scale"));
    }
    if (family == "gamma") {
      expect_count(2);
      return gamma(get("shape"), get("scale"));
    }
    if (family == "lognormal") {
      expect_count(2);
      return lognormal(get("log_mean"), get("log_sd"));
    }
  } catch (const InvalidParameter& e) {
    if (e.field().find('.') != std::string::npos) throw;
    throw InvalidParameter(path + ".params." + e.field(), e.what());
  }
  throw InvalidParameter(path + ".family", "unknown family '" + std::string(family) + "'");
}

std::map<std::string, double> Distribution::params() const {
  switch (family_) {
    case Family::exponential: return {{"rate", p1_}};
    case Family::weibull: return {{"shape", p1_}, {"scale", p2_}};
    case Family::gamma: return {{"shape", p1_}, {"scale", p2_}};
    case Family::lognormal: return {{"log_mean", p1_}, {"log_sd", p2_}};
  }
  return {};
}

double Distribution::lower_tail(double t) const {
  switch (family_) {
    case Family::exponential: return -std::expm1(-p1_ * t);
    case Family::weibull: return -std::expm1(-std::pow(t / p2_, p1_));
    case Family::gamma: return boost::math::gamma_p(p1_, t / p2_);
    case Family::lognormal: return 0.5 * std::erfc(-(std::log(t) - p1_) / (p2_ * kSqrt2));
  }
  return 0.0;
}

double Distribution::upper_tail(double t) const {
  switch (family_) {
    case Family::exponential: return std::exp(-p1_ * t);
    case Family::weibull: return std::exp(-std::pow(t / p2_, p1_));
    case Family::gamma: return boost::math::gamma_q(p1_, t / p2_);
    case Family::lognormal: return 0.5 * std::erfc((std::log(t) - p1_) / (p2_ * kSqrt2));
  }
  return 1.0;
}

double Distribution::cdf(double t) const {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  const double p = lower_tail(t);
  if (p <= 0.5) return p;
  return 1.0 - upper_tail(t);
}

double Distribution::survival(double t) const {
  if (!(t > 0.0)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double p = lower_tail(t);
  if (p <= 0.5) return 1.0 - p;
  return upper_tail(t);
}

double Distribution::mean() const {
  switch (family_) {
    case Family::exponential: return 1.0 / p1_;
    case Family::weibull: return p2_ * std::tgamma(1.0 + 1.0 / p1_);
    case Family::gamma: return p1_ * p2_;
    case Family::lognormal: return std::exp(p1_ + 0.5 * p2_ * p2_);
  }
  return 0.0;
}

double Distribution::variance() const {
  switch (family_) {
    case Family::exponential: return 1.0 / (p1_ * p1_);
    case Family::weibull: {
      const double g1 = std::tgamma(1.0 + 1.0 / p1_);
      const double g2 = std::tgamma(1.0 + 2.0 / p1_);
      return p2_ * p2_ * (g2 - g1 * g1);
    }
    case Family::gamma: return p1_ * p2_ * p2_;
    case Family::lognormal: {
      const double s2 = p2_ * p2_;
      return std::expm1(s2) * std::exp(2.0 * p1_ + s2);
    }
  }
  return 0.0;
}

double Distribution::sample(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("sample: uniform variate must lie in (0, 1)");
  }
  switch (family_) {
    case Family::exponential: return -std::log1p(-u) / p1_;
    case Family::weibull: return p2_ * std::pow(-std::log1p(-u), 1.0 / p1_);
    case Family::gamma:
    case Family::lognormal: return numeric_quantile(u);
  }
  return 0.0;
}

double Distribution::numeric_quantile(double u) const {
  // Bracket the root of F(t) - u, then refine with TOMS 748 until the
  // probability residual is below 1e-10.
  auto residual = [&](double t) { return cdf(t) - u; };
  double lo = 0.0;
  double hi = mean();
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return lo;
  }
  std::uintmax_t max_iter = 200;
  auto tol = [&](double a, double b) {
    return std::fabs(residual(0.5 * (a + b))) <= 1e-12 ||
           std::fabs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(b);
  };
  const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, residual(lo),
                                                        residual(hi), tol, max_iter);
  return 0.5 * (a + b);
}

double Distribution::limited_mean(double w) const {
  if (!(w > 0.0)) return 0.0;
  if (std::isinf(w)) return mean();
  switch (family_) {
    case Family::exponential: return -std::expm1(-p1_ * w) / p1_;
    case Family::weibull: {
      const double k1 = 1.0 + 1.0 / p1_;
      const double x = std::pow(w / p2_, p1_);
      return p2_ * std::tgamma(k1) * boost::math::gamma_p(k1, x) + w * survival(w);
    }
    case Family::gamma:
      return p1_ * p2_ * boost::math::gamma_p(p1_ + 1.0, w / p2_) + w * survival(w);
    case Family::lognormal: {
      const double z = (std::log(w) - p1_ - p2_ * p2_) / p2_;
      return mean() * std_normal_cdf(z) + w * survival(w);
    }
  }
  return 0.0;
}

}  // namespace agp
