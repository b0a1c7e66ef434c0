#pragma once

// Closed-form and brute-force references used by the tests. Nothing here
// calls into the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Erlang(k, rate) CDF via the Poisson sum 1 - sum_{j<k} e^{-x} x^j / j!.
inline double erlang_cdf(int k, double rate, double t) {
  if (t <= 0.0) return 0.0;
  const double x = rate * t;
  double term = std::exp(-x);
  double sum = term;
  for (int j = 1; j < k; ++j) {
    term *= x / j;
    sum += term;
  }
  return 1.0 - sum;
}

/// CDF of a sum of independent exponentials with pairwise distinct rates.
inline double hypoexponential_cdf(const std::vector<double>& rates, double t) {
  if (t <= 0.0) return 0.0;
  double surv = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      if (j != i) w *= rates[j] / (rates[j] - rates[i]);
    }
    surv += w * std::exp(-rates[i] * t);
  }
  return 1.0 - surv;
}

/// Availability of an alternating renewal process with Exp(l) up, Exp(m) down.
inline double availability(double l, double m, double t) {
  return m / (l + m) + l / (l + m) * std::exp(-(l + m) * t);
}

/// Renewal function of Erlang(2, 1) inter-arrival times.
inline double erlang2_renewal(double t) { return t / 2.0 - (1.0 - std::exp(-2.0 * t)) / 4.0; }

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Kolmogorov distance between the empirical CDF of `sample` and `cdf`.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
  }
  return d;
}

/// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1 - alpha.
inline double dkw_epsilon(std::size_t n, double alpha = 0.01) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace oracle
