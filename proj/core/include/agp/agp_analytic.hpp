#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "agp/geometric_process.hpp"
#include "agp/grid.hpp"

namespace agp {

/// Value of a truncated series plus what is needed to audit the cut.
struct SeriesResult {
  double value = 0.0;
  std::size_t terms = 0;   // index of the last term included
  double last_term = 0.0;  // raw size of that term
};

/// A probability after quadrature. `clamp` is how far the raw value had to be
/// moved to land in [0, 1]; large clamps mean the grid is too coarse.
struct ProbabilityResult {
  double value = 0.0;
  double clamp = 0.0;
  std::size_t terms = 0;
};

/// Defective CDFs of the repurchase interval split by the state at T:
///   on[k]  = P(on at T,  xi <= t_k)   with xi = S_N + X_{N+1}
///   off[k] = P(off at T, xi <= t_k)   with xi = S_{N+1} + X_{N+2}
/// Both are zero for t_k <= T.
struct XiTables {
  Grid grid;
  std::size_t period_index = 0;
  std::vector<double> on;
  std::vector<double> off;
  double prob_on = 0.0;
  std::size_t terms = 0;
};

/// Grid-based evaluator for the finite-horizon quantities of an AGP.
///
/// Every integral is a Stieltjes convolution on the uniform grid: the measure
/// is a tabulated CDF, taken as piecewise linear (uniform mass inside each
/// cell), and the kernel is an analytic CDF averaged exactly over each cell
/// through the integrated survival function. Two tabulated families are
/// cached and extended on demand, prefix by prefix:
///
///   G^n = law of S_n = X_1 + Y_1 + ... + X_n + Y_n          (n >= 1)
///   K_n = law of S_n + X_{n+1}, the (n+1)-th failure time   (n >= 0)
///
/// with K_0 = F_{X_1}, G^{n+1} = K_n * F_{Y_{n+1}}, K_n = G^n * F_{X_{n+1}}.
/// Then P(S_n <= t < S_n + X_{n+1}) = G^n(t) - K_n(t) is the n-th Stieltjes
/// term of the on-probability, and the other quantities follow the same way.
///
/// The cache is guarded by a mutex; an instance may be shared across threads.
class AgpAnalytic {
 public:
  AgpAnalytic(AgpModel model, Grid grid, SeriesTruncation truncation = {});
  ~AgpAnalytic();
  AgpAnalytic(const AgpAnalytic&) = delete;
  AgpAnalytic& operator=(const AgpAnalytic&) = delete;

  const AgpModel& model() const noexcept { return model_; }
  const Grid& grid() const noexcept { return grid_; }
  const SeriesTruncation& truncation() const noexcept { return truncation_; }

  /// H_i, the CDF of the i-th cycle length X_i + Y_i, over the whole grid.
  GridFunction cycle_cdf(std::size_t i) const;
  /// G^n over the whole grid.
  GridFunction convolution_cdf(std::size_t n) const;
  /// Backward difference (G^n(t_k) - G^n(t_{k-1})) / dt, with 0 at k = 0.
  GridFunction convolution_density(std::size_t n) const;
  /// K_n over the whole grid.
  GridFunction failure_time_cdf(std::size_t n) const;

  /// G^n(t) for a single t (n = 0 gives 1), interpolated between grid points.
  double convolution_at(std::size_t n, double t) const;

  /// m_1(T) = sum_{n>=1} G^n(T).
  SeriesResult expected_cycles(double T) const;
  /// P(on at t).
  ProbabilityResult prob_on(double t) const;
  /// E(Y_{N(T)+1} | on at T).
  SeriesResult expected_next_repair_given_on(double T) const;
  /// E(b^{-N(T)}).
  SeriesResult expected_b_pow_neg_N(double T) const;
  /// P(N(T) = n) for n = 0, 1, ... until G^n(T) < epsilon.
  std::vector<double> cycle_count_pmf(double T) const;
  /// E(S_{N(T)+1}): the end of the cycle in progress at T.
  SeriesResult expected_straddling_cycle_end(double T) const;

  /// Repurchase-interval tables. T must be a grid point.
  XiTables xi_tables(double T) const;
  /// P(S_{N(T)} + X_{N(T)+1} <= t | on at T); needs T <= t <= t_max.
  ProbabilityResult cdf_xi_given_on(double T, double t) const;
  /// P(S_{N(T)+1} + X_{N(T)+2} <= t | off at T); needs T <= t <= t_max.
  ProbabilityResult cdf_xi_given_off(double T, double t) const;

  /// CDF over the grid of the repurchase interval under a warranty renewed
  /// after each repair and capped at `n` repairs.
  GridFunction restricted_renewing_xi_cdf(double T, std::size_t n) const;

 private:
  struct Cache;

  void require_within_grid(double t, const char* what) const;
  // All helpers below expect the mutex to be held.
  const std::vector<double>& on_kernel(std::size_t index) const;
  const std::vector<double>& off_kernel(std::size_t index) const;
  const std::vector<double>& ensure_G(std::size_t n, std::size_t len) const;
  const std::vector<double>& ensure_K(std::size_t n, std::size_t len) const;
  double interpolate(const std::vector<double>& table, double t) const;
  double G_at_locked(std::size_t n, double t) const;
  double K_at_locked(std::size_t n, double t) const;
  void throw_truncation(const char* what, double T, double last) const;

  AgpModel model_;
  Grid grid_;
  SeriesTruncation truncation_;
  std::size_t size_;
  mutable std::mutex mutex_;
  std::unique_ptr<Cache> cache_;
};

/// Stieltjes convolution on a uniform grid:
///   out[k] = sum_{j = j_lo .. min(k, j_hi)} (M[j] - M[j-1]) * kernel[k - j]
/// for k in [k_begin, k_end). `kernel[m]` is the cell average of the kernel
/// function over [t_m, t_{m+1}]. Requires j_lo >= 1.
void stieltjes_convolve(const std::vector<double>& measure, const std::vector<double>& kernel,
                        std::size_t j_lo, std::size_t j_hi, std::size_t k_begin,
                        std::size_t k_end, std::vector<double>& out);

/// Cell averages of F_{Z_index} over [t_m, t_{m+1}], m = 0 .. grid.size()-2.
std::vector<double> cell_average_cdf(const GeometricProcess& gp, std::size_t index,
                                     const Grid& grid);

// Single-call forms. Each builds a throwaway AgpAnalytic; use the class to
// share the convolution cache across queries.
GridFunction cycle_cdf(const AgpModel& model, std::size_t i, const Grid& grid);
GridFunction convolve_G(const AgpModel& model, std::size_t n, const Grid& grid);
SeriesResult expected_cycles(const AgpModel& model, double T, const Grid& grid,
                             const SeriesTruncation& truncation);
ProbabilityResult prob_on(const AgpModel& model, double t, const Grid& grid,
                          const SeriesTruncation& truncation);
SeriesResult expected_next_repair_given_on(const AgpModel& model, double T, const Grid& grid,
                                           const SeriesTruncation& truncation);
ProbabilityResult cdf_xi_given_on(const AgpModel& model, double T, double t, const Grid& grid,
                                  const SeriesTruncation& truncation);
ProbabilityResult cdf_xi_given_off(const AgpModel& model, double T, double t, const Grid& grid,
                                   const SeriesTruncation& truncation);
SeriesResult expected_b_pow_neg_N(const AgpModel& model, double T, const Grid& grid,
                                  const SeriesTruncation& truncation);

}  // namespace agp
