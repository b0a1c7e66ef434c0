#include "agp/agp_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "agp/errors.hpp"

namespace agp {

namespace {

double clamp_unit(double raw, double& clamp) {
  const double v = std::clamp(raw, 0.0, 1.0);
  clamp = std::fabs(raw - v);
  return v;
}

std::vector<double> tabulate_cdf(const GeometricProcess& gp, std::size_t index, const Grid& grid,
                                 std::size_t len) {
  std::vector<double> out(len);
  for (std::size_t k = 0; k < len; ++k) out[k] = gp.cdf(index, grid.t(k));
  return out;
}

}  // namespace

void stieltjes_convolve(const std::vector<double>& measure, const std::vector<double>& kernel,
                        std::size_t j_lo, std::size_t j_hi, std::size_t k_begin,
                        std::size_t k_end, std::vector<double>& out) {
  if (j_lo < 1) throw std::invalid_argument("stieltjes_convolve: j_lo must be >= 1");
  if (k_end <= k_begin) return;
  const std::size_t j_top = std::min(j_hi, k_end - 1);
  if (j_top >= measure.size()) {
    throw std::out_of_range("stieltjes_convolve: measure table too short");
  }
  if (k_end - j_lo > kernel.size() && k_end > j_lo) {
    throw std::out_of_range("stieltjes_convolve: kernel table too short");
  }
  if (out.size() < k_end) out.resize(k_end);

  std::vector<double> mass(j_top + 1, 0.0);
  for (std::size_t j = j_lo; j <= j_top; ++j) mass[j] = measure[j] - measure[j - 1];

  const double* ker = kernel.data();
  for (std::size_t k = k_begin; k < k_end; ++k) {
    const std::size_t jmax = std::min(k, j_top);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = j_lo;
    for (; j + 3 <= jmax; j += 4) {
      s0 += mass[j] * ker[k - j];
      s1 += mass[j + 1] * ker[k - j - 1];
      s2 += mass[j + 2] * ker[k - j - 2];
      s3 += mass[j + 3] * ker[k - j - 3];
    }
    for (; j <= jmax; ++j) s0 += mass[j] * ker[k - j];
    out[k] = (s0 + s1) + (s2 + s3);
  }
}

std::vector<double> cell_average_cdf(const GeometricProcess& gp, std::size_t index,
                                     const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> phi(n);
  for (std::size_t k = 0; k < n; ++k) phi[k] = gp.integrated_survival(index, grid.t(k));
  std::vector<double> avg(n - 1);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    avg[m] = std::clamp(1.0 - (phi[m + 1] - phi[m]) / grid.dt, 0.0, 1.0);
  }
  return avg;
}

struct AgpAnalytic::Cache {
  // Indexed by process index i (slot 0 unused); empty means not yet built.
  std::deque<std::vector<double>> on_kernels;
  std::deque<std::vector<double>> off_kernels;
  // G[n] for n >= 1 (slot 0 unused), K[n] for n >= 0. Prefixes of the grid.
  std::deque<std::vector<double>> G;
  std::deque<std::vector<double>> K;
  std::map<std::size_t, XiTables> xi;
};

AgpAnalytic::AgpAnalytic(AgpModel model, Grid grid, SeriesTruncation truncation)
    : model_(std::move(model)),
      grid_(grid),
      truncation_(truncation),
      size_(0),
      cache_(std::make_unique<Cache>()) {
  grid_.validate();
  truncation_.validate();
  size_ = grid_.size();
}

AgpAnalytic::~AgpAnalytic() = default;

void AgpAnalytic::require_within_grid(double t, const char* what) const {
  if (!(t >= 0.0) || t > grid_.t(size_ - 1) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << what << " = " << t << " lies outside the grid [0, " << grid_.t(size_ - 1) << "]";
    throw InvalidParameter("grid.t_max", os.str());
  }
}

const std::vector<double>& AgpAnalytic::on_kernel(std::size_t index) const {
  auto& slots = cache_->on_kernels;
  if (slots.size() <= index) slots.resize(index + 1);
  if (slots[index].empty()) slots[index] = cell_average_cdf(model_.on(), index, grid_);
  return slots[index];
}

const std::vector<double>& AgpAnalytic::off_kernel(std::size_t index) const {
  auto& slots = cache_->off_kernels;
  if (slots.size() <= index) slots.resize(index + 1);
  if (slots[index].empty()) slots[index] = cell_average_cdf(model_.off(), index, grid_);
  return slots[index];
}

const std::vector<double>& AgpAnalytic::ensure_K(std::size_t n, std::size_t len) const {
  len = std::min(len, size_);
  auto& Ks = cache_->K;
  if (Ks.size() <= n) Ks.resize(n + 1);
  auto& K = Ks[n];
  if (K.size() >= len) return K;
  if (n == 0) {
    for (std::size_t k = K.size(); k < len; ++k) K.push_back(model_.on().cdf(1, grid_.t(k)));
    return K;
  }
  const auto& G = ensure_G(n, len);
  const auto& ker = on_kernel(n + 1);
  stieltjes_convolve(G, ker, 1, len - 1, K.size(), len, K);
  return K;
}

const std::vector<double>& AgpAnalytic::ensure_G(std::size_t n, std::size_t len) const {
  if (n < 1) throw std::invalid_argument("ensure_G: n must be >= 1");
  len = std::min(len, size_);
  auto& Gs = cache_->G;
  if (Gs.size() <= n) Gs.resize(n + 1);
  // Walk up from the lowest level whose prefix is short; keeps recursion flat.
  std::size_t start = n;
  while (start > 1 && Gs[start - 1].size() < len) --start;
  for (std::size_t m = start; m <= n; ++m) {
    auto& G = Gs[m];
    if (G.size() >= len) continue;
    if (m == 1) {
      // Cycle-1 law: the component with the larger mean serves as measure.
      const bool on_measure = model_.on().mean(1) >= model_.off().mean(1);
      const auto& measure_gp = on_measure ? model_.on() : model_.off();
      const auto& ker = on_measure ? off_kernel(1) : on_kernel(1);
      const auto measure = tabulate_cdf(measure_gp, 1, grid_, len);
      stieltjes_convolve(measure, ker, 1, len - 1, G.size(), len, G);
    } else {
      const auto& K = ensure_K(m - 1, len);
      const auto& ker = off_kernel(m);
      stieltjes_convolve(K, ker, 1, len - 1, G.size(), len, G);
    }
  }
  return Gs[n];
}

double AgpAnalytic::interpolate(const std::vector<double>& table, double t) const {
  if (t <= 0.0) return table.front();
  const double x = t / grid_.dt;
  auto k = static_cast<std::size_t>(x);
  if (k + 1 >= table.size()) return table.back();
  const double w = x - static_cast<double>(k);
  return table[k] + w * (table[k + 1] - table[k]);
}

double AgpAnalytic::G_at_locked(std::size_t n, double t) const {
  if (n == 0) return 1.0;
  const auto len = static_cast<std::size_t>(std::floor(t / grid_.dt)) + 2;
  return interpolate(ensure_G(n, len), t);
}

double AgpAnalytic::K_at_locked(std::size_t n, double t) const {
  const auto len = static_cast<std::size_t>(std::floor(t / grid_.dt)) + 2;
  return interpolate(ensure_K(n, len), t);
}

void AgpAnalytic::throw_truncation(const char* what, double T, double last) const {
  std::ostringstream os;
  os << what << ": series not converged at n_max = " << truncation_.n_max << " (T = " << T
     << ", last term " << last << ", epsilon " << truncation_.epsilon
     << "); raise truncation.n_max or check the model";
  throw TruncationError(os.str());
}

GridFunction AgpAnalytic::cycle_cdf(std::size_t i) const {
  if (i < 1) throw std::invalid_argument("cycle_cdf: index must be >= 1");
  std::lock_guard lock(mutex_);
  const bool on_measure = model_.on().mean(i) >= model_.off().mean(i);
  const auto& measure_gp = on_measure ? model_.on() : model_.off();
  const auto& ker = on_measure ? off_kernel(i) : on_kernel(i);
  const auto measure = tabulate_cdf(measure_gp, i, grid_, size_);
  std::vector<double> out;
  stieltjes_convolve(measure, ker, 1, size_ - 1, 0, size_, out);
  return {grid_, std::move(out), GridKind::cdf};
}

GridFunction AgpAnalytic::convolution_cdf(std::size_t n) const {
  if (n < 1) throw std::invalid_argument("convolve_G: n must be >= 1");
  std::lock_guard lock(mutex_);
  return {grid_, ensure_G(n, size_), GridKind::cdf};
}

GridFunction AgpAnalytic::convolution_density(std::size_t n) const {
  if (n < 1) throw std::invalid_argument("convolve_G: n must be >= 1");
  std::lock_guard lock(mutex_);
  const auto& G = ensure_G(n, size_);
  std::vector<double> d(G.size(), 0.0);
  for (std::size_t k = 1; k < G.size(); ++k) d[k] = (G[k] - G[k - 1]) / grid_.dt;
  return {grid_, std::move(d), GridKind::density};
}

GridFunction AgpAnalytic::failure_time_cdf(std::size_t n) const {
  std::lock_guard lock(mutex_);
  return {grid_, ensure_K(n, size_), GridKind::cdf};
}

double AgpAnalytic::convolution_at(std::size_t n, double t) const {
  require_within_grid(t, "t");
  std::lock_guard lock(mutex_);
  return G_at_locked(n, t);
}

SeriesResult AgpAnalytic::expected_cycles(double T) const {
  require_within_grid(T, "T");
  std::lock_guard lock(mutex_);
  SeriesResult r;
  for (std::size_t n = 1;; ++n) {
    const double g = G_at_locked(n, T);
    r.value += g;
    r.terms = n;
    r.last_term = g;
    if (g < truncation_.epsilon) break;
    if (n >= truncation_.n_max) throw_truncation("expected_cycles", T, g);
  }
  return r;
}

ProbabilityResult AgpAnalytic::prob_on(double t) const {
  require_within_grid(t, "t");
  std::lock_guard lock(mutex_);
  double raw = model_.on().survival(1, t);
  std::size_t n = 1;
  for (;; ++n) {
    const double g = G_at_locked(n, t);
    raw += g - K_at_locked(n, t);
    if (g < truncation_.epsilon) break;
    if (n >= truncation_.n_max) throw_truncation("prob_on", t, g);
  }
  ProbabilityResult r;
  r.value = clamp_unit(raw, r.clamp);
  r.terms = n;
  return r;
}

SeriesResult AgpAnalytic::expected_next_repair_given_on(double T) const {
  require_within_grid(T, "T");
  const double mean_y1 = model_.off().mean(1);
  if (model_.b() == 1.0) return {mean_y1, 0, 0.0};
  std::lock_guard lock(mutex_);
  const double s1 = model_.on().survival(1, T);
  double p_on = s1;
  double weighted = s1;
  SeriesResult r;
  for (std::size_t n = 1;; ++n) {
    const double g = G_at_locked(n, T);
    const double term = g - K_at_locked(n, T);
    const double w = 1.0 / model_.off().scale(n + 1);  // b^{-n}
    p_on += term;
    weighted += w * term;
    r.terms = n;
    r.last_term = w * term;
    if (g < truncation_.epsilon && w * g < truncation_.epsilon * weighted) break;
    if (n >= truncation_.n_max) throw_truncation("expected_next_repair_given_on", T, w * g);
  }
  double clamp = 0.0;
  p_on = clamp_unit(p_on, clamp);
  if (!(p_on > 0.0)) {
    throw std::domain_error("expected_next_repair_given_on: P(on at T) is zero on this grid");
  }
  r.value = mean_y1 * weighted / p_on;
  return r;
}

SeriesResult AgpAnalytic::expected_b_pow_neg_N(double T) const {
  require_within_grid(T, "T");
  if (model_.b() == 1.0) return {1.0, 0, 0.0};
  std::lock_guard lock(mutex_);
  SeriesResult r;
  double g_prev = 1.0;
  for (std::size_t n = 0;; ++n) {
    const double g_next = G_at_locked(n + 1, T);
    const double w = 1.0 / model_.off().scale(n + 1);  // b^{-n}
    const double term = w * (g_prev - g_next);
    r.value += term;
    r.terms = n;
    r.last_term = term;
    const double w_next = 1.0 / model_.off().scale(n + 2);
    if (w_next * g_next < truncation_.epsilon * r.value) break;
    if (n + 1 >= truncation_.n_max) throw_truncation("expected_b_pow_neg_N", T, w_next * g_next);
    g_prev = g_next;
  }
  return r;
}

std::vector<double> AgpAnalytic::cycle_count_pmf(double T) const {
  require_within_grid(T, "T");
  std::lock_guard lock(mutex_);
  std::vector<double> pmf;
  double g_prev = 1.0;
  for (std::size_t n = 0;; ++n) {
    const double g_next = G_at_locked(n + 1, T);
    pmf.push_back(g_prev - g_next);
    if (g_next < truncation_.epsilon) break;
    if (n + 1 >= truncation_.n_max) throw_truncation("cycle_count_pmf", T, g_next);
    g_prev = g_next;
  }
  return pmf;
}

SeriesResult AgpAnalytic::expected_straddling_cycle_end(double T) const {
  require_within_grid(T, "T");
  std::lock_guard lock(mutex_);
  SeriesResult r;
  for (std::size_t n = 0;; ++n) {
    const double g = G_at_locked(n, T);
    const double term = (model_.on().mean(n + 1) + model_.off().mean(n + 1)) * g;
    r.value += term;
    r.terms = n;
    r.last_term = term;
    if (g < truncation_.epsilon && term < truncation_.epsilon * r.value) break;
    if (n + 1 >= truncation_.n_max) throw_truncation("expected_straddling_cycle_end", T, term);
  }
  return r;
}

XiTables AgpAnalytic::xi_tables(double T) const {
  const std::size_t kT = grid_.index_of(T);
  if (kT == 0) throw InvalidParameter("policy.T", "must be > 0");
  std::lock_guard lock(mutex_);
  if (auto it = cache_->xi.find(kT); it != cache_->xi.end()) return it->second;

  const std::size_t N = size_;
  XiTables xt;
  xt.grid = grid_;
  xt.period_index = kT;
  xt.on.assign(N, 0.0);
  xt.off.assign(N, 0.0);

  const auto& on = model_.on();
  std::vector<double> raw;
  std::vector<double> D;
  std::vector<double> part;
  double p_on = 0.0;

  for (std::size_t n = 0;; ++n) {
    // On at T with N(T) = n: xi = S_n + X_{n+1}, S_n <= T < xi.
    const auto& Kn = ensure_K(n, kT + 1);
    if (n == 0) {
      const double fT = on.cdf(1, T);
      for (std::size_t k = kT + 1; k < N; ++k) xt.on[k] += on.cdf(1, grid_.t(k)) - fT;
      p_on += 1.0 - fT;
    } else {
      const auto& Gn = ensure_G(n, kT + 1);
      stieltjes_convolve(Gn, on_kernel(n + 1), 1, kT, kT, N, raw);
      for (std::size_t k = kT + 1; k < N; ++k) xt.on[k] += raw[k] - raw[kT];
      p_on += Gn[kT] - Kn[kT];
    }

    // Off at T: failure n+1 at w <= T, repair ends at r > T, xi = r + X_{n+2}.
    // D(r) = P(w <= T < w + Y_{n+1} <= r); then xi has law D * F_{X_{n+2}}.
    stieltjes_convolve(Kn, off_kernel(n + 1), 1, kT, kT, N, raw);
    D.assign(N, 0.0);
    for (std::size_t k = kT + 1; k < N; ++k) D[k] = raw[k] - raw[kT];
    stieltjes_convolve(D, on_kernel(n + 2), kT + 1, N - 1, kT + 1, N, part);
    for (std::size_t k = kT + 1; k < N; ++k) xt.off[k] += part[k];

    xt.terms = n;
    const double g_next = ensure_G(n + 1, kT + 1)[kT];
    if (g_next < truncation_.epsilon) break;
    if (n + 1 >= truncation_.n_max) throw_truncation("xi_tables", T, g_next);
  }
  double clamp = 0.0;
  xt.prob_on = clamp_unit(p_on, clamp);
  cache_->xi.emplace(kT, xt);
  return xt;
}

ProbabilityResult AgpAnalytic::cdf_xi_given_on(double T, double t) const {
  if (t < T) throw std::invalid_argument("cdf_xi_given_on: t must be >= T");
  require_within_grid(t, "t");
  const auto xt = xi_tables(T);
  if (!(xt.prob_on > 0.0)) throw std::domain_error("cdf_xi_given_on: P(on at T) is zero");
  ProbabilityResult r;
  r.value = clamp_unit(interpolate(xt.on, t) / xt.prob_on, r.clamp);
  r.terms = xt.terms;
  return r;
}

ProbabilityResult AgpAnalytic::cdf_xi_given_off(double T, double t) const {
  if (t < T) throw std::invalid_argument("cdf_xi_given_off: t must be >= T");
  require_within_grid(t, "t");
  const auto xt = xi_tables(T);
  const double p_off = 1.0 - xt.prob_on;
  if (!(p_off > 0.0)) throw std::domain_error("cdf_xi_given_off: P(off at T) is zero");
  ProbabilityResult r;
  r.value = clamp_unit(interpolate(xt.off, t) / p_off, r.clamp);
  r.terms = xt.terms;
  return r;
}

GridFunction AgpAnalytic::restricted_renewing_xi_cdf(double T, std::size_t n) const {
  if (n < 1) throw InvalidParameter("policy.n", "must be >= 1");
  const std::size_t kT = grid_.index_of(T);
  if (kT == 0) throw InvalidParameter("policy.T", "must be > 0");
  std::lock_guard lock(mutex_);
  const std::size_t N = size_;
  const auto& on = model_.on();
  std::vector<double> out(N, 0.0);

  // No repair: xi = X_1 > T.
  const double f1T = on.cdf(1, T);
  for (std::size_t k = kT + 1; k < N; ++k) out[k] = std::max(0.0, on.cdf(1, grid_.t(k)) - f1T);

  // Kernel of the defective law P(X_i <= x, X_i <= T). T is a grid point, so
  // cells past it average to F_{X_i}(T) exactly.
  auto covered_on = [&](std::size_t i) {
    auto ker = on_kernel(i);
    const double fT = on.cdf(i, T);
    for (std::size_t m = kT; m < ker.size(); ++m) ker[m] = fT;
    return ker;
  };

  // R = law of S_i on the event that X_1 .. X_i are all covered (<= T).
  std::vector<double> R;
  if (on.mean(1) >= model_.off().mean(1)) {
    std::vector<double> measure(N);
    for (std::size_t k = 0; k < N; ++k) measure[k] = std::min(on.cdf(1, grid_.t(k)), f1T);
    stieltjes_convolve(measure, off_kernel(1), 1, N - 1, 0, N, R);
  } else {
    stieltjes_convolve(tabulate_cdf(model_.off(), 1, grid_, N), covered_on(1), 1, N - 1, 0, N, R);
  }

  std::vector<double> kernel;
  std::vector<double> part;
  for (std::size_t i = 1; i < n; ++i) {
    // i covered repairs then X_{i+1} > T: integral over s <= t - T of
    // (F_{X_{i+1}}(t - s) - F_{X_{i+1}}(T)) dR(s).
    const auto& avg = on_kernel(i + 1);
    const double fT = on.cdf(i + 1, T);
    kernel.assign(avg.size(), 0.0);
    for (std::size_t m = kT; m < avg.size(); ++m) kernel[m] = std::max(0.0, avg[m] - fT);
    // The kernel vanishes below T, which keeps s <= t - T.
    part.clear();
    stieltjes_convolve(R, kernel, 1, N - 1, 0, N, part);
    for (std::size_t k = kT + 1; k < N; ++k) out[k] += part[k];
    std::vector<double> A;
    std::vector<double> next;
    stieltjes_convolve(R, covered_on(i + 1), 1, N - 1, 0, N, A);
    stieltjes_convolve(A, off_kernel(i + 1), 1, N - 1, 0, N, next);
    R = std::move(next);
  }

  // All n repairs covered: xi = S_n + X_{n+1}.
  std::vector<double> last;
  stieltjes_convolve(R, on_kernel(n + 1), 1, N - 1, 0, N, last);
  for (std::size_t k = 0; k < N; ++k) out[k] = std::clamp(out[k] + last[k], 0.0, 1.0);
  return {grid_, std::move(out), GridKind::cdf};
}

GridFunction cycle_cdf(const AgpModel& model, std::size_t i, const Grid& grid) {
  return AgpAnalytic(model, grid).cycle_cdf(i);
}

GridFunction convolve_G(const AgpModel& model, std::size_t n, const Grid& grid) {
  return AgpAnalytic(model, grid).convolution_cdf(n);
}

SeriesResult expected_cycles(const AgpModel& model, double T, const Grid& grid,
                             const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).expected_cycles(T);
}

ProbabilityResult prob_on(const AgpModel& model, double t, const Grid& grid,
                          const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).prob_on(t);
}

SeriesResult expected_next_repair_given_on(const AgpModel& model, double T, const Grid& grid,
                                           const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).expected_next_repair_given_on(T);
}

ProbabilityResult cdf_xi_given_on(const AgpModel& model, double T, double t, const Grid& grid,
                                  const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).cdf_xi_given_on(T, t);
}

ProbabilityResult cdf_xi_given_off(const AgpModel& model, double T, double t, const Grid& grid,
                                   const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).cdf_xi_given_off(T, t);
}

SeriesResult expected_b_pow_neg_N(const AgpModel& model, double T, const Grid& grid,
                                  const SeriesTruncation& truncation) {
  return AgpAnalytic(model, grid, truncation).expected_b_pow_neg_N(T);
}

}  // namespace agp
