#include "agp/warranty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "agp/errors.hpp"

namespace agp {

void CostParams::validate() const {
  if (!(A >= 0.0) || !std::isfinite(A)) throw InvalidParameter("cost.A", "must be >= 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidParameter("cost.delta", "must be >= 0");
  }
  if (A == 0.0 && delta == 0.0) throw InvalidParameter("cost", "A and delta are both zero");
}

double policy_period(const WarrantyPolicy& policy) {
  return std::visit([](const auto& p) { return p.T; }, policy);
}

std::string_view policy_name(const WarrantyPolicy& policy) {
  switch (policy.index()) {
    case 0: return "NRFRW";
    case 1: return "RFRW";
    default: return "RRFRW";
  }
}

void validate_policy(const WarrantyPolicy& policy) {
  const double T = policy_period(policy);
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidParameter("policy.T", "must be > 0");
  if (const auto* r = std::get_if<Rrfrw>(&policy); r && r->n < 1) {
    throw InvalidParameter("policy.n", "must be >= 1");
  }
}

void LifeCycleParams::validate() const {
  if (!(L_star > 0.0) || !std::isfinite(L_star)) {
    throw InvalidParameter("life_cycle.L_star", "must be > 0");
  }
  if (!(L >= L_star) || !std::isfinite(L)) {
    throw InvalidParameter("life_cycle.L", "must be >= life_cycle.L_star");
  }
}

double expected_claim_cost(const CostParams& cost, const GeometricProcess& off, std::size_t i) {
  if (i < 1) throw std::invalid_argument("expected_claim_cost: index must be >= 1");
  if (cost.delta == 0.0) return cost.A;
  return cost.A + cost.delta * off.mean(i);
}

NrfrwCost expected_cost_nrfrw(const AgpAnalytic& analytic, const CostParams& cost, double T) {
  cost.validate();
  const auto& model = analytic.model();
  const double b = model.b();
  const double mean_y1 = model.off().mean(1);

  NrfrwCost out;
  const auto m1 = analytic.expected_cycles(T);
  const auto on = analytic.prob_on(T);
  const auto eb = analytic.expected_b_pow_neg_N(T);
  const auto next = analytic.expected_next_repair_given_on(T);
  out.expected_cycles = m1.value;
  out.prob_on = on.value;
  out.clamp = on.clamp;
  out.b_pow_neg_N = eb.value;
  out.next_repair_given_on = next.value;
  out.terms = std::max({m1.terms, on.terms, eb.terms, next.terms});

  // E(sum_{i<=N+1} Y_i): Wald over the stopping time N(T)+1; b = 1 is the limit.
  const double repair_time =
      b == 1.0 ? mean_y1 * (m1.value + 1.0) : mean_y1 * (eb.value - b) / (1.0 - b);
  out.claims_through_next = cost.A * (m1.value + 1.0) + cost.delta * repair_time;
  out.cost = out.claims_through_next - (cost.A + cost.delta * next.value) * on.value;
  return out;
}

double cdf_xi(const AgpAnalytic& analytic, double T, double t) {
  if (t < T) throw std::invalid_argument("cdf_xi: t must be >= T");
  return xi_cdf(analytic, T).at(t);
}

GridFunction xi_cdf(const AgpAnalytic& analytic, double T) {
  const auto xt = analytic.xi_tables(T);
  std::vector<double> v(xt.on.size());
  double running = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    // Rounding can make the sum dip by an ulp; keep the table monotone.
    running = std::max(running, std::clamp(xt.on[k] + xt.off[k], 0.0, 1.0));
    v[k] = running;
  }
  return {xt.grid, std::move(v), GridKind::cdf};
}

GridFunction renewal_table(const GridFunction& F, double up_to) {
  if (F.kind() != GridKind::cdf) {
    throw std::invalid_argument("renewal_function: F must be a CDF table");
  }
  F.validate(1e-9);
  const Grid& g = F.grid();
  if (up_to < 0.0) throw std::invalid_argument("renewal_function: L must be >= 0");
  const double last = g.t(F.size() - 1);
  if (up_to > last * (1.0 + 1e-12)) {
    throw InvalidParameter("life_cycle.L", "exceeds the tabulated range of the CDF (raise grid.t_max)");
  }
  const std::size_t len =
      std::min(F.size(), static_cast<std::size_t>(std::ceil(up_to / g.dt - 1e-9)) + 1);
  const auto f = F.values();
  std::vector<double> dF(len, 0.0);
  for (std::size_t j = 1; j < len; ++j) dF[j] = f[j] - f[j - 1];

  std::vector<double> m(len, 0.0);
  m[0] = f[0];
  const double implicit = 1.0 - 0.5 * (len > 1 ? dF[1] : 0.0);
  if (!(implicit > 0.0)) throw std::invalid_argument("renewal_function: F jumps to 1 in one cell");
  for (std::size_t k = 1; k < len; ++k) {
    double acc = f[k] + 0.5 * dF[1] * m[k - 1];
    for (std::size_t j = 2; j <= k; ++j) acc += dF[j] * 0.5 * (m[k - j] + m[k - j + 1]);
    m[k] = acc / implicit;
  }
  return {g, std::move(m), GridKind::plain};
}

double renewal_function(const GridFunction& F, double L) { return renewal_table(F, L).at(L); }

namespace {

LifeCycleCost life_cycle(const GridFunction& xi, double per_purchase, const LifeCycleParams& lc) {
  lc.validate();
  LifeCycleCost out;
  out.per_purchase = per_purchase;
  out.renewals = renewal_function(xi, lc.L);
  out.cost = (out.renewals + 1.0) * per_purchase;
  return out;
}

}  // namespace

LifeCycleCost expected_cost_life_cycle_nrfrw(const AgpAnalytic& analytic, const CostParams& cost,
                                             double T, const LifeCycleParams& lc) {
  lc.validate();
  const double per = expected_cost_nrfrw(analytic, cost, T).cost;
  return life_cycle(xi_cdf(analytic, T), per, lc);
}

RfrwCostDistribution rfrw_cost_distribution(const AgpModel& model, const CostParams& cost,
                                             double T, std::size_t K) {
  cost.validate();
  if (K < 1) throw InvalidParameter("K", "must be >= 1");
  if (!(T > 0.0)) throw InvalidParameter("policy.T", "must be > 0");
  RfrwCostDistribution out;
  out.atoms.reserve(K + 1);
  double survive = 1.0;  // prod_{i<=k} F_{X_i}(T)
  double total = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    out.atoms.push_back({k, total, survive * model.on().survival(k + 1, T)});
    survive *= model.on().cdf(k + 1, T);
    total += expected_claim_cost(cost, model.off(), k + 1);
  }
  out.residual = survive;
  return out;
}

RfrwPartialSums rfrw_partial_sums(const AgpModel& model, const CostParams& cost, double T,
                                  std::size_t K) {
  cost.validate();
  if (K < 1) throw InvalidParameter("K", "must be >= 1");
  if (!(T > 0.0)) throw InvalidParameter("policy.T", "must be > 0");
  RfrwPartialSums out;
  out.sums.reserve(K);
  double prod = 1.0;
  double sum = 0.0;
  double prev_term = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    prod *= model.on().cdf(k, T);
    const double term = expected_claim_cost(cost, model.off(), k) * prod;
    if (!std::isfinite(term) || !std::isfinite(sum + term)) {
      out.overflowed = true;
      break;
    }
    if (k > 1) out.ratios.push_back(prev_term > 0.0 ? term / prev_term : 0.0);
    sum += term;
    out.sums.push_back(sum);
    prev_term = term;
  }
  if (!out.ratios.empty() && out.ratios.back() > 1.0) {
    std::size_t k = out.ratios.size();
    while (k > 1 && out.ratios[k - 2] > 1.0) --k;
    out.k0 = k;
  }
  return out;
}

double expected_cost_rrfrw(const AgpModel& model, const CostParams& cost, double T,
                           std::size_t n) {
  if (n < 1) throw InvalidParameter("policy.n", "must be >= 1");
  const auto ps = rfrw_partial_sums(model, cost, T, n);
  if (ps.overflowed) throw std::overflow_error("expected_cost_rrfrw: partial sum overflows");
  return ps.sums.back();
}

double cdf_xi_n(const AgpAnalytic& analytic, double T, std::size_t n, double t) {
  if (t < 0.0) throw std::invalid_argument("cdf_xi_n: t must be >= 0");
  const auto& g = analytic.grid();
  if (t > g.t(g.size() - 1) * (1.0 + 1e-12)) {
    throw InvalidParameter("grid.t_max", "t lies beyond the grid");
  }
  return analytic.restricted_renewing_xi_cdf(T, n).at(t);
}

LifeCycleCost expected_cost_life_cycle_rrfrw(const AgpAnalytic& analytic, const CostParams& cost,
                                             double T, std::size_t n, const LifeCycleParams& lc) {
  lc.validate();
  const double per = expected_cost_rrfrw(analytic.model(), cost, T, n);
  return life_cycle(analytic.restricted_renewing_xi_cdf(T, n), per, lc);
}

}  // namespace agp
