#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "agp/agp_analytic.hpp"
#include "agp/geometric_process.hpp"
#include "agp/grid.hpp"

namespace agp {

/// Repair i costs C_i = A + delta * Y_i.
struct CostParams {
  double A = 0.0;
  double delta = 0.0;

  void validate() const;
};

/// Non-renewing free repair warranty over (0, T].
struct Nrfrw {
  double T = 0.0;
};
/// Renewing free repair warranty: each repair restarts a fresh period T.
struct Rfrw {
  double T = 0.0;
};
/// Renewing warranty capped at n covered repairs.
struct Rrfrw {
  double T = 0.0;
  std::size_t n = 1;
};

using WarrantyPolicy = std::variant<Nrfrw, Rfrw, Rrfrw>;

double policy_period(const WarrantyPolicy& policy);
std::string_view policy_name(const WarrantyPolicy& policy);
void validate_policy(const WarrantyPolicy& policy);

/// L_star is the contemporaneity horizon; L the life-cycle length fed to the
/// analytic formulas.
struct LifeCycleParams {
  double L_star = 0.0;
  double L = 0.0;

  void validate() const;
};

/// E(C_i) = A + delta * E(Y_1) / b^(i-1).
double expected_claim_cost(const CostParams& cost, const GeometricProcess& off, std::size_t i);

struct NrfrwCost {
  double cost = 0.0;                 // E(C(T))
  double expected_cycles = 0.0;      // m_1(T)
  double prob_on = 0.0;              // P(on at T)
  double b_pow_neg_N = 0.0;          // E(b^-N(T))
  double next_repair_given_on = 0.0; // E(Y_{N(T)+1} | on at T)
  double claims_through_next = 0.0;  // E(sum_{i <= N(T)+1} C_i)
  std::size_t terms = 0;             // largest series index used
  double clamp = 0.0;
};

/// Expected warranty cost over (0, T] for T >= 0 on the analytic grid.
NrfrwCost expected_cost_nrfrw(const AgpAnalytic& analytic, const CostParams& cost, double T);

/// P(xi <= t), xi the NRFRW repurchase interval. Needs t >= T and T a grid point.
double cdf_xi(const AgpAnalytic& analytic, double T, double t);
/// The same CDF tabulated over the whole grid.
GridFunction xi_cdf(const AgpAnalytic& analytic, double T);

/// Renewal function m(t) tabulated over F's grid: solves
/// m(t) = F(t) + int_0^t m(t - s) dF(s), F taken piecewise linear between grid
/// points and m averaged over each cell (trapezoid, implicit in m_k).
GridFunction renewal_table(const GridFunction& F, double up_to);
/// m(L) from renewal_table. Throws if F is not a (possibly defective) CDF.
double renewal_function(const GridFunction& F, double L);

struct LifeCycleCost {
  double cost = 0.0;          // (m(L) + 1) * per_purchase
  double renewals = 0.0;      // m(L)
  double per_purchase = 0.0;  // expected cost of one warranty
};

LifeCycleCost expected_cost_life_cycle_nrfrw(const AgpAnalytic& analytic, const CostParams& cost,
                                             double T, const LifeCycleParams& lc);

struct CostAtom {
  std::size_t repairs = 0;
  double cost = 0.0;  // sum of E(C_i), i <= repairs
  double probability = 0.0;
};

struct RfrwCostDistribution {
  std::vector<CostAtom> atoms;  // repairs = 0 .. K
  double residual = 0.0;        // P(more than K repairs)
};

/// First K+1 atoms of the renewing-warranty cost: exactly k repairs happen
/// when X_1..X_k <= T < X_{k+1}.
RfrwCostDistribution rfrw_cost_distribution(const AgpModel& model, const CostParams& cost,
                                             double T, std::size_t K);

struct RfrwPartialSums {
  std::vector<double> sums;    // sums[k-1] = sum_{j<=k} E(C_j) prod_{i<=j} F_{X_i}(T)
  std::vector<double> ratios;  // ratios[k-1] = term_{k+1} / term_k
  /// Smallest k with ratios > 1 from k on, if the last observed ratio is > 1.
  std::optional<std::size_t> k0;
  /// True when the sums were cut short because the next one would overflow.
  bool overflowed = false;
};

RfrwPartialSums rfrw_partial_sums(const AgpModel& model, const CostParams& cost, double T,
                                  std::size_t K);

/// Expected cost of RRFRW(n): the n-th partial sum of the renewing series.
double expected_cost_rrfrw(const AgpModel& model, const CostParams& cost, double T,
                           std::size_t n);

/// P(xi^n <= t), the RRFRW(n) repurchase interval; T must be a grid point.
double cdf_xi_n(const AgpAnalytic& analytic, double T, std::size_t n, double t);

LifeCycleCost expected_cost_life_cycle_rrfrw(const AgpAnalytic& analytic, const CostParams& cost,
                                             double T, std::size_t n, const LifeCycleParams& lc);

}  // namespace agp
