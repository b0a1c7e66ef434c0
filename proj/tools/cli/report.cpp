#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <variant>

#include "agp/agp_analytic.hpp"
#include "agp/errors.hpp"
#include "agp/montecarlo.hpp"
#include "agp/warranty.hpp"

namespace agpw {

namespace {

// Partial sums printed for RFRW, then the last one.
constexpr std::size_t kPartialSumLadder[] = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
constexpr std::size_t kAtoms = 10;

Row* find_row(Report& r, const std::string& quantity) {
  for (auto& row : r) {
    if (row.quantity == quantity) return &row;
  }
  return nullptr;
}

void put_analytic(Report& r, const std::string& quantity, double v) {
  if (auto* row = find_row(r, quantity)) {
    row->analytic = v;
  } else {
    r.push_back({quantity, v, std::nullopt});
  }
}

void put_mc(Report& r, const std::string& quantity, const agp::Estimate& e) {
  if (auto* row = find_row(r, quantity)) {
    row->mc = e;
  } else {
    r.push_back({quantity, std::nullopt, e});
  }
}

std::optional<std::size_t> rrfrw_cap(const agp::WarrantyPolicy& p) {
  if (const auto* r = std::get_if<agp::Rrfrw>(&p)) return r->n;
  return std::nullopt;
}

// m_1(T) and E(S_{N(T)+1}) / (m_1(T) + 1): the cycle properties shown next to
// every cost.
std::pair<double, double> cycle_properties(const agp::AgpAnalytic& an, double T) {
  const double m1 = an.expected_cycles(T).value;
  const double end = an.expected_straddling_cycle_end(T).value;
  return {m1, end / (m1 + 1.0)};
}

double policy_cost(const agp::AgpAnalytic& an, const ExperimentConfig& c) {
  const double T = agp::policy_period(c.policy);
  if (std::holds_alternative<agp::Nrfrw>(c.policy)) {
    return agp::expected_cost_nrfrw(an, c.cost, T).cost;
  }
  if (const auto n = rrfrw_cap(c.policy)) return agp::expected_cost_rrfrw(c.model, c.cost, T, *n);
  const auto ps = agp::rfrw_partial_sums(c.model, c.cost, T, c.rfrw_terms);
  return ps.sums.back();
}

agp::GridFunction repurchase_cdf(const agp::AgpAnalytic& an, const ExperimentConfig& c) {
  const double T = agp::policy_period(c.policy);
  if (const auto n = rrfrw_cap(c.policy)) return an.restricted_renewing_xi_cdf(T, *n);
  return agp::xi_cdf(an, T);
}

std::string csv_cell(const json& v) {
  if (v.is_number()) return format_number(v.get<double>());
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

std::string opt_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

void write_header_comments(std::ostream& csv, const json& doc) {
  csv << "# config: " << reproducible_view(doc).dump() << "\n";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Report run_analytic(const ExperimentConfig& c) {
  Report r;
  const double T = agp::policy_period(c.policy);
  agp::AgpAnalytic an(c.model, c.grid, c.truncation);

  if (std::holds_alternative<agp::Nrfrw>(c.policy)) {
    const auto e = agp::expected_cost_nrfrw(an, c.cost, T);
    put_analytic(r, "expected_cost", e.cost);
    put_analytic(r, "expected_cycles", e.expected_cycles);
    put_analytic(r, "prob_on", e.prob_on);
    put_analytic(r, "expected_b_pow_neg_N", e.b_pow_neg_N);
    put_analytic(r, "next_repair_given_on", e.next_repair_given_on);
    put_analytic(r, "claims_through_next", e.claims_through_next);
    put_analytic(r, "mean_cycle_length", cycle_properties(an, T).second);
    put_analytic(r, "series_terms", static_cast<double>(e.terms));
    put_analytic(r, "prob_on_clamp", e.clamp);
  } else if (const auto n = rrfrw_cap(c.policy)) {
    put_analytic(r, "expected_cost", agp::expected_cost_rrfrw(c.model, c.cost, T, *n));
    put_analytic(r, "expected_repairs",
                 agp::expected_cost_rrfrw(c.model, agp::CostParams{1.0, 0.0}, T, *n));
    const auto [m1, len] = cycle_properties(an, T);
    put_analytic(r, "expected_cycles", m1);
    put_analytic(r, "mean_cycle_length", len);
  } else {
    // The expected cost itself diverges; only its partial sums are reported.
    const auto ps = agp::rfrw_partial_sums(c.model, c.cost, T, c.rfrw_terms);
    for (std::size_t k : kPartialSumLadder) {
      if (k < ps.sums.size()) put_analytic(r, "partial_sum_" + std::to_string(k), ps.sums[k - 1]);
    }
    put_analytic(r, "partial_sum_" + std::to_string(ps.sums.size()), ps.sums.back());
    if (!ps.ratios.empty()) put_analytic(r, "last_term_ratio", ps.ratios.back());
    r.push_back({"divergence_k0",
                 ps.k0 ? std::optional<double>(static_cast<double>(*ps.k0)) : std::nullopt,
                 std::nullopt});
    put_analytic(r, "partial_sums_overflowed", ps.overflowed ? 1.0 : 0.0);
    const auto dist = agp::rfrw_cost_distribution(c.model, c.cost, T, kAtoms);
    for (const auto& atom : dist.atoms) {
      put_analytic(r, "atom_prob_" + std::to_string(atom.repairs), atom.probability);
    }
    put_analytic(r, "residual_prob_" + std::to_string(kAtoms), dist.residual);
    const auto [m1, len] = cycle_properties(an, T);
    put_analytic(r, "expected_cycles", m1);
    put_analytic(r, "mean_cycle_length", len);
  }

  if (c.life_cycle && !std::holds_alternative<agp::Rfrw>(c.policy)) {
    const auto xi = repurchase_cdf(an, c);
    const double per = policy_cost(an, c);
    const double m = agp::renewal_function(xi, c.life_cycle->L);
    put_analytic(r, "life_cycle_renewals", m);
    put_analytic(r, "life_cycle_cost", (m + 1.0) * per);
    put_analytic(r, "life_cycle_purchases", m + 1.0);
  }
  return r;
}

Report run_simulate(const ExperimentConfig& c) {
  Report r;
  const double T = agp::policy_period(c.policy);
  const auto& model = c.model;

  if (std::holds_alternative<agp::Nrfrw>(c.policy)) {
    const auto outs = agp::for_each_replication(c.sim, [&](std::size_t, std::uint64_t key) {
      agp::Trajectory tr(model, agp::ItemStream(key));
      return agp::nrfrw_outcome(tr, c.cost, T);
    });
    std::vector<double> cost, cycles, on, bpow, through, next_on;
    for (const auto& o : outs) {
      cost.push_back(o.cost);
      cycles.push_back(static_cast<double>(o.cycles));
      on.push_back(o.on_at_T ? 1.0 : 0.0);
      bpow.push_back(1.0 / model.off().scale(o.cycles + 1));
      through.push_back(o.claims_through_next);
      if (o.on_at_T) next_on.push_back(o.next_repair);
    }
    put_mc(r, "expected_cost", agp::summarize(cost));
    put_mc(r, "expected_cycles", agp::summarize(cycles));
    put_mc(r, "prob_on", agp::summarize(on));
    put_mc(r, "expected_b_pow_neg_N", agp::summarize(bpow));
    if (next_on.size() >= 2) put_mc(r, "next_repair_given_on", agp::summarize(next_on));
    put_mc(r, "claims_through_next", agp::summarize(through));
  } else {
    // Uncapped runs may never end; RFRW is simulated just past the reported atoms.
    const auto cap = rrfrw_cap(c.policy).value_or(kAtoms + 1);
    const auto outs = agp::for_each_replication(c.sim, [&](std::size_t, std::uint64_t key) {
      return agp::rfrw_outcome(model, agp::ItemStream(key), c.cost, T, cap);
    });
    if (rrfrw_cap(c.policy)) {
      std::vector<double> cost, repairs;
      for (const auto& o : outs) {
        cost.push_back(o.cost);
        repairs.push_back(static_cast<double>(o.repairs));
      }
      put_mc(r, "expected_cost", agp::summarize(cost));
      put_mc(r, "expected_repairs", agp::summarize(repairs));
    } else {
      std::vector<double> ind(outs.size());
      for (std::size_t k = 0; k <= kAtoms + 1; ++k) {
        for (std::size_t i = 0; i < outs.size(); ++i) {
          ind[i] = (k <= kAtoms ? outs[i].repairs == k : outs[i].repairs > kAtoms) ? 1.0 : 0.0;
        }
        put_mc(r, k <= kAtoms ? "atom_prob_" + std::to_string(k)
                              : "residual_prob_" + std::to_string(kAtoms),
               agp::summarize(ind));
      }
    }
  }

  if (c.life_cycle && !std::holds_alternative<agp::Rfrw>(c.policy)) {
    const auto outs = agp::for_each_replication(c.sim, [&](std::size_t, std::uint64_t key) {
      return agp::life_cycle_cost(model, c.cost, c.policy, c.life_cycle->L_star, key);
    });
    std::vector<double> cost, L, purchases;
    for (const auto& o : outs) {
      cost.push_back(o.cost);
      L.push_back(o.realized_L);
      purchases.push_back(static_cast<double>(o.purchases));
    }
    put_mc(r, "life_cycle_cost", agp::summarize(cost));
    put_mc(r, "life_cycle_purchases", agp::summarize(purchases));
    put_mc(r, "life_cycle_realized_L", agp::summarize(L));
  }
  return r;
}

void apply_overrides(json& doc, const RunOptions& options) {
  if (!options.seed_override && !options.workers) return;
  if (!doc.contains("sim")) doc["sim"] = json::object();
  if (options.seed_override) doc["sim"]["seed"] = *options.seed_override;
  if (options.workers) doc["sim"]["workers"] = *options.workers;
}

namespace {

void run_single(const json& doc, const RunOptions& options, std::ostream& csv, std::ostream& log) {
  const auto cfg = parse_config(doc);
  Report report;
  if (options.mode != Mode::simulate) report = run_analytic(cfg);
  if (options.mode != Mode::analytic) {
    for (auto& row : run_simulate(cfg)) put_mc(report, row.quantity, *row.mc);
  }
  // L-as-given versus the simulator's realized L: evaluate the analytic
  // life-cycle cost at the realized mean as well.
  if (options.mode == Mode::both) {
    if (const Row* lrow = find_row(report, "life_cycle_realized_L"); lrow && lrow->mc) {
      const double L = lrow->mc->mean;
      const auto& g = cfg.grid;
      if (L <= g.t(g.size() - 1)) {
        agp::AgpAnalytic an(cfg.model, cfg.grid, cfg.truncation);
        const double m = agp::renewal_function(repurchase_cdf(an, cfg), L);
        put_analytic(report, "life_cycle_cost_at_realized_L", (m + 1.0) * policy_cost(an, cfg));
      } else {
        log << "note: realized mean L = " << L << " lies beyond grid.t_max; "
            << "life_cycle_cost_at_realized_L omitted\n";
      }
    }
  }

  write_header_comments(csv, doc);
  csv << "# policy: " << agp::policy_name(cfg.policy) << "\n";
  csv << "quantity,analytic,mc_mean,mc_se,mc_n,abs_diff_over_se\n";
  for (const auto& row : report) {
    csv << row.quantity << "," << opt_cell(row.analytic) << ",";
    if (row.mc) {
      csv << format_number(row.mc->mean) << "," << format_number(row.mc->std_error) << ","
          << row.mc->n << ",";
      if (row.analytic && row.mc->std_error > 0.0) {
        csv << format_number(std::fabs(*row.analytic - row.mc->mean) / row.mc->std_error);
      }
    } else {
      csv << ",,,";
    }
    csv << "\n";
  }

  log << agp::policy_name(cfg.policy) << " T = " << agp::policy_period(cfg.policy)
      << ", seed " << cfg.sim.seed << ", replications " << cfg.sim.replications << "\n";
  char line[256];
  for (const auto& row : report) {
    std::snprintf(line, sizeof line, "  %-30s", row.quantity.c_str());
    log << line;
    if (row.analytic) {
      std::snprintf(line, sizeof line, " analytic %-14.8g", *row.analytic);
      log << line;
    }
    if (row.mc) {
      std::snprintf(line, sizeof line, " mc %.8g +- %.3g (n=%zu)", row.mc->mean, row.mc->std_error,
                    row.mc->n);
      log << line;
    }
    log << "\n";
  }
}

void run_sweep(const json& doc, const std::vector<SweepAxis>& axes, const RunOptions& options,
               std::ostream& csv, std::ostream& log) {
  const auto points = expand_sweep(doc, options.sweep_limit);
  const auto first = parse_config(points.front());
  const bool rfrw = std::holds_alternative<agp::Rfrw>(first.policy);

  write_header_comments(csv, doc);
  for (const auto& a : axes) csv << a.path << ",";
  if (rfrw) {
    csv << "partial_sum_K,divergence_k0,expected_cycles,mean_cycle_length\n";
  } else {
    csv << "analytic,mc_mean,mc_se,mc_n,expected_cycles,mean_cycle_length\n";
  }

  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto cfg = parse_config(points[p]);
    if (std::holds_alternative<agp::Rfrw>(cfg.policy) != rfrw) {
      throw agp::InvalidParameter("sweep", "policy kind must not change across a sweep");
    }
    const double T = agp::policy_period(cfg.policy);
    agp::AgpAnalytic an(cfg.model, cfg.grid, cfg.truncation);
    const auto [m1, len] = cycle_properties(an, T);

    for (const auto& a : axes) csv << csv_cell(get_path(points[p], a.path)) << ",";

    if (rfrw) {
      const auto ps = agp::rfrw_partial_sums(cfg.model, cfg.cost, T, cfg.rfrw_terms);
      csv << format_number(ps.sums.back()) << ","
          << (ps.k0 ? std::to_string(*ps.k0) : std::string()) << ",";
    } else {
      std::optional<double> analytic;
      if (options.mode != Mode::simulate) analytic = policy_cost(an, cfg);
      csv << opt_cell(analytic) << ",";
      if (options.mode != Mode::analytic) {
        auto rep = run_simulate(cfg);
        const auto& e = *find_row(rep, "expected_cost")->mc;
        csv << format_number(e.mean) << "," << format_number(e.std_error) << "," << e.n << ",";
        log << "point " << p + 1 << "/" << points.size() << ": analytic " << opt_cell(analytic)
            << " mc " << e.mean << " +- " << e.std_error << "\n";
      } else {
        csv << ",,,";
        log << "point " << p + 1 << "/" << points.size() << ": analytic " << opt_cell(analytic)
            << "\n";
      }
    }
    csv << format_number(m1) << "," << format_number(len) << "\n";
  }
}

}  // namespace

void run(const json& input, const RunOptions& options, std::ostream& csv, std::ostream& log) {
  json doc = input;
  apply_overrides(doc, options);
  const auto axes = parse_sweep(doc);
  if (axes.empty()) {
    run_single(doc, options, csv, log);
  } else {
    run_sweep(doc, axes, options, csv, log);
  }
}

}  // namespace agpw
