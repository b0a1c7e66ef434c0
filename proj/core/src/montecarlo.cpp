#include "agp/montecarlo.hpp"

#include <cmath>
#include <sstream>

namespace agp {

Trajectory::Trajectory(AgpModel model, ItemStream stream)
    : model_(std::move(model)), stream_(stream), ends_{0.0} {}

void Trajectory::extend(std::size_t cycles) {
  while (x_.size() < cycles) {
    const std::size_t i = x_.size() + 1;
    const double x = stream_.on_time(model_, i);
    const double y = stream_.off_time(model_, i);
    x_.push_back(x);
    y_.push_back(y);
    ends_.push_back(ends_.back() + x + y);
  }
}

void Trajectory::ensure_horizon(double t) {
  while (!(ends_.back() > t)) {
    if (x_.size() >= kDefaultRepairCap) {
      throw SimulationCapError("trajectory: more than " + std::to_string(kDefaultRepairCap) +
                               " cycles before the horizon");
    }
    extend(x_.size() + 1);
  }
}

double Trajectory::on_time(std::size_t i) {
  if (i < 1) throw std::invalid_argument("Trajectory: index must be >= 1");
  extend(i);
  return x_[i - 1];
}

double Trajectory::off_time(std::size_t i) {
  if (i < 1) throw std::invalid_argument("Trajectory: index must be >= 1");
  extend(i);
  return y_[i - 1];
}

double Trajectory::cycle_end(std::size_t n) {
  extend(n);
  return ends_[n];
}

std::size_t Trajectory::cycles_completed(double t) {
  ensure_horizon(t);
  // ends_ is nondecreasing; count cycles with S_n <= t.
  const auto it = std::upper_bound(ends_.begin(), ends_.end(), t);
  return static_cast<std::size_t>(it - ends_.begin()) - 1;
}

bool Trajectory::on_at(double t) {
  const std::size_t n = cycles_completed(t);
  return cycle_end(n) + on_time(n + 1) > t;
}

std::vector<Event> Trajectory::events() const {
  std::vector<Event> ev;
  ev.reserve(2 * x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    ev.push_back({Phase::on, i + 1, ends_[i], x_[i]});
    ev.push_back({Phase::off, i + 1, ends_[i] + x_[i], y_[i]});
  }
  return ev;
}

Trajectory simulate_trajectory(const AgpModel& model, double horizon, ItemStream stream) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_trajectory: horizon must be > 0");
  Trajectory t(model, stream);
  t.ensure_horizon(horizon);
  return t;
}

NrfrwOutcome nrfrw_outcome(Trajectory& tr, const CostParams& cost, double T) {
  NrfrwOutcome out;
  const std::size_t n = tr.cycles_completed(T);
  out.cycles = n;
  out.on_at_T = tr.cycle_end(n) + tr.on_time(n + 1) > T;
  double through = 0.0;
  for (std::size_t i = 1; i <= n + 1; ++i) through += cost.A + cost.delta * tr.off_time(i);
  out.claims_through_next = through;
  out.next_repair = tr.off_time(n + 1);
  if (out.on_at_T) {
    out.cost = through - (cost.A + cost.delta * out.next_repair);
    out.xi = tr.failure_time(n + 1);
  } else {
    out.cost = through;
    out.xi = tr.failure_time(n + 2);
  }
  return out;
}

double nrfrw_cost(Trajectory& trajectory, const CostParams& cost, double T) {
  return nrfrw_outcome(trajectory, cost, T).cost;
}

RfrwOutcome rfrw_outcome(const AgpModel& model, const ItemStream& stream, const CostParams& cost,
                         double T, std::optional<std::size_t> n_cap, std::size_t repair_cap) {
  if (!(T > 0.0)) throw InvalidParameter("policy.T", "must be > 0");
  RfrwOutcome out;
  double start = 0.0;  // start of the current coverage period
  for (std::size_t k = 0;; ++k) {
    const double x = stream.on_time(model, k + 1);
    if (n_cap && k == *n_cap) {
      out.coverage_end = start;
      out.xi = start + x;
      break;
    }
    if (x > T) {
      out.coverage_end = start + T;
      out.xi = start + x;
      break;
    }
    if (k >= repair_cap) {
      std::ostringstream os;
      os << "renewing warranty: more than " << repair_cap << " covered repairs (T = " << T
         << "); the coverage period may never end for this model";
      throw SimulationCapError(os.str());
    }
    const double y = stream.off_time(model, k + 1);
    out.cost += cost.A + cost.delta * y;
    out.repairs = k + 1;
    start += x + y;
  }
  return out;
}

LifeCycleOutcome life_cycle_cost(const AgpModel& model, const CostParams& cost,
                                 const WarrantyPolicy& policy, double L_star, std::uint64_t key,
                                 std::size_t purchase_cap, std::size_t repair_cap) {
  if (!(L_star > 0.0)) throw InvalidParameter("life_cycle.L_star", "must be > 0");
  const double T = policy_period(policy);
  LifeCycleOutcome out;
  double t = 0.0;
  for (std::size_t p = 0;; ++p) {
    if (p >= purchase_cap) {
      std::ostringstream os;
      os << "life cycle: more than " << purchase_cap << " purchases before L_star = " << L_star;
      throw SimulationCapError(os.str());
    }
    const ItemStream stream(rng::derive(key, p));
    double c = 0.0;
    double xi = 0.0;
    if (std::holds_alternative<Nrfrw>(policy)) {
      Trajectory tr(model, stream);
      const auto o = nrfrw_outcome(tr, cost, T);
      c = o.cost;
      xi = o.xi;
    } else {
      std::optional<std::size_t> cap;
      if (const auto* r = std::get_if<Rrfrw>(&policy)) cap = r->n;
      const auto o = rfrw_outcome(model, stream, cost, T, cap, repair_cap);
      c = o.cost;
      xi = o.xi;
    }
    out.cost += c;
    out.purchases = p + 1;
    t += xi;
    if (t >= L_star) break;
  }
  out.realized_L = t;
  return out;
}

void SimConfig::validate() const {
  if (replications < 1) throw InvalidParameter("sim.replications", "must be >= 1");
  if (workers < 1) throw InvalidParameter("sim.workers", "must be >= 1");
}

Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.n = values.size();
  if (e.n == 0) return e;
  // Shift by the first value so a constant sample has exactly zero spread.
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double mean_d = sum / static_cast<double>(e.n);
  e.mean = shift + mean_d;
  if (e.n < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - shift - mean_d) * (v - shift - mean_d);
  e.std_error = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
  return e;
}

Estimate estimate(const std::function<double(std::size_t, std::uint64_t)>& runner,
                  const SimConfig& config) {
  if (config.replications < 2) throw InvalidParameter("sim.replications", "must be >= 2");
  const auto values = for_each_replication(config, runner);
  return summarize(values);
}

}  // namespace agp
