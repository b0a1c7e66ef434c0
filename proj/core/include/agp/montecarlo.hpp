#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "agp/errors.hpp"
#include "agp/geometric_process.hpp"
#include "agp/random.hpp"
#include "agp/warranty.hpp"

namespace agp {

/// The draws of one purchased item: X_i is draw i of the on-stream, Y_i draw i
/// of the off-stream, both derived from the item key.
class ItemStream {
 public:
  explicit ItemStream(std::uint64_t key)
      : on_key_(rng::derive(key, 0)), off_key_(rng::derive(key, 1)) {}

  double on_time(const AgpModel& model, std::size_t i) const {
    return model.on().sample(i, rng::uniform(on_key_, i));
  }
  double off_time(const AgpModel& model, std::size_t i) const {
    return model.off().sample(i, rng::uniform(off_key_, i));
  }

 private:
  std::uint64_t on_key_;
  std::uint64_t off_key_;
};

enum class Phase { on, off };

struct Event {
  Phase kind;
  std::size_t index;  // cycle number, 1-based
  double start;
  double duration;
};

/// One AGP sample path, extended on demand. Every variate comes from the item
/// stream, so extending never changes what was already generated.
class Trajectory {
 public:
  Trajectory(AgpModel model, ItemStream stream);

  /// Generate cycles until the last completed cycle ends after `t`.
  void ensure_horizon(double t);
  double horizon() const noexcept { return ends_.back(); }

  double on_time(std::size_t i);   // X_i
  double off_time(std::size_t i);  // Y_i
  double cycle_end(std::size_t n); // S_n, S_0 = 0
  double failure_time(std::size_t i) { return cycle_end(i - 1) + on_time(i); }

  /// N(t): number of cycles completed by t.
  std::size_t cycles_completed(double t);
  bool on_at(double t);

  /// Events generated so far, alternating on/off from time 0.
  std::vector<Event> events() const;

 private:
  void extend(std::size_t cycles);

  AgpModel model_;
  ItemStream stream_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> ends_;  // ends_[n] = S_n
};

Trajectory simulate_trajectory(const AgpModel& model, double horizon, ItemStream stream);

struct NrfrwOutcome {
  double cost = 0.0;                 // warrantor cost over (0, T]
  std::size_t cycles = 0;            // N(T)
  bool on_at_T = false;
  double next_repair = 0.0;          // Y_{N(T)+1}
  double claims_through_next = 0.0;  // sum_{i <= N(T)+1} C_i
  double xi = 0.0;                   // first off-warranty failure
};

/// Repairs that start at or before T are covered and paid in full.
NrfrwOutcome nrfrw_outcome(Trajectory& trajectory, const CostParams& cost, double T);
double nrfrw_cost(Trajectory& trajectory, const CostParams& cost, double T);

struct RfrwOutcome {
  double cost = 0.0;
  std::size_t repairs = 0;
  double coverage_end = 0.0;  // W_T or W_T^n
  double xi = 0.0;            // first off-warranty failure
};

inline constexpr std::size_t kDefaultRepairCap = 1'000'000;
inline constexpr std::size_t kDefaultPurchaseCap = 100'000;

/// Renewing warranty: a failure is covered when it comes within T of the end
/// of the previous repair (or of the purchase). With `n_cap`, coverage also
/// ends at the completion of the n-th repair. Throws SimulationCapError when
/// more than `repair_cap` repairs accrue.
RfrwOutcome rfrw_outcome(const AgpModel& model, const ItemStream& stream, const CostParams& cost,
                         double T, std::optional<std::size_t> n_cap,
                         std::size_t repair_cap = kDefaultRepairCap);

struct LifeCycleOutcome {
  double cost = 0.0;
  double realized_L = 0.0;  // first off-warranty failure at or after L_star
  std::size_t purchases = 0;
};

/// Purchases item after item, each at the previous item's first off-warranty
/// failure, until such a failure lands at or after `L_star`. Item p draws from
/// the stream derived from (key, p).
LifeCycleOutcome life_cycle_cost(const AgpModel& model, const CostParams& cost,
                                 const WarrantyPolicy& policy, double L_star, std::uint64_t key,
                                 std::size_t purchase_cap = kDefaultPurchaseCap,
                                 std::size_t repair_cap = kDefaultRepairCap);

struct SimConfig {
  std::size_t replications = 100'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean and standard error (sample sd / sqrt(n)), summed in index order.
Estimate summarize(std::span<const double> values);

/// Key of replication r under `seed`.
inline std::uint64_t replication_key(std::uint64_t seed, std::size_t r) {
  return rng::derive(seed, r);
}

/// Runs fn(r, key) for every replication r and returns the results in index
/// order. Work is split across config.workers threads; the output does not
/// depend on the split. A throwing replication is rethrown as ReplicationError
/// carrying the smallest failing index.
template <class Fn>
auto for_each_replication(const SimConfig& config, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, std::uint64_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t, std::uint64_t>;
  config.validate();
  const std::size_t n = config.replications;
  std::vector<R> out(n);
  constexpr std::size_t kChunk = 256;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::string error_what;
  std::exception_ptr error_cause;

  auto work = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kChunk);
      for (std::size_t r = begin; r < end; ++r) {
        try {
          out[r] = fn(r, replication_key(config.seed, r));
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (r < error_index) {
            error_index = r;
            error_what = e.what();
            error_cause = std::current_exception();
          }
          failed.store(true);
          break;
        }
      }
    }
  };

  const std::size_t workers = std::min(config.workers, (n + kChunk - 1) / kChunk);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failed.load()) throw ReplicationError(error_index, error_what, error_cause);
  return out;
}

/// Monte Carlo estimate of E(runner) over config.replications replications.
Estimate estimate(const std::function<double(std::size_t, std::uint64_t)>& runner,
                  const SimConfig& config);

}  // namespace agp
