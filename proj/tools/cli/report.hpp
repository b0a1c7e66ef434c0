#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace agpw {

enum class Mode { analytic, simulate, both };

struct RunOptions {
  Mode mode = Mode::both;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> workers;
  std::size_t sweep_limit = 10'000;
};

/// One reported quantity. Missing sides are left empty in the CSV.
struct Row {
  std::string quantity;
  std::optional<double> analytic;
  std::optional<agp::Estimate> mc;
};

using Report = std::vector<Row>;

/// Analytic quantities for the configured policy, with series diagnostics.
Report run_analytic(const ExperimentConfig& config);
/// Monte Carlo estimates for the configured policy.
Report run_simulate(const ExperimentConfig& config);

/// Writes seed and worker overrides into the document.
void apply_overrides(json& doc, const RunOptions& options);

/// Runs one document (with or without a sweep) and writes CSV to `csv` and a
/// readable summary to `log`.
void run(const json& doc, const RunOptions& options, std::ostream& csv, std::ostream& log);

/// %.17g, which round-trips every double.
std::string format_number(double v);

}  // namespace agpw
