#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agp/geometric_process.hpp"
#include "agp/grid.hpp"
#include "agp/montecarlo.hpp"
#include "agp/warranty.hpp"

namespace agpw {

using json = nlohmann::ordered_json;

/// One fully resolved experiment (sweep already substituted).
struct ExperimentConfig {
  agp::AgpModel model;
  agp::CostParams cost;
  agp::WarrantyPolicy policy;
  std::optional<agp::LifeCycleParams> life_cycle;
  agp::Grid grid;
  agp::SeriesTruncation truncation;
  agp::SimConfig sim;
  std::size_t rfrw_terms = 500;  // partial sums reported for RFRW
};

struct SweepAxis {
  std::string path;
  std::vector<json> values;
};

/// Reads a JSON document; parse errors become InvalidParameter("config").
json load_json_file(const std::string& path);

/// Validates a document without a sweep and builds the experiment. Throws
/// agp::InvalidParameter naming the offending field path.
ExperimentConfig parse_config(const json& doc);

/// Sweep axes in document order; empty when the document has no sweep.
std::vector<SweepAxis> parse_sweep(const json& doc);

/// Replaces the value at a dotted path; the path must already exist.
void set_path(json& doc, const std::string& path, const json& value);

/// Value at a dotted path; throws if it does not exist.
const json& get_path(const json& doc, const std::string& path);

/// One resolved document per Cartesian sweep point, first axis slowest. The
/// sweep key is removed. Throws if the point count exceeds `limit`.
std::vector<json> expand_sweep(const json& doc, std::size_t limit);

/// Copy of the document for embedding in reports: drops settings that must
/// not change the output (worker count).
json reproducible_view(const json& doc);

}  // namespace agpw
