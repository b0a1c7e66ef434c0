#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "agp/errors.hpp"

namespace agpw {

using agp::InvalidParameter;

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw InvalidParameter(path.empty() ? "config" : path, "expected an object");
  return doc;
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw InvalidParameter(join(path, key), "unknown key");
  }
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidParameter(join(path, key), "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InvalidParameter(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidParameter(path, "must be finite");
  return x;
}

double number_at(const json& obj, const std::string& path, const std::string& key) {
  return number(member(obj, path, key), join(path, key));
}

std::uint64_t unsigned_at(const json& obj, const std::string& path, const std::string& key) {
  const json& v = member(obj, path, key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InvalidParameter(join(path, key), "expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

std::string string_at(const json& obj, const std::string& path, const std::string& key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) throw InvalidParameter(join(path, key), "expected a string");
  return v.get<std::string>();
}

agp::GeometricProcess process(const json& doc, const std::string& path,
                              const std::string& ratio_key) {
  const json& obj = require_object(member(doc, "", path), path);
  reject_unknown(obj, path, {"family", "params", ratio_key});
  const std::string family = string_at(obj, path, "family");
  const json& params = member(obj, path, "params");
  if (!params.is_object()) throw InvalidParameter(path + ".params", "expected an object");
  std::map<std::string, double> values;
  for (const auto& [name, v] : params.items()) values[name] = number(v, path + ".params." + name);
  const auto base = agp::Distribution::from_params(family, values, path);
  const double ratio = number_at(obj, path, ratio_key);
  try {
    return agp::GeometricProcess(base, ratio);
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(path + "." + ratio_key, e.what());
  }
}

agp::WarrantyPolicy policy(const json& doc, std::size_t& rfrw_terms) {
  const std::string path = "policy";
  const json& obj = require_object(member(doc, "", path), path);
  std::string kind = string_at(obj, path, "kind");
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  const double T = number_at(obj, path, "T");
  agp::WarrantyPolicy p;
  if (kind == "NRFRW") {
    reject_unknown(obj, path, {"kind", "T"});
    p = agp::Nrfrw{T};
  } else if (kind == "RFRW") {
    reject_unknown(obj, path, {"kind", "T", "K"});
    if (obj.contains("K")) {
      rfrw_terms = unsigned_at(obj, path, "K");
      if (rfrw_terms < 1) throw InvalidParameter("policy.K", "must be >= 1");
    }
    p = agp::Rfrw{T};
  } else if (kind == "RRFRW") {
    reject_unknown(obj, path, {"kind", "T", "n"});
    const auto n = unsigned_at(obj, path, "n");
    if (n < 1) throw InvalidParameter("policy.n", "must be >= 1");
    p = agp::Rrfrw{T, n};
  } else {
    throw InvalidParameter("policy.kind", "expected NRFRW, RFRW or RRFRW, got '" + kind + "'");
  }
  agp::validate_policy(p);
  return p;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty() || std::any_of(parts.begin(), parts.end(), [](auto& p) { return p.empty(); })) {
    throw InvalidParameter("sweep.path", "malformed path '" + path + "'");
  }
  return parts;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config", "cannot open '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw InvalidParameter("config", std::string("invalid JSON: ") + e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"on", "off", "cost", "policy", "life_cycle", "grid", "truncation", "sim"});

  auto on = process(doc, "on", "ratio_a");
  auto off = process(doc, "off", "ratio_b");
  agp::AgpModel model(on, off);

  const json& cost_obj = require_object(member(doc, "", "cost"), "cost");
  reject_unknown(cost_obj, "cost", {"A", "delta"});
  agp::CostParams cost{number_at(cost_obj, "cost", "A"), number_at(cost_obj, "cost", "delta")};
  cost.validate();

  std::size_t rfrw_terms = 500;
  const auto pol = policy(doc, rfrw_terms);
  const double T = agp::policy_period(pol);

  std::optional<agp::LifeCycleParams> lc;
  if (auto it = doc.find("life_cycle"); it != doc.end()) {
    const json& obj = require_object(*it, "life_cycle");
    reject_unknown(obj, "life_cycle", {"L_star", "L"});
    agp::LifeCycleParams p;
    p.L_star = number_at(obj, "life_cycle", "L_star");
    p.L = obj.contains("L") ? number_at(obj, "life_cycle", "L") : p.L_star;
    p.validate();
    lc = p;
  }

  agp::Grid grid;
  grid.dt = T / 4096.0;
  {
    // Room for xi up to L plus a couple of periods of overshoot.
    const double need = lc ? std::max(3.0 * T, lc->L + 2.0 * T) : 3.0 * T;
    grid.t_max = grid.dt * std::ceil(need / grid.dt - 1e-9);
  }
  if (auto it = doc.find("grid"); it != doc.end()) {
    const json& obj = require_object(*it, "grid");
    reject_unknown(obj, "grid", {"t_max", "dt"});
    if (obj.contains("dt")) grid.dt = number_at(obj, "grid", "dt");
    if (obj.contains("t_max")) grid.t_max = number_at(obj, "grid", "t_max");
  }
  grid.validate();
  if (!grid.contains_point(T)) {
    throw InvalidParameter("grid.dt", "policy.T must be a multiple of grid.dt within grid.t_max");
  }

  agp::SeriesTruncation trunc;
  if (auto it = doc.find("truncation"); it != doc.end()) {
    const json& obj = require_object(*it, "truncation");
    reject_unknown(obj, "truncation", {"epsilon", "n_max"});
    if (obj.contains("epsilon")) trunc.epsilon = number_at(obj, "truncation", "epsilon");
    if (obj.contains("n_max")) trunc.n_max = unsigned_at(obj, "truncation", "n_max");
  }
  trunc.validate();

  agp::SimConfig sim;
  if (auto it = doc.find("sim"); it != doc.end()) {
    const json& obj = require_object(*it, "sim");
    reject_unknown(obj, "sim", {"replications", "seed", "workers"});
    if (obj.contains("replications")) sim.replications = unsigned_at(obj, "sim", "replications");
    if (obj.contains("seed")) sim.seed = unsigned_at(obj, "sim", "seed");
    if (obj.contains("workers")) sim.workers = unsigned_at(obj, "sim", "workers");
  }
  sim.validate();
  if (sim.replications < 2) throw InvalidParameter("sim.replications", "must be >= 2");

  return ExperimentConfig{model, cost, pol, lc, grid, trunc, sim, rfrw_terms};
}

std::vector<SweepAxis> parse_sweep(const json& doc) {
  std::vector<SweepAxis> axes;
  auto it = doc.find("sweep");
  if (it == doc.end()) return axes;
  const json list = it->is_array() ? *it : json::array({*it});
  if (list.empty()) throw InvalidParameter("sweep", "no axes given");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = "sweep[" + std::to_string(i) + "]";
    const json& axis = list[i];
    if (!axis.is_object()) throw InvalidParameter(at, "expected an object");
    reject_unknown(axis, at, {"path", "values"});
    SweepAxis a;
    a.path = string_at(axis, at, "path");
    const json& values = member(axis, at, "values");
    if (!values.is_array() || values.empty()) {
      throw InvalidParameter(at + ".values", "expected a nonempty list");
    }
    a.values.assign(values.begin(), values.end());
    axes.push_back(std::move(a));
  }
  return axes;
}

void set_path(json& doc, const std::string& path, const json& value) {
  json* node = &doc;
  for (const auto& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) {
      throw InvalidParameter("sweep.path", "'" + path + "' does not exist in the config");
    }
    node = &(*node)[part];
  }
  *node = value;
}

const json& get_path(const json& doc, const std::string& path) {
  const json* node = &doc;
  for (const auto& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) {
      throw InvalidParameter("sweep.path", "'" + path + "' does not exist in the config");
    }
    node = &(*node)[part];
  }
  return *node;
}

std::vector<json> expand_sweep(const json& doc, std::size_t limit) {
  const auto axes = parse_sweep(doc);
  json base = doc;
  base.erase("sweep");
  if (axes.empty()) return {base};

  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.values.size() > limit / total) {
      total = limit + 1;
      break;
    }
    total *= a.values.size();
  }
  if (total > limit) {
    throw InvalidParameter("sweep", "more than " + std::to_string(limit) +
                                        " combinations (raise --sweep-limit)");
  }
  for (const auto& a : axes) set_path(base, a.path, a.values.front());  // path check

  std::vector<json> out;
  out.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t point = 0; point < total; ++point) {
    json d = base;
    for (std::size_t i = 0; i < axes.size(); ++i) set_path(d, axes[i].path, axes[i].values[idx[i]]);
    out.push_back(std::move(d));
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].values.size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

json reproducible_view(const json& doc) {
  json d = doc;
  if (auto it = d.find("sim"); it != d.end() && it->is_object()) it->erase("workers");
  return d;
}

}  // namespace agpw
