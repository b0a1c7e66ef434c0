#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "agp/errors.hpp"
#include "config.hpp"
#include "report.hpp"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kTruncation = 3, kSimulationCap = 4 };

int classify(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const agp::ReplicationError& r) {
    if (r.cause()) return classify(r.cause());
    return kOther;
  } catch (const agp::InvalidParameter&) {
    return kConfig;
  } catch (const agp::TruncationError&) {
    return kTruncation;
  } catch (const agp::SimulationCapError&) {
    return kSimulationCap;
  } catch (...) {
    return kOther;
  }
}

const char* category(int code) {
  switch (code) {
    case kConfig: return "config error";
    case kTruncation: return "truncation failure";
    case kSimulationCap: return "simulation cap hit";
    default: return "error";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agpw: warranty cost analysis for alternating geometric processes"};
  std::string config_path;
  std::string out_path;
  std::string mode = "both";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::size_t sweep_limit = 10'000;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required();
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--mode", mode, "analytic, simulate or both")
      ->check(CLI::IsMember({"analytic", "simulate", "both"}));
  app.add_option("--seed-override", seed, "Replace sim.seed");
  app.add_option("--workers", workers, "Worker threads for simulation (output does not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--sweep-limit", sweep_limit, "Maximum number of sweep combinations")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  agpw::RunOptions options;
  options.mode = mode == "analytic" ? agpw::Mode::analytic
                 : mode == "simulate" ? agpw::Mode::simulate
                                      : agpw::Mode::both;
  options.seed_override = seed;
  options.workers = workers;
  options.sweep_limit = sweep_limit;

  try {
    const auto doc = agpw::load_json_file(config_path);
    if (out_path.empty()) {
      agpw::run(doc, options, std::cout, std::cerr);
    } else {
      std::ofstream out(out_path);
      if (!out) throw agp::InvalidParameter("--out", "cannot open '" + out_path + "'");
      agpw::run(doc, options, out, std::cerr);
    }
  } catch (const std::exception& e) {
    const int code = classify(std::current_exception());
    std::cerr << "agpw: " << category(code) << ": " << e.what() << "\n";
    return code;
  }
  return kOk;
}
