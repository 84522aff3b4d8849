#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manetsim/experiment.hpp"
#include "manetsim/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace manetsim;

// MANETSIM_TRACE_DIR redirects trace files into that directory.
std::string resolve_trace_path(const std::string& requested) {
  const char* dir = std::getenv("MANETSIM_TRACE_DIR");
  if (!dir || !*dir) return requested;
  return (fs::path(dir) / fs::path(requested).filename()).string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, const std::string& trace_path,
            const std::string& role_log_path) {
  ScenarioConfig config = load_scenario(scenario_path);
  if (seed) config.master_seed = *seed;

  std::unique_ptr<std::ofstream> trace;
  if (!trace_path.empty()) {
    trace = std::make_unique<std::ofstream>(resolve_trace_path(trace_path));
    if (!*trace) throw std::runtime_error(trace_path + ": cannot open trace file");
  }
  std::unique_ptr<std::ofstream> role_log;
  if (!role_log_path.empty()) {
    role_log = std::make_unique<std::ofstream>(role_log_path);
    if (!*role_log) throw std::runtime_error(role_log_path + ": cannot open role log");
  }

  SweepResult result;
  result.config = config;
  result.rows.push_back(
      run_scenario(config, std::nullopt, trace.get(), role_log.get()));

  if (out_path.empty() || out_path == "-") {
    write_report_csv(std::cout, result, false);
  } else {
    std::ofstream out = open_output(out_path);
    write_report_csv(out, result, false);
  }
  return 0;
}

int cmd_sweep(const std::string& scenario_path, int seed_count, const std::string& out_path,
              const std::string& trace_prefix) {
  ScenarioConfig config = load_scenario(scenario_path);
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= seed_count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));

  SweepResult result;
  if (trace_prefix.empty()) {
    result = sweep_scenario(config, seeds);
  } else {
    // Tracing forces serial execution, one file per seed.
    result.config = config;
    for (std::uint64_t seed : seeds) {
      std::string path = resolve_trace_path(trace_prefix + "." + std::to_string(seed));
      std::ofstream trace(path);
      if (!trace) throw std::runtime_error(path + ": cannot open trace file");
      result.rows.push_back(run_scenario(config, seed, &trace));
    }
  }

  if (out_path.empty() || out_path == "-") {
    write_report_csv(std::cout, result, true);
  } else {
    std::ofstream out = open_output(out_path);
    write_report_csv(out, result, true);
  }
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
  std::ifstream a_in(a_path);
  if (!a_in) throw std::runtime_error(a_path + ": cannot open");
  std::ifstream b_in(b_path);
  if (!b_in) throw std::runtime_error(b_path + ": cannot open");
  SweepResult a = read_report_csv(a_in, a_path);
  SweepResult b = read_report_csv(b_in, b_path);
  auto rows = compare_sweeps(a, b);
  if (out_path.empty() || out_path == "-") {
    write_comparison_csv(std::cout, rows);
  } else {
    std::ofstream out = open_output(out_path);
    write_comparison_csv(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level MANET simulator: clustered AODV over 802.11 DCF"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, trace_path, role_log_path, a_path, b_path;
  std::optional<std::uint64_t> seed;
  int seed_count = 1;

  CLI::App* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Override master_seed");
  run->add_option("--out", out_path, "Report CSV path (default stdout)");
  run->add_option("--trace", trace_path, "Event trace path");
  run->add_option("--role-log", role_log_path, "Cluster role change log path");

  CLI::App* sweep = app.add_subcommand("sweep", "Run seeds 1..N");
  sweep->add_option("--scenario", scenario_path, "Scenario file")->required();
  sweep->add_option("--seeds", seed_count, "Number of seeds")->required();
  sweep->add_option("--out", out_path, "Report CSV path (default stdout)");
  sweep->add_option("--trace", trace_path, "Event trace path prefix (one file per seed)");

  CLI::App* compare = app.add_subcommand("compare", "Compare two sweep reports");
  compare->add_option("--a", a_path, "Baseline sweep CSV")->required();
  compare->add_option("--b", b_path, "Candidate sweep CSV")->required();
  compare->add_option("--out", out_path, "Comparison CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(scenario_path, seed, out_path, trace_path, role_log_path);
    }
    if (sweep->parsed()) {
      return cmd_sweep(scenario_path, seed_count, out_path, trace_path);
    }
    return cmd_compare(a_path, b_path, out_path);
  } catch (const manetsim::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
