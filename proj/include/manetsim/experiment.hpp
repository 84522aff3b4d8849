#ifndef MANETSIM_EXPERIMENT_HPP
#define MANETSIM_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "manetsim/report.hpp"
#include "manetsim/scenario.hpp"

namespace manetsim {

struct SweepResult {
  ScenarioConfig config;         // seed field holds the base scenario's seed
  std::vector<RunReport> rows;   // ordered by seed
};

// Runs one seed of the scenario (master_seed replaced when `seed` is set).
RunReport run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed,
                       std::ostream* trace = nullptr, std::ostream* role_log = nullptr);

// One run per seed; only master_seed varies. Runs are independent and may
// execute concurrently; rows come back in seed order regardless.
SweepResult sweep_scenario(const ScenarioConfig& config,
                           const std::vector<std::uint64_t>& seeds, bool parallel = true);

// Report files carry the scenario as `# key=value` comment lines so that
// comparisons can check that two sweeps differ only where they may.
void write_report_csv(std::ostream& out, const SweepResult& result, bool with_aggregate);
SweepResult read_report_csv(std::istream& in, const std::string& origin);

struct ComparisonRow {
  std::string metric;
  std::string seed_label;  // seed number or "median"
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> diff;   // b - a
  std::optional<double> ratio;  // b / a, 0/0 -> 1
};

// Paired per-seed and median rows; throws on seed-set mismatch or on configs
// differing beyond mode and pinned roles.
std::vector<ComparisonRow> compare_sweeps(const SweepResult& a, const SweepResult& b);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace manetsim

#endif
