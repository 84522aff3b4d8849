#ifndef MANETSIM_REPORT_HPP
#define MANETSIM_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace manetsim {

// Column format is fixed; NA marks metrics that need samples nobody got.
constexpr std::string_view kReportHeader =
    "seed,mode,sent,delivered,e2e_delay_ms,jitter_ms,mac_drops,control_tx,"
    "suppressed_forwards,throughput_bps";

struct RunReport {
  std::uint64_t seed = 0;
  std::string mode;
  long sent = 0;
  long delivered = 0;
  std::optional<double> e2e_delay_ms;
  std::optional<double> jitter_ms;
  long mac_drops = 0;
  long control_tx = 0;
  long suppressed_forwards = 0;
  double throughput_bps = 0.0;
};

std::string format_double_exact(double v);
std::string report_csv_row(const RunReport& report);
RunReport parse_report_row(const std::string& line);

// Median/min/max over possibly-NA values; NA entries are skipped.
struct Aggregate {
  std::optional<double> median;
  std::optional<double> min;
  std::optional<double> max;
};
Aggregate aggregate_values(std::vector<std::optional<double>> values);
std::optional<double> median_of(std::vector<double> values);

}  // namespace manetsim

#endif
