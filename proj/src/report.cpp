#include "manetsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace manetsim {

std::string format_double_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double_exact(*v) : std::string("NA");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

std::optional<double> parse_opt(const std::string& cell) {
  if (cell == "NA") return std::nullopt;
  return std::stod(cell);
}

}  // namespace

std::string report_csv_row(const RunReport& r) {
  std::ostringstream out;
  out << r.seed << ',' << r.mode << ',' << r.sent << ',' << r.delivered << ','
      << opt_cell(r.e2e_delay_ms) << ',' << opt_cell(r.jitter_ms) << ',' << r.mac_drops
      << ',' << r.control_tx << ',' << r.suppressed_forwards << ','
      << format_double_exact(r.throughput_bps);
  return out.str();
}

RunReport parse_report_row(const std::string& line) {
  std::vector<std::string> cells = split_csv(line);
  if (cells.size() != 10) {
    throw std::runtime_error("report row: expected 10 columns, got " +
                             std::to_string(cells.size()));
  }
  RunReport r;
  r.seed = std::stoull(cells[0]);
  r.mode = cells[1];
  r.sent = std::stol(cells[2]);
  r.delivered = std::stol(cells[3]);
  r.e2e_delay_ms = parse_opt(cells[4]);
  r.jitter_ms = parse_opt(cells[5]);
  r.mac_drops = std::stol(cells[6]);
  r.control_tx = std::stol(cells[7]);
  r.suppressed_forwards = std::stol(cells[8]);
  r.throughput_bps = std::stod(cells[9]);
  return r;
}

std::optional<double> median_of(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Aggregate aggregate_values(std::vector<std::optional<double>> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v) present.push_back(*v);
  }
  Aggregate agg;
  if (present.empty()) return agg;
  agg.median = median_of(present);
  agg.min = *std::min_element(present.begin(), present.end());
  agg.max = *std::max_element(present.begin(), present.end());
  return agg;
}

}  // namespace manetsim
