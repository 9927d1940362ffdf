#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ionwake/config.hpp"

namespace ionwake {

/// Cartesian parameter scan over up to three pulse axes.
struct ScanSpec {
  TwoLevelIonSystem system = n2_preset();
  LaserPulse base;
  bool single_cycle = false;
  GridPolicy grid;
  Tolerances tolerances;
  std::vector<AxisSpec> axes;
  std::vector<std::string> observables;
  std::size_t workers = 0;             // 0 = hardware threads (capped by IONWAKE_THREADS)
  std::filesystem::path journal;       // optional completed-rows journal

  std::size_t size() const;
  /// Axis values of grid point i; the last axis varies fastest.
  std::vector<double> point(std::size_t i) const;
  /// Base pulse with the point's axis values (and single-cycle rule) applied.
  LaserPulse pulse_at(std::span<const double> axis_values) const;
};

/// Throws ConfigError for unknown axes/observables, bad ranges, > 3 axes.
void validate(const ScanSpec& spec);
ScanSpec scan_spec_from_config(const RunConfig& config);

/// Observable columns the scan driver knows how to compute.
const std::vector<std::string>& known_observables();

/// Runs the simulate-then-analyze pipeline for one point.
std::vector<double> evaluate_point(const ScanSpec& spec, std::span<const double> axis_values);

struct ScanRecord {
  std::vector<std::string> axis_names;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> values;  // axis values then observables, one row per point
  std::vector<std::string> errors;          // empty when the point succeeded

  std::size_t size() const { return values.size(); }
  bool any_failed() const;
  std::vector<std::string> columns() const;
  /// Value of a named column in row i.
  double at(std::size_t row, const std::string& column) const;
};

/// Evaluates every grid point on a worker pool; rows come back in grid order
/// regardless of the worker count. Per-point failures fill the error column.
/// With a journal, finished rows are appended in grid order and reused on
/// restart.
ScanRecord run_scan(const ScanSpec& spec);

std::string format_row(const ScanRecord& record, std::size_t row);

/// CSV with '#' provenance lines, a header, and one row per point.
void write_results(const ScanRecord& record, const std::filesystem::path& path,
                   const std::vector<std::string>& echo = {});
ScanRecord read_results(const std::filesystem::path& path, std::size_t axis_count);

/// Splits a multi-line text block into echo lines.
std::vector<std::string> echo_lines(const std::string& text);

}  // namespace ionwake
