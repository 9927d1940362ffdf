#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionwake/trajectory.hpp"

namespace ionwake {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip text for a double ("%.17g"; nan/inf spelled out).
std::string format_number(double value);
double parse_number(const std::string& text);

/// Parsed CSV with '#' comment lines kept separately.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
std::vector<std::string> split_csv_line(const std::string& line);

/// Column order of the trajectory CSV; `mode` is appended last.
const std::vector<std::string>& trajectory_columns();

void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<const Trajectory*>& trajectories,
                          const std::vector<std::string>& comments = {});

}  // namespace ionwake
