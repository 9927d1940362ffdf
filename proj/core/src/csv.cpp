#include "ionwake/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ionwake {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_number(const std::string& text) {
  if (text.empty()) return std::nan("");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw IoError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw IoError("trailing characters in number: '" + text + "'");
  return v;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw IoError("missing column '" + name + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!have_header) {
      table.header = split_csv_line(line);
      have_header = true;
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw IoError("row with " + std::to_string(cells.size()) + " cells, header has " +
                    std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw IoError("no header row in " + path.string());
  return table;
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {
      "t_fs",       "field_au",   "rho0",       "rho11_d",    "rho22_d",    "re_rho21_d",
      "im_rho21_d", "rho11_a",    "rho22_a",    "re_rho21_a", "im_rho21_a", "theta",
      "E_au",       "phase_Phi",  "buildup_re", "buildup_im", "mode"};
  return cols;
}

void write_trajectory_header(std::ostream& out) {
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_trajectory_rows(std::ostream& out, const Trajectory& traj) {
  const std::string mode(to_string(traj.mode));
  for (const Sample& s : traj.samples) {
    const double values[] = {units::au_to_fs(s.t),
                             s.field,
                             s.rho0,
                             s.diabatic.population(0),
                             s.diabatic.population(1),
                             s.diabatic.coherence().real(),
                             s.diabatic.coherence().imag(),
                             s.adiabatic.population(0),
                             s.adiabatic.population(1),
                             s.adiabatic.coherence().real(),
                             s.adiabatic.coherence().imag(),
                             s.theta,
                             s.energy,
                             s.phase,
                             s.buildup.real(),
                             s.buildup.imag()};
    for (double v : values) out << format_number(v) << ',';
    out << mode << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<const Trajectory*>& trajectories,
                          const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  write_trajectory_header(out);
  for (const Trajectory* t : trajectories) write_trajectory_rows(out, *t);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace ionwake
