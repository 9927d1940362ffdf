#include "ionwake/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "ionwake/analysis.hpp"
#include "ionwake/csv.hpp"
#include "ionwake/parallel.hpp"

namespace ionwake {

namespace {

const std::vector<std::string> kAxisNames = {"wavelength_nm", "intensity_Wcm2", "fwhm_fs", "cep_rad"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool any_of(const std::vector<std::string>& requested, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (contains(requested, n)) return true;
  }
  return false;
}

std::string sanitize(std::string message) {
  for (char& c : message) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return message;
}

struct Row {
  std::vector<double> values;
  std::string error;
};

std::string journal_header(const ScanRecord& shape) {
  std::string h = "# ionwake journal:index";
  for (const auto& c : shape.columns()) h += "," + c;
  return h;
}

std::map<std::size_t, Row> read_journal(const std::filesystem::path& path, const ScanRecord& shape,
                                        std::size_t total) {
  std::map<std::size_t, Row> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  if (line != journal_header(shape)) throw ConfigError("journal " + path.string() + " belongs to a different scan");
  const std::size_t width = shape.axis_names.size() + shape.observable_names.size();
  while (std::getline(in, line)) {
    auto cells = split_csv_line(line);
    // A torn final line from an interrupted run is simply recomputed.
    if (cells.size() != width + 2) continue;
    Row row;
    std::size_t index = 0;
    try {
      index = static_cast<std::size_t>(std::stoull(cells[0]));
      for (std::size_t k = 0; k < width; ++k) row.values.push_back(parse_number(cells[k + 1]));
    } catch (const std::exception&) {
      continue;
    }
    if (index >= total) continue;
    row.error = cells.back();
    done[index] = std::move(row);
  }
  return done;
}

}  // namespace

std::size_t ScanSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

std::vector<double> ScanSpec::point(std::size_t i) const {
  std::vector<double> values(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    values[k] = axes[k].value(i % axes[k].count);
    i /= axes[k].count;
  }
  return values;
}

LaserPulse ScanSpec::pulse_at(std::span<const double> axis_values) const {
  LaserPulse p = base;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const std::string& name = axes[k].name;
    const double v = axis_values[k];
    if (name == "wavelength_nm") p.wavelength_nm = v;
    else if (name == "intensity_Wcm2") p.peak_intensity_wcm2 = v;
    else if (name == "fwhm_fs") p.fwhm_fs = v;
    else if (name == "cep_rad") p.cep_rad = v;
  }
  if (single_cycle) p.fwhm_fs = single_cycle_duration(p.wavelength_nm);
  return p;
}

const std::vector<std::string>& known_observables() {
  static const std::vector<std::string> names = {
      "rho0",     "rho22",   "rho22_ref",   "qsa_error_pct", "frac_shakeup", "frac_direct", "frac_tic",
      "abs_coh",  "arg_coh", "ti_over_tic", "gamma_e",       "keldysh",      "alpha_eV",    "n_photon"};
  return names;
}

void validate(const ScanSpec& spec) {
  if (spec.axes.size() > 3) throw ConfigError("a scan takes at most three axes");
  std::vector<std::string> seen;
  for (const auto& a : spec.axes) {
    if (!contains(kAxisNames, a.name)) throw ConfigError("unknown scan axis '" + a.name + "'");
    if (contains(seen, a.name)) throw ConfigError("scan axis '" + a.name + "' given twice");
    seen.push_back(a.name);
    if (a.count < 1) throw ConfigError("scan axis '" + a.name + "' needs count >= 1");
    if (!(a.min <= a.max)) throw ConfigError("scan axis '" + a.name + "' needs min <= max");
  }
  if (spec.single_cycle && contains(seen, "fwhm_fs")) {
    throw ConfigError("single_cycle fixes fwhm_fs; it cannot also be a scan axis");
  }
  for (const auto& o : spec.observables) {
    if (!contains(known_observables(), o)) throw ConfigError("unknown observable '" + o + "'");
  }
  validate(spec.system);
}

ScanSpec scan_spec_from_config(const RunConfig& cfg) {
  ScanSpec spec;
  spec.system = cfg.system;
  spec.base = cfg.pulse;
  spec.single_cycle = cfg.single_cycle;
  spec.grid = cfg.grid;
  spec.tolerances = cfg.tolerances;
  spec.axes = cfg.axes;
  spec.observables = cfg.observables;
  spec.workers = cfg.workers;
  spec.journal = cfg.journal_path;
  validate(spec);
  return spec;
}

std::vector<double> evaluate_point(const ScanSpec& spec, std::span<const double> axis_values) {
  const LaserPulse pulse = spec.pulse_at(axis_values);
  const auto& req = spec.observables;
  const TimeGrid grid = default_grid(spec.system, pulse, spec.grid);

  std::optional<Trajectory> semi;
  std::optional<Trajectory> ref;
  if (any_of(req, {"rho0", "rho22", "qsa_error_pct", "frac_shakeup", "frac_direct", "frac_tic", "abs_coh",
                   "arg_coh", "ti_over_tic"})) {
    semi = semianalytic_evolve(spec.system, pulse, grid);
  }
  if (any_of(req, {"rho22_ref", "qsa_error_pct"})) {
    ref = solve_diabatic(spec.system, pulse, grid, spec.tolerances);
  }
  std::optional<PopulationDecomposition> pop;
  if (any_of(req, {"frac_shakeup", "frac_direct", "frac_tic"})) pop = decompose_population(*semi);

  const Diagnostics diag = diagnostics(spec.system, pulse);
  const WeakCouplingParams weak = weak_coupling_params(spec.system, pulse);

  std::vector<double> out;
  out.reserve(req.size());
  for (const auto& name : req) {
    if (name == "rho0") out.push_back(semi->back().rho0);
    else if (name == "rho22") out.push_back(semi->back().adiabatic.population(1));
    else if (name == "rho22_ref") out.push_back(ref->back().diabatic.population(1));
    else if (name == "qsa_error_pct") {
      if (!(ref->back().diabatic.population(1) > 100.0 * spec.tolerances.absolute)) {
        throw UndefinedMetricError("reference excited-state population is below the integrator resolution");
      }
      out.push_back(qsa_error(*ref, *semi));
    }
    else if (name == "frac_shakeup") out.push_back(pop->shake_up);
    else if (name == "frac_direct") out.push_back(pop->direct);
    else if (name == "frac_tic") out.push_back(pop->tic_transfer);
    else if (name == "abs_coh") out.push_back(std::abs(semi->back().adiabatic.coherence()));
    else if (name == "arg_coh") out.push_back(std::arg(semi->back().adiabatic.coherence()));
    else if (name == "ti_over_tic") {
      const CoherenceDecomposition c = decompose_coherence(*semi);
      const double tic = std::abs(c.tic_driven);
      out.push_back(tic > 0.0 ? std::abs(c.ti_driven) / tic : std::nan(""));
    }
    else if (name == "gamma_e") out.push_back(diag.gamma_e);
    else if (name == "keldysh") out.push_back(diag.keldysh);
    else if (name == "alpha_eV") out.push_back(units::au_to_ev(weak.alpha));
    else if (name == "n_photon") out.push_back(weak.n_photon);
  }
  return out;
}

bool ScanRecord::any_failed() const {
  return std::any_of(errors.begin(), errors.end(), [](const std::string& e) { return !e.empty(); });
}

std::vector<std::string> ScanRecord::columns() const {
  std::vector<std::string> cols = axis_names;
  cols.insert(cols.end(), observable_names.begin(), observable_names.end());
  cols.emplace_back("error");
  return cols;
}

double ScanRecord::at(std::size_t row, const std::string& column) const {
  const auto cols = columns();
  const auto it = std::find(cols.begin(), cols.end(), column);
  if (it == cols.end() || it + 1 == cols.end()) throw IoError("no numeric column '" + column + "'");
  return values.at(row).at(static_cast<std::size_t>(it - cols.begin()));
}

std::string format_row(const ScanRecord& record, std::size_t row) {
  std::string line;
  for (double v : record.values[row]) {
    line += format_number(v);
    line += ',';
  }
  line += record.errors[row];
  return line;
}

ScanRecord run_scan(const ScanSpec& spec) {
  validate(spec);
  const std::size_t total = spec.size();

  ScanRecord record;
  for (const auto& a : spec.axes) record.axis_names.push_back(a.name);
  record.observable_names = spec.observables;
  record.values.resize(total);
  record.errors.resize(total);

  std::map<std::size_t, Row> journaled;
  std::ofstream journal;
  if (!spec.journal.empty()) {
    journaled = read_journal(spec.journal, record, total);
    const bool fresh = !std::filesystem::exists(spec.journal) || std::filesystem::file_size(spec.journal) == 0;
    bool torn = false;
    if (!fresh) {
      std::ifstream tail(spec.journal, std::ios::binary);
      tail.seekg(-1, std::ios::end);
      torn = tail.get() != '\n';
    }
    journal.open(spec.journal, std::ios::app);
    if (!journal) throw IoError("cannot open journal " + spec.journal.string());
    if (fresh) journal << journal_header(record) << '\n' << std::flush;
    if (torn) journal << '\n';
  }

  std::vector<std::size_t> pending;
  std::vector<char> ready(total, 0);
  for (std::size_t i = 0; i < total; ++i) {
    if (auto it = journaled.find(i); it != journaled.end()) {
      record.values[i] = std::move(it->second.values);
      record.errors[i] = std::move(it->second.error);
      ready[i] = 1;
    } else {
      pending.push_back(i);
    }
  }

  std::mutex mutex;
  std::condition_variable cv;
  auto compute = [&](std::size_t k) {
    const std::size_t i = pending[k];
    std::vector<double> row = spec.point(i);
    std::string error;
    try {
      const auto obs = evaluate_point(spec, row);
      row.insert(row.end(), obs.begin(), obs.end());
    } catch (const std::exception& e) {
      error = sanitize(e.what());
      if (error.empty()) error = "failed";
      row.resize(spec.axes.size() + spec.observables.size(), std::nan(""));
    }
    {
      std::lock_guard lock(mutex);
      record.values[i] = std::move(row);
      record.errors[i] = std::move(error);
      ready[i] = 1;
    }
    cv.notify_one();
  };

  const std::size_t workers = resolve_workers(spec.workers);
  std::jthread pool([&] { parallel_for(pending.size(), workers, compute); });

  // Single writer: journal rows in grid order as they become available.
  const std::vector<char> from_journal = [&] {
    std::vector<char> f(total, 0);
    for (const auto& [i, _] : journaled) f[i] = 1;
    return f;
  }();
  for (std::size_t i = 0; i < total; ++i) {
    std::unique_lock lock(mutex);
    cv.wait(lock, [&] { return ready[i] != 0; });
    if (journal.is_open() && !from_journal[i]) {
      journal << i << ',' << format_row(record, i) << '\n' << std::flush;
    }
  }
  pool.join();
  return record;
}

void write_results(const ScanRecord& record, const std::filesystem::path& path, const std::vector<std::string>& echo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& line : echo) out << "# " << line << '\n';
  const auto cols = record.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (std::size_t r = 0; r < record.size(); ++r) out << format_row(record, r) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

ScanRecord read_results(const std::filesystem::path& path, std::size_t axis_count) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header.back() != "error" || table.header.size() < axis_count + 1) {
    throw IoError("results file " + path.string() + " lacks the expected columns");
  }
  ScanRecord record;
  record.axis_names.assign(table.header.begin(), table.header.begin() + static_cast<long>(axis_count));
  record.observable_names.assign(table.header.begin() + static_cast<long>(axis_count), table.header.end() - 1);
  for (const auto& row : table.rows) {
    std::vector<double> values;
    for (std::size_t k = 0; k + 1 < row.size(); ++k) values.push_back(parse_number(row[k]));
    record.values.push_back(std::move(values));
    record.errors.push_back(row.back());
  }
  return record;
}

std::vector<std::string> echo_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace ionwake
