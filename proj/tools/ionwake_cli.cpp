#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ionwake/analysis.hpp"
#include "ionwake/csv.hpp"
#include "ionwake/parallel.hpp"
#include "ionwake/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ionwake;

namespace {

// Flag values shared by every physics subcommand. They mirror the config
// keys; a --config file is merged on top of them.
struct CommonFlags {
  std::string preset = "n2";
  double wavelength_nm = 1030.0;
  double intensity_wcm2 = 2e14;
  double fwhm_fs = 30.0;
  double cep_rad = 0.0;
  bool single_cycle = false;
  double window_fwhm = 3.0;
  double samples_per_period = 200.0;
  std::string config;
  std::string out = ".";
  std::size_t workers = 0;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--preset", f.preset, "System preset")->capture_default_str();
  app->add_option("--wavelength", f.wavelength_nm, "Carrier wavelength (nm)")->capture_default_str();
  app->add_option("--intensity", f.intensity_wcm2, "Peak intensity (W/cm^2)")->capture_default_str();
  app->add_option("--fwhm", f.fwhm_fs, "Intensity FWHM (fs)")->capture_default_str();
  app->add_option("--cep", f.cep_rad, "Carrier-envelope phase (rad)")->capture_default_str();
  app->add_flag("--single-cycle", f.single_cycle, "Set the FWHM to one optical period");
  app->add_option("--window", f.window_fwhm, "Half-width of the time window in FWHM units")->capture_default_str();
  app->add_option("--samples-per-period", f.samples_per_period, "Grid resolution")->capture_default_str();
  app->add_option("--config", f.config, "Run-configuration JSON; its values take precedence")->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "Output directory")->capture_default_str();
  app->add_option("--workers", f.workers, "Worker threads (0 = all, capped by IONWAKE_THREADS)");
}

json flags_to_json(const CommonFlags& f) {
  return {{"schema_version", kConfigSchemaVersion},
          {"system", {{"preset", f.preset}}},
          {"pulse",
           {{"wavelength_nm", f.wavelength_nm},
            {"intensity_Wcm2", f.intensity_wcm2},
            {"fwhm_fs", f.fwhm_fs},
            {"cep_rad", f.cep_rad},
            {"single_cycle", f.single_cycle}}},
          {"grid", {{"window_fwhm", f.window_fwhm}, {"samples_per_period", f.samples_per_period}}},
          {"scan", {{"workers", f.workers}}}};
}

RunConfig resolve_config(const CommonFlags& f) {
  json merged = flags_to_json(f);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    std::ostringstream text;
    text << in.rdbuf();
    json file;
    try {
      file = json::parse(text.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    merged.merge_patch(file);
  }
  return parse_config(merged.dump());
}

fs::path output_dir(const CommonFlags& f) {
  fs::path dir(f.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

// "min:max:count" -> axis
AxisSpec parse_axis(const std::string& name, const std::string& text) {
  AxisSpec a;
  a.name = name;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a.min >> c1 >> a.max >> c2 >> a.count) || c1 != ':' || c2 != ':') {
    throw ConfigError("axis '" + name + "' expects min:max:count, got '" + text + "'");
  }
  return a;
}

std::string fmt(double v) { return format_number(v); }

int run_simulate(const CommonFlags& flags) {
  const RunConfig cfg = resolve_config(flags);
  const LaserPulse pulse = cfg.effective_pulse();
  const TimeGrid grid = default_grid(cfg.system, pulse, cfg.grid);
  const Trajectory ref = solve_diabatic(cfg.system, pulse, grid, cfg.tolerances);
  const Trajectory semi = semianalytic_evolve(cfg.system, pulse, grid);

  const fs::path path = output_dir(flags) / "trajectory.csv";
  write_trajectory_csv(path, {&ref, &semi}, echo_lines(config_to_json(cfg)));

  const Sample& r = ref.back();
  const Sample& s = semi.back();
  std::printf("samples            %zu\n", grid.size());
  std::printf("rho0               %s\n", fmt(s.rho0).c_str());
  std::printf("rho22 reference    %s\n", fmt(r.diabatic.population(1)).c_str());
  std::printf("rho22 semianalytic %s\n", fmt(s.adiabatic.population(1)).c_str());
  std::printf("|rho21| final      %s\n", fmt(std::abs(s.adiabatic.coherence())).c_str());
  try {
    std::printf("qsa_error_pct      %s\n", fmt(qsa_error(ref, semi)).c_str());
  } catch (const UndefinedMetricError&) {
    std::printf("qsa_error_pct      undefined (no excited-state population)\n");
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int finish_scan(const ScanRecord& record, const fs::path& path, const RunConfig& cfg) {
  write_results(record, path, echo_lines(config_to_json(cfg)));
  std::size_t failed = 0;
  for (const auto& e : record.errors) failed += e.empty() ? 0 : 1;
  std::printf("%zu points, %zu failed\nwrote %s\n", record.size(), failed, path.string().c_str());
  return failed == 0 ? 0 : 1;
}

int run_scan_command(const CommonFlags& flags, const std::vector<std::string>& axes,
                     const std::vector<std::string>& observables) {
  RunConfig cfg = resolve_config(flags);
  for (const auto& a : axes) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--axis expects name=min:max:count");
    cfg.axes.push_back(parse_axis(a.substr(0, eq), a.substr(eq + 1)));
  }
  if (!observables.empty()) cfg.observables = observables;
  const ScanSpec spec = scan_spec_from_config(cfg);
  const fs::path dir = output_dir(flags);
  const fs::path path = cfg.output_path.empty() ? dir / "scan.csv" : dir / cfg.output_path;
  return finish_scan(run_scan(spec), path, cfg);
}

int run_qsa_map(const CommonFlags& flags, const std::string& wavelengths, const std::string& durations) {
  RunConfig cfg = resolve_config(flags);
  cfg.single_cycle = false;
  cfg.axes = {parse_axis("wavelength_nm", wavelengths), parse_axis("fwhm_fs", durations)};
  cfg.observables = {"qsa_error_pct", "rho22", "rho22_ref", "gamma_e"};
  const ScanSpec spec = scan_spec_from_config(cfg);
  return finish_scan(run_scan(spec), output_dir(flags) / "qsa_map.csv", cfg);
}

int run_decompose(const CommonFlags& flags) {
  const RunConfig cfg = resolve_config(flags);
  const LaserPulse pulse = cfg.effective_pulse();
  const Trajectory semi = semianalytic_evolve(cfg.system, pulse, default_grid(cfg.system, pulse, cfg.grid));
  const PopulationDecomposition pop = decompose_population(semi);
  const CoherenceDecomposition coh = decompose_coherence(semi);
  const PulseParameters p = derive_pulse_parameters(pulse);
  const double x = 2.0 * cfg.system.transition_dipole * p.peak_field / cfg.system.gap();

  std::printf("(2 Omega0 / Delta)^2  %.6g\n", x * x);
  std::printf("rho22_a final         %s\n", fmt(pop.total()).c_str());
  std::printf("population            fraction      integrated\n");
  std::printf("  shake-up            %-12.6f  %.6e\n", pop.shake_up, pop.absolute[0]);
  std::printf("  direct              %-12.6f  %.6e\n", pop.direct, pop.absolute[1]);
  std::printf("  TIC transfer        %-12.6f  %.6e\n", pop.tic_transfer, pop.absolute[2]);
  std::printf("coherence             |term|\n");
  std::printf("  TI-driven           %.6e\n", std::abs(coh.ti_driven));
  std::printf("  TIC-driven          %.6e\n", std::abs(coh.tic_driven));
  try {
    std::printf("  TI / TIC            %.4f\n", coh.ti_over_tic());
  } catch (const UndefinedMetricError&) {
    std::printf("  TI / TIC            undefined\n");
  }
  return 0;
}

int run_buildup(const CommonFlags& flags, double threshold) {
  const RunConfig cfg = resolve_config(flags);
  const LaserPulse pulse = cfg.effective_pulse();
  const Trajectory semi = semianalytic_evolve(cfg.system, pulse, default_grid(cfg.system, pulse, cfg.grid));

  const fs::path path = output_dir(flags) / "buildup.csv";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& line : echo_lines(config_to_json(cfg))) out << "# " << line << '\n';
  out << "t_fs,field_au,buildup_re,buildup_im,abs_rho21_a,rho22_a\n";
  for (const Sample& s : semi.samples) {
    out << fmt(units::au_to_fs(s.t)) << ',' << fmt(s.field) << ',' << fmt(s.buildup.real()) << ','
        << fmt(s.buildup.imag()) << ',' << fmt(std::abs(s.adiabatic.coherence())) << ','
        << fmt(s.adiabatic.population(1)) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());

  std::string pattern;
  for (int sign : buildup_peak_signs(semi, threshold)) pattern += sign > 0 ? '+' : '-';
  std::printf("half-cycle peak signs  %s\n", pattern.empty() ? "(none)" : pattern.c_str());
  try {
    const RiseWindow w = coherence_rise_window(semi);
    std::printf("10-90%% rise of |rho21| %.3f fs\n", units::au_to_fs(w.duration()));
  } catch (const UndefinedMetricError&) {
    std::printf("10-90%% rise of |rho21| undefined\n");
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int run_phase_match(const CommonFlags& flags, const std::vector<int>& orders) {
  const RunConfig cfg = resolve_config(flags);
  const double intensity = cfg.pulse.peak_intensity_wcm2;
  const WeakCouplingParams w = weak_coupling_params(cfg.system, cfg.pulse);
  std::printf("alpha = %.6f eV at %s W/cm^2\n", units::au_to_ev(w.alpha), fmt(intensity).c_str());
  std::printf("n,photons,wavelength_nm\n");
  bool shows_n2 = false;
  for (int n : orders) {
    std::printf("%d,%d,%.3f\n", n, 2 * n + 1, phase_matching_wavelength(cfg.system, intensity, n));
    shows_n2 = shows_n2 || n == 2;
  }
  if (shows_n2) {
    std::printf("note: the full (non-perturbative) model places the n = 2 maximum near 1644 nm at 2e14 W/cm^2\n");
  }
  return 0;
}

int run_cep(const CommonFlags& flags, std::size_t samples) {
  const RunConfig cfg = resolve_config(flags);
  const LaserPulse pulse = cfg.effective_pulse();
  const TimeGrid grid = default_grid(cfg.system, pulse, cfg.grid);
  const CepResponse r = cep_response(cfg.system, pulse, grid, samples, resolve_workers(cfg.workers));

  const fs::path path = output_dir(flags) / "cep.csv";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& line : echo_lines(config_to_json(cfg))) out << "# " << line << '\n';
  out << "cep_rad,abs_coh,arg_coh\n";
  for (std::size_t k = 0; k < r.ceps.size(); ++k) {
    out << fmt(r.ceps[k]) << ',' << fmt(std::abs(r.coherences[k])) << ',' << fmt(std::arg(r.coherences[k])) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
  std::printf("amplitude variation  %.4f\n", r.amplitude_variation);
  std::printf("phase slope          %.4f\n", r.phase_slope);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concurrent tunneling ionization and strong-field excitation of a two-level ion"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* simulate = app.add_subcommand("simulate", "One trajectory with both propagators (trajectory.csv)");
  add_common(simulate, flags);

  auto* scan = app.add_subcommand("scan", "Parameter scan (scan.csv or output.path)");
  add_common(scan, flags);
  std::vector<std::string> axes, observables;
  scan->add_option("--axis", axes, "name=min:max:count, up to three");
  scan->add_option("--observables", observables, "Observable columns");

  auto* qsa_map = app.add_subcommand("qsa-map", "QSA error over wavelength and duration (qsa_map.csv)");
  add_common(qsa_map, flags);
  std::string wavelengths = "1000:3200:12", durations = "5:60:12";
  qsa_map->add_option("--wavelengths", wavelengths, "min:max:count in nm")->capture_default_str();
  qsa_map->add_option("--durations", durations, "min:max:count in fs")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "Population and coherence source decomposition");
  add_common(decompose, flags);

  auto* buildup = app.add_subcommand("buildup", "Buildup function series (buildup.csv)");
  add_common(buildup, flags);
  double threshold = 0.1;
  buildup->add_option("--threshold", threshold, "Relative size below which peaks are ignored")->capture_default_str();

  auto* phase_match = app.add_subcommand("phase-match", "Phase-matching wavelengths");
  add_common(phase_match, flags);
  std::vector<int> orders{2, 3, 4};
  phase_match->add_option("--n", orders, "Photon orders n ((2n+1) photons)")->check(CLI::NonNegativeNumber);

  auto* cep = app.add_subcommand("cep", "CEP dependence of the final coherence (cep.csv)");
  add_common(cep, flags);
  std::size_t samples = 16;
  cep->add_option("--samples", samples, "CEP samples over one turn")->check(CLI::Range(2, 4096));

  auto* presets = app.add_subcommand("presets", "Print a system preset as JSON");
  std::string preset_name = "n2";
  presets->add_option("--preset", preset_name, "Preset name")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(flags);
    if (*scan) return run_scan_command(flags, axes, observables);
    if (*qsa_map) return run_qsa_map(flags, wavelengths, durations);
    if (*decompose) return run_decompose(flags);
    if (*buildup) return run_buildup(flags, threshold);
    if (*phase_match) return run_phase_match(flags, orders);
    if (*cep) return run_cep(flags, samples);
    if (*presets) {
      std::printf("%s\n", system_to_json(system_preset(preset_name)).c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
