#include "ionwake/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ionwake {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

json system_json(const TwoLevelIonSystem& s) {
  json coeffs = json::array();
  json parities = json::array();
  json labels = json::array();
  for (const IonChannel* ch : {&s.channel_1, &s.channel_2}) {
    json subs = json::array();
    for (const auto& sub : ch->subchannels) subs.push_back({{"m", sub.m}, {"g", sub.structure_coefficient}});
    coeffs.push_back(subs);
    parities.push_back(ch->parity == Parity::gerade ? "g" : "u");
    labels.push_back(ch->label);
  }
  return {{"labels", labels},
          {"binding_energies_eV", {s.channel_1.binding_energy_ev, s.channel_2.binding_energy_ev}},
          {"dipole_au", s.transition_dipole},
          {"parities", parities},
          {"structure_coefficients", coeffs}};
}

TwoLevelIonSystem parse_system(const json& j) {
  TwoLevelIonSystem s = n2_preset();
  if (j.contains("preset")) s = system_preset(j.at("preset").get<std::string>());
  IonChannel* channels[2] = {&s.channel_1, &s.channel_2};
  try {
    if (j.contains("binding_energies_eV")) {
      const auto ip = j.at("binding_energies_eV").get<std::vector<double>>();
      if (ip.size() != 2) throw ConfigError("binding_energies_eV needs two entries");
      for (int c = 0; c < 2; ++c) channels[c]->binding_energy_ev = ip[c];
    }
    if (j.contains("parities")) {
      const auto par = j.at("parities").get<std::vector<std::string>>();
      if (par.size() != 2) throw ConfigError("parities needs two entries");
      for (int c = 0; c < 2; ++c) {
        if (par[c] != "g" && par[c] != "u") throw ConfigError("parity must be \"g\" or \"u\"");
        channels[c]->parity = par[c] == "g" ? Parity::gerade : Parity::ungerade;
      }
    }
    if (j.contains("labels")) {
      const auto labels = j.at("labels").get<std::vector<std::string>>();
      if (labels.size() != 2) throw ConfigError("labels needs two entries");
      for (int c = 0; c < 2; ++c) channels[c]->label = labels[c];
    }
    if (j.contains("structure_coefficients")) {
      const json& sc = j.at("structure_coefficients");
      if (!sc.is_array() || sc.size() != 2) throw ConfigError("structure_coefficients needs two lists");
      for (int c = 0; c < 2; ++c) {
        channels[c]->subchannels.clear();
        for (const json& sub : sc[c]) {
          channels[c]->subchannels.push_back({sub.at("m").get<int>(), sub.at("g").get<double>()});
        }
      }
    }
    s.transition_dipole = get_or(j, "dipole_au", s.transition_dipole);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad system block: ") + e.what());
  }
  try {
    validate(s);
  } catch (const InvalidSystemError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

}  // namespace

double AxisSpec::value(std::size_t i) const {
  if (count <= 1) return min;
  if (i + 1 == count) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

LaserPulse RunConfig::effective_pulse() const {
  LaserPulse p = pulse;
  if (single_cycle) p.fwhm_fs = single_cycle_duration(p.wavelength_nm);
  return p;
}

TwoLevelIonSystem system_preset(std::string_view name) {
  if (name == "n2" || name == "N2") return n2_preset();
  throw ConfigError("unknown system preset '" + std::string(name) + "'");
}

std::string system_to_json(const TwoLevelIonSystem& system) { return system_json(system).dump(2); }

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const int version = get_or(j, "schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("config schema_version " + std::to_string(version) + " does not match " +
                      std::to_string(kConfigSchemaVersion));
  }

  RunConfig cfg;
  if (j.contains("system")) cfg.system = parse_system(j.at("system"));

  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    cfg.pulse.wavelength_nm = get_or(p, "wavelength_nm", cfg.pulse.wavelength_nm);
    cfg.pulse.peak_intensity_wcm2 = get_or(p, "intensity_Wcm2", cfg.pulse.peak_intensity_wcm2);
    cfg.pulse.fwhm_fs = get_or(p, "fwhm_fs", cfg.pulse.fwhm_fs);
    cfg.pulse.cep_rad = get_or(p, "cep_rad", cfg.pulse.cep_rad);
    cfg.pulse.center_time_fs = get_or(p, "center_fs", cfg.pulse.center_time_fs);
    cfg.single_cycle = get_or(p, "single_cycle", false);
  }
  try {
    validate(cfg.effective_pulse());
  } catch (const InvalidPulseError& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    cfg.grid.window_fwhm = get_or(g, "window_fwhm", cfg.grid.window_fwhm);
    cfg.grid.samples_per_period = get_or(g, "samples_per_period", cfg.grid.samples_per_period);
    cfg.grid.n_samples = get_or<std::size_t>(g, "n_samples", 0);
    if (!(cfg.grid.window_fwhm > 0.0) || !(cfg.grid.samples_per_period >= 2.0)) {
      throw ConfigError("grid needs window_fwhm > 0 and samples_per_period >= 2");
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    cfg.tolerances.relative = get_or(t, "relative", cfg.tolerances.relative);
    cfg.tolerances.absolute = get_or(t, "absolute", cfg.tolerances.absolute);
  }

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    cfg.workers = get_or<std::size_t>(s, "workers", 0);
    cfg.journal_path = get_or<std::string>(s, "journal", "");
    if (s.contains("axes")) {
      for (const json& a : s.at("axes")) {
        AxisSpec axis;
        axis.name = get_or<std::string>(a, "name", "");
        axis.min = get_or(a, "min", 0.0);
        axis.max = get_or(a, "max", axis.min);
        axis.count = get_or<std::size_t>(a, "count", 1);
        cfg.axes.push_back(axis);
      }
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    cfg.output_path = get_or<std::string>(o, "path", "");
    cfg.observables = get_or<std::vector<std::string>>(o, "observables", {});
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const RunConfig& cfg) {
  const LaserPulse eff = cfg.effective_pulse();
  json axes = json::array();
  for (const auto& a : cfg.axes) axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  json j = {
      {"schema_version", kConfigSchemaVersion},
      {"system", system_json(cfg.system)},
      {"pulse",
       {{"wavelength_nm", cfg.pulse.wavelength_nm},
        {"intensity_Wcm2", cfg.pulse.peak_intensity_wcm2},
        {"fwhm_fs", cfg.pulse.fwhm_fs},
        {"cep_rad", cfg.pulse.cep_rad},
        {"center_fs", cfg.pulse.center_time_fs},
        {"single_cycle", cfg.single_cycle},
        {"effective_fwhm_fs", eff.fwhm_fs}}},
      {"grid",
       {{"window_fwhm", cfg.grid.window_fwhm},
        {"samples_per_period", cfg.grid.samples_per_period},
        {"n_samples", cfg.grid.n_samples}}},
      {"tolerances", {{"relative", cfg.tolerances.relative}, {"absolute", cfg.tolerances.absolute}}},
      {"scan", {{"axes", axes}}},
      {"output", {{"observables", cfg.observables}}},
  };
  return j.dump(2);
}

}  // namespace ionwake
