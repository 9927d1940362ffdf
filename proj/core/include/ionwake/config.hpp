#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ionwake/adiabatic.hpp"
#include "ionwake/reference.hpp"

namespace ionwake {

inline constexpr int kConfigSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AxisSpec {
  std::string name;  // wavelength_nm | intensity_Wcm2 | fwhm_fs | cep_rad
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  double value(std::size_t i) const;
};

/// Contents of a run-configuration JSON document.
struct RunConfig {
  TwoLevelIonSystem system = n2_preset();
  LaserPulse pulse;
  bool single_cycle = false;  // fwhm_fs := lambda / c
  GridPolicy grid;
  Tolerances tolerances;
  std::vector<AxisSpec> axes;
  std::size_t workers = 0;
  std::string journal_path;
  std::string output_path;
  std::vector<std::string> observables;

  /// Pulse with single_cycle applied.
  LaserPulse effective_pulse() const;
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Normalized JSON for the effective configuration (provenance echo).
std::string config_to_json(const RunConfig& config);

/// System block for a preset name ("n2").
TwoLevelIonSystem system_preset(std::string_view name);
std::string system_to_json(const TwoLevelIonSystem& system);

}  // namespace ionwake
