#include "ionwake/units.hpp"

#include <numbers>

namespace ionwake {

void validate(const LaserPulse& pulse) {
  // Written with negations so NaN inputs are rejected too.
  if (!(pulse.wavelength_nm > 0.0)) {
    throw InvalidPulseError("wavelength must be positive, got " + std::to_string(pulse.wavelength_nm));
  }
  if (!(pulse.peak_intensity_wcm2 >= 0.0)) {
    throw InvalidPulseError("peak intensity must be non-negative, got " +
                            std::to_string(pulse.peak_intensity_wcm2));
  }
  if (!(pulse.fwhm_fs > 0.0)) {
    throw InvalidPulseError("pulse duration must be positive, got " + std::to_string(pulse.fwhm_fs));
  }
  if (!std::isfinite(pulse.cep_rad) || !std::isfinite(pulse.center_time_fs)) {
    throw InvalidPulseError("CEP and center time must be finite");
  }
}

PulseParameters derive_pulse_parameters(const LaserPulse& pulse) {
  validate(pulse);
  PulseParameters p;
  p.peak_field = units::intensity_to_field(pulse.peak_intensity_wcm2);
  p.omega = units::wavelength_to_photon_energy(pulse.wavelength_nm);
  p.tau = units::fs_to_au(pulse.fwhm_fs);
  p.period = 2.0 * std::numbers::pi / p.omega;
  p.center = units::fs_to_au(pulse.center_time_fs);
  p.cep = pulse.cep_rad;
  return p;
}

double envelope_at(const PulseParameters& p, double t) {
  const double x = (t - p.center) / p.tau;
  return p.peak_field * std::exp(-2.0 * std::numbers::ln2 * x * x);
}

double field_at(const PulseParameters& p, double t) {
  return envelope_at(p, t) * std::cos(p.omega * (t - p.center) + p.cep);
}

double single_cycle_duration(double wavelength_nm) {
  return wavelength_nm / units::kSpeedOfLightNmPerFs;
}

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_samples)
    : t_start_(t_start), t_end_(t_end), n_(n_samples), dt_(0.0) {
  if (!(t_start < t_end)) {
    throw std::invalid_argument("time grid needs t_start < t_end");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("time grid needs at least two samples");
  }
  dt_ = (t_end - t_start) / static_cast<double>(n_samples - 1);
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("refinement factor must be >= 1");
  return TimeGrid(t_start_, t_end_, (n_ - 1) * factor + 1);
}

}  // namespace ionwake
