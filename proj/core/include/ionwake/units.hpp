#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ionwake {

// Conversion constants. These are fixed bit-exact so golden CSVs reproduce.
namespace units {

inline constexpr double kHartreeEv = 27.211386;           // eV per a.u. of energy
inline constexpr double kIntensityAu = 3.50944758e16;     // W/cm^2 per (a.u. field)^2
inline constexpr double kTimeFs = 0.0241888;              // fs per a.u. of time
inline constexpr double kHcEvNm = 1239.84198;             // photon energy (eV) times wavelength (nm)
inline constexpr double kSpeedOfLightNmPerFs = 299.792458;

constexpr double ev_to_au(double ev) { return ev / kHartreeEv; }
constexpr double au_to_ev(double au) { return au * kHartreeEv; }
constexpr double fs_to_au(double fs) { return fs / kTimeFs; }
constexpr double au_to_fs(double au) { return au * kTimeFs; }

inline double intensity_to_field(double w_per_cm2) { return std::sqrt(w_per_cm2 / kIntensityAu); }
constexpr double field_to_intensity(double field_au) { return field_au * field_au * kIntensityAu; }

constexpr double wavelength_to_photon_energy(double wavelength_nm) {
  return ev_to_au(kHcEvNm / wavelength_nm);
}
constexpr double photon_energy_to_wavelength(double energy_au) {
  return kHcEvNm / au_to_ev(energy_au);
}

}  // namespace units

class InvalidPulseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gaussian-envelope, linearly polarized laser pulse in laboratory units.
///
/// The field is F(t) = F0 exp(-2 ln2 (t-tc)^2 / tau^2) cos(w (t-tc) + cep), so
/// `fwhm_fs` is the FWHM of the intensity envelope. A zero peak intensity is
/// allowed and describes a field-free run.
struct LaserPulse {
  double wavelength_nm = 800.0;
  double peak_intensity_wcm2 = 1e14;
  double fwhm_fs = 30.0;
  double cep_rad = 0.0;
  double center_time_fs = 0.0;
};

/// Atomic-unit quantities derived from a LaserPulse.
struct PulseParameters {
  double peak_field = 0.0;  // F0
  double omega = 0.0;       // carrier angular frequency
  double tau = 0.0;         // intensity FWHM
  double period = 0.0;      // 2 pi / omega
  double center = 0.0;
  double cep = 0.0;
};

/// Throws InvalidPulseError if the pulse violates its invariants.
void validate(const LaserPulse& pulse);

PulseParameters derive_pulse_parameters(const LaserPulse& pulse);

/// Field envelope F0 exp(-2 ln2 (t-tc)^2/tau^2) at time t (a.u.).
double envelope_at(const PulseParameters& p, double t);
double field_at(const PulseParameters& p, double t);
inline double field_at(const LaserPulse& pulse, double t) {
  return field_at(derive_pulse_parameters(pulse), t);
}

/// Single-cycle intensity FWHM: one optical period lambda/c, in fs.
double single_cycle_duration(double wavelength_nm);

/// Uniform time grid in atomic units.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t n_samples);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  std::size_t size() const { return n_; }
  double spacing() const { return dt_; }
  double operator[](std::size_t i) const {
    return i + 1 == n_ ? t_end_ : t_start_ + static_cast<double>(i) * dt_;
  }

  /// Same window, (n-1)*factor+1 samples: every original sample is kept.
  TimeGrid refined(std::size_t factor) const;

 private:
  double t_start_;
  double t_end_;
  std::size_t n_;
  double dt_;
};

}  // namespace ionwake
