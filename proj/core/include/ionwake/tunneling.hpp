#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionwake/basis.hpp"
#include "ionwake/units.hpp"

namespace ionwake {

enum class Parity { gerade, ungerade };

struct Subchannel {
  int m = 0;
  double structure_coefficient = 1.0;
};

/// One tunneling channel of the neutral, forming an ionic state.
struct IonChannel {
  std::string label;
  double binding_energy_ev = 0.0;
  Parity parity = Parity::gerade;
  std::vector<Subchannel> subchannels;

  /// sqrt(2 Ip) in atomic units.
  double kappa() const;
};

class InvalidSystemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Neutral ground state plus two dipole-coupled ionic states.
struct TwoLevelIonSystem {
  IonChannel channel_1;
  IonChannel channel_2;
  double transition_dipole = 0.0;  // e a0, along the polarization axis

  /// Ionic energy gap Ip(2) - Ip(1) in atomic units.
  double gap() const;
};

void validate(const TwoLevelIonSystem& system);

/// N2 aligned with the polarization: X (3 sigma_g) and B (2 sigma_u) channels.
///
/// The B-channel structure coefficient 1.4 is a calibration against the
/// published shake-up/direct/TIC split at single-cycle 1030 nm, 2e14 W/cm^2.
TwoLevelIonSystem n2_preset();

/// Hermitian ionization source at one time sample.
struct SourceMatrix {
  Basis basis = Basis::diabatic;
  Matrix2 entries = Matrix2::Zero();
};

/// Quasistatic tunneling rate for one subchannel (asymptotic charge 1):
///   W(F) = g^2 (kappa/2) (4 kappa^2/F)^(2/kappa - 1) exp(-2 kappa^3 / (3F)).
/// Returns exactly 0 for |F| below 1e-6 a.u. or when the exponent underflows.
double static_rate(const IonChannel& channel, std::size_t subchannel, double field_magnitude);

/// Real tunneling amplitude with parity sign: gerade channels are even in F,
/// ungerade channels carry the sign -sgn(F). |amplitude|^2 = static_rate(|F|).
double ionization_amplitude(const IonChannel& channel, std::size_t subchannel, double signed_field);

/// Sum over channels and subchannels of |gamma_im|^2 at the given field.
double total_rate(const TwoLevelIonSystem& system, double signed_field);

/// Gamma^d_ij = rho0 sum_m gamma_im gamma_jm^*; subchannels are paired by m.
SourceMatrix source_matrix_diabatic(const TwoLevelIonSystem& system, double rho0, double signed_field);

/// Neutral population on the grid from the sampled total rate, via the
/// trapezoidal recursion rho0_{k+1} = rho0_k (1 - h r_k/2) / (1 + h r_{k+1}/2).
/// With this rule rho0 + trapz(rho0 r) = 1 exactly on the grid.
std::vector<double> survival_probability(std::span<const double> total_rates, double dt);
std::vector<double> survival_probability(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                         const TimeGrid& grid);

}  // namespace ionwake
