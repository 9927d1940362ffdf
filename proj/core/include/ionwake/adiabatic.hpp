#pragma once

#include <span>
#include <vector>

#include "ionwake/trajectory.hpp"

namespace ionwake {

/// Mixing angle theta = atan2(2 Omega, Delta)/2 with Omega = d F.
double mixing_angle(const TwoLevelIonSystem& system, double signed_field);

/// Adiabatic eigenvalue magnitude E = sqrt((Delta/2)^2 + Omega^2).
double adiabatic_energy(const TwoLevelIonSystem& system, double signed_field);

/// M(theta) = [[cos, -sin], [sin, cos]]; diagonalizes the diabatic Hamiltonian.
Matrix2 mixing_matrix(double theta);

/// Gamma^a = M^T Gamma^d M.
SourceMatrix source_matrix_adiabatic(const SourceMatrix& diabatic, double theta);

DensityState diabatic_to_adiabatic(const DensityState& diabatic, double theta);
/// rho~^d = M rho^a M^T.
DensityState adiabatic_to_diabatic(const DensityState& adiabatic, double theta);

/// Cumulative trapezoid of 2E on a uniform grid, starting from 0.
std::vector<double> dynamic_phase(std::span<const double> energies, double dt);

/// Cumulative trapezoid of sampled adiabatic sources: populations integrate
/// the diagonal, the coherence is exp(-i Phi) int Gamma^a_21 exp(i Phi).
/// Returns rho^a at every sample.
std::vector<Matrix2> integrate_adiabatic_sources(std::span<const Matrix2> gamma_a, std::span<const double> phase,
                                                 double dt);

/// Controls for the default simulation window and resolution.
struct GridPolicy {
  double window_fwhm = 3.0;         // half-width of [t0, tf] in units of the FWHM
  double samples_per_period = 200;  // of both the carrier and the fastest 2E oscillation
  std::size_t n_samples = 0;        // nonzero overrides the resolution rule
};

/// [tc - k tau, tc + k tau] with dt <= T/200 and dt <= 2 pi / (200 * 2 E_max).
TimeGrid default_grid(const TwoLevelIonSystem& system, const LaserPulse& pulse, const GridPolicy& policy = {});

/// Quasistatic semi-analytical solution: populations from the integrated
/// adiabatic source, coherence from the phase-dressed integral
///   rho^a_21(t) = exp(-i Phi(t)) int Gamma^a_21(t') exp(i Phi(t')) dt'.
/// The diabatic block of each sample holds the back-transformed rho~^d.
Trajectory semianalytic_evolve(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid);

/// Same, but with the dynamic phase taken from a `phase_refinement`-times
/// finer trapezoid (used to check phase convergence).
Trajectory semianalytic_evolve(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                               std::size_t phase_refinement);

}  // namespace ionwake
