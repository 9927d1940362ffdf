#include "ionwake/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ionwake {

double mixing_angle(const TwoLevelIonSystem& system, double signed_field) {
  const double omega_coupling = system.transition_dipole * signed_field;
  return 0.5 * std::atan2(2.0 * omega_coupling, system.gap());
}

double adiabatic_energy(const TwoLevelIonSystem& system, double signed_field) {
  return std::hypot(0.5 * system.gap(), system.transition_dipole * signed_field);
}

Matrix2 mixing_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix2 m;
  m << c, -s, s, c;
  return m;
}

SourceMatrix source_matrix_adiabatic(const SourceMatrix& diabatic, double theta) {
  const Matrix2 m = mixing_matrix(theta);
  return {Basis::adiabatic, m.transpose() * diabatic.entries * m};
}

DensityState diabatic_to_adiabatic(const DensityState& diabatic, double theta) {
  const Matrix2 m = mixing_matrix(theta);
  return {diabatic.rho0, m.transpose() * diabatic.rho * m, Basis::adiabatic};
}

DensityState adiabatic_to_diabatic(const DensityState& adiabatic, double theta) {
  const Matrix2 m = mixing_matrix(theta);
  return {adiabatic.rho0, m * adiabatic.rho * m.transpose(), Basis::diabatic};
}

std::vector<double> dynamic_phase(std::span<const double> energies, double dt) {
  std::vector<double> phase(energies.size(), 0.0);
  for (std::size_t k = 1; k < energies.size(); ++k) {
    phase[k] = phase[k - 1] + dt * (energies[k - 1] + energies[k]);
  }
  return phase;
}

std::vector<Matrix2> integrate_adiabatic_sources(std::span<const Matrix2> gamma_a, std::span<const double> phase,
                                                 double dt) {
  if (gamma_a.size() != phase.size()) throw std::invalid_argument("source and phase samples differ in length");
  std::vector<Matrix2> rho(gamma_a.size(), Matrix2::Zero());
  double pop1 = 0.0;
  double pop2 = 0.0;
  Complex accumulated{0.0, 0.0};
  Complex prev_integrand{0.0, 0.0};
  for (std::size_t i = 0; i < gamma_a.size(); ++i) {
    const Complex integrand = gamma_a[i](1, 0) * std::polar(1.0, phase[i]);
    if (i > 0) {
      pop1 += 0.5 * dt * (gamma_a[i - 1](0, 0).real() + gamma_a[i](0, 0).real());
      pop2 += 0.5 * dt * (gamma_a[i - 1](1, 1).real() + gamma_a[i](1, 1).real());
      accumulated += 0.5 * dt * (prev_integrand + integrand);
    }
    prev_integrand = integrand;
    const Complex coherence = std::polar(1.0, -phase[i]) * accumulated;
    rho[i] << pop1, std::conj(coherence), coherence, pop2;
  }
  return rho;
}

TimeGrid default_grid(const TwoLevelIonSystem& system, const LaserPulse& pulse, const GridPolicy& policy) {
  const PulseParameters p = derive_pulse_parameters(pulse);
  const double half_width = policy.window_fwhm * p.tau;
  const double t0 = p.center - half_width;
  const double tf = p.center + half_width;
  if (policy.n_samples >= 2) return TimeGrid(t0, tf, policy.n_samples);

  const double two_e_max = 2.0 * adiabatic_energy(system, p.peak_field);
  const double dt_carrier = p.period / policy.samples_per_period;
  const double dt_phase = 2.0 * std::numbers::pi / (policy.samples_per_period * two_e_max);
  const double dt = std::min(dt_carrier, dt_phase);
  const auto n = static_cast<std::size_t>(std::ceil((tf - t0) / dt)) + 1;
  return TimeGrid(t0, tf, std::max<std::size_t>(n, 2));
}

Trajectory semianalytic_evolve(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid) {
  return semianalytic_evolve(system, pulse, grid, 1);
}

Trajectory semianalytic_evolve(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                               std::size_t phase_refinement) {
  validate(system);
  const PulseParameters p = derive_pulse_parameters(pulse);
  const std::size_t n = grid.size();
  const double dt = grid.spacing();

  Trajectory traj(grid, Propagator::semianalytic);
  traj.samples.resize(n);

  std::vector<double> rates(n);
  std::vector<double> energies(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = traj.samples[i];
    s.t = grid[i];
    s.field = field_at(p, s.t);
    s.theta = mixing_angle(system, s.field);
    s.energy = adiabatic_energy(system, s.field);
    rates[i] = total_rate(system, s.field);
    energies[i] = s.energy;
  }

  std::vector<double> phase;
  if (phase_refinement <= 1) {
    phase = dynamic_phase(energies, dt);
  } else {
    const TimeGrid fine = grid.refined(phase_refinement);
    std::vector<double> fine_energies(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      fine_energies[i] = adiabatic_energy(system, field_at(p, fine[i]));
    }
    const std::vector<double> fine_phase = dynamic_phase(fine_energies, fine.spacing());
    phase.resize(n);
    for (std::size_t i = 0; i < n; ++i) phase[i] = fine_phase[i * phase_refinement];
  }

  const std::vector<double> rho0 = survival_probability(rates, dt);

  std::vector<Matrix2> gamma_a(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = traj.samples[i];
    s.rho0 = rho0[i];
    s.phase = phase[i];
    s.source_d = source_matrix_diabatic(system, s.rho0, s.field);
    s.source_a = source_matrix_adiabatic(s.source_d, s.theta);
    s.buildup = s.source_a.entries(1, 0) * std::polar(1.0, s.phase);
    gamma_a[i] = s.source_a.entries;
  }

  const std::vector<Matrix2> rho_a = integrate_adiabatic_sources(gamma_a, phase, dt);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = traj.samples[i];
    s.adiabatic = {s.rho0, rho_a[i], Basis::adiabatic};
    s.diabatic = adiabatic_to_diabatic(s.adiabatic, s.theta);
  }
  return traj;
}

}  // namespace ionwake
