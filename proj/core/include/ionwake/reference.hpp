#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "ionwake/trajectory.hpp"

namespace ionwake {

/// Adaptive Dormand-Prince 5(4) controls for the reference propagator.
struct Tolerances {
  double relative = 1e-8;
  double absolute = 1e-12;
  double max_step_periods = 0.05;         // step cap as a fraction of the optical period
  std::size_t max_steps_per_sample = 100000;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  /// Time (a.u.) at which the integrator gave up.
  double time() const { return time_; }

 private:
  double time_;
};

/// Numerically integrates d rho^d/dt = -i [H^d, rho^d] + Gamma^d together with
/// d rho0/dt = -rho0 sum |gamma|^2, from rho0 = 1 and rho^d = 0.
///
/// The state is propagated as (rho0, rho11, rho22, Re rho21, Im rho21) so the
/// density matrix stays hermitian by construction. Dense output is sampled on
/// `grid`; every sample also carries the adiabatic representation.
Trajectory solve_diabatic(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                          const Tolerances& tol = {});

/// Same equation of motion from an arbitrary hermitian initial state.
Trajectory solve_diabatic(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                          const Tolerances& tol, const DensityState& initial);

}  // namespace ionwake
