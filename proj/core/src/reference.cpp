#include "ionwake/reference.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <boost/ref.hpp>
#include <cmath>

#include "ionwake/adiabatic.hpp"

namespace ionwake {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 5>;

struct DiabaticRhs {
  const TwoLevelIonSystem& system;
  const PulseParameters& pulse;

  void operator()(const State& y, State& dydt, double t) const {
    const double field = field_at(pulse, t);
    const double coupling = system.transition_dipole * field;
    const double gap = system.gap();
    const Matrix2 source = source_matrix_diabatic(system, y[0], field).entries;
    const double rho11 = y[1], rho22 = y[2], re21 = y[3], im21 = y[4];

    dydt[0] = -y[0] * total_rate(system, field);
    dydt[1] = -2.0 * coupling * im21 + source(0, 0).real();
    dydt[2] = 2.0 * coupling * im21 + source(1, 1).real();
    dydt[3] = gap * im21 + source(1, 0).real();
    dydt[4] = -gap * re21 + coupling * (rho11 - rho22) + source(1, 0).imag();
  }
};

}  // namespace

Trajectory solve_diabatic(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                          const Tolerances& tol) {
  return solve_diabatic(system, pulse, grid, tol, DensityState{});
}

Trajectory solve_diabatic(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                          const Tolerances& tol, const DensityState& initial) {
  validate(system);
  const PulseParameters p = derive_pulse_parameters(pulse);
  const std::size_t n = grid.size();

  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = grid[i];
  std::vector<State> states;
  states.reserve(n);

  State y{initial.rho0, initial.rho(0, 0).real(), initial.rho(1, 1).real(), initial.rho(1, 0).real(),
          initial.rho(1, 0).imag()};

  const double max_dt = tol.max_step_periods * p.period;
  auto stepper = odeint::make_dense_output(tol.absolute, tol.relative, max_dt, odeint::runge_kutta_dopri5<State>());
  DiabaticRhs rhs{system, p};
  const double dt0 = std::min(grid.spacing(), max_dt);

  auto observer = [&](const State& s, double t) {
    for (double v : s) {
      if (!std::isfinite(v)) throw IntegrationError("non-finite state", t);
    }
    states.push_back(s);
  };

  try {
    odeint::integrate_times(boost::ref(stepper), boost::ref(rhs), y, times.begin(), times.end(), dt0,
                            observer, odeint::max_step_checker(static_cast<int>(tol.max_steps_per_sample)));
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("reference integration failed: ") + e.what(), stepper.current_time());
  }
  if (states.size() != n) {
    throw IntegrationError("reference integration produced too few samples", stepper.current_time());
  }

  Trajectory traj(grid, Propagator::reference);
  traj.samples.resize(n);
  std::vector<double> energies(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = traj.samples[i];
    const State& st = states[i];
    s.t = times[i];
    s.field = field_at(p, s.t);
    s.theta = mixing_angle(system, s.field);
    s.energy = adiabatic_energy(system, s.field);
    energies[i] = s.energy;
    s.rho0 = st[0];
    s.diabatic.rho0 = st[0];
    s.diabatic.basis = Basis::diabatic;
    const Complex c{st[3], st[4]};
    s.diabatic.rho << st[1], std::conj(c), c, st[2];
    s.adiabatic = diabatic_to_adiabatic(s.diabatic, s.theta);
    s.source_d = source_matrix_diabatic(system, s.rho0, s.field);
    s.source_a = source_matrix_adiabatic(s.source_d, s.theta);
  }
  const std::vector<double> phase = dynamic_phase(energies, grid.spacing());
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = traj.samples[i];
    s.phase = phase[i];
    s.buildup = s.source_a.entries(1, 0) * std::polar(1.0, s.phase);
  }
  return traj;
}

}  // namespace ionwake
