#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ionwake/basis.hpp"
#include "ionwake/tunneling.hpp"
#include "ionwake/units.hpp"

namespace ionwake {

/// Neutral population plus the 2x2 ionic density matrix in one basis.
struct DensityState {
  double rho0 = 1.0;
  Matrix2 rho = Matrix2::Zero();
  Basis basis = Basis::diabatic;

  double population(int i) const { return rho(i, i).real(); }
  Complex coherence() const { return rho(1, 0); }
};

struct InvariantTolerances {
  double hermiticity = 1e-12;
  double negative_population = 1e-12;
  double budget = 1e-8;
  double positivity = 1e-12;
};

/// Describes the first violated invariant, or nullopt when all hold.
std::optional<std::string> check_invariants(const DensityState& state, const InvariantTolerances& tol = {});

enum class Propagator { reference, semianalytic };

constexpr std::string_view to_string(Propagator p) {
  return p == Propagator::reference ? "reference" : "semianalytic";
}

struct Sample {
  double t = 0.0;
  double field = 0.0;
  double rho0 = 1.0;
  DensityState diabatic;
  DensityState adiabatic{1.0, Matrix2::Zero(), Basis::adiabatic};
  double theta = 0.0;
  double energy = 0.0;
  double phase = 0.0;  // accumulated 2E dt from the grid start
  SourceMatrix source_d;
  SourceMatrix source_a{Basis::adiabatic, Matrix2::Zero()};
  Complex buildup{0.0, 0.0};  // Gamma^a_21 exp(i phase)
};

struct Trajectory {
  Trajectory(TimeGrid g, Propagator m) : grid(g), mode(m) {}

  TimeGrid grid;
  Propagator mode;
  std::vector<Sample> samples;

  const Sample& back() const { return samples.back(); }
};

}  // namespace ionwake
