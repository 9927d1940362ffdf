#include "ionwake/trajectory.hpp"

#include <cmath>
#include <sstream>

namespace ionwake {

std::optional<std::string> check_invariants(const DensityState& s, const InvariantTolerances& tol) {
  std::ostringstream msg;
  const Matrix2& r = s.rho;
  if (std::abs(r(1, 0) - std::conj(r(0, 1))) > tol.hermiticity ||
      std::abs(r(0, 0).imag()) > tol.hermiticity || std::abs(r(1, 1).imag()) > tol.hermiticity) {
    msg << "density matrix is not hermitian";
    return msg.str();
  }
  const double p11 = r(0, 0).real();
  const double p22 = r(1, 1).real();
  if (p11 < -tol.negative_population || p22 < -tol.negative_population) {
    msg << "negative population (" << p11 << ", " << p22 << ")";
    return msg.str();
  }
  if (std::abs(s.rho0 + p11 + p22 - 1.0) > tol.budget) {
    msg << "probability budget off by " << s.rho0 + p11 + p22 - 1.0;
    return msg.str();
  }
  if (std::norm(r(1, 0)) > p11 * p22 + tol.positivity) {
    msg << "coherence exceeds positivity bound";
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace ionwake
