#pragma once

#include <Eigen/Core>
#include <complex>
#include <string_view>

namespace ionwake {

using Complex = std::complex<double>;
/// 2x2 complex matrix over the ionic states {|1>, |2>}.
using Matrix2 = Eigen::Matrix2cd;

enum class Basis { diabatic, adiabatic };

constexpr std::string_view to_string(Basis b) {
  return b == Basis::diabatic ? "diabatic" : "adiabatic";
}

}  // namespace ionwake
