#include "ionwake/tunneling.hpp"

#include <cmath>

namespace ionwake {

namespace {

constexpr double kFieldCutoff = 1e-6;
constexpr double kUnderflowExponent = -700.0;

double amplitude_for_m(const IonChannel& channel, int m, double field) {
  for (std::size_t k = 0; k < channel.subchannels.size(); ++k) {
    if (channel.subchannels[k].m == m) return ionization_amplitude(channel, k, field);
  }
  return 0.0;
}

void validate(const IonChannel& channel) {
  if (!(channel.binding_energy_ev > 0.0)) {
    throw InvalidSystemError("channel '" + channel.label + "' needs a positive binding energy");
  }
  if (channel.subchannels.empty()) {
    throw InvalidSystemError("channel '" + channel.label + "' has no subchannels");
  }
  for (const auto& sub : channel.subchannels) {
    if (!(sub.structure_coefficient >= 0.0)) {
      throw InvalidSystemError("channel '" + channel.label + "' has a negative structure coefficient");
    }
  }
}

}  // namespace

double IonChannel::kappa() const { return std::sqrt(2.0 * units::ev_to_au(binding_energy_ev)); }

double TwoLevelIonSystem::gap() const {
  return units::ev_to_au(channel_2.binding_energy_ev - channel_1.binding_energy_ev);
}

void validate(const TwoLevelIonSystem& system) {
  validate(system.channel_1);
  validate(system.channel_2);
  if (!(system.gap() > 0.0)) {
    throw InvalidSystemError("channel 2 must be more deeply bound than channel 1");
  }
  if (!std::isfinite(system.transition_dipole)) {
    throw InvalidSystemError("transition dipole must be finite");
  }
}

TwoLevelIonSystem n2_preset() {
  TwoLevelIonSystem s;
  s.channel_1 = {"X2Sg (3sg)", 15.6, Parity::gerade, {{0, 1.0}}};
  s.channel_2 = {"B2Su (2su)", 18.8, Parity::ungerade, {{0, 1.4}}};
  s.transition_dipole = 0.75;
  return s;
}

double static_rate(const IonChannel& channel, std::size_t subchannel, double field_magnitude) {
  const double f = std::abs(field_magnitude);
  if (f < kFieldCutoff) return 0.0;
  const double kappa = channel.kappa();
  const double exponent = -2.0 * kappa * kappa * kappa / (3.0 * f);
  if (exponent < kUnderflowExponent) return 0.0;
  const double g = channel.subchannels.at(subchannel).structure_coefficient;
  const double power = std::pow(4.0 * kappa * kappa / f, 2.0 / kappa - 1.0);
  return g * g * 0.5 * kappa * power * std::exp(exponent);
}

double ionization_amplitude(const IonChannel& channel, std::size_t subchannel, double signed_field) {
  const double magnitude = std::sqrt(static_rate(channel, subchannel, signed_field));
  if (channel.parity == Parity::gerade || magnitude == 0.0) return magnitude;
  return signed_field > 0.0 ? -magnitude : magnitude;
}

double total_rate(const TwoLevelIonSystem& system, double signed_field) {
  double sum = 0.0;
  for (const IonChannel* ch : {&system.channel_1, &system.channel_2}) {
    for (std::size_t k = 0; k < ch->subchannels.size(); ++k) sum += static_rate(*ch, k, signed_field);
  }
  return sum;
}

SourceMatrix source_matrix_diabatic(const TwoLevelIonSystem& system, double rho0, double signed_field) {
  double g11 = 0.0, g22 = 0.0, g21 = 0.0;
  for (std::size_t k = 0; k < system.channel_1.subchannels.size(); ++k) {
    const double a1 = ionization_amplitude(system.channel_1, k, signed_field);
    g11 += a1 * a1;
    g21 += a1 * amplitude_for_m(system.channel_2, system.channel_1.subchannels[k].m, signed_field);
  }
  for (std::size_t k = 0; k < system.channel_2.subchannels.size(); ++k) {
    const double a2 = ionization_amplitude(system.channel_2, k, signed_field);
    g22 += a2 * a2;
  }
  SourceMatrix out;
  out.basis = Basis::diabatic;
  out.entries << rho0 * g11, rho0 * g21, rho0 * g21, rho0 * g22;
  return out;
}

std::vector<double> survival_probability(std::span<const double> total_rates, double dt) {
  std::vector<double> rho0(total_rates.size(), 1.0);
  for (std::size_t k = 1; k < total_rates.size(); ++k) {
    const double h = 0.5 * dt;
    rho0[k] = rho0[k - 1] * (1.0 - h * total_rates[k - 1]) / (1.0 + h * total_rates[k]);
    if (rho0[k] < 0.0) rho0[k] = 0.0;
  }
  return rho0;
}

std::vector<double> survival_probability(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                         const TimeGrid& grid) {
  const PulseParameters p = derive_pulse_parameters(pulse);
  std::vector<double> rates(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rates[i] = total_rate(system, field_at(p, grid[i]));
  return survival_probability(rates, grid.spacing());
}

}  // namespace ionwake
