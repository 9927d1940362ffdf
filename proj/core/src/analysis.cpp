#include "ionwake/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ionwake/parallel.hpp"

namespace ionwake {

namespace {

double trapezoid_step(double dt, double a, double b) { return 0.5 * dt * (a + b); }

const Sample& final_sample(const Trajectory& t) {
  if (t.samples.empty()) throw std::invalid_argument("empty trajectory");
  return t.back();
}

}  // namespace

WeakCouplingParams weak_coupling_params(const TwoLevelIonSystem& system, const LaserPulse& pulse) {
  const PulseParameters p = derive_pulse_parameters(pulse);
  const double d = system.transition_dipole;
  WeakCouplingParams w;
  w.alpha = d * d * p.peak_field * p.peak_field / system.gap();
  w.eta0 = 0.25 * w.alpha * p.tau * std::sqrt(std::numbers::pi / std::numbers::ln2);
  const double order = (system.gap() + w.alpha) / p.omega;
  w.n_photon = std::max(0, static_cast<int>(std::lround((order - 1.0) / 2.0)));
  return w;
}

double CoherenceDecomposition::ti_over_tic() const {
  const double tic = std::abs(tic_driven);
  if (tic == 0.0) throw UndefinedMetricError("TIC-driven coherence vanishes");
  return std::abs(ti_driven) / tic;
}

PopulationTerms population_source_terms(const SourceMatrix& gd, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const Matrix2& g = gd.entries;
  return {g(0, 0).real() * s * s, g(1, 1).real() * c * c, -g(1, 0).real() * std::sin(2.0 * theta)};
}

CoherenceTerms coherence_source_terms(const SourceMatrix& gd, double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const Matrix2& g = gd.entries;
  return {(g(1, 1) - g(0, 0)) * (0.5 * std::sin(2.0 * theta)), g(1, 0) * (c * c) - g(0, 1) * (s * s)};
}

double population_source_second_order(const SourceMatrix& gd, double r) {
  const Matrix2& g = gd.entries;
  return g(0, 0).real() * r * r + g(1, 1).real() * (1.0 - r * r) - 2.0 * g(1, 0).real() * r;
}

Complex coherence_source_second_order(const SourceMatrix& gd, double r) {
  const Matrix2& g = gd.entries;
  return (g(1, 1) - g(0, 0)) * r + (g(1, 0) - 2.0 * g(1, 0).real() * r * r);
}

double qsa_error(const Trajectory& reference, const Trajectory& semianalytic) {
  const double ref = final_sample(reference).diabatic.population(1);
  const double approx = final_sample(semianalytic).adiabatic.population(1);
  if (!(ref > 0.0)) throw UndefinedMetricError("reference excited-state population vanishes");
  return (approx - ref) / ref * 100.0;
}

double qsa_error(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                 const Tolerances& tol) {
  const Trajectory ref = solve_diabatic(system, pulse, grid, tol);
  // Populations comparable to the absolute tolerance carry no significant digits.
  if (!(ref.back().diabatic.population(1) > 100.0 * tol.absolute)) {
    throw UndefinedMetricError("reference excited-state population is below the integrator resolution");
  }
  return qsa_error(ref, semianalytic_evolve(system, pulse, grid));
}

PopulationDecomposition decompose_population(const Trajectory& traj) {
  const double dt = traj.grid.spacing();
  PopulationDecomposition out;
  PopulationTerms prev;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    const PopulationTerms cur = population_source_terms(s.source_d, s.theta);
    if (i > 0) {
      out.absolute[0] += trapezoid_step(dt, prev.shake_up, cur.shake_up);
      out.absolute[1] += trapezoid_step(dt, prev.direct, cur.direct);
      out.absolute[2] += trapezoid_step(dt, prev.tic_transfer, cur.tic_transfer);
    }
    prev = cur;
  }
  const double total = out.total();
  if (total != 0.0) {
    out.shake_up = out.absolute[0] / total;
    out.direct = out.absolute[1] / total;
    out.tic_transfer = out.absolute[2] / total;
  }
  return out;
}

PopulationDecomposition decompose_population(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                             const TimeGrid& grid) {
  return decompose_population(semianalytic_evolve(system, pulse, grid));
}

CoherenceDecomposition decompose_coherence(const Trajectory& traj) {
  const double dt = traj.grid.spacing();
  Complex ti{}, tic{};
  CoherenceTerms prev;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    CoherenceTerms cur = coherence_source_terms(s.source_d, s.theta);
    const Complex rot = std::polar(1.0, s.phase);
    cur.ti_driven *= rot;
    cur.tic_driven *= rot;
    if (i > 0) {
      ti += 0.5 * dt * (prev.ti_driven + cur.ti_driven);
      tic += 0.5 * dt * (prev.tic_driven + cur.tic_driven);
    }
    prev = cur;
  }
  const Complex back = std::polar(1.0, -final_sample(traj).phase);
  return {back * ti, back * tic};
}

CoherenceDecomposition decompose_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                           const TimeGrid& grid) {
  return decompose_coherence(semianalytic_evolve(system, pulse, grid));
}

Complex weak_coupling_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                const Trajectory& traj) {
  const PulseParameters p = derive_pulse_parameters(pulse);
  const WeakCouplingParams w = weak_coupling_params(system, pulse);
  const double gap = system.gap();
  const double dt = traj.grid.spacing();
  Complex acc{}, prev{};
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const Sample& s = traj.samples[i];
    const Complex cur = s.source_a.entries(1, 0) * std::polar(1.0, (gap + w.alpha) * (s.t - p.center) - w.eta0);
    if (i > 0) acc += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  return std::polar(1.0, -gap * (final_sample(traj).t - p.center)) * acc;
}

Complex weak_coupling_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid) {
  return weak_coupling_coherence(system, pulse, semianalytic_evolve(system, pulse, grid));
}

std::vector<Complex> buildup_function(const Trajectory& traj) {
  std::vector<Complex> out;
  out.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) out.push_back(s.buildup);
  return out;
}

std::vector<Complex> half_cycle_peaks(const Trajectory& traj) {
  std::vector<Complex> peaks;
  int sign = 0;
  Complex best{};
  for (const Sample& s : traj.samples) {
    const int cur = s.field > 0.0 ? 1 : (s.field < 0.0 ? -1 : sign);
    if (cur != sign && sign != 0) {
      peaks.push_back(best);
      best = Complex{};
    }
    sign = cur;
    if (std::abs(s.buildup) > std::abs(best)) best = s.buildup;
  }
  if (sign != 0) peaks.push_back(best);
  return peaks;
}

std::vector<int> buildup_peak_signs(const Trajectory& traj, double threshold) {
  const std::vector<Complex> peaks = half_cycle_peaks(traj);
  if (peaks.empty()) return {};
  const auto strongest = *std::max_element(peaks.begin(), peaks.end(),
                                           [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  const double scale = std::abs(strongest);
  if (scale == 0.0) return {};
  const Complex reference = std::conj(strongest) / scale;
  std::vector<int> signs;
  for (Complex pk : peaks) {
    if (std::abs(pk) < threshold * scale) continue;
    signs.push_back((pk * reference).real() >= 0.0 ? 1 : -1);
  }
  return signs;
}

RiseWindow coherence_rise_window(const Trajectory& traj, double low, double high) {
  const auto& samples = traj.samples;
  const double target = std::abs(final_sample(traj).adiabatic.coherence());
  if (!(target > 0.0)) throw UndefinedMetricError("final coherence vanishes");

  auto amp = [&](std::size_t i) { return std::abs(samples[i].adiabatic.coherence()); };
  auto crossing = [&](std::size_t i, double level) {
    // Linear interpolation between samples i-1 and i.
    const double a = amp(i - 1), b = amp(i);
    const double f = b == a ? 0.0 : (level - a) / (b - a);
    return samples[i - 1].t + f * (samples[i].t - samples[i - 1].t);
  };

  std::size_t hi = 0;
  while (hi < samples.size() && amp(hi) < high * target) ++hi;
  if (hi == 0 || hi == samples.size()) throw UndefinedMetricError("coherence never rises through the window");
  std::size_t lo = hi;
  while (lo > 0 && amp(lo - 1) >= low * target) --lo;
  RiseWindow w;
  w.t_high = crossing(hi, high * target);
  w.t_low = lo == 0 ? samples.front().t : crossing(lo, low * target);
  return w;
}

double phase_matching_wavelength(const TwoLevelIonSystem& system, double intensity_wcm2, int n) {
  if (n < 0) throw std::invalid_argument("photon order n must be non-negative");
  const double f0 = units::intensity_to_field(intensity_wcm2);
  const double d = system.transition_dipole;
  const double alpha = d * d * f0 * f0 / system.gap();
  return units::photon_energy_to_wavelength((system.gap() + alpha) / (2.0 * n + 1.0));
}

std::vector<double> unwrap(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 1; i < out.size(); ++i) {
    double diff = phases[i] - phases[i - 1];
    diff -= two_pi * std::round(diff / two_pi);
    out[i] = out[i - 1] + diff;
  }
  return out;
}

CepResponse cep_response(const TwoLevelIonSystem& system, const LaserPulse& base, const TimeGrid& grid,
                         std::size_t samples, std::size_t workers) {
  if (samples < 2) throw std::invalid_argument("CEP scan needs at least two samples");
  CepResponse out;
  out.ceps.resize(samples);
  out.coherences.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    out.ceps[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
  }
  parallel_for(samples, workers, [&](std::size_t k) {
    LaserPulse pulse = base;
    pulse.cep_rad = out.ceps[k];
    out.coherences[k] = semianalytic_evolve(system, pulse, grid).back().adiabatic.coherence();
  });

  std::vector<double> amps(samples), args(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    amps[k] = std::abs(out.coherences[k]);
    args[k] = std::arg(out.coherences[k]);
  }
  const auto [mn, mx] = std::minmax_element(amps.begin(), amps.end());
  double mean = 0.0;
  for (double a : amps) mean += a;
  mean /= static_cast<double>(samples);
  out.amplitude_variation = mean > 0.0 ? (*mx - *mn) / mean : 0.0;

  const std::vector<double> phase = unwrap(args);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    sx += out.ceps[k];
    sy += phase[k];
    sxx += out.ceps[k] * out.ceps[k];
    sxy += out.ceps[k] * phase[k];
  }
  const double m = static_cast<double>(samples);
  out.phase_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

Diagnostics diagnostics(const TwoLevelIonSystem& system, const LaserPulse& pulse) {
  const PulseParameters p = derive_pulse_parameters(pulse);
  Diagnostics d;
  d.gamma_e = p.omega / system.gap();
  d.keldysh = p.peak_field > 0.0 ? p.omega * system.channel_1.kappa() / p.peak_field
                                 : std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace ionwake
