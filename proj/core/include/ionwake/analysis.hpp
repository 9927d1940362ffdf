#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "ionwake/adiabatic.hpp"
#include "ionwake/reference.hpp"

namespace ionwake {

class UndefinedMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Weak-coupling quantities: peak ac Stark shift alpha = d^2 F0^2 / Delta,
/// overall phase eta0 = (alpha tau / 4) sqrt(pi / ln 2), and the nearest odd
/// photon order n with (2n+1) omega ~ Delta + alpha.
struct WeakCouplingParams {
  double alpha = 0.0;
  double eta0 = 0.0;
  int n_photon = 0;
};

WeakCouplingParams weak_coupling_params(const TwoLevelIonSystem& system, const LaserPulse& pulse);

/// Fractions of the final excited adiabatic population from the three exact
/// trig terms of Gamma^a_22: shake-up (Gamma^d_11 sin^2), direct
/// (Gamma^d_22 cos^2) and TIC-induced transfer (-Re Gamma^d_21 sin 2 theta).
/// Fractions are signed contributions divided by their sum; `absolute` holds
/// the integrated terms themselves, whose sum is rho^a_22(t_f).
struct PopulationDecomposition {
  double shake_up = 0.0;
  double direct = 0.0;
  double tic_transfer = 0.0;
  std::array<double, 3> absolute{};
  double total() const { return absolute[0] + absolute[1] + absolute[2]; }
};

/// Final adiabatic coherence split into the TI-driven part,
/// (Gamma^d_22 - Gamma^d_11) sin(2 theta)/2, and the TIC-driven part,
/// Gamma^d_21 cos^2 - Gamma^d_12 sin^2, each propagated with the dynamic phase.
struct CoherenceDecomposition {
  Complex ti_driven{};
  Complex tic_driven{};
  Complex total() const { return ti_driven + tic_driven; }
  double ti_over_tic() const;
};

struct Diagnostics {
  double keldysh = 0.0;  // omega sqrt(2 Ip1) / F0
  double gamma_e = 0.0;  // omega / Delta
};

struct PopulationTerms {
  double shake_up = 0.0;
  double direct = 0.0;
  double tic_transfer = 0.0;
};

struct CoherenceTerms {
  Complex ti_driven{};
  Complex tic_driven{};
};

/// Exact trig split of Gamma^a_22 and Gamma^a_21 at one sample.
PopulationTerms population_source_terms(const SourceMatrix& diabatic, double theta);
CoherenceTerms coherence_source_terms(const SourceMatrix& diabatic, double theta);

/// Second-order (in 2 Omega / Delta) forms of Gamma^a_22 and Gamma^a_21.
double population_source_second_order(const SourceMatrix& diabatic, double omega_over_delta);
Complex coherence_source_second_order(const SourceMatrix& diabatic, double omega_over_delta);

/// Signed QSA error in percent, [rho^a_22(tf) - rho^d_22(tf)] / rho^d_22(tf) * 100.
double qsa_error(const Trajectory& reference, const Trajectory& semianalytic);
double qsa_error(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid,
                 const Tolerances& tol = {});

PopulationDecomposition decompose_population(const Trajectory& semianalytic);
PopulationDecomposition decompose_population(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                             const TimeGrid& grid);

CoherenceDecomposition decompose_coherence(const Trajectory& semianalytic);
CoherenceDecomposition decompose_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse,
                                           const TimeGrid& grid);

/// Long-pulse weak-coupling coherence at the end of the grid, with time
/// measured from the pulse center:
///   exp(-i Delta t) int Gamma^a_21(t') exp(i[(Delta + alpha) t' - eta0]) dt'.
Complex weak_coupling_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse, const Trajectory& semianalytic);
Complex weak_coupling_coherence(const TwoLevelIonSystem& system, const LaserPulse& pulse, const TimeGrid& grid);

/// Integrand Gamma^a_21(t') exp(i Phi(t')) of the coherence integral.
std::vector<Complex> buildup_function(const Trajectory& trajectory);

/// Buildup value with the largest magnitude inside each field half-cycle
/// (the span between consecutive sign changes of the field).
std::vector<Complex> half_cycle_peaks(const Trajectory& trajectory);

/// Signs of the half-cycle peaks after rotating the strongest peak onto the
/// positive real axis. Peaks weaker than `threshold` times the strongest are
/// dropped.
std::vector<int> buildup_peak_signs(const Trajectory& trajectory, double threshold = 0.1);

struct RiseWindow {
  double t_low = 0.0;
  double t_high = 0.0;
  double duration() const { return t_high - t_low; }
};

/// Central rise window of |rho^a_21|: t_high is the first time the amplitude
/// reaches `high` of its final value, t_low the last time before t_high that
/// it was below `low` of the final value.
RiseWindow coherence_rise_window(const Trajectory& semianalytic, double low = 0.1, double high = 0.9);

/// Closed-form wavelength (nm) solving Delta + alpha(I) = (2n+1) omega.
double phase_matching_wavelength(const TwoLevelIonSystem& system, double intensity_wcm2, int n);

struct CepResponse {
  double amplitude_variation = 0.0;  // (max - min) / mean of |rho^a_21(tf)|
  double phase_slope = 0.0;          // least-squares d arg(rho^a_21) / d cep
  std::vector<double> ceps;
  std::vector<Complex> coherences;
};

/// Runs the semi-analytical model for `samples` equally spaced CEPs in
/// [0, 2 pi) on a common grid.
CepResponse cep_response(const TwoLevelIonSystem& system, const LaserPulse& base, const TimeGrid& grid,
                         std::size_t samples = 16, std::size_t workers = 1);

Diagnostics diagnostics(const TwoLevelIonSystem& system, const LaserPulse& pulse);

/// Phase unwrapping (successive differences folded into (-pi, pi]).
std::vector<double> unwrap(std::span<const double> phases);

}  // namespace ionwake
