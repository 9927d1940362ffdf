#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ionwake/analysis.hpp"

namespace ionwake {
namespace {

LaserPulse pulse(double wavelength, double intensity, double fwhm, double cep = 0.0) {
  LaserPulse p;
  p.wavelength_nm = wavelength;
  p.peak_intensity_wcm2 = intensity;
  p.fwhm_fs = fwhm;
  p.cep_rad = cep;
  return p;
}

LaserPulse single_cycle(double wavelength, double intensity, double cep = 0.0) {
  return pulse(wavelength, intensity, single_cycle_duration(wavelength), cep);
}

// Hand-built trajectory with prescribed field signs and coherences.
Trajectory synthetic(const std::vector<double>& fields, const std::vector<Complex>& values) {
  Trajectory t(TimeGrid(0.0, static_cast<double>(fields.size() - 1), fields.size()), Propagator::semianalytic);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    Sample s;
    s.t = static_cast<double>(i);
    s.field = fields[i];
    s.buildup = values[i];
    s.adiabatic.rho(1, 0) = values[i];
    s.adiabatic.rho(0, 1) = std::conj(values[i]);
    t.samples.push_back(s);
  }
  return t;
}

TEST(QsaError, SingleCycleNearInfraredWithinTenPercent) {
  const auto s = n2_preset();
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const double err = qsa_error(s, lp, default_grid(s, lp));
  EXPECT_LT(std::abs(err), 10.0);
  EXPECT_LT(err, 0.0);
}

TEST(QsaError, LongMidInfraredPulseIsAccurate) {
  const auto s = n2_preset();
  const LaserPulse lp = pulse(3200.0, 2e14, 30.0);
  EXPECT_LT(std::abs(qsa_error(s, lp, default_grid(s, lp))), 2.0);
}

TEST(QsaError, UndefinedWithoutExcitation) {
  const auto s = n2_preset();
  const LaserPulse dark = pulse(1030.0, 0.0, 10.0);
  EXPECT_THROW(qsa_error(s, dark, default_grid(s, dark)), UndefinedMetricError);
  const LaserPulse faint = pulse(1030.0, 1e12, 10.0);
  EXPECT_THROW(qsa_error(s, faint, default_grid(s, faint)), UndefinedMetricError);
}

TEST(QsaError, SignedRelativeDifference) {
  Trajectory ref(TimeGrid(0.0, 1.0, 2), Propagator::reference);
  Trajectory semi(TimeGrid(0.0, 1.0, 2), Propagator::semianalytic);
  ref.samples.resize(2);
  semi.samples.resize(2);
  ref.samples[1].diabatic.rho(1, 1) = 0.02;
  semi.samples[1].adiabatic.rho(1, 1) = 0.019;
  EXPECT_NEAR(qsa_error(ref, semi), -5.0, 1e-12);
}

TEST(PopulationSplit, UncoupledSystemIsAllDirect) {
  auto s = n2_preset();
  s.transition_dipole = 0.0;
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const auto d = decompose_population(s, lp, default_grid(s, lp));
  EXPECT_EQ(d.shake_up, 0.0);
  EXPECT_DOUBLE_EQ(d.direct, 1.0);
  EXPECT_EQ(d.tic_transfer, 0.0);
}

TEST(PopulationSplit, ClosedSecondChannelIsAllShakeUp) {
  auto s = n2_preset();
  s.channel_2.subchannels[0].structure_coefficient = 0.0;
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const auto d = decompose_population(s, lp, default_grid(s, lp));
  EXPECT_DOUBLE_EQ(d.shake_up, 1.0);
  EXPECT_EQ(d.direct, 0.0);
  EXPECT_EQ(d.tic_transfer, 0.0);
}

TEST(PopulationSplit, TermsSumToFinalPopulation) {
  const auto s = n2_preset();
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  const auto d = decompose_population(traj);
  EXPECT_NEAR(d.total(), traj.back().adiabatic.population(1), 1e-12 * d.total());
  EXPECT_NEAR(d.shake_up + d.direct + d.tic_transfer, 1.0, 1e-12);
  // All three mechanisms contribute with the same sign here.
  EXPECT_GT(d.shake_up, 0.0);
  EXPECT_GT(d.direct, 0.0);
  EXPECT_GT(d.tic_transfer, 0.0);
}

TEST(PopulationSplit, TrigTermsMatchSecondOrderForm) {
  const auto s = n2_preset();
  for (double f : {0.02, 0.03, 0.05}) {
    const SourceMatrix gd = source_matrix_diabatic(s, 1.0, f);
    const double r = s.transition_dipole * f / s.gap();
    const double x = 2.0 * r;
    const PopulationTerms t = population_source_terms(gd, mixing_angle(s, f));
    const double exact = t.shake_up + t.direct + t.tic_transfer;
    const double approx = population_source_second_order(gd, r);
    EXPECT_LE(std::abs(exact - approx), x * x * x * gd.entries.trace().real());
  }
}

TEST(CoherenceSplit, PartsSumToFinalCoherence) {
  const auto s = n2_preset();
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  const auto c = decompose_coherence(traj);
  const Complex fin = traj.back().adiabatic.coherence();
  EXPECT_LE(std::abs(c.total() - fin), 1e-8 * std::abs(fin));
  EXPECT_GT(c.ti_over_tic(), 1.0);
}

TEST(CoherenceSplit, RatioUndefinedWithoutTicPart) {
  auto s = n2_preset();
  s.channel_1.subchannels[0].structure_coefficient = 0.0;
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const auto c = decompose_coherence(s, lp, default_grid(s, lp));
  EXPECT_EQ(std::abs(c.tic_driven), 0.0);
  EXPECT_THROW(c.ti_over_tic(), UndefinedMetricError);
}

TEST(WeakCoupling, ParametersForN2) {
  const auto s = n2_preset();
  const LaserPulse lp = pulse(1573.0, 2e14, 30.0);
  const auto w = weak_coupling_params(s, lp);
  EXPECT_NEAR(units::au_to_ev(w.alpha), 0.7417629039693839, 1e-12);
  const double tau = units::fs_to_au(30.0);
  EXPECT_NEAR(w.eta0, 0.25 * w.alpha * tau * std::sqrt(std::numbers::pi / std::numbers::ln2), 1e-12);
  EXPECT_EQ(w.n_photon, 2);
}

TEST(WeakCoupling, LongWeakPulseAgreesWithSemianalytic) {
  const auto s = n2_preset();
  const LaserPulse lp = pulse(1644.0, 0.2e14, 30.0);
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  const Complex exact = traj.back().adiabatic.coherence();
  const Complex weak = weak_coupling_coherence(s, lp, traj);
  EXPECT_LE(std::abs(weak - exact), 0.05 * std::abs(exact));
}

TEST(PhaseMatching, ClosedFormWavelengths) {
  const auto s = n2_preset();
  EXPECT_NEAR(phase_matching_wavelength(s, 2e14, 2), 1572.699842945234, 1e-9);
  EXPECT_NEAR(phase_matching_wavelength(s, 0.0, 2), 1937.2530937499998, 1e-9);
  EXPECT_NEAR(phase_matching_wavelength(s, 0.0, 0), 1937.2530937499998 / 5.0, 1e-9);
  EXPECT_THROW(phase_matching_wavelength(s, 2e14, -1), std::invalid_argument);
}

TEST(Cep, FullTurnIsIdentity) {
  const auto s = n2_preset();
  const LaserPulse a = single_cycle(1030.0, 2e14, 0.4);
  const LaserPulse b = single_cycle(1030.0, 2e14, 0.4 + 2.0 * std::numbers::pi);
  const TimeGrid grid = default_grid(s, a);
  const Complex ca = semianalytic_evolve(s, a, grid).back().adiabatic.coherence();
  const Complex cb = semianalytic_evolve(s, b, grid).back().adiabatic.coherence();
  EXPECT_LE(std::abs(ca - cb), 1e-9 * std::abs(ca));
}

TEST(Cep, HalfTurnFlipsCoherenceSign) {
  // F -> -F flips the ungerade amplitude and the mixing angle but leaves the
  // populations and the adiabatic splitting unchanged.
  const auto s = n2_preset();
  const LaserPulse a = single_cycle(1500.0, 2e14, 0.3);
  const LaserPulse b = single_cycle(1500.0, 2e14, 0.3 + std::numbers::pi);
  const TimeGrid grid = default_grid(s, a);
  const Sample fa = semianalytic_evolve(s, a, grid).back();
  const Sample fb = semianalytic_evolve(s, b, grid).back();
  EXPECT_LE(std::abs(fa.adiabatic.coherence() + fb.adiabatic.coherence()), 1e-9 * std::abs(fa.adiabatic.coherence()));
  EXPECT_NEAR(fa.adiabatic.population(1), fb.adiabatic.population(1), 1e-9 * fa.adiabatic.population(1));
}

TEST(Cep, ResponseSamplesTheCircle) {
  const auto s = n2_preset();
  const LaserPulse lp = single_cycle(1644.0, 2e14);
  const auto r = cep_response(s, lp, default_grid(s, lp), 8, 2);
  ASSERT_EQ(r.ceps.size(), 8u);
  EXPECT_EQ(r.ceps[0], 0.0);
  EXPECT_NEAR(r.ceps[4], std::numbers::pi, 1e-15);
  // The half-turn symmetry above makes opposite CEPs exact negatives.
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LE(std::abs(r.coherences[k] + r.coherences[k + 4]), 1e-9 * std::abs(r.coherences[k]));
  }
  EXPECT_GE(r.amplitude_variation, 0.0);
  EXPECT_THROW(cep_response(s, lp, default_grid(s, lp), 1), std::invalid_argument);
}

TEST(Diagnostics, KeldyshAndExcitationParameter) {
  const auto s = n2_preset();
  const auto d = diagnostics(s, pulse(1030.0, 2e14, 30.0));
  EXPECT_NEAR(d.keldysh, 0.6274581967946625, 1e-12);
  EXPECT_NEAR(d.gamma_e, 0.37616564927184465, 1e-12);
  EXPECT_TRUE(std::isinf(diagnostics(s, pulse(1030.0, 0.0, 30.0)).keldysh));
}

TEST(Buildup, PeakSignsRelativeToStrongest) {
  // Four half-cycles; peaks -0.5i, -2i, 1.9i, -0.1i. The strongest (-2i) sets
  // the reference direction; the last peak falls below the threshold.
  const std::vector<double> f{1, 1, 1, -1, -1, -1, 1, 1, 1, -1, -1, -1};
  const std::vector<Complex> v{{0, -0.1}, {0, -0.5}, {0, -0.2}, {0, -1}, {0, -2}, {0, -0.5}, {0, 1.9}, {0, 1}, 0.0, 0.0, {0, -0.1}, 0.0};
  const Trajectory t = synthetic(f, v);
  const auto peaks = half_cycle_peaks(t);
  ASSERT_EQ(peaks.size(), 4u);
  EXPECT_EQ(peaks[1], Complex(0, -2));
  EXPECT_EQ(buildup_peak_signs(t, 0.1), (std::vector<int>{1, 1, -1}));
  EXPECT_EQ(buildup_peak_signs(t, 0.01), (std::vector<int>{1, 1, -1, 1}));
}

TEST(Buildup, FunctionIsSampledIntegrand) {
  const auto s = n2_preset();
  const LaserPulse lp = single_cycle(1030.0, 2e14);
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  const auto b = buildup_function(traj);
  ASSERT_EQ(b.size(), traj.samples.size());
  for (std::size_t i = 0; i < b.size(); i += 37) {
    const Sample& smp = traj.samples[i];
    EXPECT_EQ(b[i], smp.source_a.entries(1, 0) * std::polar(1.0, smp.phase));
  }
}

TEST(RiseWindow, LinearRamp) {
  std::vector<double> f(21, 1.0);
  std::vector<Complex> v(21);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::polar(std::min(1.0, 0.1 * static_cast<double>(i)), 0.3);
  const RiseWindow w = coherence_rise_window(synthetic(f, v));
  EXPECT_NEAR(w.t_low, 1.0, 1e-12);
  EXPECT_NEAR(w.t_high, 9.0, 1e-12);
  EXPECT_NEAR(w.duration(), 8.0, 1e-12);
}

TEST(RiseWindow, UsesLastLowCrossingBeforeRise) {
  // A transient bump that decays again must not anchor the window.
  const std::vector<double> f(12, 1.0);
  const std::vector<Complex> v{0.0, 0.5, 0.05, 0.0, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.0, 1.0};
  const RiseWindow w = coherence_rise_window(synthetic(f, v));
  EXPECT_NEAR(w.t_low, 4.5, 1e-12);
  EXPECT_NEAR(w.t_high, 8.5, 1e-12);
}

TEST(RiseWindow, UndefinedForVanishingCoherence) {
  const std::vector<double> f(5, 1.0);
  const std::vector<Complex> v(5, 0.0);
  EXPECT_THROW(coherence_rise_window(synthetic(f, v)), UndefinedMetricError);
}

TEST(Unwrap, RemovesBranchJumps) {
  const std::vector<double> wrapped{3.0, -3.0, -2.5, 2.9, 2.0};
  const auto u = unwrap(wrapped);
  EXPECT_NEAR(u[1], -3.0 + 2.0 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(u[3], 2.9 + 0.0, 1e-12);
  for (std::size_t i = 1; i < u.size(); ++i) EXPECT_LE(std::abs(u[i] - u[i - 1]), std::numbers::pi);
}

}  // namespace
}  // namespace ionwake
