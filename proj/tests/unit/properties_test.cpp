#include <gtest/gtest.h>

#include <cmath>
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

TwoLevelIonSystem scaled(TwoLevelIonSystem s, double factor) {
  for (auto* ch : {&s.channel_1, &s.channel_2}) {
    for (auto& sub : ch->subchannels) sub.structure_coefficient *= factor;
  }
  return s;
}

// Intensity at which (2 Omega0 / Delta)^2 equals x2.
double intensity_for_coupling(const TwoLevelIonSystem& s, double x2) {
  const double f0 = std::sqrt(x2) * s.gap() / (2.0 * s.transition_dipole);
  return units::field_to_intensity(f0);
}

struct Scenario {
  double wavelength;
  double intensity;
  double fwhm;  // 0 = single cycle
  double cep;
};

const std::vector<Scenario> kScenarios = {
    {1030.0, 2e14, 0.0, 0.0},
    {1644.0, 1.5e14, 0.0, 1.1},
    {1341.0, 2e14, 12.0, 0.0},
    {2400.0, 1e14, 20.0, 2.5},
};

LaserPulse make(const Scenario& sc) {
  return pulse(sc.wavelength, sc.intensity, sc.fwhm > 0 ? sc.fwhm : single_cycle_duration(sc.wavelength), sc.cep);
}

class DensityInvariants : public ::testing::TestWithParam<Scenario> {};

TEST_P(DensityInvariants, HoldForBothPropagators) {
  const auto s = n2_preset();
  const LaserPulse lp = make(GetParam());
  const TimeGrid grid = default_grid(s, lp);
  InvariantTolerances tol;
  tol.negative_population = 1e-10;
  tol.positivity = 1e-10;
  for (const Trajectory& traj : {solve_diabatic(s, lp, grid), semianalytic_evolve(s, lp, grid)}) {
    for (const Sample& smp : traj.samples) {
      for (const DensityState* st : {&smp.diabatic, &smp.adiabatic}) {
        const auto v = check_invariants(*st, tol);
        ASSERT_FALSE(v.has_value()) << to_string(traj.mode) << ": " << *v << " at t=" << smp.t;
      }
    }
  }
}

TEST_P(DensityInvariants, SemianalyticPopulationsNeverDecrease) {
  const auto s = n2_preset();
  const LaserPulse lp = make(GetParam());
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      ASSERT_GE(traj.samples[i].adiabatic.population(k), traj.samples[i - 1].adiabatic.population(k));
    }
  }
}

TEST_P(DensityInvariants, CoherenceModulusFixedWhereSourceVanishes) {
  const auto s = n2_preset();
  const LaserPulse lp = make(GetParam());
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const Sample& a = traj.samples[i - 1];
    const Sample& b = traj.samples[i];
    if (a.source_a.entries(1, 0) != Complex{} || b.source_a.entries(1, 0) != Complex{}) continue;
    ASSERT_NEAR(std::abs(b.adiabatic.coherence()), std::abs(a.adiabatic.coherence()),
                1e-15 + 1e-12 * std::abs(a.adiabatic.coherence()));
  }
}

INSTANTIATE_TEST_SUITE_P(N2, DensityInvariants, ::testing::ValuesIn(kScenarios));

TEST(SecondOrder, PopulationSourceWithinFourthPowerOfCoupling) {
  // Sample-wise along a pulse whose peak coupling is (2 Omega0/Delta)^2 = 0.04.
  // The error is measured relative to tr Gamma^d at the sample.
  const auto s = n2_preset();
  const double x2 = 0.04;
  const LaserPulse lp = pulse(1644.0, intensity_for_coupling(s, x2), 30.0);
  const Trajectory traj = semianalytic_evolve(s, lp, default_grid(s, lp));
  std::size_t active = 0;
  for (const Sample& smp : traj.samples) {
    const double trace = smp.source_d.entries.trace().real();
    if (trace == 0.0) continue;
    ++active;
    const double r = s.transition_dipole * smp.field / s.gap();
    const double exact = smp.source_a.entries(1, 1).real();
    const double approx = population_source_second_order(smp.source_d, r);
    ASSERT_LE(std::abs(exact - approx) / trace, x2 * x2) << "t=" << smp.t;
  }
  EXPECT_GT(active, 100u);
}

TEST(SecondOrder, CoherenceSourceErrorIsThirdOrder) {
  // The truncated form drops the -(Gamma22 - Gamma11) x^3 / 4 term of
  // sin(2 theta)/2, so halving x shrinks the error eightfold.
  const auto s = n2_preset();
  SourceMatrix gd;
  gd.entries << 1.0, -0.1, -0.1, 0.02;
  auto error_at = [&](double x) {
    const double field = x * s.gap() / (2.0 * s.transition_dipole);
    const double theta = mixing_angle(s, field);
    const Complex exact = source_matrix_adiabatic(gd, theta).entries(1, 0);
    return std::abs(exact - coherence_source_second_order(gd, x / 2.0));
  };
  for (double x : {0.02, 0.05, 0.1}) {
    EXPECT_NEAR(error_at(x) / error_at(x / 2.0), 8.0, 0.2);
    EXPECT_NEAR(error_at(x), 0.98 * x * x * x / 4.0, 0.1 * x * x * x);
  }
}

TEST(SecondOrder, ExactTrigFormsReproduceAdiabaticSource) {
  const auto s = n2_preset();
  for (double f : {-0.07, -0.03, 0.04, 0.09}) {
    const SourceMatrix gd = source_matrix_diabatic(s, 0.9, f);
    const double theta = mixing_angle(s, f);
    const Matrix2 ga = source_matrix_adiabatic(gd, theta).entries;
    const PopulationTerms p = population_source_terms(gd, theta);
    const CoherenceTerms c = coherence_source_terms(gd, theta);
    const double scale = gd.entries.trace().real();
    EXPECT_NEAR(p.shake_up + p.direct + p.tic_transfer, ga(1, 1).real(), 1e-14 * scale);
    EXPECT_LE(std::abs(c.ti_driven + c.tic_driven - ga(1, 0)), 1e-14 * scale);
  }
}

TEST(QsaScaling, ErrorInsensitiveToOverallRateScale) {
  const auto base = n2_preset();
  for (const LaserPulse& lp : {pulse(1030.0, 2e14, single_cycle_duration(1030.0)), pulse(1500.0, 2e14, 30.0)}) {
    const TimeGrid grid = default_grid(base, lp);
    const double reference = qsa_error(base, lp, grid);
    for (double factor : {0.5, 2.0}) {
      const double err = qsa_error(scaled(base, factor), lp, grid);
      EXPECT_LT(std::abs(err - reference), 2.0) << "scale " << factor << " at " << lp.wavelength_nm << " nm";
    }
  }
}

TEST(Convergence, HalvingTheStepChangesLittle) {
  const auto s = n2_preset();
  for (const LaserPulse& lp : {pulse(1030.0, 2e14, single_cycle_duration(1030.0)), pulse(1644.0, 2e14, 30.0)}) {
    GridPolicy coarse, fine;
    fine.samples_per_period = 2.0 * coarse.samples_per_period;
    const TimeGrid g1 = default_grid(s, lp, coarse);
    const TimeGrid g2 = default_grid(s, lp, fine);
    ASSERT_GT(g2.size(), g1.size());

    const double semi1 = semianalytic_evolve(s, lp, g1).back().adiabatic.population(1);
    const double semi2 = semianalytic_evolve(s, lp, g2).back().adiabatic.population(1);
    EXPECT_LT(std::abs(semi1 - semi2) / semi2, 1e-4);

    const double ref1 = solve_diabatic(s, lp, g1).back().diabatic.population(1);
    const double ref2 = solve_diabatic(s, lp, g2).back().diabatic.population(1);
    EXPECT_LT(std::abs(ref1 - ref2) / ref2, 1e-4);
  }
}

TEST(Convergence, PhaseAtDoubleResolution) {
  const auto s = n2_preset();
  for (const LaserPulse& lp : {pulse(3200.0, 2e14, 30.0), pulse(1030.0, 2e14, single_cycle_duration(1030.0))}) {
    const TimeGrid grid = default_grid(s, lp);
    const double a = std::abs(semianalytic_evolve(s, lp, grid).back().adiabatic.coherence());
    const double b = std::abs(semianalytic_evolve(s, lp, grid, 2).back().adiabatic.coherence());
    EXPECT_LT(std::abs(a - b) / b, 1e-4);
  }
}

TEST(OracleEquivalence, QuasistaticRegionWithinTwentyPercent) {
  // Points inside lambda >= 1200 nm, tau in [5, 100] fs, I in [0.2, 2] x 1e14.
  const auto s = n2_preset();
  struct Point {
    double wavelength, intensity, fwhm;
  };
  const std::vector<Point> points = {
      {1200.0, 2e14, 30.0}, {1500.0, 1e14, 5.0}, {2000.0, 0.5e14, 60.0},
      {3200.0, 2e14, 100.0}, {2600.0, 0.2e14, 30.0}, {1800.0, 1.4e14, 15.0},
  };
  Tolerances tol;
  tol.absolute = 1e-20;  // the 0.2e14 points excite far below the default floor
  for (const Point& p : points) {
    const LaserPulse lp = pulse(p.wavelength, p.intensity, p.fwhm);
    const double err = qsa_error(s, lp, default_grid(s, lp), tol);
    EXPECT_LT(std::abs(err), 20.0) << p.wavelength << " nm, " << p.intensity << " W/cm2, " << p.fwhm << " fs";
  }
}

TEST(PhaseMatching, MonotoneInOrderAndIntensity) {
  const auto s = n2_preset();
  for (double intensity : {0.0, 0.5e14, 2e14}) {
    for (int n = 0; n < 5; ++n) {
      EXPECT_LT(phase_matching_wavelength(s, intensity, n), phase_matching_wavelength(s, intensity, n + 1));
    }
  }
  for (int n = 1; n < 4; ++n) {
    EXPECT_GT(phase_matching_wavelength(s, 0.2e14, n), phase_matching_wavelength(s, 1e14, n));
    EXPECT_GT(phase_matching_wavelength(s, 1e14, n), phase_matching_wavelength(s, 2e14, n));
  }
}

}  // namespace
}  // namespace ionwake
