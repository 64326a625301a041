#include <gtest/gtest.h>

#include <cmath>

#include "gaugeband/tunneling.hpp"
#include "test_potentials.hpp"

using namespace gaugeband;
using namespace gaugeband::testing;

namespace {

std::vector<WidthSample> Synthetic(const std::vector<double>& hs, double S, double eta, double noise) {
  std::vector<WidthSample> out;
  for (size_t i = 0; i < hs.size(); ++i) {
    const double h = hs[i];
    out.push_back({h, eta * std::sqrt(h) * std::exp(-S / h) * (1.0 + noise * (i % 2 ? -1.0 : 1.0))});
  }
  return out;
}

const std::vector<double> kHs{0.6, 0.5, 0.45, 0.4, 0.35, 0.3, 0.25};

}  // namespace

TEST(DirichletGround, FreeFullForm) {
  const PauliPotential p = Make(Lattice::Cubic(1), {}, {}, {}, {{{0, 0}, 1.0}});
  const double h = 0.5, L = 1.3;
  const DirichletResult d = DirichletGround(p, h, L, 512, DirichletForm::kFull);
  EXPECT_NEAR(d.lambda, h * h * M_PI * M_PI / (4.0 * L * L) - 1.0, 1e-8);
  ASSERT_EQ(d.raw.size(), 3u);
  EXPECT_GT(std::abs(d.raw[0] - d.lambda), std::abs(d.raw[2] - d.lambda));
}

TEST(DirichletGround, FreeScalarGroundState) {
  const PauliPotential p = Make(Lattice::Cubic(1), {}, {}, {}, {{{0, 0}, 1.0}});
  const double h = 0.5, L = 1.0;
  const DirichletResult d = DirichletGround(p, h, L, 512, DirichletForm::kScalar11);
  EXPECT_NEAR(d.lambda, h * h * M_PI * M_PI / 4.0 - 1.0, 1e-8);
  ASSERT_EQ(d.ground_state.size(), d.x.size());
  double norm = 0.0;
  for (size_t i = 0; i < d.x.size(); ++i) {
    norm += d.ground_state[i] * d.ground_state[i];
    EXPECT_GT(d.ground_state[i], 0.0);
  }
  EXPECT_NEAR(norm, 1.0, 1e-12);
  const size_t mid = d.x.size() / 2;
  EXPECT_NEAR(d.ground_state[mid / 2] / d.ground_state[mid], std::cos(M_PI * d.x[mid / 2] / 2.0) / std::cos(M_PI * d.x[mid] / 2.0), 1e-4);
}

TEST(DirichletGround, PotentialALiesAboveTheBand) {
  const PauliPotential pa = PotentialA();
  const double h = 0.4;
  const double top = SweepBands(DirectModel(pa, 64), h, 17, 1).stats[0].max;
  const DirichletResult d = DirichletGround(pa, h, 0.9 * M_PI, 512, DirichletForm::kFull);
  EXPECT_GT(d.lambda, top);
  EXPECT_LT(d.lambda - top, 1e-4);
}

TEST(DirichletGround, BadParametersRejected) {
  EXPECT_THROW(DirichletGround(PotentialA(), 0.0, 1.0, 64, DirichletForm::kFull), Error);
  EXPECT_THROW(DirichletGround(PotentialC(), 0.3, 1.0, 64, DirichletForm::kFull), Error);
}

TEST(FitWidthLaw, RecoversExactModel) {
  const WidthFit f = FitWidthLaw(Synthetic(kHs, 5.0, 2.0, 0.0));
  EXPECT_NEAR(f.S_fit, 5.0, 1e-10);
  EXPECT_NEAR(f.eta0_fit, 2.0, 1e-9);
  EXPECT_TRUE(f.half_power_preferred);
  EXPECT_TRUE(f.exponential_regime);
}

TEST(FitWidthLaw, StableUnderNoise) {
  const WidthFit f = FitWidthLaw(Synthetic(kHs, 5.0, 2.0, 0.1));
  EXPECT_NEAR(f.S_fit / 5.0, 1.0, 0.03);
  EXPECT_TRUE(f.exponential_regime);
}

TEST(FitWidthLaw, PowerLawIsNotExponential) {
  std::vector<WidthSample> s;
  for (double h : {0.1, 0.08, 0.06, 0.05, 0.04}) s.push_back({h, h * h * h});
  EXPECT_FALSE(FitWidthLaw(s).exponential_regime);
}

TEST(FitWidthLaw, TooFewSamplesInWindow) {
  EXPECT_THROW(FitWidthLaw(Synthetic({0.6, 0.5, 0.4}, 5.0, 2.0, 0.0)), Error);
}

TEST(WidthScan, PotentialAWidthsDecrease) {
  const auto s = WidthScan(PotentialA(), {0.6, 0.5, 0.4, 0.3}, 9, 48);
  ASSERT_EQ(s.size(), 4u);
  for (size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i].width, s[i - 1].width);
}

TEST(WidthScan, NoiseFloorDropsSamples) {
  std::vector<std::string> warnings;
  const auto s = WidthScan(PotentialB(), {0.6, 0.15}, 9, 48, &warnings);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Chi1Profile, ShapeAndDerivative) {
  const Chi1Profile c = Chi1Profile::Default(8.0);
  EXPECT_DOUBLE_EQ(c.s_a, 4.5);
  EXPECT_DOUBLE_EQ(c.s_b, 5.0);
  EXPECT_EQ(c(4.0), 1.0);
  EXPECT_EQ(c(5.5), 0.0);
  EXPECT_NEAR(c(4.75), 0.5, 1e-15);
  for (double s = 4.55; s < 5.0; s += 0.05) {
    const double fd = (c(s + 1e-6) - c(s - 1e-6)) / 2e-6;
    EXPECT_LE(c.Derivative(s), 0.0);
    EXPECT_NEAR(c.Derivative(s), fd, 1e-5);
  }
}

TEST(HoppingCoefficient1D, PotentialAPredictsWidth) {
  const PauliPotential pa = PotentialA();
  const TorusGrid grid(pa.lattice(), 256);
  const WellData well = FindWell(pa, grid);
  const GaugeBundle gb = CoulombTransform(InducedGauge(BuildUnitary(pa, grid), pa));
  const TransportSolution1D ts(pa, well, gb, 0.95 * kTwoPi, 3);
  const double S0 = 4.0 * std::sqrt(2.0);
  const DirectModel model(pa, 64);
  double prev = 1e300;
  for (double h : {0.35, 0.3}) {
    const double width = SweepBands(model, h, 17, 1).stats[0].width;
    const HoppingResult a = HoppingCoefficient1D(pa, well, ts, S0, h, Chi1Profile::Default(S0));
    const HoppingResult b =
        HoppingCoefficient1D(pa, well, ts, S0, h, Chi1Profile::FromMargins(S0, 0.05 * S0, 0.4 * S0));
    const double err = std::abs(std::log(a.predicted_width / width));
    EXPECT_LE(err, std::log(2.0));
    EXPECT_LT(err, prev);
    prev = err;
    EXPECT_NEAR(std::abs(b.rho_tot) / std::abs(a.rho_tot), 1.0, 0.2);
    EXPECT_NEAR(a.rho_tot.imag(), 0.0, 1e-12 * std::abs(a.rho_tot));
    EXPECT_LT(a.window_lo, a.window_hi);
  }
}

TEST(HoppingCoefficient1D, RejectsBadSupport) {
  const PauliPotential pa = PotentialA();
  const TorusGrid grid(pa.lattice(), 256);
  const WellData well = FindWell(pa, grid);
  const GaugeBundle gb = CoulombTransform(InducedGauge(BuildUnitary(pa, grid), pa));
  const TransportSolution1D ts(pa, well, gb, 0.95 * kTwoPi, 3);
  const double S0 = 4.0 * std::sqrt(2.0);
  EXPECT_THROW(HoppingCoefficient1D(pa, well, ts, S0, 0.3, Chi1Profile{0.3 * S0, 0.6 * S0}), Error);
  EXPECT_THROW(HoppingCoefficient1D(pa, well, ts, S0, 0.3, Chi1Profile{0.6 * S0, 0.8 * S0}), Error);
}
