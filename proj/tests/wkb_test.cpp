#include <gtest/gtest.h>

#include <cmath>

#include "gaugeband/bloch.hpp"
#include "gaugeband/fitting.hpp"
#include "gaugeband/wkb.hpp"
#include "test_potentials.hpp"

using namespace gaugeband;
using namespace gaugeband::testing;

namespace {

struct Prepared {
  PauliPotential pot;
  WellData well;
  GaugeBundle gb;
};

Prepared Prepare(const PauliPotential& p, int P) {
  const TorusGrid grid(p.lattice(), P);
  const WellData w = FindWell(p, grid);
  return {p, w, CoulombTransform(InducedGauge(BuildUnitary(p, grid), p))};
}

// f0p''(0) for PotentialB from closed-form Veff = 5 - 2 cos x - sqrt(5 + 4 cos x):
// g = (e1 - phi'') / (2 phi') is odd, so f0p''(0) = g'(0) ~ g(d) / d.
double PotentialBSecondDerivative(double d) {
  const double e1 = 2.0 / std::sqrt(3.0);
  const double s = std::sqrt(5.0 + 4.0 * std::cos(d));
  const double veff = 5.0 - 2.0 * std::cos(d) - s;
  const double dveff = 2.0 * std::sin(d) + 2.0 * std::sin(d) / s;
  const double phip = std::sqrt(veff);
  const double phipp = dveff / (2.0 * phip);
  return (e1 - phipp) / (2.0 * phip) / d;
}

}  // namespace

TEST(HarmonicLevels, OneDimensional) {
  const auto mu = HarmonicLevels(Vec::Constant(1, 0.5), 3);
  ASSERT_EQ(mu.size(), 3u);
  EXPECT_DOUBLE_EQ(mu[0], 0.5);
  EXPECT_DOUBLE_EQ(mu[1], 1.5);
  EXPECT_DOUBLE_EQ(mu[2], 2.5);
}

TEST(HarmonicLevels, TwoDimensionalMultiplicity) {
  Vec tau(2);
  tau << 1.0, 1.0;
  const auto mu = HarmonicLevels(tau, 4);
  EXPECT_EQ(mu, (std::vector<double>{2.0, 4.0, 4.0, 6.0}));
}

TEST(WKBCoefficients, PotentialA) {
  const Prepared p = Prepare(PotentialA(), 256);
  const WKBCoefficients c = ComputeWKBCoefficients(p.well, p.gb);
  EXPECT_NEAR(c.e0, -2.0, 1e-12);
  EXPECT_NEAR(c.e1, 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(c.e2_simplified, 0.0, 1e-12);
}

TEST(WKBCoefficients, PotentialBHasNoSimplifiedCorrection) {
  const Prepared p = Prepare(PotentialB(), 256);
  const WKBCoefficients c = ComputeWKBCoefficients(p.well, p.gb);
  EXPECT_NEAR(c.e0, -3.0, 1e-12);
  EXPECT_NEAR(c.e1, 2.0 / std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(c.e2_simplified, 0.0, 1e-10);
}

TEST(WKBCoefficients, PotentialCSumsFrequencies) {
  const Prepared p = Prepare(PotentialC(), 64);
  const WKBCoefficients c = ComputeWKBCoefficients(p.well, p.gb, 3);
  EXPECT_NEAR(c.e1, std::sqrt(2.0), 1e-10);
  ASSERT_EQ(c.mu.size(), 3u);
  EXPECT_NEAR(c.mu[1], c.mu[2], 1e-12);
}

TEST(TransportSolution1D, PotentialAAmplitude) {
  // f0p = 1 / cos(x / 4) solves 2 phi' f' = (e1 - phi'') f for phi' = sqrt(2) sin(x / 2).
  const Prepared p = Prepare(PotentialA(), 256);
  const TransportSolution1D ts(p.pot, p.well, p.gb, 2.0, 5);
  for (double x : {0.05, 0.5, -1.2, 2.0})
    EXPECT_NEAR(std::abs(ts.F0p(x) - 1.0 / std::cos(x / 4.0)), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(ts.F1m(0.7)), 0.0, 1e-12);
  EXPECT_NEAR(ts.Phi(1.0), 4.0 * std::sqrt(2.0) * std::pow(std::sin(0.25), 2), 1e-10);
}

TEST(TransportSolution1D, PotentialBCouplingAmplitude) {
  const Prepared p = Prepare(PotentialB(), 256);
  const TransportSolution1D ts(p.pot, p.well, p.gb, 2.0, 5);
  // w rotates in the (w1, w3) plane by angle atan(sin x / (2 + cos x)); its rate at 0 is 1/3
  // and the eigenvector turns at half that rate.
  EXPECT_NEAR(std::abs(ts.A21(0.0)), 1.0 / 6.0, 1e-10);
  EXPECT_NEAR(ts.a11_at_0(), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ts.f0p()[2] - 1.0), 0.0, 1e-12);
}

TEST(E2Full1D, PotentialA) {
  const Prepared p = Prepare(PotentialA(), 256);
  EXPECT_NEAR(E2Full1D(TransportSolution1D(p.pot, p.well, p.gb, 2.0, 3)), -1.0 / 16.0, 1e-9);
}

TEST(E2Full1D, PotentialB) {
  const double f2 = 45.0 / 864.0;
  EXPECT_NEAR(PotentialBSecondDerivative(1e-3), f2, 1e-5);
  const Prepared p = Prepare(PotentialB(), 256);
  EXPECT_NEAR(E2Full1D(TransportSolution1D(p.pot, p.well, p.gb, 2.0, 3)), -f2 + 1.0 / 36.0, 1e-8);
}

TEST(E2Full1D, AgreesWithSpectrum) {
  const Prepared p = Prepare(PotentialA(), 256);
  const DirectModel model(p.pot, 64);
  const std::vector<double> hs{0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1};
  std::vector<double> q;
  for (double h : hs) {
    const double l = LowestEigenvalues(model.Assemble(h, Vec::Zero(1)), 1)[0];
    q.push_back((l - p.well.E0 - h * p.well.tau[0]) / (h * h));
  }
  const Extrapolation e = Richardson(hs, q, 3);
  EXPECT_NEAR(e.limit, -1.0 / 16.0, 1e-4);
}
