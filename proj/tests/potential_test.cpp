#include <gtest/gtest.h>

#include <cmath>

#include "gaugeband/potential.hpp"
#include "test_potentials.hpp"

using namespace gaugeband;
using namespace gaugeband::testing;

namespace {

Vec At(double x) { return Vec::Constant(1, x); }
Vec At(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST(TrigPoly, CosineValuesAndDerivatives) {
  const TrigPoly p = Real(Lattice::Cubic(1), {{{0, 0}, 1.0}, {{1, 0}, -0.5}});
  EXPECT_NEAR(p(At(0.0)).real(), 0.0, 1e-15);
  EXPECT_NEAR(p.Gradient(At(0.0))[0].real(), 0.0, 1e-15);
  EXPECT_NEAR(p.Hessian(At(0.0))(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(p(At(M_PI)).real(), 2.0, 1e-15);
}

TEST(TrigPoly, SeparableCosine2D) {
  const TrigPoly p = Real(Lattice::Cubic(2), {{{0, 0}, 2.0}, {{1, 0}, -0.5}, {{0, 1}, -0.5}});
  EXPECT_NEAR(p(At(0.0, 0.0)).real(), 0.0, 1e-15);
  EXPECT_TRUE(p.Hessian(At(0.0, 0.0)).real().isApprox(Mat::Identity(2, 2), 1e-14));
}

TEST(TrigPoly, ConjugatePartnerIsCompleted) {
  const TrigPoly p = Real(Lattice::Cubic(1), {{{2, 0}, cplx(0.3, 0.4)}});
  ASSERT_EQ(p.coeffs().count(Mode{-2, 0}), 1u);
  EXPECT_EQ(p.coeffs().at(Mode{-2, 0}), cplx(0.3, -0.4));
  EXPECT_TRUE(p.IsReal());
  const double x = 0.7;
  EXPECT_NEAR(p(At(x)).real(), 2.0 * (0.3 * std::cos(2 * x) - 0.4 * std::sin(2 * x)), 1e-14);
  EXPECT_NEAR(p(At(x)).imag(), 0.0, 1e-15);
}

TEST(TrigPoly, NonConjugatePairRejected) {
  EXPECT_THROW(Real(Lattice::Cubic(1), {{{1, 0}, 1.0}, {{-1, 0}, 2.0}}), Error);
  EXPECT_THROW(Real(Lattice::Cubic(1), {{{0, 0}, cplx(1.0, 1.0)}}), Error);
}

TEST(PauliEval, ConstantW) {
  const PauliSample s = PauliEval(PotentialA(), At(0.0));
  EXPECT_NEAR(s.V(0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(s.V(1, 1).real(), -2.0, 1e-15);
  EXPECT_NEAR(std::abs(s.V(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(s.norm_w, 2.0, 1e-15);
  EXPECT_NEAR(s.lower, -2.0, 1e-15);
}

TEST(PauliEval, VaryingW) {
  const PauliPotential pb = PotentialB();
  const PauliSample s0 = PauliEval(pb, At(0.0));
  EXPECT_NEAR(s0.V(0, 0).real(), 3.0, 1e-14);
  EXPECT_NEAR(s0.V(1, 1).real(), -3.0, 1e-14);
  EXPECT_NEAR(s0.norm_w, 3.0, 1e-14);
  EXPECT_NEAR(s0.lower, -3.0, 1e-14);
  const PauliSample s1 = PauliEval(pb, At(M_PI));
  EXPECT_NEAR(s1.norm_w, 1.0, 1e-14);
  EXPECT_NEAR(s1.lower, 3.0, 1e-14);
  // |w|^2 = 5 + 4 cos x everywhere
  for (double x : {0.3, 1.7, 4.0}) EXPECT_NEAR(pb.NormW(At(x)), std::sqrt(5.0 + 4.0 * std::cos(x)), 1e-14);
}

TEST(PauliEval, VanishingWThrows) {
  const Lattice L = Lattice::Cubic(1);
  // w = (sin x, 0, 0) is exactly zero at x = 0
  const PauliPotential p = Make(L, {}, {{{1, 0}, cplx(0.0, -0.5)}}, {}, {});
  EXPECT_THROW(PauliEval(p, At(0.0)), Error);
}

TEST(FindWell, PotentialA) {
  const WellData w = FindWell(PotentialA(), TorusGrid(Lattice::Cubic(1), 256));
  EXPECT_NEAR(w.E0, -2.0, 1e-12);
  EXPECT_NEAR(w.tau[0], 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(w.x_min[0], 0.0, 1e-10);
}

TEST(FindWell, PotentialB) {
  const WellData w = FindWell(PotentialB(), TorusGrid(Lattice::Cubic(1), 256));
  EXPECT_NEAR(w.E0, -3.0, 1e-12);
  EXPECT_NEAR(w.tau[0], 2.0 / std::sqrt(3.0), 1e-10);
}

TEST(FindWell, PotentialC) {
  const WellData w = FindWell(PotentialC(), TorusGrid(Lattice::Cubic(2), 64));
  EXPECT_NEAR(w.E0, -1.0, 1e-12);
  EXPECT_NEAR(w.tau[0], 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(w.tau[1], 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(FindWell, TwoEqualWellsRejected) {
  const Lattice L = Lattice::Cubic(1);
  const PauliPotential p = Make(L, {{{0, 0}, 1.0}, {{2, 0}, -0.5}}, {}, {}, {{{0, 0}, 1.0}});
  EXPECT_THROW(FindWell(p, TorusGrid(L, 128)), Error);
}

TEST(FindWell, QuarticWellIsDegenerate) {
  // (1 - cos x)^2 has zero Hessian at its minimum
  const Lattice L = Lattice::Cubic(1);
  const PauliPotential p =
      Make(L, {{{0, 0}, 1.5}, {{1, 0}, -1.0}, {{2, 0}, 0.25}}, {}, {}, {{{0, 0}, 1.0}});
  EXPECT_THROW(FindWell(p, TorusGrid(L, 128)), Error);
}

TEST(ValidateModel, PotentialAPasses) {
  const ValidationReport r = ValidateModel(PotentialA(), TorusGrid(Lattice::Cubic(1), 256));
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.min_norm_w, 2.0, 1e-14);
  EXPECT_EQ(r.local_minima, 1);
}

TEST(ValidateModel, PotentialBMinimumOfW) {
  const ValidationReport r = ValidateModel(PotentialB(), TorusGrid(Lattice::Cubic(1), 256));
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.min_norm_w, 1.0, 1e-10);
}

TEST(ValidateModel, ZeroOfWFails) {
  const Lattice L = Lattice::Cubic(1);
  const PauliPotential p = Make(L, {{{0, 0}, 1.0}, {{1, 0}, -0.5}}, {}, {}, {{{1, 0}, 0.5}});
  const ValidationReport r = ValidateModel(p, TorusGrid(L, 256));
  EXPECT_FALSE(r.passed);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures.front(), "zero of |w|");
}

TEST(ShiftToOrigin, CenteredPotentialUnchanged) {
  const PauliPotential pa = PotentialA();
  const WellData w = FindWell(pa, TorusGrid(Lattice::Cubic(1), 256));
  const PauliPotential s = ShiftToOrigin(pa, w);
  for (double x : {-2.0, 0.0, 0.4, 3.0}) EXPECT_NEAR(s.Lower(At(x)), pa.Lower(At(x)), 1e-10);
}

TEST(ShiftToOrigin, UndoesTranslation) {
  // v = 1 - cos(x - 1)
  const Lattice L = Lattice::Cubic(1);
  const PauliPotential p =
      Make(L, {{{0, 0}, 1.0}, {{1, 0}, -0.5 * std::polar(1.0, -1.0)}}, {}, {}, {{{0, 0}, 2.0}});
  const WellData w = FindWell(p, TorusGrid(L, 256));
  EXPECT_NEAR(w.x_min[0], 1.0, 1e-10);
  const PauliPotential s = ShiftToOrigin(p, w);
  for (double x : {-2.0, 0.0, 0.4, 3.0}) EXPECT_NEAR(s.VAt(At(x)), 1.0 - std::cos(x), 1e-10);
}

TEST(ShiftToOrigin, PotentialCRecentered) {
  const PauliPotential pc = PotentialC();
  const TorusGrid g(Lattice::Cubic(2), 64);
  const PauliPotential moved = pc.Shifted(At(-1.0, 0.0));
  const WellData w = FindWell(moved, g);
  EXPECT_NEAR(w.x_min[0], 1.0, 1e-9);
  const WellData w2 = FindWell(ShiftToOrigin(moved, w), g);
  EXPECT_NEAR(w2.x_min.norm(), 0.0, 1e-9);
  EXPECT_NEAR(w2.E0, -1.0, 1e-12);
}
