#include <gtest/gtest.h>

#include <cmath>

#include "gaugeband/lattice.hpp"
#include "gaugeband/spectral.hpp"

using namespace gaugeband;

namespace {

Mat Columns(std::initializer_list<std::initializer_list<double>> cols) {
  const int n = static_cast<int>(cols.size());
  Mat m(n, n);
  int c = 0;
  for (const auto& col : cols) {
    int r = 0;
    for (double x : col) m(r++, c) = x;
    ++c;
  }
  return m;
}

}  // namespace

TEST(DualBasis, OneDimensional) {
  const Lattice L = Lattice::Cubic(1);
  EXPECT_NEAR(L.dual_basis()(0, 0), 1.0, 1e-15);
}

TEST(DualBasis, Square) {
  const Lattice L = Lattice::Cubic(2);
  EXPECT_TRUE(L.dual_basis().isApprox(Mat::Identity(2, 2), 1e-15));
}

TEST(DualBasis, Triangular) {
  const Lattice L(Columns({{kTwoPi, 0.0}, {M_PI, M_PI * std::sqrt(3.0)}}));
  const Mat& D = L.dual_basis();
  EXPECT_NEAR(D(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(D(1, 0), -1.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(D(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(D(1, 1), 2.0 / std::sqrt(3.0), 1e-14);
  // beta_j . beta*_k = 2 pi delta_jk by explicit multiplication
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      EXPECT_NEAR(L.vector(j).dot(D.col(k)), j == k ? kTwoPi : 0.0, 1e-13);
}

TEST(DualBasis, SingularBasisThrows) {
  EXPECT_THROW(Lattice(Columns({{1.0, 2.0}, {2.0, 4.0}})), Error);
}

TEST(FoldToCell, SubtractsOnePeriod) {
  const Vec y = FoldToCell(Lattice::Cubic(1), Vec::Constant(1, 7.0));
  EXPECT_NEAR(y[0], 7.0 - kTwoPi, 1e-14);
}

TEST(FoldToCell, BoundaryGoesToNegativeSide) {
  EXPECT_NEAR(FoldToCell(Lattice::Cubic(1), Vec::Constant(1, M_PI))[0], -M_PI, 1e-14);
}

TEST(FoldToCell, Componentwise2D) {
  Vec x(2);
  x << kTwoPi, -3.0 * M_PI;
  const Vec y = FoldToCell(Lattice::Cubic(2), x);
  EXPECT_NEAR(y[0], 0.0, 1e-14);
  EXPECT_NEAR(y[1], -M_PI, 1e-14);
}

TEST(BrillouinGrid, ThreePoints) {
  const BrillouinSample s = BrillouinGrid(Lattice::Cubic(1), 3);
  ASSERT_EQ(s.coords.size(), 3u);
  EXPECT_NEAR(s.coords[0][0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.coords[1][0], 0.0, 1e-15);
  EXPECT_NEAR(s.coords[2][0], 1.0 / 3.0, 1e-15);
}

TEST(BrillouinGrid, SinglePointIsOrigin) {
  const BrillouinSample s = BrillouinGrid(Lattice::Cubic(1), 1);
  ASSERT_EQ(s.thetas.size(), 1u);
  EXPECT_EQ(s.thetas[0][0], 0.0);
}

TEST(BrillouinGrid, HalfOpenConvention2D) {
  const BrillouinSample s = BrillouinGrid(Lattice::Cubic(2), 2);
  ASSERT_EQ(s.coords.size(), 4u);
  for (const Vec& t : s.coords)
    for (int k = 0; k < 2; ++k) {
      EXPECT_GT(t[k], -0.5);
      EXPECT_LE(t[k], 0.5);
      EXPECT_TRUE(t[k] == 0.0 || t[k] == 0.5);
    }
}

TEST(BrillouinGrid, MomentumUsesDualBasis) {
  const Lattice L(Columns({{kTwoPi, 0.0}, {M_PI, M_PI * std::sqrt(3.0)}}));
  const BrillouinSample s = BrillouinGrid(L, 4);
  for (size_t i = 0; i < s.coords.size(); ++i)
    EXPECT_TRUE(s.thetas[i].isApprox(L.dual_basis() * s.coords[i], 1e-14) || s.coords[i].norm() == 0.0);
}

TEST(TorusGrid, RejectsNonPowerOfTwo) { EXPECT_THROW(TorusGrid(Lattice::Cubic(1), 12), Error); }

TEST(TorusGrid, NeighborWraps) {
  const TorusGrid g(Lattice::Cubic(2), 8);
  EXPECT_EQ(g.Neighbor(g.Flat({7, 3}), {1, 0}), g.Flat({0, 3}));
  EXPECT_EQ(g.Neighbor(g.Flat({2, 0}), {0, -1}), g.Flat({2, 7}));
}

TEST(Spectral, DerivativeOfTrigonometricField) {
  const TorusGrid g(Lattice::Cubic(1), 64);
  Field f(g.size()), df_exact(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.Node(i)[0];
    f[i] = std::sin(3.0 * x) + 0.5 * std::cos(x);
    df_exact[i] = 3.0 * std::cos(3.0 * x) - 0.5 * std::sin(x);
  }
  const Field df = spectral::Derivative(g, f, 0);
  for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(df[i], df_exact[i], 1e-12);
}

TEST(Spectral, InterpolationIsExactForBandLimitedData) {
  const TorusGrid g(Lattice::Cubic(2), 16);
  auto f = [](const Vec& x) { return std::cos(x[0] - 2.0 * x[1]) + std::sin(x[1]); };
  Field v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = f(g.Node(i));
  const CField c = spectral::Forward(g, v);
  Vec x(2);
  x << 0.3, -1.1;
  EXPECT_NEAR(spectral::Interpolate(g, c, x).real(), f(x), 1e-13);
  EXPECT_NEAR(spectral::InterpolateDerivative(g, c, x, 1).real(),
              2.0 * std::sin(x[0] - 2.0 * x[1]) + std::cos(x[1]), 1e-12);
}
