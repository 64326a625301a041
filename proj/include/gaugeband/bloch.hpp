#ifndef GAUGEBAND_BLOCH_HPP_
#define GAUGEBAND_BLOCH_HPP_

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gaugeband/lapack.hpp"

#include "gaugeband/gauge.hpp"
#include "gaugeband/potential.hpp"
#include "gaugeband/spectral.hpp"

namespace gaugeband {

using CMat = Eigen::MatrixXcd;

//! Plane waves e^{i mu(m).x} with |m_k| <= M, ordered lexicographically.
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(Lattice lattice, int cutoff) : lattice_(std::move(lattice)), cutoff_(cutoff) {
    Require(cutoff_ >= 0, "plane-wave cutoff must be nonnegative");
    if (lattice_.dim() == 1) {
      for (int a = -cutoff_; a <= cutoff_; ++a) modes_.push_back(Mode{a, 0});
    } else {
      for (int a = -cutoff_; a <= cutoff_; ++a)
        for (int b = -cutoff_; b <= cutoff_; ++b) modes_.push_back(Mode{a, b});
    }
    for (const auto& m : modes_) momenta_.push_back(lattice_.DualVector(m));
  }

  const Lattice& lattice() const { return lattice_; }
  int cutoff() const { return cutoff_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const Mode& mode(int i) const { return modes_[i]; }
  const Vec& momentum(int i) const { return momenta_[i]; }

 private:
  Lattice lattice_;
  int cutoff_;
  std::vector<Mode> modes_;
  std::vector<Vec> momenta_;
};

enum class FiberKind { kDirect, kGauged, kScalar11, kScalar22 };

inline const char* FiberKindName(FiberKind k) {
  switch (k) {
    case FiberKind::kDirect: return "direct";
    case FiberKind::kGauged: return "gauged";
    case FiberKind::kScalar11: return "scalar11";
    case FiberKind::kScalar22: return "scalar22";
  }
  return "?";
}

struct FiberOperator {
  double h = 0.0;
  Vec theta;
  FiberKind kind = FiberKind::kDirect;
  CMat matrix;
};

namespace detail {

inline Mode Diff(const Mode& a, const Mode& b) { return Mode{a[0] - b[0], a[1] - b[1]}; }

// Fourier coefficients of a grid field, looked up by mode.
class Spectrum {
 public:
  Spectrum(const TorusGrid& grid, const CField& values)
      : grid_(grid), coeffs_(spectral::Forward(grid, values)) {}
  Spectrum(const TorusGrid& grid, const Field& values)
      : grid_(grid), coeffs_(spectral::Forward(grid, values)) {}

  cplx operator()(const Mode& q) const { return spectral::Coefficient(grid_, coeffs_, q); }
  double Tail(int cutoff) const { return spectral::TailMagnitude(grid_, coeffs_, cutoff); }

 private:
  TorusGrid grid_;
  CField coeffs_;
};

inline CMat Symmetrize(const CMat& H) { return 0.5 * (H + H.adjoint()); }

}  // namespace detail

//! H = h^2 |D - theta|^2 I + v I + w.sigma with exact Fourier data of v, w.
//! Basis index 2 i + s for plane wave i and spin s.
class DirectModel {
 public:
  DirectModel(PauliPotential pot, int cutoff) : pot_(std::move(pot)), basis_(pot_.lattice(), cutoff) {
    if (cutoff < pot_.Degree()) throw Error("cutoff truncates potential");
  }

  const Lattice& lattice() const { return pot_.lattice(); }
  const PlaneWaveBasis& basis() const { return basis_; }
  int dimension() const { return 2 * basis_.size(); }

  FiberOperator Assemble(double h, const Vec& theta) const {
    const int N = basis_.size();
    CMat H = CMat::Zero(2 * N, 2 * N);
    auto coeff = [](const TrigPoly& p, const Mode& q) {
      auto it = p.coeffs().find(q);
      return it == p.coeffs().end() ? cplx(0.0) : it->second;
    };
    const cplx I(0.0, 1.0);
    for (int i = 0; i < N; ++i) {
      const double kin = h * h * (basis_.momentum(i) - theta).squaredNorm();
      H(2 * i, 2 * i) += kin;
      H(2 * i + 1, 2 * i + 1) += kin;
      for (int j = 0; j < N; ++j) {
        const Mode q = detail::Diff(basis_.mode(i), basis_.mode(j));
        const cplx v = coeff(pot_.v(), q), w1 = coeff(pot_.w(0), q), w2 = coeff(pot_.w(1), q),
                   w3 = coeff(pot_.w(2), q);
        if (v == 0.0 && w1 == 0.0 && w2 == 0.0 && w3 == 0.0) continue;
        H(2 * i, 2 * j) += v + w3;
        H(2 * i, 2 * j + 1) += w1 - I * w2;
        H(2 * i + 1, 2 * j) += w1 + I * w2;
        H(2 * i + 1, 2 * j + 1) += v - w3;
      }
    }
    return {h, theta, FiberKind::kDirect, detail::Symmetrize(H)};
  }

 private:
  PauliPotential pot_;
  PlaneWaveBasis basis_;
};

//! U* H U = h^2 sum_k (D_k - theta_k - A_k)^2 + Vtilde + h^2 R, with all
//! coefficient fields taken from grid samples.
class GaugedModel {
 public:
  GaugedModel(const GaugeBundle& gb, int cutoff) : grid_(gb.grid), basis_(gb.grid.lattice(), cutoff) {
    const int N = grid_.size(), n = grid_.dim();
    const int guard = std::min(2 * cutoff, grid_.points_per_dim() / 4);
    auto add = [&](const auto& field) {
      spectra_.emplace_back(grid_, field);
      if (spectra_.back().Tail(guard) > 1e-8) throw Error("grid/cutoff mismatch");
    };
    // Per component: 0 a11, 1 a21 for each k, then A^2 scalar, R, Vtilde.
    Field a2(N, 0.0);
    for (int k = 0; k < n; ++k) {
      add(gb.a11[k]);
      add(gb.a21[k]);
      for (int i = 0; i < N; ++i) a2[i] += gb.a11[k][i] * gb.a11[k][i] + std::norm(gb.a21[k][i]);
    }
    add(a2);
    add(gb.r11);
    add(gb.r22);
    add(gb.r21);
    add(gb.lower);
    add(gb.upper);
  }

  const Lattice& lattice() const { return grid_.lattice(); }
  const PlaneWaveBasis& basis() const { return basis_; }
  int dimension() const { return 2 * basis_.size(); }

  FiberOperator Assemble(double h, const Vec& theta) const {
    const int N = basis_.size(), n = grid_.dim();
    const double h2 = h * h;
    const auto& a2 = spectra_[2 * n];
    const auto& r11 = spectra_[2 * n + 1];
    const auto& r22 = spectra_[2 * n + 2];
    const auto& r21 = spectra_[2 * n + 3];
    const auto& lo = spectra_[2 * n + 4];
    const auto& up = spectra_[2 * n + 5];
    CMat H = CMat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
      const Vec pi = basis_.momentum(i) - theta;
      const double kin = h2 * pi.squaredNorm();
      H(2 * i, 2 * i) += kin;
      H(2 * i + 1, 2 * i + 1) += kin;
      for (int j = 0; j < N; ++j) {
        const Mode q = detail::Diff(basis_.mode(i), basis_.mode(j));
        const Vec sum = pi + basis_.momentum(j) - theta;
        Mat2c block = Mat2c::Zero();
        for (int k = 0; k < n; ++k) {
          const cplx a11 = spectra_[2 * k](q);
          const cplx a21 = spectra_[2 * k + 1](q);
          // Fourier coefficient of conj(a21) at q is conj(a21-hat(-q)).
          const cplx a12 = std::conj(spectra_[2 * k + 1](Mode{-q[0], -q[1]}));
          Mat2c A;
          A << a11, a12, a21, -a11;
          block -= sum[k] * A;
        }
        const cplx s2 = a2(q);
        const cplx r12 = std::conj(r21(Mode{-q[0], -q[1]}));
        block(0, 0) += s2 + r11(q);
        block(1, 1) += s2 + r22(q);
        block(1, 0) += r21(q);
        block(0, 1) += r12;
        block *= h2;
        block(0, 0) += lo(q);
        block(1, 1) += up(q);
        H.block<2, 2>(2 * i, 2 * j) += block;
      }
    }
    return {h, theta, FiberKind::kGauged, detail::Symmetrize(H)};
  }

 private:
  TorusGrid grid_;
  PlaneWaveBasis basis_;
  std::vector<detail::Spectrum> spectra_;
};

//! Diagonal block P11 = h^2 (D - theta - a11)^2 + (v - |w|) + h^2 r11, or P22
//! with a11 -> -a11, v - |w| -> v + |w|, r11 -> r22.
class ScalarModel {
 public:
  ScalarModel(const BlockSymbols& bs, int block, int cutoff)
      : grid_(bs.grid), basis_(bs.grid.lattice(), cutoff), block_(block) {
    Require(block == 11 || block == 22, "scalar block must be 11 or 22");
    const int N = grid_.size(), n = grid_.dim();
    const double sign = block == 11 ? 1.0 : -1.0;
    const int guard = std::min(2 * cutoff, grid_.points_per_dim() / 4);
    auto add = [&](const Field& field) {
      spectra_.emplace_back(grid_, field);
      if (spectra_.back().Tail(guard) > 1e-8) throw Error("grid/cutoff mismatch");
    };
    Field a2(N, 0.0);
    for (int k = 0; k < n; ++k) {
      Field a(N);
      for (int i = 0; i < N; ++i) {
        a[i] = sign * bs.a11[k][i];
        a2[i] += a[i] * a[i];
      }
      add(a);
    }
    add(a2);
    add(block == 11 ? bs.r11 : bs.r22);
    add(block == 11 ? bs.v11 : bs.v22);
  }

  const Lattice& lattice() const { return grid_.lattice(); }
  const PlaneWaveBasis& basis() const { return basis_; }
  int dimension() const { return basis_.size(); }

  FiberOperator Assemble(double h, const Vec& theta) const {
    const int N = basis_.size(), n = grid_.dim();
    const double h2 = h * h;
    CMat H = CMat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      const Vec pi = basis_.momentum(i) - theta;
      H(i, i) += h2 * pi.squaredNorm();
      for (int j = 0; j < N; ++j) {
        const Mode q = detail::Diff(basis_.mode(i), basis_.mode(j));
        const Vec sum = pi + basis_.momentum(j) - theta;
        cplx e = spectra_[n](q) + spectra_[n + 1](q);
        for (int k = 0; k < n; ++k) e -= sum[k] * spectra_[k](q);
        H(i, j) += h2 * e + spectra_[n + 2](q);
      }
    }
    return {h, theta, block_ == 11 ? FiberKind::kScalar11 : FiberKind::kScalar22,
            detail::Symmetrize(H)};
  }

 private:
  TorusGrid grid_;
  PlaneWaveBasis basis_;
  int block_;
  std::vector<detail::Spectrum> spectra_;
};

//! Lowest `count` eigenvalues, ascending, each with ||Hv - lv|| <= 1e-9 ||H||.
inline std::vector<double> LowestEigenvalues(const CMat& H, int count) {
  Require(count >= 1 && count <= H.rows(), "eigenvalue count exceeds dimension");
  const lapack_int n = static_cast<lapack_int>(H.rows());
  CMat a = H;
  lapack_int m = 0;
  std::vector<double> w(n);
  CMat z(n, count);
  std::vector<lapack_int> isuppz(2 * std::max(count, 1));
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1,
                                         count, 0.0, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || m != count) throw Error("eigensolver did not converge");
  const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300) * std::sqrt(double(n));
  std::vector<double> out(count);
  for (int j = 0; j < count; ++j) {
    if ((H * z.col(j) - w[j] * z.col(j)).norm() > 1e-9 * scale)
      throw Error("eigenpair residual check failed");
    out[j] = w[j];
  }
  return out;
}

inline std::vector<double> LowestEigenvalues(const FiberOperator& F, int count) {
  return LowestEigenvalues(F.matrix, count);
}

struct BandStats {
  int j = 0;  // 1-based band index
  double min = 0.0, max = 0.0, center = 0.0, width = 0.0;
};

struct BandSweep {
  double h = 0.0;
  BrillouinSample thetas;
  std::vector<std::vector<double>> levels;  // [theta index][band]
  std::vector<BandStats> stats;
};

namespace detail {

// Vertex value of the parabola through (-1, fm), (0, f0), (1, fp).
inline double ParabolaVertex(double fm, double f0, double fp) {
  const double curv = fm - 2.0 * f0 + fp;
  if (curv == 0.0) return f0;
  const double offset = 0.5 * (fm - fp) / curv;
  if (std::abs(offset) > 1.0) return f0;
  return f0 - 0.125 * (fp - fm) * (fp - fm) / curv;
}

// Extremum of band j refined by a 3-point parabola per Brillouin axis.
inline double RefineExtremum(const BandSweep& s, int j, bool maximum) {
  const int count = static_cast<int>(s.levels.size());
  int best = 0;
  for (int t = 1; t < count; ++t)
    if (maximum ? s.levels[t][j] > s.levels[best][j] : s.levels[t][j] < s.levels[best][j]) best = t;
  const double f0 = s.levels[best][j];
  if (s.thetas.per_dim < 3) return f0;
  double value = f0;
  for (int k = 0; k < s.thetas.lattice.dim(); ++k) {
    Mode up{0, 0}, down{0, 0};
    up[k] = 1;
    down[k] = -1;
    const double fp = s.levels[s.thetas.Neighbor(best, up)][j];
    const double fm = s.levels[s.thetas.Neighbor(best, down)][j];
    const double v = ParabolaVertex(fm, f0, fp);
    if (maximum ? v > f0 : v < f0) value += v - f0;
  }
  return value;
}

}  // namespace detail

//! Band stats from per-theta levels; extrema refined by parabolic fits.
inline void ComputeBandStats(BandSweep& s) {
  s.stats.clear();
  const int jmax = s.levels.empty() ? 0 : static_cast<int>(s.levels.front().size());
  for (int j = 0; j < jmax; ++j) {
    BandStats b;
    b.j = j + 1;
    b.min = detail::RefineExtremum(s, j, false);
    b.max = detail::RefineExtremum(s, j, true);
    b.center = 0.5 * (b.min + b.max);
    b.width = b.max - b.min;
    s.stats.push_back(b);
  }
}

template <class Model>
BandSweep SweepBands(const Model& model, double h, int K, int j_max) {
  Require(j_max >= 1 && j_max <= model.dimension(), "j_max out of range");
  BandSweep s{h, BrillouinGrid(model.lattice(), K), {}, {}};
  for (const Vec& theta : s.thetas.thetas) {
    std::vector<double> lv = LowestEigenvalues(model.Assemble(h, theta), j_max);
    if (!std::is_sorted(lv.begin(), lv.end())) throw AssertionFailure("band ordering violated");
    s.levels.push_back(std::move(lv));
  }
  ComputeBandStats(s);
  return s;
}

//! CSV rows (h, t_1..t_n, j, lambda).
inline void WriteSweepCsv(std::ostream& os, const BandSweep& s, bool header = true) {
  const int n = s.thetas.lattice.dim();
  if (header) {
    os << "h";
    for (int k = 0; k < n; ++k) os << ",theta" << k;
    os << ",j,lambda\n";
  }
  os.precision(17);
  for (size_t t = 0; t < s.levels.size(); ++t)
    for (size_t j = 0; j < s.levels[t].size(); ++j) {
      os << s.h;
      for (int k = 0; k < n; ++k) os << "," << s.thetas.coords[t][k];
      os << "," << j + 1 << "," << s.levels[t][j] << "\n";
    }
}

}  // namespace gaugeband

#endif  // GAUGEBAND_BLOCH_HPP_
