#ifndef GAUGEBAND_GAUGE_HPP_
#define GAUGEBAND_GAUGE_HPP_

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "gaugeband/potential.hpp"
#include "gaugeband/spectral.hpp"

namespace gaugeband {

enum class UnitaryBranch { kAuto, kGeneral, kDeltaZero };

inline UnitaryBranch ParseBranch(const std::string& s) {
  if (s == "auto") return UnitaryBranch::kAuto;
  if (s == "general") return UnitaryBranch::kGeneral;
  if (s == "delta0") return UnitaryBranch::kDeltaZero;
  throw Error("unknown unitary branch '" + s + "'");
}

inline const char* BranchName(UnitaryBranch b) {
  switch (b) {
    case UnitaryBranch::kAuto: return "auto";
    case UnitaryBranch::kGeneral: return "general";
    case UnitaryBranch::kDeltaZero: return "delta0";
  }
  return "?";
}

constexpr double kDenominatorFloor = 1e-6;

//! Cutoff with chi = 1 on |t| <= 1/4 and chi = 0 on |t| >= 1/2:
//! chi(t) = S(4 (1/2 - |t|)), S(s) = f(s) / (f(s) + f(1 - s)), f(s) = exp(-1/s) for s > 0.
inline double Chi(double t) {
  auto f = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double s = 4.0 * (0.5 - std::abs(t));
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return f(s) / (f(s) + f(1.0 - s));
}

//! Entries (u11, u21) of the diagonalizing unitary at a point; the remaining
//! entries are u12 = conj(u21), u22 = -conj(u11).
struct UnitaryColumn {
  cplx u11, u21;
  double denominator;  // the quantity checked against the singularity floor
};

inline UnitaryColumn UnitaryColumnAt(const Eigen::Vector3d& w, UnitaryBranch branch) {
  const double nw = w.norm();
  const cplx i(0.0, 1.0);
  if (branch == UnitaryBranch::kDeltaZero) {
    const double gap = nw - w[2];
    const double den = nw * gap;
    if (!(den >= kDenominatorFloor)) return {0.0, 0.0, den};
    const double s = 1.0 / std::sqrt(2.0 * nw);
    const double r = std::sqrt(gap);
    // (alpha, beta, rho) with delta = 0; u11 = rho, u21 = alpha + i beta.
    return {cplx(s * r, 0.0), cplx(-s * w[0] / r, -s * w[1] / r), den};
  }
  const double theta = Chi((w[1] * w[1] + w[2] * w[2]) / (nw * nw)) * std::numbers::pi / 2.0;
  const cplx e = std::exp(i * theta);
  const cplx wp(w[0], w[1]);
  const double den = nw * (nw - (wp * std::conj(e)).real());
  if (!(den >= kDenominatorFloor)) return {0.0, 0.0, den};
  const double norm = 2.0 * std::sqrt(den);
  return {(w[2] - nw + e * std::conj(wp)) / norm, (wp - e * (w[2] + nw)) / norm, den};
}

inline Mat2c UnitaryFromColumn(cplx u11, cplx u21) {
  Mat2c U;
  U << u11, std::conj(u21), u21, -std::conj(u11);
  return U;
}

//! Grid samples of U = (alpha, beta, rho).sigma + i delta sigma_0.
struct UnitaryField {
  TorusGrid grid;
  UnitaryBranch branch = UnitaryBranch::kGeneral;
  Field alpha, beta, rho, delta;
  CField u11, u21;

  Mat2c At(int node) const { return UnitaryFromColumn(u11[node], u21[node]); }
};

//! True when the delta = 0 branch is regular at every grid node.
inline bool DeltaZeroBranchValid(const PauliPotential& pot, const TorusGrid& grid) {
  for (int n = 0; n < grid.size(); ++n)
    if (UnitaryColumnAt(pot.WAt(grid.Node(n)), UnitaryBranch::kDeltaZero).denominator <
        kDenominatorFloor)
      return false;
  return true;
}

inline UnitaryField BuildUnitary(const PauliPotential& pot, const TorusGrid& grid,
                                 UnitaryBranch branch = UnitaryBranch::kAuto) {
  if (branch == UnitaryBranch::kAuto)
    branch = DeltaZeroBranchValid(pot, grid) ? UnitaryBranch::kDeltaZero : UnitaryBranch::kGeneral;
  UnitaryField U{grid, branch, {}, {}, {}, {}, {}, {}};
  const int N = grid.size();
  U.alpha.resize(N);
  U.beta.resize(N);
  U.rho.resize(N);
  U.delta.resize(N);
  U.u11.resize(N);
  U.u21.resize(N);
  for (int n = 0; n < N; ++n) {
    const Vec x = grid.Node(n);
    const PauliSample ps = PauliEval(pot, x);
    const UnitaryColumn col = UnitaryColumnAt(pot.WAt(x), branch);
    if (col.denominator < kDenominatorFloor)
      throw Error("unitary branch singular; use the general branch");
    U.u11[n] = col.u11;
    U.u21[n] = col.u21;
    U.rho[n] = col.u11.real();
    U.delta[n] = col.u11.imag();
    U.alpha[n] = col.u21.real();
    U.beta[n] = col.u21.imag();
    const Mat2c Um = U.At(n);
    const double unit_err = (Um.adjoint() * Um - Mat2c::Identity()).cwiseAbs().maxCoeff();
    if (unit_err > 1e-12) throw AssertionFailure("constructed U is not unitary");
    const Mat2c D = Um.adjoint() * ps.V * Um;
    if (std::abs(D(0, 1)) > 1e-10 * (1.0 + ps.norm_w) ||
        std::abs(D(0, 0) - ps.lower) > 1e-10 * (1.0 + ps.norm_w))
      throw AssertionFailure("U does not diagonalize V");
  }
  return U;
}

//! Induced gauge data on the grid. A_k = [[a11_k, conj(a21_k)], [a21_k, -a11_k]].
struct GaugeBundle {
  TorusGrid grid;
  std::vector<Field> a11;
  std::vector<CField> a21;
  Field r11, r22;  // diagonal of R
  CField r21;
  Field lower, upper;  // v - |w|, v + |w|
  Field psi;
  bool coulomb = false;

  int dim() const { return grid.dim(); }

  Mat2c A(int k, int node) const {
    Mat2c m;
    m << a11[k][node], std::conj(a21[k][node]), a21[k][node], -a11[k][node];
    return m;
  }
  Mat2c R(int node) const {
    Mat2c m;
    m << r11[node], std::conj(r21[node]), r21[node], r22[node];
    return m;
  }
};

namespace detail {

inline Field Mul(const Field& a, const Field& b) {
  Field out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace detail

//! A_k = i U* d_k U and R = sum_k (U* d_k U)^2 + (d_k U*)(d_k U) by spectral
//! differentiation. A_k is also built from the quaternion cross-product form
//! and both must agree.
inline GaugeBundle InducedGauge(const UnitaryField& U, const PauliPotential& pot) {
  const TorusGrid& grid = U.grid;
  const int N = grid.size(), n = grid.dim();
  if (spectral::ResolutionTail(grid, spectral::Forward(grid, U.u11)) > 1e-8 ||
      spectral::ResolutionTail(grid, spectral::Forward(grid, U.u21)) > 1e-8)
    throw Error("grid too coarse for U");

  GaugeBundle gb{grid, {}, {}, Field(N, 0.0), Field(N, 0.0), CField(N, 0.0),
                 Field(N), Field(N), Field(N, 0.0), false};
  for (int i = 0; i < N; ++i) {
    const PauliSample ps = PauliEval(pot, grid.Node(i));
    gb.lower[i] = ps.lower;
    gb.upper[i] = ps.lower + 2.0 * ps.norm_w;
  }
  const cplx I(0.0, 1.0);
  double mismatch = 0.0;
  for (int k = 0; k < n; ++k) {
    const CField du11 = spectral::Derivative(grid, U.u11, k);
    const CField du21 = spectral::Derivative(grid, U.u21, k);
    const Field da = spectral::Derivative(grid, U.alpha, k);
    const Field db = spectral::Derivative(grid, U.beta, k);
    const Field dr = spectral::Derivative(grid, U.rho, k);
    const Field dd = spectral::Derivative(grid, U.delta, k);
    Field a11(N);
    CField a21(N);
    for (int i = 0; i < N; ++i) {
      const Mat2c Um = U.At(i);
      const Mat2c dU = UnitaryFromColumn(du11[i], du21[i]);
      const Mat2c G = Um.adjoint() * dU;
      const Mat2c A = I * G;
      a11[i] = A(0, 0).real();
      a21[i] = A(1, 0);
      const Mat2c Rk = G * G + dU.adjoint() * dU;
      gb.r11[i] += Rk(0, 0).real();
      gb.r22[i] += Rk(1, 1).real();
      gb.r21[i] += Rk(1, 0);

      // Cross-product form: c = (dα,dβ,dρ) x (α,β,ρ) + δ d(α,β,ρ) - (α,β,ρ) dδ.
      const Eigen::Vector3d q(U.alpha[i], U.beta[i], U.rho[i]);
      const Eigen::Vector3d dq(da[i], db[i], dr[i]);
      const Eigen::Vector3d c = dq.cross(q) + U.delta[i] * dq - dd[i] * q;
      Mat2c Aw = Mat2c::Zero();
      for (int j = 0; j < 3; ++j) Aw += c[j] * Pauli()[j];
      mismatch = std::max(mismatch, (Aw - A).cwiseAbs().maxCoeff());
      mismatch = std::max(mismatch, std::abs(A.trace()));
    }
    gb.a11.push_back(std::move(a11));
    gb.a21.push_back(std::move(a21));
  }
  if (mismatch > 1e-8) throw Error("differentiation inconsistency");
  return gb;
}

//! Divergence of the a11 vector field.
inline Field DivergenceA11(const GaugeBundle& gb) {
  Field div(gb.grid.size(), 0.0);
  for (int k = 0; k < gb.dim(); ++k) {
    const Field d = spectral::Derivative(gb.grid, gb.a11[k], k);
    for (size_t i = 0; i < div.size(); ++i) div[i] += d[i];
  }
  return div;
}

//! Gauge change U -> U diag(e^{i psi}, e^{-i psi}) with Laplacian(psi) = div a11,
//! after which a11 is divergence free.
inline GaugeBundle CoulombTransform(const GaugeBundle& gb) {
  const TorusGrid& grid = gb.grid;
  const int N = grid.size(), n = grid.dim();
  std::vector<CField> ahat;
  for (int k = 0; k < n; ++k) ahat.push_back(spectral::Forward(grid, gb.a11[k]));
  CField psi_hat(N, 0.0);
  for (int f = 0; f < N; ++f) {
    const Mode q = spectral::ModeOf(grid, f);
    if ((q[0] == 0 && q[1] == 0) || spectral::IsNyquist(grid, q)) continue;
    const Vec mu = grid.lattice().DualVector(q);
    cplx dot = 0.0;
    for (int k = 0; k < n; ++k) dot += mu[k] * ahat[k][f];
    psi_hat[f] = -cplx(0.0, 1.0) * dot / mu.squaredNorm();
  }
  const CField psi_c = spectral::Inverse(grid, psi_hat);
  Field psi(N);
  for (int i = 0; i < N; ++i) psi[i] = psi_c[i].real();

  GaugeBundle out = gb;
  for (int k = 0; k < n; ++k) {
    const Field dpsi = spectral::Derivative(grid, psi, k);
    for (int i = 0; i < N; ++i) {
      out.a11[k][i] -= dpsi[i];
      out.a21[k][i] *= std::polar(1.0, 2.0 * psi[i]);
    }
  }
  for (int i = 0; i < N; ++i) {
    out.r21[i] *= std::polar(1.0, 2.0 * psi[i]);
    out.psi[i] = gb.psi[i] + psi[i];
  }
  out.coulomb = true;
  const Field div = DivergenceA11(out);
  for (double d : div)
    if (std::abs(d) > 1e-9) throw AssertionFailure("Coulomb gauge not reached");
  return out;
}

//! Coefficient fields of the 2x2 block operator
//!   P11 = h^2 (D - a11)^2 + (v - |w|) + h^2 r11,
//!   P22 = h^2 (D + a11)^2 + (v + |w|) + h^2 r22,
//!   P21 = -h^2 (2 a21.D + D.a21) + h^2 r21,  P12 = P21*.
//! r11 and r22 include the |a21|^2 part of A^2, which lands on the diagonal.
struct BlockSymbols {
  TorusGrid grid;
  std::vector<Field> a11;
  Field v11, v22;
  Field r11, r22;
  std::vector<CField> a21;
  CField div_a21;  // sum_k D_k a21_k = -i div a21
  CField r21;
};

inline BlockSymbols MakeBlockSymbols(const GaugeBundle& gb) {
  const int N = gb.grid.size();
  BlockSymbols bs{gb.grid, gb.a11, gb.lower, gb.upper, gb.r11, gb.r22, gb.a21, CField(N, 0.0), gb.r21};
  for (int k = 0; k < gb.dim(); ++k) {
    const CField d = spectral::Derivative(gb.grid, gb.a21[k], k);
    for (int i = 0; i < N; ++i) {
      const double s = std::norm(gb.a21[k][i]);
      bs.r11[i] += s;
      bs.r22[i] += s;
      bs.div_a21[i] += -cplx(0.0, 1.0) * d[i];
    }
  }
  return bs;
}

//! CSV columns: node coordinates, U entries, then per axis a11, Re/Im a21,
//! then R and psi.
inline void WriteGaugeCsv(std::ostream& os, const UnitaryField& U, const GaugeBundle& gb) {
  const int n = gb.dim();
  for (int k = 0; k < n; ++k) os << "x" << k << ",";
  os << "re_u11,im_u11,re_u21,im_u21";
  for (int k = 0; k < n; ++k) os << ",a11_" << k << ",re_a21_" << k << ",im_a21_" << k;
  os << ",r11,r22,re_r21,im_r21,psi\n";
  os.precision(17);
  for (int i = 0; i < gb.grid.size(); ++i) {
    const Vec x = gb.grid.Node(i);
    for (int k = 0; k < n; ++k) os << x[k] << ",";
    os << U.u11[i].real() << "," << U.u11[i].imag() << "," << U.u21[i].real() << ","
       << U.u21[i].imag();
    for (int k = 0; k < n; ++k)
      os << "," << gb.a11[k][i] << "," << gb.a21[k][i].real() << "," << gb.a21[k][i].imag();
    os << "," << gb.r11[i] << "," << gb.r22[i] << "," << gb.r21[i].real() << ","
       << gb.r21[i].imag() << "," << gb.psi[i] << "\n";
  }
}

}  // namespace gaugeband

#endif  // GAUGEBAND_GAUGE_HPP_
