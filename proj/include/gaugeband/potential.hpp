#ifndef GAUGEBAND_POTENTIAL_HPP_
#define GAUGEBAND_POTENTIAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gaugeband/lattice.hpp"
#include "gaugeband/series.hpp"
#include "gaugeband/trig_poly.hpp"

namespace gaugeband {

//! Pauli matrices sigma_1, sigma_2, sigma_3.
inline const std::array<Mat2c, 3>& Pauli() {
  static const std::array<Mat2c, 3> s = [] {
    std::array<Mat2c, 3> out;
    const cplx i(0.0, 1.0);
    out[0] << 0.0, 1.0, 1.0, 0.0;
    out[1] << 0.0, -i, i, 0.0;
    out[2] << 1.0, 0.0, 0.0, -1.0;
    return out;
  }();
  return s;
}

//! V = v I + w.sigma with real trigonometric polynomials v, w_1, w_2, w_3.
class PauliPotential {
 public:
  PauliPotential() = default;
  PauliPotential(TrigPoly v, std::array<TrigPoly, 3> w) : v_(std::move(v)), w_(std::move(w)) {
    Require(v_.IsReal(1e-12), "v must be real valued");
    for (const auto& wi : w_) {
      Require(wi.IsReal(1e-12), "w components must be real valued");
      Require(wi.dim() == v_.dim(), "v and w live on different lattices");
    }
  }

  const Lattice& lattice() const { return v_.lattice(); }
  int dim() const { return v_.dim(); }
  const TrigPoly& v() const { return v_; }
  const std::array<TrigPoly, 3>& w() const { return w_; }
  const TrigPoly& w(int i) const { return w_[i]; }

  int Degree() const {
    int deg = v_.Degree();
    for (const auto& wi : w_) deg = std::max(deg, wi.Degree());
    return deg;
  }

  Eigen::Vector3d WAt(const Vec& x) const {
    return {w_[0](x).real(), w_[1](x).real(), w_[2](x).real()};
  }
  double VAt(const Vec& x) const { return v_(x).real(); }
  double NormW(const Vec& x) const { return WAt(x).norm(); }

  //! |w|^2 as an exact trigonometric polynomial.
  TrigPoly NormWSquared() const { return w_[0] * w_[0] + w_[1] * w_[1] + w_[2] * w_[2]; }

  //! Lower eigenvalue v - |w| of V(x).
  double Lower(const Vec& x) const { return VAt(x) - NormW(x); }
  double Upper(const Vec& x) const { return VAt(x) + NormW(x); }

  //! Gradient of v - |w|, with grad|w| = sum_i w_i grad w_i / |w|.
  Vec LowerGradient(const Vec& x) const {
    const Eigen::Vector3d wx = WAt(x);
    const double nw = wx.norm();
    Require(nw > 0.0, "|w| vanishes at x");
    Vec g = v_.Gradient(x).real();
    for (int i = 0; i < 3; ++i) g -= wx[i] * w_[i].Gradient(x).real() / nw;
    return g;
  }

  //! Hessian of v - |w| by the quotient rule.
  Mat LowerHessian(const Vec& x) const {
    const Eigen::Vector3d wx = WAt(x);
    const double nw = wx.norm();
    Require(nw > 0.0, "|w| vanishes at x");
    const int n = dim();
    Mat hw = Mat::Zero(n, n);
    Vec gw = Vec::Zero(n);
    for (int i = 0; i < 3; ++i) {
      const Vec gi = w_[i].Gradient(x).real();
      hw += gi * gi.transpose() + wx[i] * w_[i].Hessian(x).real();
      gw += wx[i] * gi;
    }
    gw /= nw;
    hw = hw / nw - gw * gw.transpose() / nw;
    return v_.Hessian(x).real() - hw;
  }

  //! Taylor coefficients of v - |w| at the point x0 (1D only).
  Series LowerTaylor1D(double x0, int order) const {
    Series sq = w_[0].Taylor1D(x0, order) * w_[0].Taylor1D(x0, order);
    sq = sq + w_[1].Taylor1D(x0, order) * w_[1].Taylor1D(x0, order);
    sq = sq + w_[2].Taylor1D(x0, order) * w_[2].Taylor1D(x0, order);
    return v_.Taylor1D(x0, order) - sq.Sqrt();
  }

  //! q(x) = p(x + x0) for every component.
  PauliPotential Shifted(const Vec& x0) const {
    return PauliPotential(v_.Shifted(x0), {w_[0].Shifted(x0), w_[1].Shifted(x0), w_[2].Shifted(x0)});
  }

 private:
  TrigPoly v_;
  std::array<TrigPoly, 3> w_;
};

struct PauliSample {
  Mat2c V;
  double norm_w = 0.0;
  double lower = 0.0;  // v - |w|
};

inline PauliSample PauliEval(const PauliPotential& pot, const Vec& x) {
  const Eigen::Vector3d wx = pot.WAt(x);
  const double nw = wx.norm();
  if (!(nw > 0.0)) {
    std::ostringstream os;
    os << "|w| vanishes at x = " << x.transpose();
    throw Error(os.str());
  }
  const double v = pot.VAt(x);
  Mat2c V = v * Mat2c::Identity();
  for (int i = 0; i < 3; ++i) V += wx[i] * Pauli()[i];
  return {V, nw, v - nw};
}

struct WellData {
  Vec x_min;
  double E0 = 0.0;
  Mat hessian;
  Vec tau;             // ascending
  Mat principal_axes;  // columns match tau
};

struct ValidationReport {
  double min_norm_w = 0.0;
  int local_minima = 0;
  double min_hessian_eig = 0.0;
  bool passed = false;
  std::vector<std::string> failures;
};

namespace detail {

inline std::vector<Mode> NeighborShifts(int dim) {
  std::vector<Mode> s;
  for (int a = -1; a <= 1; ++a)
    for (int b = (dim == 2 ? -1 : 0); b <= (dim == 2 ? 1 : 0); ++b)
      if (a != 0 || b != 0) s.push_back(Mode{a, b});
  return s;
}

inline std::vector<int> GridLocalMinima(const TorusGrid& grid, const std::vector<double>& f) {
  const auto shifts = NeighborShifts(grid.dim());
  std::vector<int> out;
  for (int i = 0; i < grid.size(); ++i) {
    bool is_min = true;
    for (const auto& s : shifts) is_min = is_min && f[i] <= f[grid.Neighbor(i, s)];
    if (is_min) out.push_back(i);
  }
  return out;
}

// True when two nodes are neighbours (or equal) on the periodic grid.
inline bool Adjacent(const TorusGrid& grid, int a, int b) {
  const Mode pa = grid.Index(a), pb = grid.Index(b);
  const int P = grid.points_per_dim();
  for (int k = 0; k < grid.dim(); ++k) {
    const int d = ((pa[k] - pb[k]) % P + P) % P;
    if (d > 1 && d < P - 1) return false;
  }
  return true;
}

// Newton polish of a smooth function given its gradient and Hessian.
template <class Grad, class Hess>
bool NewtonMinimize(Vec& x, Grad grad, Hess hess, int max_steps = 50) {
  for (int it = 0; it < max_steps; ++it) {
    const Vec g = grad(x);
    if (g.norm() <= 1e-13) return true;
    const Mat H = hess(x);
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.eigenvalues().minCoeff() <= 0.0) return false;
    const Vec step = es.eigenvectors() *
                     (es.eigenvalues().cwiseInverse().asDiagonal() * (es.eigenvectors().transpose() * g));
    x -= step;
    if (step.norm() <= 1e-15 * (1.0 + x.norm())) return true;
  }
  return grad(x).norm() <= 1e-10;
}

}  // namespace detail

//! Locates the unique minimum of v - |w| by grid scan and Newton polish.
inline WellData FindWell(const PauliPotential& pot, const TorusGrid& grid) {
  std::vector<double> f(grid.size());
  for (int i = 0; i < grid.size(); ++i) f[i] = PauliEval(pot, grid.Node(i)).lower;
  const int best = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  for (int i : detail::GridLocalMinima(grid, f))
    if (!detail::Adjacent(grid, i, best) && f[i] - f[best] <= 1e-6)
      throw Error("non-unique minimum");

  Vec x = grid.Node(best);
  const bool ok = detail::NewtonMinimize(
      x, [&](const Vec& y) { return pot.LowerGradient(y); },
      [&](const Vec& y) { return pot.LowerHessian(y); });
  if (!ok) throw Error("degenerate well");

  WellData well;
  well.x_min = FoldToCell(pot.lattice(), x);
  well.E0 = pot.Lower(well.x_min);
  well.hessian = pot.LowerHessian(well.x_min);
  well.hessian = 0.5 * (well.hessian + well.hessian.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * well.hessian);
  if (es.eigenvalues().minCoeff() <= 0.5e-10) throw Error("degenerate well");
  well.tau = es.eigenvalues().cwiseSqrt();
  well.principal_axes = es.eigenvectors();
  return well;
}

//! Checks |w| > 0 and a unique non-degenerate minimum of v - |w|.
inline ValidationReport ValidateModel(const PauliPotential& pot, const TorusGrid& grid) {
  ValidationReport rep;
  const TrigPoly w2 = pot.NormWSquared();
  std::vector<double> w2v(grid.size()), lower(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const Vec x = grid.Node(i);
    w2v[i] = w2(x).real();
  }
  // Polish every grid-local minimum of |w|^2 so zeros between nodes are found.
  double min_w2 = *std::min_element(w2v.begin(), w2v.end());
  for (int i : detail::GridLocalMinima(grid, w2v)) {
    Vec x = grid.Node(i);
    detail::NewtonMinimize(
        x, [&](const Vec& y) { return Vec(w2.Gradient(y).real()); },
        [&](const Vec& y) { return Mat(w2.Hessian(y).real()); }, 30);
    min_w2 = std::min(min_w2, std::max(w2(x).real(), 0.0));
  }
  rep.min_norm_w = std::sqrt(std::max(min_w2, 0.0));
  if (rep.min_norm_w <= 1e-8) {
    rep.failures.push_back("zero of |w|");
    return rep;
  }
  for (int i = 0; i < grid.size(); ++i) lower[i] = pot.Lower(grid.Node(i));
  rep.local_minima = static_cast<int>(detail::GridLocalMinima(grid, lower).size());
  try {
    const WellData well = FindWell(pot, grid);
    rep.min_hessian_eig = 2.0 * well.tau.minCoeff() * well.tau.minCoeff();
  } catch (const Error& e) {
    rep.failures.push_back(e.what());
  }
  rep.passed = rep.failures.empty();
  return rep;
}

//! Translates the potential so that its well sits at the origin.
inline PauliPotential ShiftToOrigin(const PauliPotential& pot, const WellData& well) {
  return pot.Shifted(well.x_min);
}

}  // namespace gaugeband

#endif  // GAUGEBAND_POTENTIAL_HPP_
