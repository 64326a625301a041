#ifndef GAUGEBAND_TUNNELING_HPP_
#define GAUGEBAND_TUNNELING_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "gaugeband/agmon.hpp"
#include "gaugeband/bloch.hpp"
#include "gaugeband/fitting.hpp"
#include "gaugeband/lapack.hpp"
#include "gaugeband/wkb.hpp"

namespace gaugeband {

enum class DirichletForm { kScalar11, kFull };

struct DirichletResult {
  double lambda = 0.0;              // Richardson-extrapolated first eigenvalue
  std::vector<double> raw;          // eigenvalues at P, 2P, 4P intervals
  std::vector<double> x;            // interior nodes of the finest grid
  std::vector<double> ground_state; // scalar form only; positive, unit l2 norm
};

namespace detail {

// Lowest eigenvalue (and optionally eigenvector) of a symmetric tridiagonal matrix.
inline double TridiagonalGround(const std::vector<double>& d, const std::vector<double>& e,
                                std::vector<double>* vec) {
  const lapack_int n = static_cast<lapack_int>(d.size());
  lapack_int m = 0, nsplit = 0;
  std::vector<double> w(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, 1, abstol, d.data(), e.data(), &m,
                                   &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || m != 1) throw Error("tridiagonal eigensolver failed");
  if (vec) {
    vec->assign(n, 0.0);
    lapack_int ifail = 0;
    info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), 1, w.data(), iblock.data(),
                          isplit.data(), vec->data(), n, &ifail);
    if (info != 0) throw Error("tridiagonal eigenvector solve failed");
  }
  return w[0];
}

// Lowest eigenvalue of a Hermitian band matrix stored in LAPACK upper band form.
inline double HermitianBandGround(lapack_int n, lapack_int kd, std::vector<cplx>& ab) {
  lapack_int m = 0;
  std::vector<double> w(n);
  std::vector<cplx> q(1), z(1);
  std::vector<lapack_int> ifail(n);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, ab.data(), kd + 1,
                                         q.data(), 1, 0.0, 0.0, 1, 1, abstol, &m, w.data(), z.data(),
                                         1, ifail.data());
  if (info != 0 || m != 1) throw Error("band eigensolver failed");
  return w[0];
}

}  // namespace detail

//! First Dirichlet eigenvalue on (-L, L) of either
//!   scalar: -h^2 d^2 + (v - |w|) + h^2 r11   (a11 is a pure gauge on an interval), or
//!   full:   -h^2 d^2 I + v I + w.sigma,
//! by second-order finite differences at P, 2P, 4P intervals and Richardson
//! extrapolation. `r11` may be empty (treated as zero).
inline DirichletResult DirichletGround(const PauliPotential& pot, double h, double L, int P,
                                       DirichletForm form,
                                       const std::function<double(double)>& r11 = {}) {
  Require(pot.dim() == 1, "Dirichlet problem is one dimensional");
  Require(h > 0.0 && L > 0.0 && P >= 8, "Dirichlet parameters out of range");
  const double period = std::abs(pot.lattice().basis()(0, 0));
  Require(L < period / 2.0, "Dirichlet interval must exclude other wells");
  DirichletResult out;
  for (int level = 0; level < 3; ++level) {
    const int intervals = P << level;
    const double dx = 2.0 * L / intervals;
    const int n = intervals - 1;
    const double kin = h * h / (dx * dx);
    const bool finest = level == 2;
    if (form == DirichletForm::kScalar11) {
      std::vector<double> d(n), e(n - 1, -kin);
      for (int i = 0; i < n; ++i) {
        const double x = -L + (i + 1) * dx;
        d[i] = 2.0 * kin + pot.Lower(Vec::Constant(1, x)) + (r11 ? h * h * r11(x) : 0.0);
      }
      std::vector<double> vec;
      out.raw.push_back(detail::TridiagonalGround(d, e, finest ? &vec : nullptr));
      if (finest) {
        double norm = 0.0, sum = 0.0;
        for (double v : vec) {
          norm += v * v;
          sum += v;
        }
        const double s = (sum < 0 ? -1.0 : 1.0) / std::sqrt(norm);
        for (int i = 0; i < n; ++i) {
          out.x.push_back(-L + (i + 1) * dx);
          out.ground_state.push_back(s * vec[i]);
        }
      }
    } else {
      // Unknowns 2 i + s; upper band storage with kd = 2: ab[kd + r - c + c (kd + 1)].
      const lapack_int N = 2 * n, kd = 2;
      std::vector<cplx> ab(static_cast<size_t>(kd + 1) * N, 0.0);
      auto at = [&](int r, int c) -> cplx& { return ab[kd + r - c + static_cast<size_t>(c) * (kd + 1)]; };
      for (int i = 0; i < n; ++i) {
        const double x = -L + (i + 1) * dx;
        const Mat2c V = PauliEval(pot, Vec::Constant(1, x)).V;
        at(2 * i, 2 * i) = 2.0 * kin + V(0, 0).real();
        at(2 * i + 1, 2 * i + 1) = 2.0 * kin + V(1, 1).real();
        at(2 * i, 2 * i + 1) = V(0, 1);
        if (i + 1 < n) {
          at(2 * i, 2 * i + 2) = -kin;
          at(2 * i + 1, 2 * i + 3) = -kin;
        }
        if (finest) out.x.push_back(x);
      }
      out.raw.push_back(detail::HermitianBandGround(N, kd, ab));
    }
  }
  const double r1 = (4.0 * out.raw[1] - out.raw[0]) / 3.0;
  const double r2 = (4.0 * out.raw[2] - out.raw[1]) / 3.0;
  if (std::abs(r2 - r1) > 1e-10) throw Error("Dirichlet discretization too coarse");
  out.lambda = r2;
  return out;
}

struct WidthSample {
  double h = 0.0;
  double width = 0.0;
};

//! Smallest band width distinguishable from eigensolver rounding:
//! 10 eps max|H^{h,0}_{ij}|, and never below 1e-13.
template <class Model>
double WidthNoiseFloor(const Model& model, double h) {
  const double scale = model.Assemble(h, Vec::Zero(model.lattice().dim())).matrix.cwiseAbs().maxCoeff();
  return std::max(1e-13, 10.0 * std::numeric_limits<double>::epsilon() * scale);
}

//! First-band widths from band sweeps of the direct fiber operator. Widths
//! below the noise floor are dropped and reported in `warnings`.
inline std::vector<WidthSample> WidthScan(const PauliPotential& pot, const std::vector<double>& hs,
                                          int K, int M, std::vector<std::string>* warnings = nullptr) {
  const DirectModel model(pot, M);
  std::vector<WidthSample> out;
  for (double h : hs) {
    const BandSweep s = SweepBands(model, h, K, 1);
    const double width = s.stats[0].width;
    if (width < WidthNoiseFloor(model, h)) {
      if (warnings) warnings->push_back("width below noise floor at h = " + std::to_string(h));
      continue;
    }
    out.push_back({h, width});
  }
  return out;
}

struct WidthFit {
  std::vector<WidthSample> samples;  // samples inside the trust window
  double S_fit = 0.0;
  double eta0_fit = 0.0;
  double residual_half_power = 0.0;  // log b = log eta0 + (1/2) log h - S/h
  double residual_plain = 0.0;       // log b = log eta - S/h
  double S_plain = 0.0;
  double residual_power = 0.0;       // log b = log C + p log h
  bool half_power_preferred = false;
  bool exponential_regime = false;
  double S0_hint = 0.0;
};

//! Fits b = eta0 h^{1/2} exp(-S/h) to widths in the window [1e-12, 1e-3], and
//! compares with the models without the h^{1/2} factor and with a pure power law.
inline WidthFit FitWidthLaw(const std::vector<WidthSample>& samples, double S0_hint = 0.0) {
  WidthFit fit;
  fit.S0_hint = S0_hint;
  for (const auto& s : samples)
    if (s.width >= 1e-12 && s.width <= 1e-3 && s.h > 0.0) fit.samples.push_back(s);
  const int n = static_cast<int>(fit.samples.size());
  if (n < 4) throw Error("width fit needs at least 4 samples in the trust window");
  Mat X(n, 2), Xp(n, 2);
  Vec y(n), yh(n);
  for (int i = 0; i < n; ++i) {
    const double h = fit.samples[i].h;
    X(i, 0) = 1.0;
    X(i, 1) = -1.0 / h;
    Xp(i, 0) = 1.0;
    Xp(i, 1) = std::log(h);
    y[i] = std::log(fit.samples[i].width);
    yh[i] = y[i] - 0.5 * std::log(h);
  }
  const LinearFit half = LeastSquares(X, yh);
  const LinearFit plain = LeastSquares(X, y);
  const LinearFit power = LeastSquares(Xp, y);
  fit.S_fit = half.params[1];
  fit.eta0_fit = std::exp(half.params[0]);
  fit.S_plain = plain.params[1];
  fit.residual_half_power = half.residual;
  fit.residual_plain = plain.residual;
  fit.residual_power = power.residual;
  fit.half_power_preferred = half.residual <= plain.residual;
  fit.exponential_regime = fit.S_fit > 0.0 && std::min(half.residual, plain.residual) < power.residual;
  return fit;
}

//! Decreasing cutoff: 1 on [0, s_a], 0 on [s_b, inf), smooth step in between.
struct Chi1Profile {
  double s_a = 0.0, s_b = 0.0;

  //! s_a = (S0 + eta0)/2, s_b = (S0 + eta1)/2.
  static Chi1Profile FromMargins(double S0, double eta0, double eta1) {
    return {(S0 + eta0) / 2.0, (S0 + eta1) / 2.0};
  }
  static Chi1Profile Default(double S0) { return FromMargins(S0, S0 / 8.0, S0 / 4.0); }

  double operator()(double s) const { return 1.0 - Step((s - s_a) / (s_b - s_a)); }
  double Derivative(double s) const { return -StepDerivative((s - s_a) / (s_b - s_a)) / (s_b - s_a); }

 private:
  static double F(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
  static double Step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return F(u) / (F(u) + F(1.0 - u));
  }
  static double StepDerivative(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double a = F(u), b = F(1.0 - u);
    const double da = a / (u * u), db = b / ((1.0 - u) * (1.0 - u));
    return (da * b + a * db) / ((a + b) * (a + b));
  }
};

struct HoppingResult {
  cplx rho_plus = 0.0;
  cplx rho_minus = 0.0;
  cplx rho_tot = 0.0;
  double predicted_width = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  // x-range where chi1' is nonzero
};

//! Hopping coefficient towards omega = beta_1 on the cell W = [-|beta|/2, |beta|/2]:
//!   rho+ = 2 (h tau / pi)^{1/2} int_W chi1'(d(x - omega)) |d'(x - omega)|^2
//!          f0p(x - omega) conj(f0p(x)) exp(-(d(x - omega) + d(x)) / h) dx,
//! with d the Agmon distance to the well at 0 and f0p the WKB amplitude.
//! rho- vanishes on W. The predicted first-band width is 4 |rho+ + rho-|.
inline HoppingResult HoppingCoefficient1D(const PauliPotential& pot, const WellData& well,
                                          const TransportSolution1D& ts, double S0, double h,
                                          const Chi1Profile& chi1) {
  Require(pot.dim() == 1, "hopping coefficient is one dimensional");
  if (!(chi1.s_a >= S0 / 2.0 && chi1.s_a < chi1.s_b && chi1.s_b < 0.75 * S0))
    throw Error("chi1 support violates the domain constraints");
  const Metric metric = Metric::FromPotential(pot, well);
  const double omega = std::abs(pot.lattice().basis()(0, 0));
  // s(x) = d(x - omega) increases as x decreases from omega/2 towards 0.
  auto s_of = [&](double x) { return Agmon1D(metric, x - omega, 0.0); };
  auto solve = [&](double target) {
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 60;
    const auto r = boost::math::tools::toms748_solve(
        [&](double x) { return s_of(x) - target; }, 0.0, omega / 2.0, tol, iters);
    return 0.5 * (r.first + r.second);
  };
  HoppingResult res;
  res.window_lo = solve(chi1.s_b);
  res.window_hi = solve(chi1.s_a);
  const double tau_prod = well.tau.prod();
  const double pref = 2.0 * std::sqrt(h * tau_prod / std::numbers::pi);
  auto integrand = [&](double x, bool imag) {
    const double s = s_of(x);
    const double dprime2 = metric.Veff(Vec::Constant(1, x - omega));
    const double expo = std::exp(-(s + Agmon1D(metric, 0.0, x)) / h);
    const cplx val = chi1.Derivative(s) * dprime2 * ts.F0p(x - omega) * std::conj(ts.F0p(x)) * expo;
    return imag ? val.imag() : val.real();
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double re = GK::integrate([&](double x) { return integrand(x, false); }, res.window_lo,
                                  res.window_hi, 8, 1e-9);
  const double im = GK::integrate([&](double x) { return integrand(x, true); }, res.window_lo,
                                  res.window_hi, 8, 1e-9);
  res.rho_plus = pref * cplx(re, im);
  res.rho_minus = 0.0;
  res.rho_tot = res.rho_plus + res.rho_minus;
  res.predicted_width = 4.0 * std::abs(res.rho_tot);
  return res;
}

}  // namespace gaugeband

#endif  // GAUGEBAND_TUNNELING_HPP_
