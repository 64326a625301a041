#ifndef GAUGEBAND_WKB_HPP_
#define GAUGEBAND_WKB_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gaugeband/agmon.hpp"
#include "gaugeband/gauge.hpp"

namespace gaugeband {

//! Lowest j_max eigenvalues of -Laplacian + sum_k tau_k^2 x_k^2, with
//! multiplicity: the sorted values sum_k (2 j_k + 1) tau_k.
inline std::vector<double> HarmonicLevels(const Vec& tau, int j_max) {
  Require(tau.size() >= 1 && (tau.array() > 0.0).all(), "harmonic levels need tau_k > 0");
  std::vector<double> all;
  if (tau.size() == 1) {
    for (int j = 0; j < j_max; ++j) all.push_back((2 * j + 1) * tau[0]);
  } else {
    for (int a = 0; a < j_max; ++a)
      for (int b = 0; b < j_max; ++b) all.push_back((2 * a + 1) * tau[0] + (2 * b + 1) * tau[1]);
  }
  std::sort(all.begin(), all.end());
  all.resize(j_max);
  return all;
}

struct WKBCoefficients {
  double e0 = 0.0;
  double e1 = 0.0;
  double e2_simplified = 0.0;
  std::optional<double> e2_full;
  std::vector<double> mu;
};

namespace detail {

// Value of a gauge-bundle grid field at the origin (node 0).
inline double AtOrigin(const Field& f) { return f[0]; }

}  // namespace detail

//! e0 = E0, e1 = sum_k tau_k (the Laplacian of the phase at the well; equal to
//! tau_1 in 1D), e2_simplified = r11(0) + sum_k a11_k(0)^2.
inline WKBCoefficients ComputeWKBCoefficients(const WellData& well, const GaugeBundle& gb, int j_max = 4) {
  if (!gb.coulomb) throw Error("apply coulomb_transform first");
  Require(well.x_min.norm() <= 1e-10, "potential must be shifted to the origin");
  WKBCoefficients c;
  c.e0 = well.E0;
  c.e1 = well.tau.sum();
  c.e2_simplified = detail::AtOrigin(gb.r11);
  for (int k = 0; k < gb.dim(); ++k) c.e2_simplified += gb.a11[k][0] * gb.a11[k][0];
  c.mu = HarmonicLevels(well.tau, j_max);
  return c;
}

//! Transport data of the 1D WKB ground state on [-x_c, x_c]:
//! phi' = sign(x) sqrt(Veff), 2 phi' f0p' = (e1 - phi'' + 2 i a11 phi') f0p, f0p(0) = 1,
//! f1m = (i / |w|) phi' a21 f0p.
class TransportSolution1D {
 public:
  TransportSolution1D(const PauliPotential& pot, const WellData& well, const GaugeBundle& gb,
                      double x_c, int nodes = 201)
      : pot_(pot), metric_(Metric::FromPotential(pot, well)), grid_(gb.grid), x_c_(x_c) {
    Require(pot.dim() == 1, "transport solve is one dimensional");
    Require(well.x_min.norm() <= 1e-10, "potential must be shifted to the origin");
    Require(nodes >= 3, "transport grid needs at least 3 nodes");
    e1_ = well.tau.sum();
    a11_hat_ = spectral::Forward(grid_, gb.a11[0]);
    a21_hat_ = spectral::Forward(grid_, gb.a21[0]);
    r11_eff_0_ = gb.r11[0] + std::norm(gb.a21[0][0]);

    // R(t) = sqrt(Veff(t) / t^2) about the well; phi' = t R(t).
    Rs_ = metric_.well_series()->Sqrt();
    const Series Nt = [&] {
      std::vector<double> c;
      for (int k = 1; k <= Rs_.order(); ++k) c.push_back(-(k + 1) * Rs_[k]);
      return Series(c.empty() ? std::vector<double>{0.0} : c);
    }();
    // Real part of g near 0: (e1 - phi'') / (2 phi') = N(t) / (2 R(t)).
    g_real_series_ = 0.5 * (Nt * Rs_.Reciprocal());
    G_real_series_ = g_real_series_.Integral();
    a0_ = A11(0.0);
    a1_ = A11Derivative(0.0);
    g0_ = cplx(g_real_series_[0], a0_);
    g1_ = cplx(g_real_series_[1], a1_);

    Require(x_c_ > 0.0, "transport window must be nonempty");
    for (int i = 1; i <= 400; ++i) {
      const double t = x_c_ * i / 400.0;
      if (t < kSeriesRadius) continue;
      for (double s : {-t, t})
        if (metric_.Veff(Vec::Constant(1, s)) <= 0.0) throw Error("well not unique in window");
    }
    for (int i = 0; i < nodes; ++i) {
      const double x = -x_c_ + 2.0 * x_c_ * i / (nodes - 1);
      xs_.push_back(x);
      phi_.push_back(Phi(x));
      f0p_.push_back(F0p(x));
      f1m_.push_back(F1m(x));
    }
  }

  double e1() const { return e1_; }
  const std::vector<double>& x() const { return xs_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<cplx>& f0p() const { return f0p_; }
  const std::vector<cplx>& f1m() const { return f1m_; }

  cplx g0() const { return g0_; }
  cplx g1() const { return g1_; }
  cplx f0p_deriv_at_0() const { return g0_; }
  cplx f0p_second_deriv_at_0() const { return g1_ + g0_ * g0_; }
  double a11_at_0() const { return a0_; }
  double a11_deriv_at_0() const { return a1_; }
  double r11_at_0() const { return r11_eff_0_; }

  double PhiPrime(double x) const {
    if (std::abs(x) < kSeriesRadius) return x * Rs_(x);
    Vec y(1);
    y[0] = x;
    return (x > 0 ? 1.0 : -1.0) * metric_.C(y);
  }

  double Phi(double x) const { return Agmon1D(metric_, 0.0, x); }

  //! Transport rate g = f0p' / f0p.
  cplx G(double x) const {
    if (std::abs(x) < kSeriesRadius) return {g_real_series_(x), A11(x)};
    Vec y(1);
    y[0] = x;
    const double V = metric_.Veff(y);
    const double dV = pot_.LowerGradient(y)[0];
    const double phip = PhiPrime(x);
    const double phipp = (x > 0 ? 1.0 : -1.0) * dV / (2.0 * std::sqrt(V));
    return {(e1_ - phipp) / (2.0 * phip), A11(x)};
  }

  cplx F0p(double x) const {
    const double edge = std::clamp(x, -kSeriesRadius, kSeriesRadius);
    double re = G_real_series_(edge);
    if (x != edge) {
      re += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double t) { return G(t).real(); }, edge, x, 12, 1e-10);
    }
    const double im = IntegrateA11(x);
    return std::exp(cplx(re, im));
  }

  cplx F1m(double x) const {
    Vec y(1);
    y[0] = x;
    const double nw = pot_.NormW(y);
    return cplx(0.0, 1.0) / nw * PhiPrime(x) * A21(x) * F0p(x);
  }

  double A11(double x) const { return spectral::Interpolate(grid_, a11_hat_, Vec::Constant(1, x)).real(); }
  double A11Derivative(double x) const {
    return spectral::InterpolateDerivative(grid_, a11_hat_, Vec::Constant(1, x), 0).real();
  }
  cplx A21(double x) const { return spectral::Interpolate(grid_, a21_hat_, Vec::Constant(1, x)); }

  //! CSV rows (x, phi, Re f0p, Im f0p, Re f1m, Im f1m).
  void WriteCsv(std::ostream& os) const {
    os << "x,phi,re_f0p,im_f0p,re_f1m,im_f1m\n";
    os.precision(17);
    for (size_t i = 0; i < xs_.size(); ++i)
      os << xs_[i] << "," << phi_[i] << "," << f0p_[i].real() << "," << f0p_[i].imag() << ","
         << f1m_[i].real() << "," << f1m_[i].imag() << "\n";
  }

 private:
  static constexpr double kSeriesRadius = 0.1;

  // int_0^x a11, exact for the trigonometric interpolant.
  double IntegrateA11(double x) const {
    if (x == 0.0) return 0.0;
    double acc = 0.0;
    for (int f = 0; f < grid_.size(); ++f) {
      const Mode q = spectral::ModeOf(grid_, f);
      if (spectral::IsNyquist(grid_, q)) continue;
      const double mu = grid_.lattice().DualVector(q)[0];
      const cplx c = a11_hat_[f];
      if (q[0] == 0) {
        acc += (c * x).real();
      } else {
        acc += (c * (std::exp(cplx(0.0, mu * x)) - 1.0) / cplx(0.0, mu)).real();
      }
    }
    return acc;
  }

  PauliPotential pot_;
  Metric metric_;
  TorusGrid grid_;
  double x_c_;
  double e1_ = 0.0;
  CField a11_hat_, a21_hat_;
  double r11_eff_0_ = 0.0;
  Series Rs_, g_real_series_, G_real_series_;
  double a0_ = 0.0, a1_ = 0.0;
  cplx g0_, g1_;
  std::vector<double> xs_, phi_;
  std::vector<cplx> f0p_, f1m_;
};

//! e2 = (i d/dx + a11)^2 f0p (0) + r11(0), where r11 includes |a21(0)|^2.
inline double E2Full1D(const TransportSolution1D& ts) {
  const cplx I(0.0, 1.0);
  const double a = ts.a11_at_0();
  const cplx e2 = -ts.f0p_second_deriv_at_0() + I * ts.a11_deriv_at_0() +
                  2.0 * I * a * ts.f0p_deriv_at_0() + a * a + ts.r11_at_0();
  if (std::abs(e2.imag()) > 1e-8) throw Error("transport inconsistency");
  return e2.real();
}

}  // namespace gaugeband

#endif  // GAUGEBAND_WKB_HPP_
