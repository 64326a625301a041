#ifndef GAUGEBAND_TRIG_POLY_HPP_
#define GAUGEBAND_TRIG_POLY_HPP_

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gaugeband/lattice.hpp"
#include "gaugeband/series.hpp"

namespace gaugeband {

//! Finite Fourier series p(x) = sum_m c_m exp(i mu(m).x) over dual-lattice
//! modes m. Derivatives are exact term by term.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(Lattice lattice, std::map<Mode, cplx> coeffs = {})
      : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
    if (lattice_.dim() == 1)
      for (const auto& [m, c] : coeffs_)
        Require(m[1] == 0, "1D trigonometric polynomial has a 2D mode");
  }

  static TrigPoly Constant(const Lattice& lattice, double value) {
    return TrigPoly(lattice, {{Mode{0, 0}, cplx(value, 0.0)}});
  }

  //! Builds a real-valued polynomial from user terms. A mode given without
  //! its negative gets the conjugate partner added; a pair given explicitly
  //! must already be conjugate.
  static TrigPoly RealFromTerms(const Lattice& lattice,
                                const std::vector<std::pair<Mode, cplx>>& terms) {
    std::map<Mode, cplx> given;
    for (const auto& [m, c] : terms) given[m] += c;
    std::map<Mode, cplx> coeffs = given;
    for (const auto& [m, c] : given) {
      const Mode neg{-m[0], -m[1]};
      if (neg == m) {
        Require(std::abs(c.imag()) <= 1e-14 * (1.0 + std::abs(c)),
                "zero mode of a real potential must be real");
        coeffs[m] = c.real();
        continue;
      }
      auto it = given.find(neg);
      if (it == given.end()) {
        coeffs[neg] = std::conj(c);
      } else {
        Require(std::abs(it->second - std::conj(c)) <= 1e-12 * (1.0 + std::abs(c)),
                "coefficients of +m and -m are not complex conjugates");
      }
    }
    return TrigPoly(lattice, std::move(coeffs));
  }

  const Lattice& lattice() const { return lattice_; }
  const std::map<Mode, cplx>& coeffs() const { return coeffs_; }
  int dim() const { return lattice_.dim(); }

  int Degree() const {
    int deg = 0;
    for (const auto& [m, c] : coeffs_)
      if (c != 0.0) deg = std::max({deg, std::abs(m[0]), std::abs(m[1])});
    return deg;
  }

  bool IsReal(double tol = 1e-14) const {
    for (const auto& [m, c] : coeffs_) {
      auto it = coeffs_.find(Mode{-m[0], -m[1]});
      const cplx partner = it == coeffs_.end() ? 0.0 : it->second;
      if (std::abs(partner - std::conj(c)) > tol * (1.0 + std::abs(c))) return false;
    }
    return true;
  }

  cplx operator()(const Vec& x) const { return Derivative(x, Mode{0, 0}); }

  //! Mixed Cartesian partial derivative, orders[j] times along axis j.
  cplx Derivative(const Vec& x, const Mode& orders) const {
    cplx sum = 0.0;
    for (const auto& [m, c] : coeffs_) {
      const Vec mu = lattice_.DualVector(m);
      cplx factor = c;
      for (int j = 0; j < dim(); ++j)
        for (int r = 0; r < orders[j]; ++r) factor *= cplx(0.0, mu[j]);
      const double phase = mu.dot(x);
      sum += factor * cplx(std::cos(phase), std::sin(phase));
    }
    return sum;
  }

  Eigen::VectorXcd Gradient(const Vec& x) const {
    Eigen::VectorXcd g(dim());
    for (int j = 0; j < dim(); ++j) {
      Mode o{0, 0};
      o[j] = 1;
      g[j] = Derivative(x, o);
    }
    return g;
  }

  Eigen::MatrixXcd Hessian(const Vec& x) const {
    Eigen::MatrixXcd hess(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) {
        Mode o{0, 0};
        o[i] += 1;
        o[j] += 1;
        hess(i, j) = Derivative(x, o);
      }
    return hess;
  }

  //! q(x) = p(x + x0): every coefficient picks up exp(i mu(m).x0).
  TrigPoly Shifted(const Vec& x0) const {
    std::map<Mode, cplx> out;
    for (const auto& [m, c] : coeffs_) {
      const double phase = lattice_.DualVector(m).dot(x0);
      out[m] = c * cplx(std::cos(phase), std::sin(phase));
    }
    return TrigPoly(lattice_, std::move(out));
  }

  //! Real part of the Taylor expansion at x0 along the only axis (1D).
  Series Taylor1D(double x0, int order) const {
    Require(dim() == 1, "Taylor1D needs a 1D polynomial");
    std::vector<double> c(order + 1);
    double factorial = 1.0;
    Vec x(1);
    x[0] = x0;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) factorial *= k;
      c[k] = Derivative(x, Mode{k, 0}).real() / factorial;
    }
    return Series(std::move(c));
  }

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
    std::map<Mode, cplx> out = a.coeffs_;
    for (const auto& [m, c] : b.coeffs_) out[m] += c;
    return TrigPoly(a.lattice_, std::move(out));
  }

  friend TrigPoly operator*(double s, const TrigPoly& p) {
    std::map<Mode, cplx> out = p.coeffs_;
    for (auto& [m, c] : out) c *= s;
    return TrigPoly(p.lattice_, std::move(out));
  }

  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    std::map<Mode, cplx> out;
    for (const auto& [ma, ca] : a.coeffs_)
      for (const auto& [mb, cb] : b.coeffs_) out[Mode{ma[0] + mb[0], ma[1] + mb[1]}] += ca * cb;
    return TrigPoly(a.lattice_, std::move(out));
  }

 private:
  Lattice lattice_;
  std::map<Mode, cplx> coeffs_;
};

}  // namespace gaugeband

#endif  // GAUGEBAND_TRIG_POLY_HPP_
