#ifndef GAUGEBAND_SPECTRAL_HPP_
#define GAUGEBAND_SPECTRAL_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gaugeband/lattice.hpp"

namespace gaugeband {

using Field = std::vector<double>;
using CField = std::vector<cplx>;

namespace spectral {

inline int BinToMode(int bin, int points) { return bin < points / 2 ? bin : bin - points; }
inline int ModeToBin(int mode, int points) { return ((mode % points) + points) % points; }

namespace detail {

// Transforms every line of the grid along axis `axis` in place.
inline void TransformAxis(CField& data, const TorusGrid& grid, int axis, bool forward) {
  const int points = grid.points_per_dim();
  Eigen::FFT<double> fft;
  std::vector<cplx> line(points), out(points);
  const int lines = grid.size() / points;
  for (int l = 0; l < lines; ++l) {
    for (int i = 0; i < points; ++i) {
      const int flat = axis == 0 ? l * points + i : i * points + l;
      line[i] = data[flat];
    }
    if (forward) {
      fft.fwd(out, line);
      for (auto& z : out) z /= static_cast<double>(points);
    } else {
      fft.inv(out, line);
      for (auto& z : out) z *= static_cast<double>(points);
    }
    for (int i = 0; i < points; ++i) {
      const int flat = axis == 0 ? l * points + i : i * points + l;
      data[flat] = out[i];
    }
  }
}

}  // namespace detail

//! Fourier coefficients c_q of the trigonometric interpolant
//! f(x) = sum_q c_q exp(i mu(q).x), stored in FFT bin order.
inline CField Forward(const TorusGrid& grid, CField values) {
  Require(static_cast<int>(values.size()) == grid.size(), "field size does not match grid");
  for (int axis = 0; axis < grid.dim(); ++axis) detail::TransformAxis(values, grid, axis, true);
  return values;
}

inline CField Forward(const TorusGrid& grid, const Field& values) {
  return Forward(grid, CField(values.begin(), values.end()));
}

inline CField Inverse(const TorusGrid& grid, CField coeffs) {
  for (int axis = 0; axis < grid.dim(); ++axis) detail::TransformAxis(coeffs, grid, axis, false);
  return coeffs;
}

//! Mode of a coefficient slot; the Nyquist bin maps to -P/2.
inline Mode ModeOf(const TorusGrid& grid, int flat) {
  const Mode b = grid.Index(flat);
  Mode m{BinToMode(b[0], grid.points_per_dim()), 0};
  if (grid.dim() == 2) m[1] = BinToMode(b[1], grid.points_per_dim());
  return m;
}

inline bool IsNyquist(const TorusGrid& grid, const Mode& m) {
  for (int k = 0; k < grid.dim(); ++k)
    if (m[k] == -grid.points_per_dim() / 2) return true;
  return false;
}

//! Coefficient for mode q, or 0 when q is not representable on the grid.
inline cplx Coefficient(const TorusGrid& grid, const CField& coeffs, const Mode& q) {
  const int half = grid.points_per_dim() / 2;
  for (int k = 0; k < grid.dim(); ++k)
    if (q[k] <= -half || q[k] >= half) return 0.0;
  Mode b{ModeToBin(q[0], grid.points_per_dim()), 0};
  if (grid.dim() == 2) b[1] = ModeToBin(q[1], grid.points_per_dim());
  return coeffs[grid.Flat(b)];
}

//! Largest coefficient magnitude among modes with some |q_k| > cutoff.
inline double TailMagnitude(const TorusGrid& grid, const CField& coeffs, int cutoff) {
  double tail = 0.0;
  for (int flat = 0; flat < grid.size(); ++flat) {
    const Mode q = ModeOf(grid, flat);
    bool outside = false;
    for (int k = 0; k < grid.dim(); ++k) outside = outside || std::abs(q[k]) > cutoff;
    if (outside) tail = std::max(tail, std::abs(coeffs[flat]));
  }
  return tail;
}

//! Resolution guard: magnitude of the upper half of the spectrum.
inline double ResolutionTail(const TorusGrid& grid, const CField& coeffs) {
  return TailMagnitude(grid, coeffs, grid.points_per_dim() / 4);
}

//! Cartesian partial derivative along `dir` by multiplication with i mu_dir(q).
//! The Nyquist bin is dropped.
inline CField Derivative(const TorusGrid& grid, const CField& values, int dir) {
  CField c = Forward(grid, values);
  for (int flat = 0; flat < grid.size(); ++flat) {
    const Mode q = ModeOf(grid, flat);
    if (IsNyquist(grid, q)) {
      c[flat] = 0.0;
      continue;
    }
    c[flat] *= cplx(0.0, grid.lattice().DualVector(q)[dir]);
  }
  return Inverse(grid, std::move(c));
}

inline Field Derivative(const TorusGrid& grid, const Field& values, int dir) {
  const CField d = Derivative(grid, CField(values.begin(), values.end()), dir);
  Field out(d.size());
  std::transform(d.begin(), d.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

//! Evaluates the trigonometric interpolant (Nyquist bin excluded) at x.
inline cplx Interpolate(const TorusGrid& grid, const CField& coeffs, const Vec& x) {
  cplx sum = 0.0;
  for (int flat = 0; flat < grid.size(); ++flat) {
    const Mode q = ModeOf(grid, flat);
    if (IsNyquist(grid, q) || coeffs[flat] == 0.0) continue;
    const double phase = grid.lattice().DualVector(q).dot(x);
    sum += coeffs[flat] * cplx(std::cos(phase), std::sin(phase));
  }
  return sum;
}

//! Interpolant of the derivative along `dir`, evaluated at x.
inline cplx InterpolateDerivative(const TorusGrid& grid, const CField& coeffs, const Vec& x,
                                  int dir) {
  cplx sum = 0.0;
  for (int flat = 0; flat < grid.size(); ++flat) {
    const Mode q = ModeOf(grid, flat);
    if (IsNyquist(grid, q) || coeffs[flat] == 0.0) continue;
    const Vec mu = grid.lattice().DualVector(q);
    const double phase = mu.dot(x);
    sum += coeffs[flat] * cplx(0.0, mu[dir]) * cplx(std::cos(phase), std::sin(phase));
  }
  return sum;
}

}  // namespace spectral
}  // namespace gaugeband

#endif  // GAUGEBAND_SPECTRAL_HPP_
