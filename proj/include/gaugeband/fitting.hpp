#ifndef GAUGEBAND_FITTING_HPP_
#define GAUGEBAND_FITTING_HPP_

#include <cmath>
#include <vector>

#include "gaugeband/error.hpp"

namespace gaugeband {

struct LinearFit {
  Vec params;
  double residual = 0.0;  // root-mean-square residual
};

//! Least squares y ~ X params via QR.
inline LinearFit LeastSquares(const Mat& X, const Vec& y) {
  Require(X.rows() == y.size() && X.rows() >= X.cols(), "least squares needs rows >= parameters");
  LinearFit f;
  f.params = X.colPivHouseholderQr().solve(y);
  f.residual = std::sqrt((X * f.params - y).squaredNorm() / static_cast<double>(y.size()));
  return f;
}

struct PowerFit {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // RMS of log residuals
};

//! y ~ constant * x^exponent by least squares in log-log coordinates.
inline PowerFit FitPower(const std::vector<double>& xs, const std::vector<double>& ys) {
  Require(xs.size() == ys.size(), "fit_power: size mismatch");
  Require(xs.size() >= 3, "fit_power needs at least 3 samples");
  const int n = static_cast<int>(xs.size());
  Mat X(n, 2);
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    Require(xs[i] > 0.0 && ys[i] > 0.0, "fit_power needs positive samples");
    X(i, 0) = 1.0;
    X(i, 1) = std::log(xs[i]);
    y[i] = std::log(ys[i]);
  }
  const LinearFit f = LeastSquares(X, y);
  return {f.params[1], std::exp(f.params[0]), f.residual};
}

struct Extrapolation {
  double limit = 0.0;
  double error = 0.0;
};

namespace detail {

// Value at 0 of the interpolating polynomial through (h_i, v_i) (Neville).
inline double NevilleAtZero(std::vector<double> h, std::vector<double> v) {
  const size_t n = h.size();
  for (size_t m = 1; m < n; ++m)
    for (size_t i = 0; i + m < n; ++i) v[i] = (h[i + m] * v[i] - h[i] * v[i + 1]) / (h[i + m] - h[i]);
  return v[0];
}

}  // namespace detail

//! Polynomial extrapolation to h = 0 of degree `order` through the `order + 1`
//! smallest h. The error estimate is the change from degree order - 1.
inline Extrapolation Richardson(const std::vector<double>& hs, const std::vector<double>& values,
                                int order) {
  Require(hs.size() == values.size(), "richardson: size mismatch");
  Require(hs.size() >= 3, "richardson needs at least 3 samples");
  Require(order >= 1 && order + 1 <= static_cast<int>(hs.size()), "richardson order out of range");
  for (size_t i = 1; i < hs.size(); ++i) {
    if (!(hs[i] < hs[i - 1])) throw Error("richardson needs strictly decreasing h");
    if (hs[i - 1] - hs[i] <= 1e-12 * hs[i - 1]) throw Error("degenerate h spacing");
  }
  auto tail = [&](int count) {
    return detail::NevilleAtZero(std::vector<double>(hs.end() - count, hs.end()),
                                 std::vector<double>(values.end() - count, values.end()));
  };
  Extrapolation e;
  e.limit = tail(order + 1);
  e.error = std::abs(e.limit - tail(order));
  return e;
}

}  // namespace gaugeband

#endif  // GAUGEBAND_FITTING_HPP_
