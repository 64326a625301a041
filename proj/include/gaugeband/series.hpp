#ifndef GAUGEBAND_SERIES_HPP_
#define GAUGEBAND_SERIES_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaugeband/error.hpp"

namespace gaugeband {

//! Truncated Taylor series sum_{k<=order} c_k t^k with real coefficients.
class Series {
 public:
  Series() = default;
  explicit Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend Series operator+(const Series& a, const Series& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
    return Series(std::move(c));
  }
  friend Series operator-(const Series& a, const Series& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (size_t k = 0; k < c.size(); ++k) c[k] = a[k] - b[k];
    return Series(std::move(c));
  }
  //! Product truncated to the smaller order of the two factors.
  friend Series operator*(const Series& a, const Series& b) {
    const size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<double> c(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; i + j < n; ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Series(std::move(c));
  }

  friend Series operator*(double s, const Series& a) {
    std::vector<double> c = a.c_;
    for (double& x : c) x *= s;
    return Series(std::move(c));
  }

  //! 1 / series, same order; needs a nonzero constant term.
  Series Reciprocal() const {
    Require(!c_.empty() && c_[0] != 0.0, "series reciprocal needs a nonzero constant term");
    std::vector<double> r(c_.size(), 0.0);
    r[0] = 1.0 / c_[0];
    for (size_t k = 1; k < c_.size(); ++k) {
      double acc = 0.0;
      for (size_t j = 1; j <= k; ++j) acc += c_[j] * r[k - j];
      r[k] = -acc / c_[0];
    }
    return Series(std::move(r));
  }

  Series Derivative() const {
    std::vector<double> d(std::max<size_t>(c_.size(), 2) - 1, 0.0);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = k * c_[k];
    return Series(std::move(d));
  }

  //! Antiderivative vanishing at 0.
  Series Integral() const {
    std::vector<double> r(c_.size() + 1, 0.0);
    for (size_t k = 0; k < c_.size(); ++k) r[k + 1] = c_[k] / (k + 1);
    return Series(std::move(r));
  }

  //! Drops the first k coefficients: (s(t) - lower terms) / t^k.
  Series DropLeading(int k) const {
    if (k >= static_cast<int>(c_.size())) return Series({0.0});
    return Series(std::vector<double>(c_.begin() + k, c_.end()));
  }

  //! Square root of a series with positive constant term.
  Series Sqrt() const {
    Require(!c_.empty() && c_[0] > 0.0, "series square root needs a positive constant term");
    std::vector<double> r(c_.size(), 0.0);
    r[0] = std::sqrt(c_[0]);
    for (size_t k = 1; k < c_.size(); ++k) {
      double acc = c_[k];
      for (size_t j = 1; j < k; ++j) acc -= r[j] * r[k - j];
      r[k] = acc / (2.0 * r[0]);
    }
    return Series(std::move(r));
  }

 private:
  std::vector<double> c_;
};

}  // namespace gaugeband

#endif  // GAUGEBAND_SERIES_HPP_
