#ifndef GAUGEBAND_ERROR_HPP_
#define GAUGEBAND_ERROR_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gaugeband {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Mat2c = Eigen::Matrix2cd;

//! All library failures surface as this exception; the message names the
//! violated condition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Internal invariant violation (a bug, not bad input).
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

inline void Require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

}  // namespace gaugeband

#endif  // GAUGEBAND_ERROR_HPP_
