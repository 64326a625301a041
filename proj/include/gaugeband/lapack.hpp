#ifndef GAUGEBAND_LAPACK_HPP_
#define GAUGEBAND_LAPACK_HPP_

#include <complex>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#endif  // GAUGEBAND_LAPACK_HPP_
