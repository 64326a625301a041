#ifndef GAUGEBAND_GAUGEBAND_HPP_
#define GAUGEBAND_GAUGEBAND_HPP_

#include "gaugeband/agmon.hpp"
#include "gaugeband/bloch.hpp"
#include "gaugeband/config.hpp"
#include "gaugeband/error.hpp"
#include "gaugeband/fitting.hpp"
#include "gaugeband/gauge.hpp"
#include "gaugeband/harness.hpp"
#include "gaugeband/lattice.hpp"
#include "gaugeband/potential.hpp"
#include "gaugeband/report.hpp"
#include "gaugeband/series.hpp"
#include "gaugeband/spectral.hpp"
#include "gaugeband/trig_poly.hpp"
#include "gaugeband/tunneling.hpp"
#include "gaugeband/wkb.hpp"

#endif  // GAUGEBAND_GAUGEBAND_HPP_
