#pragma once

#include "rrcnn/signal.hpp"

namespace rrcnn {

// Cubic-spline-envelope average: natural splines through the maxima and the
// minima give the upper and lower envelopes; the average is their midpoint.
// Knots are mirror-extended by two extrema past each end of the grid to tame
// the usual spline flare-out there. Needs at least two maxima and two minima.
Signal csa_average(const Signal& x);

} // namespace rrcnn
