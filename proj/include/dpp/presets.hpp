#pragma once

/// Named boundary data, running costs and problem families used by the CLI
/// and the experiment suites.

#include "dpp/regularity.hpp"
#include "dpp/solver.hpp"

namespace dpp {
namespace presets {

/// Step data on (0,1): 0 to the left, 1 to the right.
BoundaryData step_1d();
BoundaryData constant_data(double c);
BoundaryData affine_data(double a0, Vec a);
/// Smooth polynomial data used by the 2D experiments:
/// g(x, y) = (x^2 - y^2)/2 + 0.3 x y + 0.1 x.
BoundaryData smooth_2d();
BoundaryData square_norm(); // |x|^2

RunningCost zero_cost();
RunningCost constant_cost(double c);
RunningCost linear_cost(Vec a); // f(x) = a . x, Lip(f) = |a|

/// The 1D noise family on (0,1) with step data, h = eps/steps_divisor.
SweepFamily noise_1d_family(double alpha, double beta, long steps_divisor = 64);

/// The 2D extremal family on the unit disk with smooth data,
/// h = eps/steps_divisor.
SweepFamily pucci_2d_family(double alpha, double beta, double lambda,
                            long steps_divisor = 4, BoundaryData g = smooth_2d(),
                            RunningCost f = zero_cost());

} // namespace presets
} // namespace dpp
