#pragma once

#include "rfde/expr.hpp"
#include "rfde/measure.hpp"
#include "rfde/trajectory.hpp"

namespace rfde {

struct ProblemSetup {
    StieltjesKernel kernel;
    double t0;
    double horizon;           // rounded up to a whole number of steps
    Expression initial_data;  // x(t) on [t0 - r, t0], continuous
    double step;              // h, at most r/8
};

// Method of steps with fixed-step classical RK4 and cubic Hermite dense
// output. Delayed state values come from the dense output of the already
// committed trajectory; stage times within the current step may reach up to
// one step past the last committed knot, where the previous interval's
// Hermite cubic is extended. Atoms at zero lag contribute through the
// Runge-Kutta stage value instead of the interpolant. When every atom delay
// is constant the step is snapped down so that it divides r and derivative
// breakpoints land on knots. Pure function of its setup; concurrent solves
// are safe.
Trajectory solve(const ProblemSetup& p);

} // namespace rfde
