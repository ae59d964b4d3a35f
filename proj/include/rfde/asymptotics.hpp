#pragma once

#include "rfde/charsolve.hpp"
#include "rfde/trajectory.hpp"

#include <complex>
#include <iosfwd>

namespace rfde {

// Measured tail behavior of y(t) = x(t) exp(-integral_{t0}^t lambda).
struct AsymptoticsReport {
    Complex L_x_estimate = 0;      // y at the end of the horizon
    double y_tail_variation = 0;   // max |y - L_x| over the tail window
    double yprime_tail = 0;        // max |y'| over the tail window
    double eq24_gap = 0;           // max |x' e^{-I} - lambda x e^{-I}| over the tail,
                                   // restated through x = y e^{+I}; equals |y'| identically
    bool envelope_ok = false;      // filled by check_envelope
    double M_x = 0;                // max |y'| over the first delay span
    double mu_used = 0;            // contraction factor the envelope was checked with
    double tail_lo = 0, tail_hi = 0;

    void write_kv(std::ostream& os) const; // flat key=value block
};

// y knots mirror the x knots: y = x exp(-(Lambda(t) - Lambda(t0))) and
// y' = (x' - lambda x) exp(-(Lambda(t) - Lambda(t0))), both slope arrays
// transformed. lambda's domain must cover the trajectory.
Trajectory transform_y(const Trajectory& x, const LambdaFunction& lam);

struct EnvelopeCheck {
    double M_x = 0;
    bool ok = false;
};

struct EnvelopeOptions {
    double slack = 0.1;     // multiplicative allowance for discretization error
    double abs_tol = -1;    // roundoff floor; < 0 picks 1e-12 * (1 + max |y|)
};

// Geometric decay bound |y'(t)| <= M_x mu^{(t-t0)/r - 1} (1+slack) + abs_tol
// checked at every knot and midpoint of [t0, T]; M_x is the max of |y'| over
// [t0, t0+r]. Requires 0 <= mu < 1 and T >= t0 + 3r. mu = 0 degenerates to
// requiring y' = 0 (within the floor) past t0 + r.
EnvelopeCheck check_envelope(const Trajectory& y, double mu, double r,
                             const EnvelopeOptions& opts = {});

// Tail estimates over the last tail_fraction of [t0, T]; requires
// T >= t0 + 5r. Envelope fields of the report are left unset.
AsymptoticsReport estimate_limits(const Trajectory& y, const LambdaFunction& lam,
                                  double r, double tail_fraction = 0.25);

// Columns: t, abs_y_minus_L, abs_yprime, envelope (the checked bound, or inf
// when mu was not usable), one row per knot of [t0, T].
void write_asymptotics_csv(const Trajectory& y, const AsymptoticsReport& rep, double r,
                           std::ostream& os);

} // namespace rfde
