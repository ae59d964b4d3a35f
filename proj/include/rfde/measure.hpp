#pragma once

#include "rfde/expr.hpp"
#include "rfde/quadrature.hpp"
#include "rfde/trajectory.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace rfde {

// Kernel evaluation failure (delay outside [0, r], bad expression domain).
class KernelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One jump of eta(t, .): a point mass b(t) sitting at lag tau(t).
struct Atom {
    Expression delay; // tau(t), must land in [0, r]
    Expression mass;  // b(t)
};

// An absolutely continuous piece: d_theta eta(t, theta) = k(t, theta) dtheta
// on [theta_lo, theta_hi] within [0, r].
struct DensityPiece {
    Expression kernel; // k(t, theta)
    double theta_lo = 0;
    double theta_hi = 0;
};

struct QuadratureConfig {
    int order = 16;  // Gauss-Legendre points per panel
    int panels = 8;  // equal panels per density support
};

// Time-dependent normalized bounded-variation kernel eta(t, .) on [0, r],
// stored as increments (atoms + densities) so that eta(t,0) = 0 and right
// continuity hold structurally and |eta| has the closed form
// sum |b_j| + integral |k|. Immutable; all operations are pure.
class StieltjesKernel {
public:
    StieltjesKernel(double delay_horizon,
                    std::vector<Atom> atoms,
                    std::vector<DensityPiece> densities,
                    QuadratureConfig quad = {});

    double delay_horizon() const { return r_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& densities() const { return densities_; }
    const QuadratureConfig& quadrature() const { return quad_; }
    bool empty() const { return atoms_.empty() && densities_.empty(); }
    // true when every atom delay is a constant expression
    bool has_constant_delays() const;

    // integral of f against d_theta eta(t, .):
    //   sum_j b_j(t) f(tau_j(t)) + sum_p integral k_p(t,theta) f(theta) dtheta.
    // Atom terms are plain sums (no quadrature); densities use composite
    // Gauss-Legendre on the configured panel subdivision.
    Complex integrate(double t, const std::function<Complex(double)>& f) const;

    // Same against the total variation d_theta |eta|(t, .); f real >= 0.
    double total_variation_integral(double t, const std::function<double(double)>& f) const;

    // L(t) phi for a state segment phi on [-r, 0]: integrate with
    // f(theta) = phi(-theta).
    Complex apply_functional(double t, const Segment& phi) const;

    // Density part only; the stepper handles atoms itself (the zero-lag atom
    // must see the Runge-Kutta stage value, not the interpolant).
    Complex density_integral(double t, const std::function<Complex(double)>& f) const;

    // Evaluated atom delay, checked (with fp slop) into [0, r].
    double checked_delay(const Atom& atom, double t) const;

private:
    double r_;
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> densities_;
    QuadratureConfig quad_;
    GaussLegendre rule_;
};

} // namespace rfde
