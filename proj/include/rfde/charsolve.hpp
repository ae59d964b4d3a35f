#pragma once

#include "rfde/errors.hpp"
#include "rfde/expr.hpp"
#include "rfde/measure.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rfde {

// Continuous lambda(.) on [t_lo, t_hi] together with its running integral
// Lambda(t) = integral_{t_lo}^t lambda. Two backings:
//
//  * closed form: an expression in t; Lambda comes from a small
//    antiderivative table (constants -> linear, k/(t+c) -> k ln(t+c)) when
//    the expression matches, otherwise from composite trapezoid sums on a
//    grid of spacing grid_step;
//  * grid: knot values with linear interpolation; Lambda is the exact
//    integral of the interpolant (piecewise quadratic), so trapezoid prefix
//    sums at the knots.
class LambdaFunction {
public:
    LambdaFunction(Expression closed_form, double t_lo, double t_hi, double grid_step);
    LambdaFunction(std::vector<double> knots, std::vector<Complex> values);

    bool is_closed_form() const { return expr_.has_value(); }
    bool has_exact_cumulative() const { return anti_ != Anti::None; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

    Complex operator()(double t) const;          // lambda(t)
    Complex cumulative(double t) const;          // Lambda(t)
    Complex integral(double a, double b) const;  // integral_a^b lambda

    const std::vector<double>& knots() const { return knots_; }

    // Columns: t, re_lambda, im_lambda, re_Lambda, im_Lambda at the knots.
    void write_csv(std::ostream& os) const;

private:
    double checked(double t) const;
    Complex grid_value(double t) const;
    Complex grid_cumulative(double t) const;

    std::optional<Expression> expr_;
    enum class Anti { None, Linear, Log } anti_ = Anti::None;
    double anti_scale_ = 0, anti_offset_ = 0; // k, c in k/(t+c)
    double t_lo_ = 0, t_hi_ = 0;
    std::vector<double> knots_;
    std::vector<Complex> values_;
    std::vector<Complex> prefix_; // Lambda at the knots
};

// Right-hand side of the generalized characteristic equation at time t:
//   integral_0^r d_theta eta(t,theta) exp(-integral_{t-theta}^t lambda).
Complex characteristic_rhs(const StieltjesKernel& kernel, const LambdaFunction& lam, double t);

// Defect of a candidate lambda: max |lambda(t) - rhs(t)| over n+1 equispaced
// sample times in [a, b].
double characteristic_residual(const StieltjesKernel& kernel, const LambdaFunction& lam,
                               double a, double b, int n);

struct FixedPointOptions {
    double grid_step;        // delta; must be <= r/8
    double tol = 1e-10;      // target residual
    int max_iter = 200;      // Picard sweeps
    double relaxation = 1.0; // omega in (0, 1]; 1 = plain iteration
};

struct FixedPointResult {
    LambdaFunction lambda;
    double residual;
    int iterations;
};

// Picard iteration for lambda on [t0, horizon]: lambda is pinned to the
// user's guess on the pre-interval [t0-r, t0] and updated by full-horizon
// sweeps lambda_{k+1}(t) = rhs(lambda_k, t) until the sweep-to-sweep change
// drops below tol/2; the returned lambda is then certified by an explicit
// residual check (<= tol) or SolveError is thrown with the final residual
// and sweep count. Pointwise rhs evaluations within a sweep depend only on
// the frozen previous iterate, so evaluating them in parallel would not
// change the result; this implementation runs them sequentially.
FixedPointResult solve_fixed_point(const StieltjesKernel& kernel,
                                   const Expression& pre_interval_guess,
                                   double t0, double horizon,
                                   const FixedPointOptions& opts);

} // namespace rfde
