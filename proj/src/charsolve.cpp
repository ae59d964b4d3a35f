#include "rfde/charsolve.hpp"

#include "rfde/csvio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rfde {

namespace {

double domain_slop(double lo, double hi) {
    return 1e-9 * std::max(1.0, std::fabs(lo) + std::fabs(hi));
}

} // namespace

LambdaFunction::LambdaFunction(Expression closed_form, double t_lo, double t_hi,
                               double grid_step)
    : expr_(std::move(closed_form)), t_lo_(t_lo), t_hi_(t_hi) {
    if (!(t_lo < t_hi))
        throw std::invalid_argument("lambda domain must satisfy t_lo < t_hi");
    if (!(grid_step > 0))
        throw std::invalid_argument("lambda grid step must be positive");
    if (expr_->uses_theta())
        throw std::invalid_argument("lambda must be a function of t only");

    if (auto k = expr_->as_constant()) {
        anti_ = Anti::Linear;
        anti_scale_ = *k;
    } else if (auto ra = expr_->as_reciprocal_in_t()) {
        // k/(t+c) integrates to k ln(t+c), valid while t+c stays positive
        if (t_lo + ra->offset > 0) {
            anti_ = Anti::Log;
            anti_scale_ = ra->scale;
            anti_offset_ = ra->offset;
        }
    }

    // Sample grid: used for CSV output always, and for the trapezoid
    // cumulative when the antiderivative table missed.
    int n = std::max(1, static_cast<int>(std::ceil((t_hi_ - t_lo_) / grid_step - 1e-9)));
    knots_.resize(n + 1);
    values_.resize(n + 1);
    double h = (t_hi_ - t_lo_) / n;
    for (int i = 0; i <= n; ++i) {
        knots_[i] = (i == n) ? t_hi_ : t_lo_ + i * h;
        values_[i] = (*expr_)(knots_[i]);
    }
    prefix_.assign(n + 1, 0);
    for (int i = 1; i <= n; ++i)
        prefix_[i] = prefix_[i - 1] +
                     0.5 * (knots_[i] - knots_[i - 1]) * (values_[i] + values_[i - 1]);
}

LambdaFunction::LambdaFunction(std::vector<double> knots, std::vector<Complex> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() < 2 || values_.size() != knots_.size())
        throw std::invalid_argument("grid lambda needs matching knots/values, >= 2 points");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw std::invalid_argument("grid lambda knots must be strictly increasing");
    t_lo_ = knots_.front();
    t_hi_ = knots_.back();
    prefix_.assign(knots_.size(), 0);
    for (std::size_t i = 1; i < knots_.size(); ++i)
        prefix_[i] = prefix_[i - 1] +
                     0.5 * (knots_[i] - knots_[i - 1]) * (values_[i] + values_[i - 1]);
}

double LambdaFunction::checked(double t) const {
    if (t < t_lo_ - domain_slop(t_lo_, t_hi_) || t > t_hi_ + domain_slop(t_lo_, t_hi_))
        throw std::out_of_range("time " + csv::g17(t) + " outside lambda domain [" +
                                csv::g17(t_lo_) + ", " + csv::g17(t_hi_) + "]");
    return std::clamp(t, t_lo_, t_hi_);
}

Complex LambdaFunction::grid_value(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0)
        return values_.front();
    if (i >= knots_.size())
        return values_.back();
    std::size_t j = i - 1;
    if (t == knots_[j])
        return values_[j];
    double w = knots_[i] - knots_[j];
    double u = (t - knots_[j]) / w;
    return (1.0 - u) * values_[j] + u * values_[i];
}

Complex LambdaFunction::grid_cumulative(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0)
        return prefix_.front();
    std::size_t j = std::min(i - 1, knots_.size() - 2);
    double dt = t - knots_[j];
    if (dt == 0.0)
        return prefix_[j];
    // exact integral of the linear interpolant over the partial interval
    Complex lam_t = expr_ ? Complex((*expr_)(t)) : grid_value(t);
    return prefix_[j] + 0.5 * dt * (values_[j] + lam_t);
}

Complex LambdaFunction::operator()(double t) const {
    t = checked(t);
    if (expr_)
        return (*expr_)(t);
    return grid_value(t);
}

Complex LambdaFunction::cumulative(double t) const {
    t = checked(t);
    switch (anti_) {
        case Anti::Linear:
            return anti_scale_ * (t - t_lo_);
        case Anti::Log:
            return anti_scale_ * (std::log(t + anti_offset_) - std::log(t_lo_ + anti_offset_));
        case Anti::None:
            return grid_cumulative(t);
    }
    return 0;
}

Complex LambdaFunction::integral(double a, double b) const {
    a = checked(a);
    b = checked(b);
    if (anti_ == Anti::Log)
        return anti_scale_ * (std::log(b + anti_offset_) - std::log(a + anti_offset_));
    if (anti_ == Anti::Linear)
        return anti_scale_ * (b - a);
    return grid_cumulative(b) - grid_cumulative(a);
}

void LambdaFunction::write_csv(std::ostream& os) const {
    os << "t,re_lambda,im_lambda,re_Lambda,im_Lambda\n";
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        Complex lam = expr_ ? Complex((*expr_)(knots_[i])) : values_[i];
        Complex cum = cumulative(knots_[i]);
        os << csv::g17(knots_[i]) << ',' << csv::g17(lam.real()) << ',' << csv::g17(lam.imag())
           << ',' << csv::g17(cum.real()) << ',' << csv::g17(cum.imag()) << '\n';
    }
}

Complex characteristic_rhs(const StieltjesKernel& kernel, const LambdaFunction& lam,
                           double t) {
    return kernel.integrate(
        t, [&lam, t](double theta) { return std::exp(-lam.integral(t - theta, t)); });
}

double characteristic_residual(const StieltjesKernel& kernel, const LambdaFunction& lam,
                               double a, double b, int n) {
    if (n < 1)
        throw std::invalid_argument("residual needs at least one interval");
    double worst = 0;
    for (int i = 0; i <= n; ++i) {
        double t = a + (b - a) * i / n;
        worst = std::max(worst, std::abs(lam(t) - characteristic_rhs(kernel, lam, t)));
    }
    return worst;
}

FixedPointResult solve_fixed_point(const StieltjesKernel& kernel,
                                   const Expression& pre_interval_guess,
                                   double t0, double horizon,
                                   const FixedPointOptions& opts) {
    const double r = kernel.delay_horizon();
    if (!(horizon > t0))
        throw std::invalid_argument("horizon must exceed t0");
    if (!(opts.grid_step > 0) || opts.grid_step > r / 8 * (1 + 1e-12))
        throw std::invalid_argument("grid step must satisfy 0 < delta <= r/8");
    if (!(opts.relaxation > 0) || opts.relaxation > 1)
        throw std::invalid_argument("relaxation must lie in (0, 1]");
    if (pre_interval_guess.uses_theta())
        throw std::invalid_argument("pre-interval guess must be a function of t only");

    // One uniform grid over [t0-r, T'] with t0 on it; T' rounds the horizon
    // up to a whole number of steps.
    int n_pre = static_cast<int>(std::ceil(r / opts.grid_step - 1e-9));
    double delta = r / n_pre;
    int n_main = static_cast<int>(std::ceil((horizon - t0) / delta - 1e-9));
    std::size_t n_total = static_cast<std::size_t>(n_pre) + n_main;

    std::vector<double> knots(n_total + 1);
    for (std::size_t i = 0; i <= n_total; ++i)
        knots[i] = (i <= static_cast<std::size_t>(n_pre))
                       ? t0 - r + static_cast<double>(i) * delta
                       : t0 + static_cast<double>(i - n_pre) * delta;
    knots[n_pre] = t0;

    std::vector<Complex> vals(n_total + 1);
    for (int i = 0; i <= n_pre; ++i)
        vals[i] = pre_interval_guess(knots[i]);
    for (std::size_t i = n_pre + 1; i <= n_total; ++i)
        vals[i] = vals[n_pre]; // continuous constant extension as the seed

    double change = 0;
    int sweep = 0;
    for (sweep = 1; sweep <= opts.max_iter; ++sweep) {
        LambdaFunction prev(knots, vals);
        change = 0;
        for (std::size_t i = n_pre; i <= n_total; ++i) {
            Complex updated = characteristic_rhs(kernel, prev, knots[i]);
            Complex next = (1.0 - opts.relaxation) * vals[i] + opts.relaxation * updated;
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
                throw SolveError("fixed-point iteration diverged (non-finite iterate at t=" +
                                 csv::g17(knots[i]) + ", sweep " + std::to_string(sweep) + ")");
            change = std::max(change, std::abs(next - vals[i]));
            vals[i] = next;
        }
        if (change < opts.tol / 2)
            break;
    }

    LambdaFunction lam(knots, vals);
    double resid =
        characteristic_residual(kernel, lam, t0, knots.back(), static_cast<int>(n_total) - n_pre);
    if (change >= opts.tol / 2 || resid > opts.tol)
        throw SolveError("fixed-point iteration did not reach tol=" + csv::g17(opts.tol) +
                         ": residual=" + csv::g17(resid) + " after " +
                         std::to_string(std::min(sweep, opts.max_iter)) + " sweeps");
    return FixedPointResult{std::move(lam), resid, std::min(sweep, opts.max_iter)};
}

} // namespace rfde
