#include "rfde/integrator.hpp"

#include "rfde/csvio.hpp"
#include "rfde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rfde {

namespace {

// Atoms at (numerically) zero lag read the current stage value.
constexpr double kZeroLagEps = 1e-12;

// Growing knot record with dense evaluation, allowing lookups up to
// `lookahead` past the last committed knot by extending the last interval's
// cubic.
class PartialTrajectory {
public:
    PartialTrajectory(double lookahead) : lookahead_(lookahead) {}

    void push(double t, Complex x, Complex d_out, Complex d_in) {
        t_.push_back(t);
        x_.push_back(x);
        dout_.push_back(d_out);
        din_.push_back(d_in);
    }

    void set_last_outgoing(Complex d) { dout_.back() = d; }

    double back_time() const { return t_.back(); }

    Complex value(double t) const {
        std::size_t i = locate(t);
        if (t == t_[i])
            return x_[i];
        // past the back knot this extends the last interval's cubic
        std::size_t lo = std::min(i, t_.size() - 2);
        double w = t_[lo + 1] - t_[lo];
        double u = (t - t_[lo]) / w;
        return hermite::value(u, w, x_[lo], x_[lo + 1], dout_[lo], din_[lo + 1]);
    }

    std::vector<double> take_knots() { return std::move(t_); }
    std::vector<Complex> take_values() { return std::move(x_); }
    std::vector<Complex> take_outgoing() { return std::move(dout_); }
    std::vector<Complex> take_incoming() { return std::move(din_); }

private:
    std::size_t locate(double t) const {
        double slop = 1e-9 * std::max(1.0, std::fabs(t_.front()) + std::fabs(t_.back()));
        if (t < t_.front() - slop || t > t_.back() + lookahead_ + slop)
            throw std::out_of_range("dense evaluation outside the committed range");
        t = std::clamp(t, t_.front(), t_.back() + lookahead_);
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - t_.begin());
        if (i == 0)
            return 0;
        return i - 1;
    }

    double lookahead_;
    std::vector<double> t_;
    std::vector<Complex> x_;
    std::vector<Complex> dout_, din_;
};

// L(t) x_t with the state taken from the committed record, except that
// zero-lag atoms see `stage_value`, the running Runge-Kutta stage.
Complex rhs_at(const StieltjesKernel& kernel, const PartialTrajectory& rec, double t,
               Complex stage_value) {
    Complex total = 0;
    for (const auto& atom : kernel.atoms()) {
        double tau = kernel.checked_delay(atom, t);
        Complex mass = atom.mass(t);
        total += mass * (tau <= kZeroLagEps ? stage_value : rec.value(t - tau));
    }
    total += kernel.density_integral(t, [&rec, t](double theta) { return rec.value(t - theta); });
    return total;
}

// 4th-order five-point slopes of the sampled initial data on its uniform
// grid; exact for polynomials through degree 4.
std::vector<Complex> history_slopes(const std::vector<Complex>& f, double h) {
    const std::size_t n = f.size();
    std::vector<Complex> d(n);
    auto at = [&f](std::size_t i) { return f[i]; };
    d[0] = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12 * h);
    d[1] = (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12 * h);
    d[n - 2] = (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) -
                at(n - 5)) /
               (12 * h);
    d[n - 1] = (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) +
                3.0 * at(n - 5)) /
               (12 * h);
    return d;
}

} // namespace

Trajectory solve(const ProblemSetup& p) {
    const double r = p.kernel.delay_horizon();
    const double t0 = p.t0;
    if (!(p.horizon > t0))
        throw std::invalid_argument("horizon must exceed t0");
    if (!(p.step > 0) || p.step > r / 8 * (1 + 1e-12))
        throw std::invalid_argument("step must satisfy 0 < h <= r/8");
    if (p.initial_data.uses_theta())
        throw std::invalid_argument("initial data must be a function of t only");

    double h = p.step;
    if (p.kernel.has_constant_delays())
        h = r / std::ceil(r / h - 1e-9); // align breakpoint propagation with knots

    // History grid on [t0-r, t0]; h <= r/8 guarantees >= 8 intervals, enough
    // for the five-point slope stencils.
    int n_hist = static_cast<int>(std::ceil(r / h - 1e-9));
    double h_hist = r / n_hist;
    std::vector<Complex> hist_vals(n_hist + 1);
    std::vector<double> hist_knots(n_hist + 1);
    for (int i = 0; i <= n_hist; ++i) {
        hist_knots[i] = (i == n_hist) ? t0 : t0 - r + i * h_hist;
        hist_vals[i] = p.initial_data(hist_knots[i]);
    }
    std::vector<Complex> hist_slope = history_slopes(hist_vals, h_hist);

    PartialTrajectory rec(/*lookahead=*/h);
    for (int i = 0; i <= n_hist; ++i)
        rec.push(hist_knots[i], hist_vals[i], hist_slope[i], hist_slope[i]);

    const int n_steps = static_cast<int>(std::ceil((p.horizon - t0) / h - 1e-9));
    Complex x = hist_vals.back();
    // Outgoing slope at t0 comes from the equation; the incoming one stays
    // with the initial data (the classic method-of-steps corner).
    Complex slope_here = rhs_at(p.kernel, rec, t0, x);
    rec.set_last_outgoing(slope_here);

    for (int n = 0; n < n_steps; ++n) {
        double tn = t0 + n * h;
        double t_mid = tn + 0.5 * h;
        double t_next = t0 + (n + 1) * h;

        Complex k1 = slope_here; // == rhs at (tn, x), stored with the knot
        Complex k2 = rhs_at(p.kernel, rec, t_mid, x + 0.5 * h * k1);
        Complex k3 = rhs_at(p.kernel, rec, t_mid, x + 0.5 * h * k2);
        Complex k4 = rhs_at(p.kernel, rec, t_next, x + h * k3);
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw SolveError("solution became non-finite near t=" + csv::g17(t_next));
        slope_here = rhs_at(p.kernel, rec, t_next, x);
        rec.push(t_next, x, slope_here, slope_here);
    }

    auto knots = rec.take_knots();
    auto values = rec.take_values();
    auto dout = rec.take_outgoing();
    auto din = rec.take_incoming();
    return Trajectory(std::move(knots), std::move(values), std::move(dout), std::move(din), t0);
}

} // namespace rfde
