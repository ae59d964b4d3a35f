#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

namespace rfde {

using Complex = std::complex<double>;

// State of a delay equation at one instant: the function s -> x(t+s) on
// [-horizon, 0]. Holds a closure; valid only while whatever backs the
// closure (usually a Trajectory) is alive.
struct Segment {
    double horizon = 0;
    bool continuous = true;
    std::function<Complex(double)> eval;

    Complex operator()(double s) const;
};

namespace hermite {

// Cubic Hermite on [t0, t1] from endpoint values and slopes; u = (t-t0)/w.
// Reproduces cubics exactly and returns the stored data at u = 0 and u = 1.
Complex value(double u, double width, Complex x0, Complex x1, Complex d0, Complex d1);
Complex slope(double u, double width, Complex x0, Complex x1, Complex d0, Complex d1);

} // namespace hermite

// Dense-output solution record on a strictly increasing knot grid, cubic
// Hermite between knots. Each interval carries its own endpoint slopes
// (slopes_out[i] at the left end, slopes_in[i+1] at the right end); the two
// arrays differ only where the underlying derivative jumps, which for a
// solved problem is at the junction between initial data and equation.
// Immutable after construction; concurrent reads are safe.
class Trajectory {
public:
    Trajectory(std::vector<double> knots,
               std::vector<Complex> values,
               std::vector<Complex> slopes,
               double t_start);
    Trajectory(std::vector<double> knots,
               std::vector<Complex> values,
               std::vector<Complex> slopes_out,
               std::vector<Complex> slopes_in,
               double t_start);

    double front() const { return knots_.front(); }
    double back() const { return knots_.back(); }
    // First time governed by the equation (t0); knots before it are history.
    double t_start() const { return t_start_; }

    Complex value(double t) const;
    // Slope of the interpolant; at an interior knot this is the outgoing
    // slope, at the last knot the incoming one.
    Complex derivative(double t) const;

    // The state x_t; requires t in [t_start, back].
    Segment segment_at(double t) const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<Complex>& values() const { return values_; }
    const std::vector<Complex>& slopes_out() const { return slopes_out_; }
    const std::vector<Complex>& slopes_in() const { return slopes_in_; }

    // Columns: t, re_x, im_x, re_dx, im_dx (outgoing slopes), one row per
    // knot, floats with 17 significant digits.
    void write_csv(std::ostream& os) const;

private:
    friend class TrajectoryBuilder;
    std::size_t interval_index(double t) const; // clamps t within fp slop
    double clamp_into_domain(double t) const;

    std::vector<double> knots_;
    std::vector<Complex> values_;
    std::vector<Complex> slopes_out_, slopes_in_;
    double t_start_ = 0;
};

} // namespace rfde
