#pragma once

#include "rfde/trajectory.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

// Root of lambda * e^lambda = b for b > 0 by bisection on [0, hi]; the map
// is strictly increasing there. Independent of the library's solvers.
inline double lambert_w_bisect(double b, double tol = 1e-12) {
    if (!(b > 0))
        throw std::invalid_argument("lambert_w_bisect expects b > 0");
    double lo = 0.0, hi = 1.0;
    while (hi * std::exp(hi) < b)
        hi *= 2;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < b ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline rfde::Trajectory sampled_trajectory(const std::function<rfde::Complex(double)>& f,
                                           const std::function<rfde::Complex(double)>& df,
                                           double a, double b, int n, double t_start) {
    std::vector<double> knots(n + 1);
    std::vector<rfde::Complex> vals(n + 1), slopes(n + 1);
    for (int i = 0; i <= n; ++i) {
        knots[i] = (i == n) ? b : a + (b - a) * i / n;
        vals[i] = f(knots[i]);
        slopes[i] = df(knots[i]);
    }
    return rfde::Trajectory(std::move(knots), std::move(vals), std::move(slopes), t_start);
}

// Exact solution of x'(t) = c x(t-1) with x = 1 on [-1, 0]: a polynomial of
// degree n+1 on each interval [n, n+1], integrated piece by piece.
class SteppedPolynomialSolution {
public:
    SteppedPolynomialSolution(double c, int n_intervals) {
        std::vector<double> prev{1.0, c}; // 1 + c s on [0, 1]
        pieces_.push_back(prev);
        for (int n = 1; n < n_intervals; ++n) {
            std::vector<double> next(prev.size() + 1, 0.0);
            next[0] = eval_poly(pieces_.back(), 1.0);
            for (std::size_t k = 0; k < prev.size(); ++k)
                next[k + 1] = c * prev[k] / static_cast<double>(k + 1);
            pieces_.push_back(next);
            prev = std::move(next);
        }
    }

    double operator()(double t) const {
        if (t <= 0)
            return 1.0;
        int n = static_cast<int>(std::floor(t));
        if (n >= static_cast<int>(pieces_.size()))
            n = static_cast<int>(pieces_.size()) - 1;
        return eval_poly(pieces_[n], t - n);
    }

private:
    static double eval_poly(const std::vector<double>& coeffs, double s) {
        double v = 0;
        for (std::size_t k = coeffs.size(); k-- > 0;)
            v = v * s + coeffs[k];
        return v;
    }

    std::vector<std::vector<double>> pieces_;
};

} // namespace testsupport
