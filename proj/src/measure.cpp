#include "rfde/measure.hpp"

#include "rfde/csvio.hpp"

#include <algorithm>
#include <cmath>

namespace rfde {

StieltjesKernel::StieltjesKernel(double delay_horizon,
                                 std::vector<Atom> atoms,
                                 std::vector<DensityPiece> densities,
                                 QuadratureConfig quad)
    : r_(delay_horizon),
      atoms_(std::move(atoms)),
      densities_(std::move(densities)),
      quad_(quad),
      rule_(quad.order) {
    if (!(r_ > 0))
        throw std::invalid_argument("delay horizon r must be positive");
    if (quad_.panels < 1)
        throw std::invalid_argument("quadrature panels must be >= 1");
    for (const auto& d : densities_) {
        if (!(d.theta_lo < d.theta_hi))
            throw std::invalid_argument("density support must satisfy lo < hi");
        if (d.theta_lo < -1e-12 || d.theta_hi > r_ * (1 + 1e-12) + 1e-12)
            throw std::invalid_argument("density support must lie inside [0, r]");
    }
}

bool StieltjesKernel::has_constant_delays() const {
    return std::all_of(atoms_.begin(), atoms_.end(),
                       [](const Atom& a) { return a.delay.is_constant(); });
}

double StieltjesKernel::checked_delay(const Atom& atom, double t) const {
    double tau = atom.delay(t);
    double slop = 1e-9 * std::max(1.0, r_);
    if (tau < -slop || tau > r_ + slop)
        throw KernelError("atom delay " + csv::g17(tau) + " outside [0, " + csv::g17(r_) +
                          "] at t=" + csv::g17(t));
    return std::clamp(tau, 0.0, r_);
}

Complex StieltjesKernel::density_integral(double t,
                                          const std::function<Complex(double)>& f) const {
    Complex total = 0;
    for (const auto& piece : densities_) {
        double panel_w = (piece.theta_hi - piece.theta_lo) / quad_.panels;
        for (int p = 0; p < quad_.panels; ++p) {
            double a = piece.theta_lo + p * panel_w;
            double mid = a + 0.5 * panel_w;
            double half = 0.5 * panel_w;
            Complex acc = 0;
            for (int q = 0; q < rule_.order(); ++q) {
                double theta = mid + half * rule_.nodes[q];
                acc += rule_.weights[q] * piece.kernel(t, theta) * f(theta);
            }
            total += half * acc;
        }
    }
    return total;
}

Complex StieltjesKernel::integrate(double t, const std::function<Complex(double)>& f) const {
    Complex total = 0;
    for (const auto& atom : atoms_) {
        double tau = checked_delay(atom, t);
        total += Complex(atom.mass(t)) * f(tau);
    }
    total += density_integral(t, f);
    return total;
}

double StieltjesKernel::total_variation_integral(
    double t, const std::function<double(double)>& f) const {
    double total = 0;
    for (const auto& atom : atoms_) {
        double tau = checked_delay(atom, t);
        total += std::fabs(atom.mass(t)) * f(tau);
    }
    for (const auto& piece : densities_) {
        double panel_w = (piece.theta_hi - piece.theta_lo) / quad_.panels;
        for (int p = 0; p < quad_.panels; ++p) {
            double a = piece.theta_lo + p * panel_w;
            double mid = a + 0.5 * panel_w;
            double half = 0.5 * panel_w;
            double acc = 0;
            for (int q = 0; q < rule_.order(); ++q) {
                double theta = mid + half * rule_.nodes[q];
                acc += rule_.weights[q] * std::fabs(piece.kernel(t, theta)) * f(theta);
            }
            total += half * acc;
        }
    }
    return total;
}

Complex StieltjesKernel::apply_functional(double t, const Segment& phi) const {
    return integrate(t, [&phi](double theta) { return phi(-theta); });
}

} // namespace rfde
