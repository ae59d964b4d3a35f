#include "rfde/trajectory.hpp"

#include "rfde/csvio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rfde {

Complex Segment::operator()(double s) const {
    double slop = 1e-9 * std::max(1.0, horizon);
    if (s < -horizon - slop || s > slop)
        throw std::out_of_range("segment argument outside [-r, 0]");
    return eval(std::clamp(s, -horizon, 0.0));
}

namespace hermite {

Complex value(double u, double width, Complex x0, Complex x1, Complex d0, Complex d1) {
    double um1 = u - 1.0;
    double h00 = (1.0 + 2.0 * u) * um1 * um1;
    double h10 = u * um1 * um1;
    double h01 = u * u * (3.0 - 2.0 * u);
    double h11 = u * u * um1;
    return h00 * x0 + (h10 * width) * d0 + h01 * x1 + (h11 * width) * d1;
}

Complex slope(double u, double width, Complex x0, Complex x1, Complex d0, Complex d1) {
    double g00 = (6.0 * u * u - 6.0 * u) / width;
    double g10 = 3.0 * u * u - 4.0 * u + 1.0;
    double g01 = -g00;
    double g11 = 3.0 * u * u - 2.0 * u;
    return g00 * x0 + g10 * d0 + g01 * x1 + g11 * d1;
}

} // namespace hermite

Trajectory::Trajectory(std::vector<double> knots,
                       std::vector<Complex> values,
                       std::vector<Complex> slopes,
                       double t_start)
    : Trajectory(std::move(knots), std::move(values), slopes, slopes, t_start) {}

Trajectory::Trajectory(std::vector<double> knots,
                       std::vector<Complex> values,
                       std::vector<Complex> slopes_out,
                       std::vector<Complex> slopes_in,
                       double t_start)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      slopes_out_(std::move(slopes_out)),
      slopes_in_(std::move(slopes_in)),
      t_start_(t_start) {
    if (knots_.size() < 2)
        throw std::invalid_argument("trajectory needs at least two knots");
    if (values_.size() != knots_.size() || slopes_out_.size() != knots_.size() ||
        slopes_in_.size() != knots_.size())
        throw std::invalid_argument("trajectory arrays must have equal length");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw std::invalid_argument("trajectory knots must be strictly increasing");
    if (t_start_ < knots_.front() || t_start_ > knots_.back())
        throw std::invalid_argument("t_start outside the knot range");
}

double Trajectory::clamp_into_domain(double t) const {
    double slop = 1e-9 * std::max(1.0, std::fabs(knots_.front()) + std::fabs(knots_.back()));
    if (t < knots_.front() - slop || t > knots_.back() + slop)
        throw std::out_of_range("time outside the trajectory domain");
    return std::clamp(t, knots_.front(), knots_.back());
}

std::size_t Trajectory::interval_index(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0)
        return 0;
    if (i >= knots_.size())
        return knots_.size() - 2;
    return i - 1;
}

Complex Trajectory::value(double t) const {
    t = clamp_into_domain(t);
    std::size_t i = interval_index(t);
    if (t == knots_[i])
        return values_[i]; // knots are reproduced exactly
    double w = knots_[i + 1] - knots_[i];
    double u = (t - knots_[i]) / w;
    return hermite::value(u, w, values_[i], values_[i + 1], slopes_out_[i], slopes_in_[i + 1]);
}

Complex Trajectory::derivative(double t) const {
    t = clamp_into_domain(t);
    std::size_t i = interval_index(t);
    if (t == knots_[i])
        return slopes_out_[i];
    if (t == knots_[i + 1])
        return slopes_in_[i + 1];
    double w = knots_[i + 1] - knots_[i];
    double u = (t - knots_[i]) / w;
    return hermite::slope(u, w, values_[i], values_[i + 1], slopes_out_[i], slopes_in_[i + 1]);
}

Segment Trajectory::segment_at(double t) const {
    double slop = 1e-9 * std::max(1.0, std::fabs(t_start_) + std::fabs(back()));
    if (t < t_start_ - slop || t > back() + slop)
        throw std::out_of_range("segment_at requires t in [t_start, back]");
    double r = t_start_ - front();
    Segment seg;
    seg.horizon = r;
    seg.eval = [this, t](double s) { return value(t + s); };
    return seg;
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "t,re_x,im_x,re_dx,im_dx\n";
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        const Complex& d = (i + 1 == knots_.size()) ? slopes_in_[i] : slopes_out_[i];
        os << csv::g17(knots_[i]) << ',' << csv::g17(values_[i].real()) << ','
           << csv::g17(values_[i].imag()) << ',' << csv::g17(d.real()) << ','
           << csv::g17(d.imag()) << '\n';
    }
}

} // namespace rfde
