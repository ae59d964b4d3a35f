#include "rfde/asymptotics.hpp"

#include "rfde/csvio.hpp"
#include "rfde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace rfde {

namespace {

double envelope_bound(double mu, double s_over_r_minus_1) {
    if (mu == 0.0) {
        if (s_over_r_minus_1 < 0)
            return std::numeric_limits<double>::infinity();
        return s_over_r_minus_1 == 0 ? 1.0 : 0.0;
    }
    return std::pow(mu, s_over_r_minus_1);
}

} // namespace

void AsymptoticsReport::write_kv(std::ostream& os) const {
    os << "L_x_re=" << csv::g17(L_x_estimate.real()) << '\n'
       << "L_x_im=" << csv::g17(L_x_estimate.imag()) << '\n'
       << "y_tail_variation=" << csv::g17(y_tail_variation) << '\n'
       << "yprime_tail=" << csv::g17(yprime_tail) << '\n'
       << "eq24_gap=" << csv::g17(eq24_gap) << '\n'
       << "envelope_ok=" << (envelope_ok ? "true" : "false") << '\n'
       << "M_x=" << csv::g17(M_x) << '\n'
       << "mu_used=" << csv::g17(mu_used) << '\n'
       << "tail_lo=" << csv::g17(tail_lo) << '\n'
       << "tail_hi=" << csv::g17(tail_hi) << '\n';
}

Trajectory transform_y(const Trajectory& x, const LambdaFunction& lam) {
    double slop = 1e-9 * std::max(1.0, std::fabs(x.front()) + std::fabs(x.back()));
    if (lam.t_lo() > x.front() + slop || lam.t_hi() < x.back() - slop)
        throw std::invalid_argument("lambda domain does not cover the trajectory");

    const double t0 = x.t_start();
    const auto& knots = x.knots();
    std::vector<Complex> values(knots.size()), dout(knots.size()), din(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        double t = knots[i];
        Complex damp = std::exp(-lam.integral(t0, t));
        Complex lam_t = lam(t);
        values[i] = x.values()[i] * damp;
        dout[i] = (x.slopes_out()[i] - lam_t * x.values()[i]) * damp;
        din[i] = (x.slopes_in()[i] - lam_t * x.values()[i]) * damp;
    }
    return Trajectory(std::vector<double>(knots), std::move(values), std::move(dout),
                      std::move(din), t0);
}

EnvelopeCheck check_envelope(const Trajectory& y, double mu, double r,
                             const EnvelopeOptions& opts) {
    if (!(mu >= 0) || mu >= 1)
        throw SolveError("envelope requires 0 <= mu < 1 (hypothesis not verified), got mu=" +
                         csv::g17(mu));
    const double t0 = y.t_start();
    const double T = y.back();
    if (T < t0 + 3 * r * (1 - 1e-12))
        throw SolveError("horizon too short for an envelope check (need T >= t0 + 3r)");

    const auto& knots = y.knots();
    auto first_main = std::lower_bound(knots.begin(), knots.end(), t0 - 1e-12 * std::max(1.0, r));
    std::size_t begin = static_cast<std::size_t>(first_main - knots.begin());

    double y_scale = 0;
    for (const auto& v : y.values())
        y_scale = std::max(y_scale, std::abs(v));
    double floor = opts.abs_tol >= 0 ? opts.abs_tol : 1e-12 * (1.0 + y_scale);

    EnvelopeCheck out;
    // sample points: knots of [t0, T] and interval midpoints
    std::vector<double> samples;
    samples.reserve(2 * (knots.size() - begin));
    for (std::size_t i = begin; i < knots.size(); ++i) {
        samples.push_back(knots[i]);
        if (i + 1 < knots.size())
            samples.push_back(0.5 * (knots[i] + knots[i + 1]));
    }

    for (double t : samples)
        if (t <= t0 + r * (1 + 1e-12))
            out.M_x = std::max(out.M_x, std::abs(y.derivative(t)));

    out.ok = true;
    for (double t : samples) {
        double bound = out.M_x * envelope_bound(mu, (t - t0) / r - 1.0) * (1.0 + opts.slack) +
                       floor;
        if (std::abs(y.derivative(t)) > bound) {
            out.ok = false;
            break;
        }
    }
    return out;
}

AsymptoticsReport estimate_limits(const Trajectory& y, const LambdaFunction& lam, double r,
                                  double tail_fraction) {
    const double t0 = y.t_start();
    const double T = y.back();
    if (T < t0 + 5 * r * (1 - 1e-12))
        throw SolveError("horizon too short for tail estimates (need T >= t0 + 5r)");
    if (!(tail_fraction > 0) || tail_fraction > 1)
        throw std::invalid_argument("tail_fraction must lie in (0, 1]");

    AsymptoticsReport rep;
    rep.tail_hi = T;
    rep.tail_lo = T - tail_fraction * (T - t0);
    rep.L_x_estimate = y.value(T);

    const auto& knots = y.knots();
    auto first_tail =
        std::lower_bound(knots.begin(), knots.end(), rep.tail_lo - 1e-12 * std::max(1.0, T));
    for (auto it = first_tail; it != knots.end(); ++it) {
        double t = *it;
        rep.y_tail_variation = std::max(rep.y_tail_variation,
                                        std::abs(y.value(t) - rep.L_x_estimate));
        rep.yprime_tail = std::max(rep.yprime_tail, std::abs(y.derivative(t)));
        if (it + 1 != knots.end()) {
            double mid = 0.5 * (t + *(it + 1));
            rep.y_tail_variation = std::max(rep.y_tail_variation,
                                            std::abs(y.value(mid) - rep.L_x_estimate));
            rep.yprime_tail = std::max(rep.yprime_tail, std::abs(y.derivative(mid)));
        }
    }

    // Both sides of the derivative-limit identity, restated through
    // x = y e^{+I}: x' e^{-I} - lambda x e^{-I}; algebraically this is y',
    // so the gap reported here differs from yprime_tail only by the fp
    // round trip and the fixed sampling.
    const int n = 128;
    for (int i = 0; i <= n; ++i) {
        double t = rep.tail_lo + (rep.tail_hi - rep.tail_lo) * i / n;
        Complex grow = std::exp(lam.integral(t0, t));
        Complex x_val = y.value(t) * grow;
        Complex x_slope = (y.derivative(t) + lam(t) * y.value(t)) * grow;
        Complex damp = std::exp(-lam.integral(t0, t));
        rep.eq24_gap =
            std::max(rep.eq24_gap, std::abs(x_slope * damp - lam(t) * x_val * damp));
    }
    return rep;
}

void write_asymptotics_csv(const Trajectory& y, const AsymptoticsReport& rep, double r,
                           std::ostream& os) {
    os << "t,abs_y_minus_L,abs_yprime,envelope\n";
    const double t0 = y.t_start();
    bool have_mu = rep.mu_used >= 0 && rep.mu_used < 1;
    for (double t : y.knots()) {
        if (t < t0)
            continue;
        double env = have_mu
                         ? rep.M_x * envelope_bound(rep.mu_used, (t - t0) / r - 1.0)
                         : std::numeric_limits<double>::infinity();
        os << csv::g17(t) << ',' << csv::g17(std::abs(y.value(t) - rep.L_x_estimate)) << ','
           << csv::g17(std::abs(y.derivative(t))) << ',' << csv::g17(env) << '\n';
    }
}

} // namespace rfde
