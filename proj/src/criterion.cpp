#include "rfde/criterion.hpp"

#include "rfde/csvio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace rfde {

int CriterionReport::exit_status() const {
    switch (verdict) {
        case Verdict::Holds: return 0;
        case Verdict::Fails: return 2;
        case Verdict::Inconclusive: return 3;
    }
    return 3;
}

const char* CriterionReport::verdict_name() const {
    switch (verdict) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

void CriterionReport::write_csv(std::ostream& os) const {
    os << "t,V\n";
    for (const auto& [t, v] : samples)
        os << csv::g17(t) << ',' << csv::g17(v) << '\n';
}

double criterion_value(const StieltjesKernel& kernel, const LambdaFunction& lam, double t) {
    return kernel.total_variation_integral(t, [&lam, t](double theta) {
        // |exp(z)| = exp(Re z)
        return theta * std::exp(-lam.integral(t - theta, t).real());
    });
}

CriterionReport scan(const StieltjesKernel& kernel, const LambdaFunction& lam,
                     double window_lo, double window_hi, int n_samples, double margin) {
    if (n_samples < 2)
        throw std::invalid_argument("scan needs at least two samples");
    if (!(window_lo < window_hi))
        throw std::invalid_argument("scan window must satisfy lo < hi");

    CriterionReport rep;
    rep.window_lo = window_lo;
    rep.window_hi = window_hi;
    rep.margin = margin;
    rep.samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        double t = window_lo + (window_hi - window_lo) * i / (n_samples - 1);
        rep.samples.emplace_back(t, criterion_value(kernel, lam, t));
    }
    rep.mu_hat = 0;
    for (const auto& [t, v] : rep.samples)
        rep.mu_hat = std::max(rep.mu_hat, v);

    std::size_t tail_begin = rep.samples.size() - rep.samples.size() / 4;
    if (tail_begin >= rep.samples.size())
        tail_begin = rep.samples.size() - 1;
    bool tail_at_least_one = true;
    bool tail_nonincreasing = true;
    for (std::size_t i = tail_begin; i < rep.samples.size(); ++i) {
        double v = rep.samples[i].second;
        if (v < 1.0)
            tail_at_least_one = false;
        if (i > tail_begin) {
            double prev = rep.samples[i - 1].second;
            if (v > prev + 1e-12 * (1.0 + std::fabs(prev)))
                tail_nonincreasing = false;
        }
    }

    if (tail_at_least_one)
        rep.verdict = CriterionReport::Verdict::Fails;
    else if (rep.mu_hat < 1.0 - margin && (tail_nonincreasing || rep.mu_hat < 0.5))
        rep.verdict = CriterionReport::Verdict::Holds;
    else
        rep.verdict = CriterionReport::Verdict::Inconclusive;
    return rep;
}

} // namespace rfde
