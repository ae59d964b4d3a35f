#pragma once

#include "rfde/charsolve.hpp"
#include "rfde/measure.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace rfde {

// Sampled contraction check V(t) = integral_0^r theta |exp(-integral_{t-theta}^t
// lambda)| d_theta|eta|(t,theta) over a finite window. mu_hat is the max of
// the samples; the true limsup is never certified, only the window report.
struct CriterionReport {
    enum class Verdict { Holds, Fails, Inconclusive };

    std::vector<std::pair<double, double>> samples; // (t, V(t))
    double mu_hat = 0;
    double window_lo = 0, window_hi = 0;
    double margin = 0.02;
    Verdict verdict = Verdict::Inconclusive;

    // Scriptable exit-status protocol: 0 holds, 2 fails, 3 inconclusive.
    int exit_status() const;
    void write_csv(std::ostream& os) const; // columns t,V
    const char* verdict_name() const;
};

double criterion_value(const StieltjesKernel& kernel, const LambdaFunction& lam, double t);

// Sample V at n equispaced points of [window_lo, window_hi] (n >= 2).
// Verdict rules: "fails" when V >= 1 at every sample of the last quarter of
// the window; "holds" when mu_hat < 1 - margin and V is non-increasing over
// the last quarter (or mu_hat < 0.5, which cannot be a transient dip);
// otherwise "inconclusive".
CriterionReport scan(const StieltjesKernel& kernel, const LambdaFunction& lam,
                     double window_lo, double window_hi, int n_samples,
                     double margin = 0.02);

} // namespace rfde
