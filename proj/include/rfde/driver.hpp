#pragma once

#include "rfde/asymptotics.hpp"
#include "rfde/criterion.hpp"
#include "rfde/integrator.hpp"
#include "rfde/problem_spec.hpp"

#include <iosfwd>
#include <string>

namespace rfde {

// Pipeline pieces shared by the CLI subcommands and the test suites.

StieltjesKernel build_kernel(const ProblemSpec& spec);

struct LambdaRun {
    LambdaFunction lambda;
    double residual;    // max defect over [t0, T] at grid_step spacing
    int iterations;     // 0 for a closed form
    bool fixed_point;
};

// Builds lambda out to at least `horizon` (the trajectory's rounded-up end
// when a simulation is part of the run).
LambdaRun run_lambda(const ProblemSpec& spec, double horizon);

Trajectory run_simulate(const ProblemSpec& spec);

CriterionReport run_verify(const ProblemSpec& spec, const StieltjesKernel& kernel,
                           const LambdaFunction& lam);

struct AsymptoteRun {
    Trajectory x;
    Trajectory y;
    AsymptoticsReport report;
    bool envelope_evaluated; // false when no usable mu < 1 was available
};

AsymptoteRun run_asymptote(const ProblemSpec& spec);

// The rfde tool. Subcommands: simulate, lambda, verify, asymptote,
// full-report; global flags --spec, --out, --print-spec, --samples,
// --window a,b. Returns the process exit status (verify and full-report
// follow the verdict protocol 0/2/3; any failure is 1). Output and
// diagnostics go to `out`/`err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rfde
