#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfde {

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A problem statement as loaded from a TOML file: the kernel tables, the
// horizon and discretization knobs, the lambda source, and the reporting
// windows. Expression fields stay as source strings until the pipeline
// compiles them; load_problem_spec parses each once to validate.
struct ProblemSpec {
    double r = 0;
    double t0 = 0;
    double horizon = 0;
    double step = 0;      // integrator h; defaults to r/32
    double grid_step = 0; // fixed-point delta; defaults to r/8
    std::optional<std::string> initial_data;

    struct AtomSpec {
        std::string delay, mass;
        bool operator==(const AtomSpec&) const = default;
    };
    struct DensitySpec {
        std::string kernel;
        double lo = 0, hi = 0;
        bool operator==(const DensitySpec&) const = default;
    };
    std::vector<AtomSpec> atoms;
    std::vector<DensitySpec> densities;

    int quad_order = 16;
    int quad_panels = 8;

    struct LambdaSpec {
        std::optional<std::string> closed_form;
        std::optional<std::string> pre_interval_guess;
        double tol = 1e-10;
        int max_iter = 200;
        double relaxation = 1.0;
        bool operator==(const LambdaSpec&) const = default;
    } lambda;

    struct CriterionSpec {
        std::optional<double> window_lo, window_hi; // default [t0, horizon]
        int samples = 200;
        double margin = 0.02;
        bool operator==(const CriterionSpec&) const = default;
    } criterion;

    struct AsymptoticsSpec {
        double tail_fraction = 0.25;
        std::optional<double> mu; // default: the criterion scan's mu_hat
        double slack = 0.1;
        bool operator==(const AsymptoticsSpec&) const = default;
    } asymptotics;

    std::string out_dir = ".";

    bool operator==(const ProblemSpec&) const = default;
};

ProblemSpec parse_problem_spec(const std::string& toml_text);
ProblemSpec load_problem_spec(const std::string& path);

// Canonical TOML echo; re-parses to an equal spec.
std::string print_problem_spec(const ProblemSpec& spec);

} // namespace rfde
