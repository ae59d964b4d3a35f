#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rfde/integrator.hpp"

#include "rfde/charsolve.hpp"
#include "rfde/errors.hpp"
#include "support.hpp"

#include <cmath>

using namespace rfde;
using testsupport::SteppedPolynomialSolution;

namespace {

Expression ex(const char* s) { return Expression::parse(s); }

StieltjesKernel variable_delay_kernel() {
    return StieltjesKernel(1.0, {Atom{ex("1"), ex("1/(t+1)")}}, {});
}

} // namespace

TEST_CASE("zero-lag atom reduces to an ODE: x' = -x") {
    ProblemSetup p{StieltjesKernel(1.0, {Atom{ex("0"), ex("-1")}}, {}), 0.0, 1.0, ex("1"),
                   1.0 / 64};
    Trajectory tr = solve(p);
    CHECK(std::abs(tr.value(1.0) - Complex(std::exp(-1.0))) < 1e-8);
}

TEST_CASE("the linear closed form rides through the variable-delay equation") {
    ProblemSetup p{variable_delay_kernel(), 0.0, 10.0, ex("t+2"), 1.0 / 32};
    Trajectory tr = solve(p);
    double worst = 0;
    for (double t : tr.knots())
        if (t >= 0)
            worst = std::max(worst, std::abs(tr.value(t) - Complex(t + 2.0)));
    CHECK(worst < 1e-9);
}

TEST_CASE("zero kernel keeps the state frozen, exactly") {
    ProblemSetup p{StieltjesKernel(1.0, {}, {}), 0.0, 4.0, ex("3"), 0.125};
    Trajectory tr = solve(p);
    for (double t : tr.knots()) {
        CHECK(tr.value(t) == Complex(3.0));
        if (t >= 0)
            CHECK(tr.derivative(t) == Complex(0.0));
    }
}

TEST_CASE("the solution operator is linear in the initial data") {
    StieltjesKernel k = variable_delay_kernel();
    double alpha = 2.5;
    ProblemSetup p1{k, 0.0, 6.0, ex("sin(t+1)"), 1.0 / 32};
    ProblemSetup p2{k, 0.0, 6.0, ex("exp(-t)"), 1.0 / 32};
    ProblemSetup p12{k, 0.0, 6.0, ex("sin(t+1) + 2.5*(exp(-t))"), 1.0 / 32};
    Trajectory t1 = solve(p1), t2 = solve(p2), t12 = solve(p12);
    for (double t : t12.knots()) {
        Complex combined = t12.value(t);
        Complex split = t1.value(t) + alpha * t2.value(t);
        CHECK(std::abs(combined - split) <= 1e-9 * (1.0 + std::abs(split)));
    }
}

TEST_CASE("fourth-order convergence against a stepped polynomial solution") {
    // x' = -x(t-1), x == 1 on [-1,0]; piecewise polynomial of growing degree,
    // so the local truncation error is genuinely nonzero from t = 4 on.
    SteppedPolynomialSolution exact(-1.0, 8);
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("-1")}}, {});
    std::vector<double> errs;
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        ProblemSetup p{k, 0.0, 8.0, ex("1"), h};
        Trajectory tr = solve(p);
        double worst = 0;
        for (double t : tr.knots())
            if (t >= 0)
                worst = std::max(worst, std::abs(tr.value(t) - Complex(exact(t))));
        errs.push_back(worst);
    }
    double p1 = std::log2(errs[0] / errs[1]);
    double p2 = std::log2(errs[1] / errs[2]);
    CHECK(p1 >= 3.5);
    CHECK(p1 <= 4.5);
    CHECK(p2 >= 3.5);
    CHECK(p2 <= 4.5);
}

TEST_CASE("a certified lambda generates a near-solution via the exponential ansatz") {
    // residual eps of lambda bounds the defect of x = exp(Lambda(t)-Lambda(t0))
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.1")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    opts.tol = 1e-6; // deliberately loose
    FixedPointResult res = solve_fixed_point(k, ex("0"), 0.0, 12.0, opts);
    const LambdaFunction& lam = res.lambda;

    auto x = [&](double t) { return std::exp(lam.integral(0.0, t)); };
    auto dx = [&](double t) { return lam(t) * x(t); };
    Trajectory tr = testsupport::sampled_trajectory(x, dx, -1.0, 12.0, 13 * 16, 0.0);

    double eps = res.residual;
    for (int i = 0; i <= 40; ++i) {
        double t = 1.0 + 10.0 * i / 40.0;
        Complex defect = tr.derivative(t) - k.apply_functional(t, tr.segment_at(t));
        CHECK(std::abs(defect) <= 10 * eps * std::abs(tr.value(t)) + 1e-9);
    }
}

TEST_CASE("horizon rounds up to a whole number of steps") {
    ProblemSetup p{StieltjesKernel(1.0, {}, {}), 0.0, 1.03, ex("1"), 0.125};
    Trajectory tr = solve(p);
    CHECK(tr.back() == doctest::Approx(1.125));
    CHECK(tr.t_start() == 0.0);
}

TEST_CASE("step floor and delay range violations") {
    StieltjesKernel k(1.0, {}, {});
    CHECK_THROWS_AS(solve(ProblemSetup{k, 0.0, 1.0, ex("1"), 0.2}), std::invalid_argument);
    StieltjesKernel bad(1.0, {Atom{ex("1.5"), ex("1")}}, {});
    CHECK_THROWS_AS(solve(ProblemSetup{bad, 0.0, 1.0, ex("1"), 0.125}), KernelError);
}

TEST_CASE("divergent problems stop with an error") {
    StieltjesKernel k(1.0, {Atom{ex("0"), ex("100")}}, {});
    CHECK_THROWS_AS(solve(ProblemSetup{k, 0.0, 10.0, ex("1"), 0.125}), SolveError);
}

TEST_CASE("junction slopes: equation side vs initial data side") {
    // x' = -x(t-1) from x == 1: right slope at 0 is -1, left slope is 0
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("-1")}}, {});
    ProblemSetup p{k, 0.0, 2.0, ex("1"), 0.125};
    Trajectory tr = solve(p);
    CHECK(tr.derivative(0.0) == Complex(-1.0));
    CHECK(std::abs(tr.derivative(-0.01)) < 1e-10);
    CHECK(tr.value(0.0) == Complex(1.0));
}
