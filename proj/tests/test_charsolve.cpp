#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rfde/charsolve.hpp"

#include "support.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace rfde;
using testsupport::lambert_w_bisect;

namespace {

Expression ex(const char* s) { return Expression::parse(s); }

StieltjesKernel variable_delay_kernel() {
    // x'(t) = x(t - tau(t)) / (t + c - tau(t)) with tau == 1, c == 2
    return StieltjesKernel(1.0, {Atom{ex("1"), ex("1/(t+1)")}}, {});
}

StieltjesKernel distributed_kernel() {
    return StieltjesKernel(1.0, {}, {DensityPiece{ex("1/(t-theta)"), 0.0, 1.0}});
}

} // namespace

TEST_CASE("constant lambda against a unit-lag atom reduces to b e^{-lambda}") {
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.35")}}, {});
    LambdaFunction lam(ex("0.2"), -1.0, 20.0, 0.125);
    Complex v = characteristic_rhs(k, lam, 5.0);
    CHECK(v.real() == doctest::Approx(0.35 * std::exp(-0.2)).epsilon(1e-15));
}

TEST_CASE("the variable-delay closed form is a fixed point") {
    StieltjesKernel k = variable_delay_kernel();
    LambdaFunction lam(ex("1/(t+2)"), -1.0, 100.0, 0.125);
    CHECK(lam.has_exact_cumulative());
    Complex v = characteristic_rhs(k, lam, 8.0);
    CHECK(v.real() == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(characteristic_residual(k, lam, 0.0, 100.0, 400) < 1e-10);
}

TEST_CASE("the distributed closed form is a fixed point") {
    StieltjesKernel k = distributed_kernel();
    LambdaFunction lam(ex("1/t"), 1.0, 100.0, 0.125);
    CHECK(lam.has_exact_cumulative());
    Complex v = characteristic_rhs(k, lam, 10.0);
    CHECK(v.real() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(characteristic_residual(k, lam, 2.0, 50.0, 200) < 1e-8);
}

TEST_CASE("zero kernel, zero lambda: residual is exactly zero") {
    StieltjesKernel k(1.0, {}, {});
    LambdaFunction lam(ex("0"), -1.0, 10.0, 0.125);
    CHECK(characteristic_residual(k, lam, 0.0, 10.0, 50) == 0.0);
}

TEST_CASE("complex lambda flows through the exponential") {
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("1")}}, {});
    std::vector<double> knots{-1.0, 0.0, 1.0, 2.0};
    Complex z(0.1, 0.3);
    LambdaFunction lam(knots, {z, z, z, z});
    Complex v = characteristic_rhs(k, lam, 1.0);
    CHECK(std::abs(v - std::exp(-z)) < 1e-14);
}

TEST_CASE("antiderivative table: constants and reciprocals are exact") {
    LambdaFunction c(ex("0.3"), 0.0, 10.0, 0.5);
    CHECK(c.has_exact_cumulative());
    CHECK(c.integral(1.0, 7.0).real() == doctest::Approx(0.3 * 6.0).epsilon(1e-15));

    LambdaFunction lg(ex("2/(t-0.5)"), 1.0, 50.0, 0.5);
    CHECK(lg.has_exact_cumulative());
    CHECK(lg.integral(2.0, 10.0).real() ==
          doctest::Approx(2.0 * std::log(9.5 / 1.5)).epsilon(1e-15));

    // no table entry: composite trapezoid on the grid
    LambdaFunction s(ex("sin(t)"), 0.0, 4.0, 0.01);
    CHECK_FALSE(s.has_exact_cumulative());
    CHECK(s.integral(0.0, M_PI).real() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("reciprocal table entry declined when t+c crosses zero") {
    LambdaFunction lam(ex("1/(t-3)"), -1.0, 2.9, 0.01); // pole at 3 > domain, but t-3 < 0
    CHECK_FALSE(lam.has_exact_cumulative());
}

TEST_CASE("grid lambda: cumulative is the exact integral of the interpolant") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> vals(-1.0, 1.0);
    int n = 40;
    std::vector<double> knots(n + 1);
    std::vector<Complex> v(n + 1);
    for (int i = 0; i <= n; ++i) {
        knots[i] = -1.0 + 11.0 * i / n;
        v[i] = Complex(vals(rng), vals(rng));
    }
    LambdaFunction lam(knots, v);

    // additivity telescopes
    std::uniform_real_distribution<double> pts(-1.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        double a = pts(rng), b = pts(rng), c = pts(rng);
        Complex whole = lam.integral(a, c);
        Complex split = lam.integral(a, b) + lam.integral(b, c);
        CHECK(std::abs(whole - split) <= 1e-14 * (1.0 + std::abs(whole)));
    }

    // derivative of the cumulative recovers lambda at the knots
    for (int i = 1; i < n; ++i) {
        double t = knots[i], eps = 1e-6;
        Complex slope = (lam.cumulative(t + eps) - lam.cumulative(t - eps)) / (2 * eps);
        CHECK(std::abs(slope - lam(t)) < 1e-5);
    }
}

TEST_CASE("lambda domain is enforced") {
    LambdaFunction lam(ex("1/(t+2)"), -1.0, 10.0, 0.125);
    CHECK_THROWS_AS(lam(11.0), std::out_of_range);
    CHECK_THROWS_AS(lam.integral(-2.0, 5.0), std::out_of_range);
    CHECK_NOTHROW(lam(10.0 + 1e-12));
}

TEST_CASE("autonomous fixed point lands on the bisection root") {
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.1")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    FixedPointResult res = solve_fixed_point(k, ex("0"), 0.0, 30.0, opts);
    double w = lambert_w_bisect(0.1);
    CHECK(res.residual <= opts.tol);
    CHECK(res.iterations > 1);
    // the pre-interval transient has died out long before the horizon
    CHECK(std::abs(res.lambda(30.0) - Complex(w)) < 1e-8);
    CHECK(std::abs(res.lambda(25.0) - Complex(w)) < 1e-8);
}

TEST_CASE("constant fixed points of autonomous kernels solve the classical equation") {
    // lambda0 = sum_j b_j e^{-lambda0 tau_j}; single-atom case via the oracle
    double b = 0.35;
    double root = lambert_w_bisect(b);
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.35")}}, {});
    std::ostringstream lit;
    lit.precision(17);
    lit << root;
    LambdaFunction lam(Expression::parse(lit.str()), -1.0, 20.0, 0.125);
    CHECK(characteristic_residual(k, lam, 0.0, 20.0, 100) < 1e-10);
}

TEST_CASE("zero kernel converges to lambda == 0 in one sweep") {
    StieltjesKernel k(1.0, {}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    FixedPointResult res = solve_fixed_point(k, ex("0"), 0.0, 5.0, opts);
    CHECK(res.iterations == 1);
    CHECK(res.residual == 0.0);
    CHECK(res.lambda(3.0) == Complex(0.0));
}

TEST_CASE("distributed kernel: iteration recovers the known solution") {
    StieltjesKernel k = distributed_kernel();
    FixedPointOptions opts;
    opts.grid_step = 0.0625;
    opts.tol = 1e-9;
    FixedPointResult res = solve_fixed_point(k, ex("1/t"), 2.0, 50.0, opts);
    CHECK(res.residual <= opts.tol);
    for (double t : {2.0, 5.0, 10.0, 25.0, 50.0})
        CHECK(std::abs(res.lambda(t) - Complex(1.0 / t)) < 1e-6);
}

TEST_CASE("relaxation reaches the same fixed point") {
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.1")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    opts.relaxation = 0.5;
    FixedPointResult res = solve_fixed_point(k, ex("0"), 0.0, 20.0, opts);
    CHECK(std::abs(res.lambda(20.0) - Complex(lambert_w_bisect(0.1))) < 1e-8);
}

TEST_CASE("exhausting max_iter reports residual and sweep count") {
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("0.1")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    opts.max_iter = 2; // nowhere near converged yet
    try {
        solve_fixed_point(k, ex("0"), 0.0, 10.0, opts);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        std::string msg = e.what();
        CHECK(msg.find("residual") != std::string::npos);
        CHECK(msg.find("sweeps") != std::string::npos);
    }
}

TEST_CASE("runaway iterates are caught as divergence") {
    // lambda e^lambda = -2.5 has no real root; the iterates blow up
    StieltjesKernel k(1.0, {Atom{ex("1"), ex("-2.5")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.125;
    opts.max_iter = 40;
    try {
        solve_fixed_point(k, ex("0"), 0.0, 10.0, opts);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    }
}

TEST_CASE("residual after solve certifies the iterate") {
    StieltjesKernel k(2.0, {Atom{ex("2"), ex("0.2")}, Atom{ex("1"), ex("0.1*cos(t)")}}, {});
    FixedPointOptions opts;
    opts.grid_step = 0.25;
    FixedPointResult res = solve_fixed_point(k, ex("0"), 0.0, 12.0, opts);
    double check = characteristic_residual(k, res.lambda, 0.0, res.lambda.t_hi(), 96);
    CHECK(check <= opts.tol);
}

TEST_CASE("csv export of lambda and its integral") {
    LambdaFunction lam(ex("1/(t+2)"), -1.0, 3.0, 0.5);
    std::ostringstream os;
    lam.write_csv(os);
    std::string text = os.str();
    CHECK(text.rfind("t,re_lambda,im_lambda,re_Lambda,im_Lambda\n", 0) == 0);
    CHECK(text.find("\n-1,1,0,0,0\n") != std::string::npos); // Lambda(t_lo) = 0
}
