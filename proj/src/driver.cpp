#include "rfde/driver.hpp"

#include "rfde/csvio.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rfde {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    fs::path p = fs::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw SpecError("cannot write '" + p.string() + "'");
    return out;
}

std::pair<double, double> criterion_window(const ProblemSpec& spec) {
    double lo = spec.criterion.window_lo.value_or(spec.t0);
    double hi = spec.criterion.window_hi.value_or(spec.horizon);
    return {lo, hi};
}

} // namespace

StieltjesKernel build_kernel(const ProblemSpec& spec) {
    std::vector<Atom> atoms;
    for (const auto& a : spec.atoms)
        atoms.push_back(Atom{Expression::parse(a.delay), Expression::parse(a.mass)});
    std::vector<DensityPiece> densities;
    for (const auto& d : spec.densities)
        densities.push_back(DensityPiece{Expression::parse(d.kernel), d.lo, d.hi});
    return StieltjesKernel(spec.r, std::move(atoms), std::move(densities),
                           QuadratureConfig{spec.quad_order, spec.quad_panels});
}

LambdaRun run_lambda(const ProblemSpec& spec, double horizon) {
    StieltjesKernel kernel = build_kernel(spec);
    if (spec.lambda.closed_form) {
        LambdaFunction lam(Expression::parse(*spec.lambda.closed_form), spec.t0 - spec.r,
                           horizon, spec.grid_step);
        int n = std::max(1, static_cast<int>(std::ceil((horizon - spec.t0) / spec.grid_step)));
        double resid = characteristic_residual(kernel, lam, spec.t0, horizon, n);
        return LambdaRun{std::move(lam), resid, 0, false};
    }
    if (!spec.lambda.pre_interval_guess)
        throw SpecError("[lambda] needs closed_form or pre_interval_guess for this command");
    FixedPointOptions opts;
    opts.grid_step = spec.grid_step;
    opts.tol = spec.lambda.tol;
    opts.max_iter = spec.lambda.max_iter;
    opts.relaxation = spec.lambda.relaxation;
    FixedPointResult res = solve_fixed_point(
        kernel, Expression::parse(*spec.lambda.pre_interval_guess), spec.t0, horizon, opts);
    return LambdaRun{std::move(res.lambda), res.residual, res.iterations, true};
}

Trajectory run_simulate(const ProblemSpec& spec) {
    if (!spec.initial_data)
        throw SpecError("this command needs initial_data in the problem spec");
    ProblemSetup setup{build_kernel(spec), spec.t0, spec.horizon,
                       Expression::parse(*spec.initial_data), spec.step};
    return solve(setup);
}

CriterionReport run_verify(const ProblemSpec& spec, const StieltjesKernel& kernel,
                           const LambdaFunction& lam) {
    auto [lo, hi] = criterion_window(spec);
    return scan(kernel, lam, lo, hi, spec.criterion.samples, spec.criterion.margin);
}

AsymptoteRun run_asymptote(const ProblemSpec& spec) {
    Trajectory x = run_simulate(spec);
    LambdaRun lr = run_lambda(spec, x.back());
    Trajectory y = transform_y(x, lr.lambda);
    AsymptoticsReport rep =
        estimate_limits(y, lr.lambda, spec.r, spec.asymptotics.tail_fraction);

    double mu;
    if (spec.asymptotics.mu) {
        mu = *spec.asymptotics.mu;
    } else {
        StieltjesKernel kernel = build_kernel(spec);
        mu = run_verify(spec, kernel, lr.lambda).mu_hat;
    }
    rep.mu_used = mu;
    bool evaluated = false;
    if (mu >= 0 && mu < 1) {
        EnvelopeOptions eopts;
        eopts.slack = spec.asymptotics.slack;
        EnvelopeCheck env = check_envelope(y, mu, spec.r, eopts);
        rep.M_x = env.M_x;
        rep.envelope_ok = env.ok;
        evaluated = true;
    }
    return AsymptoteRun{std::move(x), std::move(y), rep, evaluated};
}

namespace {

int cmd_simulate(const ProblemSpec& spec, const std::string& out_dir, std::ostream& out) {
    Trajectory tr = run_simulate(spec);
    auto f = open_out(out_dir, "trajectory.csv");
    tr.write_csv(f);
    Complex xT = tr.value(tr.back());
    out << "T = " << csv::g17(tr.back()) << '\n';
    out << "x(T) = " << csv::g17(xT.real()) << " + " << csv::g17(xT.imag()) << "i\n";
    out << "wrote trajectory.csv (" << tr.knots().size() << " knots)\n";
    return 0;
}

int cmd_lambda(const ProblemSpec& spec, const std::string& out_dir, std::ostream& out) {
    LambdaRun lr = run_lambda(spec, spec.horizon);
    auto f = open_out(out_dir, "lambda.csv");
    lr.lambda.write_csv(f);
    out << "residual = " << csv::g17(lr.residual) << " (max over [" << csv::g17(spec.t0)
        << ", " << csv::g17(lr.lambda.t_hi()) << "])\n";
    if (lr.fixed_point)
        out << "iterations = " << lr.iterations << '\n';
    out << "wrote lambda.csv\n";
    return 0;
}

int cmd_verify(const ProblemSpec& spec, const std::string& out_dir, std::ostream& out) {
    StieltjesKernel kernel = build_kernel(spec);
    LambdaRun lr = run_lambda(spec, spec.horizon);
    CriterionReport rep = run_verify(spec, kernel, lr.lambda);
    auto f = open_out(out_dir, "criterion.csv");
    rep.write_csv(f);
    out << "mu_hat = " << csv::g17(rep.mu_hat) << " over window [" << csv::g17(rep.window_lo)
        << ", " << csv::g17(rep.window_hi) << "], margin " << csv::g17(rep.margin) << '\n';
    out << "verdict = " << rep.verdict_name() << '\n';
    out << "wrote criterion.csv\n";
    return rep.exit_status();
}

int cmd_asymptote(const ProblemSpec& spec, const std::string& out_dir, std::ostream& out) {
    AsymptoteRun run = run_asymptote(spec);
    {
        auto f = open_out(out_dir, "asymptotics.csv");
        write_asymptotics_csv(run.y, run.report, spec.r, f);
    }
    {
        auto f = open_out(out_dir, "asymptotics.txt");
        run.report.write_kv(f);
    }
    std::ostringstream kv;
    run.report.write_kv(kv);
    out << kv.str();
    if (!run.envelope_evaluated)
        out << "envelope: not evaluated (mu >= 1)\n";
    out << "wrote asymptotics.csv, asymptotics.txt\n";
    return 0;
}

int cmd_full_report(const ProblemSpec& spec, const std::string& out_dir, std::ostream& out) {
    Trajectory tr = run_simulate(spec);
    {
        auto f = open_out(out_dir, "trajectory.csv");
        tr.write_csv(f);
    }
    LambdaRun lr = run_lambda(spec, tr.back());
    {
        auto f = open_out(out_dir, "lambda.csv");
        lr.lambda.write_csv(f);
    }
    StieltjesKernel kernel = build_kernel(spec);
    CriterionReport crep = run_verify(spec, kernel, lr.lambda);
    {
        auto f = open_out(out_dir, "criterion.csv");
        crep.write_csv(f);
    }
    Trajectory y = transform_y(tr, lr.lambda);
    AsymptoticsReport rep = estimate_limits(y, lr.lambda, spec.r, spec.asymptotics.tail_fraction);
    rep.mu_used = spec.asymptotics.mu.value_or(crep.mu_hat);
    bool envelope_evaluated = rep.mu_used >= 0 && rep.mu_used < 1;
    if (envelope_evaluated) {
        EnvelopeOptions eopts;
        eopts.slack = spec.asymptotics.slack;
        EnvelopeCheck env = check_envelope(y, rep.mu_used, spec.r, eopts);
        rep.M_x = env.M_x;
        rep.envelope_ok = env.ok;
    }
    {
        auto f = open_out(out_dir, "asymptotics.csv");
        write_asymptotics_csv(y, rep, spec.r, f);
    }
    {
        auto f = open_out(out_dir, "asymptotics.txt");
        rep.write_kv(f);
    }
    out << "x(T) = " << csv::g17(tr.value(tr.back()).real()) << " + "
        << csv::g17(tr.value(tr.back()).imag()) << "i\n";
    out << "lambda residual = " << csv::g17(lr.residual) << '\n';
    out << "mu_hat = " << csv::g17(crep.mu_hat) << ", verdict = " << crep.verdict_name() << '\n';
    std::ostringstream kv;
    rep.write_kv(kv);
    out << kv.str();
    if (!envelope_evaluated)
        out << "envelope: not evaluated (mu >= 1)\n";
    out << "wrote trajectory.csv, lambda.csv, criterion.csv, asymptotics.csv, asymptotics.txt\n";
    return crep.exit_status();
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"linear nonautonomous delay equations: simulate, solve the generalized "
                 "characteristic equation, check the contraction criterion, measure tail "
                 "behavior"};
    app.name("rfde");

    std::string spec_path;
    std::string out_dir_flag;
    bool print_spec = false;
    int samples_flag = 0;
    std::string window_flag;

    app.add_option("--spec", spec_path, "problem spec (TOML)")->required();
    app.add_option("--out", out_dir_flag, "output directory (default: [output] dir from the spec)");
    app.add_flag("--print-spec", print_spec, "echo the parsed spec as TOML and exit");
    app.add_option("--samples", samples_flag, "override [criterion] samples");
    app.add_option("--window", window_flag, "override [criterion] window, as a,b");

    app.require_subcommand(0, 1);
    CLI::App* sub_simulate = app.add_subcommand("simulate", "integrate and write trajectory.csv");
    CLI::App* sub_lambda = app.add_subcommand("lambda", "produce lambda and write lambda.csv");
    CLI::App* sub_verify =
        app.add_subcommand("verify", "scan the criterion; exit 0 holds / 2 fails / 3 inconclusive");
    CLI::App* sub_asymptote =
        app.add_subcommand("asymptote", "transform to y, estimate limits and the decay envelope");
    CLI::App* sub_full = app.add_subcommand("full-report", "all of the above");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? 0 : 1;
    }

    try {
        ProblemSpec spec = load_problem_spec(spec_path);
        if (samples_flag > 0)
            spec.criterion.samples = samples_flag;
        if (!window_flag.empty()) {
            auto comma = window_flag.find(',');
            if (comma == std::string::npos)
                throw SpecError("--window expects a,b");
            spec.criterion.window_lo = std::stod(window_flag.substr(0, comma));
            spec.criterion.window_hi = std::stod(window_flag.substr(comma + 1));
            if (!(*spec.criterion.window_lo < *spec.criterion.window_hi))
                throw SpecError("--window expects a < b");
        }
        if (print_spec) {
            out << print_problem_spec(spec);
            return 0;
        }
        std::string out_dir = out_dir_flag.empty() ? spec.out_dir : out_dir_flag;

        if (sub_simulate->parsed())
            return cmd_simulate(spec, out_dir, out);
        if (sub_lambda->parsed())
            return cmd_lambda(spec, out_dir, out);
        if (sub_verify->parsed())
            return cmd_verify(spec, out_dir, out);
        if (sub_asymptote->parsed())
            return cmd_asymptote(spec, out_dir, out);
        if (sub_full->parsed())
            return cmd_full_report(spec, out_dir, out);
        err << "no subcommand given (try simulate, lambda, verify, asymptote, full-report)\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace rfde
