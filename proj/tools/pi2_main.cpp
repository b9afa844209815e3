// pi2 - command line laboratory for the tritronquee solutions of the 4th-order
// P_I^2 equation: series data, line solves, model-curve geometry, sector
// fields and the quasi-linear Stokes measurement.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "pi2/analysis.hpp"
#include "pi2/bvp.hpp"
#include "pi2/errors.hpp"
#include "pi2/io.hpp"
#include "pi2/model_curve.hpp"
#include "pi2/series.hpp"
#include "pi2/stokes.hpp"

namespace fs = std::filesystem;
using namespace pi2;
using io::json;

namespace {

cplx parse_complex(const std::string& s) {
    double re = 0.0, im = 0.0;
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        re = std::stod(s);
    } else {
        re = std::stod(s.substr(0, comma));
        im = std::stod(s.substr(comma + 1));
    }
    return {re, im};
}

fs::path output_root() {
    if (const char* env = std::getenv("PI2_OUTPUT_ROOT")) return fs::path(env);
    return fs::path("pi2_out");
}

struct CommonOpts {
    std::string out = "run";
    bool no_cache = false;
};

fs::path prepare_outdir(const CommonOpts& c) {
    const fs::path dir = output_root() / c.out;
    fs::create_directories(dir);
    return dir;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "output subdirectory under the output root");
    cmd->add_flag("--no-cache", c.no_cache, "disable the solution cache");
}

// line presets: (phi, b, arg_left, arg_right) tuples for the named solutions
void apply_preset(const std::string& name, bvp::LineDomain& d) {
    if (name.empty() || name == "custom") return;
    if (name == "U0-real") {
        d.phi = 0.0;
        d.b = 0.0;
        d.arg_left = 3.0 * M_PI;
        d.arg_right = 0.0;
    } else if (name == "V0-imag") {
        d.phi = 5.0 * M_PI / 2.0;
        d.b = 0.0;
        d.arg_left = 7.0 * M_PI / 2.0;
        d.arg_right = 5.0 * M_PI / 2.0;
    } else if (name == "U0-offset") {
        d.phi = 0.0;
        d.arg_right = std::arg(d.x_of(d.xi_r));
        // continuous continuation along the line from the right end
        double a = d.arg_right;
        const int steps = 4096;
        for (int k = 1; k <= steps; ++k) {
            const double xi = d.xi_r + (d.xi_l - d.xi_r) * double(k) / steps;
            a = arg_near(d.x_of(xi), a);
        }
        d.arg_left = a;
    } else {
        throw InvalidArgument("unknown preset: " + name);
    }
}

bvp::LineSolution solve_cached(const bvp::LineDomain& d, const bvp::SolverOptions& so,
                               const io::SolutionCache& cache) {
    if (auto hit = cache.load(d)) return *hit;
    auto sol = bvp::solve_line(d, so);
    cache.store(sol);
    return sol;
}

int cmd_series(cplx t, int max_n, const CommonOpts& common) {
    const fs::path dir = prepare_outdir(common);
    const auto a = series::coefficients(t, max_n);
    io::write_series_csv(a, dir / "series.csv");
    json manifest{{"command", "series"}, {"t", io::to_json(t)}, {"max_n", max_n}};
    io::write_json(manifest, dir / "manifest.json");
    std::cout << "wrote " << (dir / "series.csv").string() << "\n";
    return 0;
}

int cmd_curve(double xmod, double xarg, cplx t, const CommonOpts& common) {
    const auto p = model_curve::branch_points(BranchedPoint(xmod, xarg), t);
    const json j = io::to_json(p);
    std::cout << j.dump(2) << "\n";
    const fs::path dir = prepare_outdir(common);
    io::write_json(j, dir / "curve.json");
    return 0;
}

int cmd_solve_line(bvp::LineDomain d, const std::string& preset, double tol,
                   const CommonOpts& common) {
    apply_preset(preset, d);
    bvp::SolverOptions so;
    so.tol = tol;
    const fs::path dir = prepare_outdir(common);
    io::SolutionCache cache{output_root() / "cache", !common.no_cache};
    const auto sol = solve_cached(d, so, cache);
    io::write_solution_csv(sol, dir / "solution.csv");
    json manifest{{"command", "solve-line"},
                  {"preset", preset},
                  {"tol", tol},
                  {"sidecar", io::solution_sidecar(sol)}};
    io::write_json(manifest, dir / "manifest.json");
    std::cout << "converged: residual " << sol.residual_norm << " in " << sol.iterations
              << " iterations\n"
              << "wrote " << (dir / "solution.csv").string() << "\n";
    return 0;
}

int cmd_stokes_diff(analysis::StokesDifferenceOptions opts, const CommonOpts& common) {
    const auto fit = analysis::stokes_difference(opts);
    const auto sp = model_curve::stokes_prediction(0.0, 3.0 * M_PI,
                                                  model_curve::StokesPairKind::typeII_vs_typeI);
    json j = io::to_json(fit);
    j["predicted_rate"] = sp.rate;
    j["predicted_period"] = sp.period;
    const fs::path dir = prepare_outdir(common);
    io::write_json(j, dir / "decay_fit.json");
    json manifest{{"command", "stokes-diff"},
                  {"window", {opts.window_lo, opts.window_hi}},
                  {"xi_end", opts.xi_end},
                  {"Nc", opts.Nc},
                  {"boundary_threshold", opts.boundary_threshold}};
    io::write_json(manifest, dir / "manifest.json");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sector(analysis::SectorFieldOptions opts, const std::string& method,
               const CommonOpts& common) {
    opts.method = (method == "laplace") ? analysis::FieldMethod::laplace
                                        : analysis::FieldMethod::rays;
    const auto f = analysis::sector_field(opts);
    const fs::path dir = prepare_outdir(common);
    io::write_field_csv(f, dir / "field.csv");
    json manifest{{"command", "sector"},
                  {"family", opts.family == model_curve::Family::typeII ? "typeII" : "typeI"},
                  {"m", opts.m},
                  {"t", io::to_json(opts.t)},
                  {"r", {opts.r_lo, opts.r_hi}},
                  {"theta", {opts.theta_lo, opts.theta_hi}},
                  {"n_rays", opts.n_rays},
                  {"grid", {opts.nr, opts.ntheta}},
                  {"ray_Nc", opts.ray_Nc},
                  {"method", method}};
    io::write_json(manifest, dir / "manifest.json");
    std::cout << "wrote " << (dir / "field.csv").string() << "\n";
    return 0;
}

int cmd_coeff_asym(int max_n, const CommonOpts& common) {
    const fs::path dir = prepare_outdir(common);
    std::ofstream out(dir / "coeff_asym.csv");
    out << "N,log_abs_recurrence,log_abs_formula,rel_log_error\n";
    const auto lb = series::coefficients_t0_log(max_n / 7);
    double prev = 1e300;
    bool monotone = true;
    for (int N = 70; N <= max_n; N += 70) {
        const auto f = model_curve::coefficient_asymptotics(N, 0.0);
        const double lr = lb[std::size_t(N / 7)].log_abs;
        const double rel = std::abs(f.log_magnitude - lr) / std::abs(lr);
        monotone = monotone && (rel < prev);
        prev = rel;
        out << N << ',' << io::fmt(lr) << ',' << io::fmt(f.log_magnitude) << ',' << io::fmt(rel)
            << '\n';
    }
    json manifest{{"command", "coeff-asym"}, {"max_n", max_n}, {"monotone_decrease", monotone}};
    io::write_json(manifest, dir / "manifest.json");
    std::cout << "relative log-magnitude error decreases monotonically: "
              << (monotone ? "yes" : "NO") << "\n";
    return monotone ? 0 : 1;
}

int cmd_check() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    {  // coefficient table
        bool ok = true;
        for (cplx t : {cplx(0.0), cplx(1.0), cplx(-1.0), cplx(2.0), cplx(-2.0), cplx(0.0, 1.0)})
            for (double r : series::cn_table_check(t)) ok = ok && r < 1e-10;
        report("coefficient table vs closed forms", ok);
    }
    {  // recurrence cross-consistency
        const auto b = series::coefficients_t0(30);
        const auto a = series::coefficients(0.0, 210);
        bool ok = true;
        for (int n = 0; n <= 30; ++n)
            ok = ok && std::abs(a[std::size_t(7 * n)].real() - b[std::size_t(n)]) <=
                           1e-10 * std::abs(b[std::size_t(n)]);
        report("a_{7n}(0) = b_n cross-check", ok);
    }
    {  // branch points and the phase law
        bool ok = true;
        for (double th : {0.0, M_PI / 2.0, 3.0 * M_PI}) {
            const BranchedPoint x(2.0, th);
            const auto p = model_curve::branch_points(x, 0.0);
            const cplx f1 = (3.0 / 7.0) * model_curve::h_const(-1) * x.pow(7.0 / 6.0);
            ok = ok && std::abs(p.F1 - f1) <= 1e-10 * std::abs(f1);
            ok = ok && std::abs(p.lambda5 * p.lambda5 * p.lambda5 - 24.0 * p.t * p.lambda5 +
                                48.0 * x.value()) < 1e-9;
        }
        report("model curve closed forms at t=0", ok);
    }
    {  // Stokes presets
        bool ok = true;
        for (auto fam : {model_curve::Family::typeI, model_curve::Family::typeII})
            for (int m = 0; m < 7; ++m) ok = ok && stokes::validate(stokes::preset(fam, m)) < 1e-14;
        report("tritronquee Stokes presets", ok);
    }
    {  // spectral exactness
        const auto g = spectral::build_grid(48, -2.0, 2.0);
        const auto ops = spectral::build_diff_ops(g);
        Eigen::VectorXd v(g.size());
        for (int j = 0; j < g.size(); ++j) v(j) = std::sin(g.nodes[std::size_t(j)]);
        const Eigen::VectorXd d2 = ops.D2 * v;
        bool ok = true;
        for (int j = 2; j <= g.Nc - 2; ++j)
            ok = ok && std::abs(d2(j) + std::sin(g.nodes[std::size_t(j)])) < 1e-9;
        report("Chebyshev differentiation", ok);
    }
    {  // small line solve and identities
        bvp::LineDomain d;
        d.phi = 0.0;
        d.b = 0.0;
        d.xi_l = -12.0;
        d.xi_r = 12.0;
        d.t = 0.0;
        d.Nc = 320;
        d.arg_left = 3.0 * M_PI;
        d.arg_right = 0.0;
        bool ok = true;
        try {
            const auto sol = bvp::solve_line(d);
            ok = ok && sol.residual_norm < 1e-8;
            double imax = 0.0;
            for (int j = 0; j < sol.u.size(); ++j)
                imax = std::max(imax, std::abs(sol.u(j).imag()));
            ok = ok && imax < 1e-6;
            const auto tr = analysis::hamiltonians(sol);
            ok = ok && tr.r1_interior_norm < 1e-4 && tr.r0_interior_norm < 1e-4;
            const double lax =
                analysis::lax_residual(sol, {cplx(0.0), cplx(1.0, 1.0), cplx(-2.0)});
            ok = ok && lax < 1e-4;
        } catch (const std::exception&) {
            ok = false;
        }
        report("U0 real-line solve, Hamiltonian and Lax identities", ok);
    }
    std::cout << (failures == 0 ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the tritronquee solutions of P_I^2"};
    app.set_config("--config", "", "TOML config file; flags override file values");
    app.require_subcommand(1);

    CommonOpts common;

    // series
    auto* c_series = app.add_subcommand("series", "emit the coefficient table a_0..a_M");
    std::string s_t = "0,0";
    int s_maxn = 50;
    c_series->add_option("--t", s_t, "parameter t as re,im");
    c_series->add_option("--max-n", s_maxn, "highest coefficient index");
    add_common(c_series, common);

    // curve
    auto* c_curve = app.add_subcommand("curve", "branch points and phase data at (x, t)");
    double cv_mod = 1.0, cv_arg = 0.0;
    std::string cv_t = "0,0";
    c_curve->add_option("--x", cv_mod, "|x|")->required();
    c_curve->add_option("--arg", cv_arg, "unwrapped argument of x (radians)");
    c_curve->add_option("--t", cv_t, "parameter t as re,im");
    add_common(c_curve, common);

    // solve-line
    auto* c_solve = app.add_subcommand("solve-line", "solve the P_I^2 boundary value problem on a line");
    bvp::LineDomain dom;
    std::string preset = "U0-real", b_str = "0,0", t_str = "0,0";
    double tol = 1e-8;
    c_solve->add_option("--preset", preset, "U0-real | V0-imag | U0-offset | custom");
    c_solve->add_option("--phi", dom.phi, "line direction (radians)");
    c_solve->add_option("--b", b_str, "line offset as re,im");
    c_solve->add_option("--xi-l", dom.xi_l, "left parameter bound");
    c_solve->add_option("--xi-r", dom.xi_r, "right parameter bound");
    c_solve->add_option("--t", t_str, "parameter t as re,im");
    c_solve->add_option("--nc", dom.Nc, "collocation size");
    c_solve->add_option("--arg-left", dom.arg_left, "unwrapped argument at the left end");
    c_solve->add_option("--arg-right", dom.arg_right, "unwrapped argument at the right end");
    c_solve->add_option("--threshold", dom.threshold, "series truncation threshold");
    c_solve->add_option("--tol", tol, "Newton convergence tolerance");
    add_common(c_solve, common);

    // stokes-diff
    auto* c_stokes = app.add_subcommand("stokes-diff", "measure the U0 - series difference on the negative axis");
    analysis::StokesDifferenceOptions sopts;
    c_stokes->add_option("--window-lo", sopts.window_lo, "|x| window start");
    c_stokes->add_option("--window-hi", sopts.window_hi, "|x| window end");
    c_stokes->add_option("--xi-end", sopts.xi_end, "half length of the solve interval");
    c_stokes->add_option("--nc", sopts.Nc, "collocation size");
    c_stokes->add_option("--threshold", sopts.boundary_threshold, "boundary truncation threshold");
    add_common(c_stokes, common);

    // sector
    auto* c_sector = app.add_subcommand("sector", "assemble a sector field from ray solves");
    analysis::SectorFieldOptions fopts;
    std::string fam = "typeII", method = "rays", ft_str = "0,0";
    c_sector->add_option("--family", fam, "typeI | typeII");
    c_sector->add_option("--m", fopts.m, "family index 0..6");
    c_sector->add_option("--t", ft_str, "parameter t as re,im");
    c_sector->add_option("--r-lo", fopts.r_lo, "inner radius");
    c_sector->add_option("--r-hi", fopts.r_hi, "outer radius");
    c_sector->add_option("--theta-lo", fopts.theta_lo, "lower angle");
    c_sector->add_option("--theta-hi", fopts.theta_hi, "upper angle");
    c_sector->add_option("--rays", fopts.n_rays, "number of rays");
    c_sector->add_option("--nr", fopts.nr, "radial output grid");
    c_sector->add_option("--ntheta", fopts.ntheta, "angular output grid");
    c_sector->add_option("--ray-nc", fopts.ray_Nc, "collocation size per ray");
    c_sector->add_option("--method", method, "rays | laplace");
    c_sector->add_option("--workers", fopts.workers, "worker pool size");
    add_common(c_sector, common);

    // coeff-asym
    auto* c_asym = app.add_subcommand("coeff-asym", "large-N coefficient asymptotics vs the recurrence");
    int maxn = 350;
    c_asym->add_option("--max-n", maxn, "largest N (multiple of 70 recommended)");
    add_common(c_asym, common);

    // check
    auto* c_check = app.add_subcommand("check", "run the invariant self-test suite");
    (void)c_check;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_series->parsed()) return cmd_series(parse_complex(s_t), s_maxn, common);
        if (c_curve->parsed()) return cmd_curve(cv_mod, cv_arg, parse_complex(cv_t), common);
        if (c_solve->parsed()) {
            dom.b = parse_complex(b_str);
            dom.t = parse_complex(t_str);
            return cmd_solve_line(dom, preset, tol, common);
        }
        if (c_stokes->parsed()) return cmd_stokes_diff(sopts, common);
        if (c_sector->parsed()) {
            fopts.family = (fam == "typeI") ? model_curve::Family::typeI : model_curve::Family::typeII;
            fopts.t = parse_complex(ft_str);
            return cmd_sector(fopts, method, common);
        }
        if (c_asym->parsed()) return cmd_coeff_asym(maxn, common);
        if (c_check->parsed()) return cmd_check();
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        json diag{{"error", e.what()}};
        try { io::write_json(diag, prepare_outdir(common) / "error.json"); } catch (...) {}
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
