#include "pi2/analysis.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "pi2/errors.hpp"

namespace pi2::analysis {

namespace {

const cplx kI(0.0, 1.0);

using bvp::CVector;

CVector apply_op(const spectral::Matrix& D, const CVector& v) {
    Eigen::VectorXd vr = v.real();
    Eigen::VectorXd vi = v.imag();
    CVector out = (D * vr).cast<cplx>();
    out += kI * (D * vi).cast<cplx>();
    return out;
}

// nodes with xi in the middle two-thirds of the interval
std::pair<int, int> interior_two_thirds(const spectral::ChebGrid& g) {
    const double L = g.xi_r - g.xi_l;
    const double lo = g.xi_l + L / 6.0, hi = g.xi_r - L / 6.0;
    int a = 0, b = g.Nc;
    while (a <= g.Nc && g.nodes[std::size_t(a)] < lo) ++a;
    while (b >= 0 && g.nodes[std::size_t(b)] > hi) --b;
    return {a, b};
}

struct Derivs {
    CVector u, ux, uxx, uxxx;
};

Derivs spectral_derivatives(const LineSolution& sol) {
    const auto ops = spectral::build_diff_ops(sol.grid);
    const cplx e1 = std::polar(1.0, -sol.domain.phi);
    Derivs d;
    d.u = sol.u;
    d.ux = e1 * apply_op(ops.D1, sol.u);
    d.uxx = e1 * e1 * apply_op(ops.D2, sol.u);
    d.uxxx = e1 * e1 * e1 * apply_op(ops.D3, sol.u);
    return d;
}

struct Mat2 {
    cplx a11, a12, a21, a22;
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
    }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
    }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
    }
    double max_abs() const {
        return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
    }
};

// sigma_3, sigma_+, sigma_- components of the Lax matrix A(lambda)
cplx A_diag(cplx u, cplx ux, cplx uxxx, cplx lambda) {
    return (-ux * lambda - 3.0 * u * ux - uxxx / 4.0) / 60.0;
}
cplx A_plus(cplx u, cplx uxx, cplx t, cplx lambda) {
    return (lambda * lambda + u * lambda + 1.5 * u * u + uxx / 4.0 - 15.0 * t) / 30.0;
}
cplx A_minus(cplx u, cplx ux, cplx uxx, cplx x, cplx t, cplx lambda) {
    return (lambda * lambda * lambda - u * lambda * lambda -
            (u * u / 2.0 + uxx / 4.0 + 15.0 * t) * lambda + 2.0 * u * u * u - ux * ux / 4.0 +
            u * uxx / 2.0 + 30.0 * x) /
           30.0;
}

Mat2 lax_A(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t, cplx lambda) {
    const cplx d = A_diag(u, ux, uxxx, lambda);
    return {d, A_plus(u, uxx, t, lambda), A_minus(u, ux, uxx, x, t, lambda), -d};
}

Mat2 lax_B(cplx u, cplx lambda) { return {0.0, 1.0, lambda - 2.0 * u, 0.0}; }

}  // namespace

cplx H1_density(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t) {
    return x * u + u * u * u * u / 24.0 - t * u * u / 2.0 + u * ux * ux / 24.0 +
           ux * uxxx / 240.0 - uxx * uxx / 480.0;
}

cplx H0_density(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t) {
    return uxxx * uxxx / 1920.0 + u * ux * uxxx / 80.0 + u * u * ux * ux / 16.0 +
           u * u * u * u * u / 10.0 + u * u * u * uxx / 24.0 + u * uxx * uxx / 240.0 -
           ux * ux * uxx / 480.0 - ux / 4.0 + 1.5 * x * u * u + x * uxx / 4.0 - t * u * u * u -
           t * u * uxx / 4.0 + t * ux * ux / 8.0;
}

HamiltonianTrace hamiltonians(const LineSolution& sol) {
    const auto ops = spectral::build_diff_ops(sol.grid);
    const cplx e1 = std::polar(1.0, -sol.domain.phi);
    const Derivs d = spectral_derivatives(sol);
    const int n = int(sol.u.size());

    HamiltonianTrace tr;
    tr.H1.resize(std::size_t(n));
    tr.H0.resize(std::size_t(n));
    CVector h1(n), h0(n);
    for (int j = 0; j < n; ++j) {
        const cplx x = sol.x_of(sol.grid.nodes[std::size_t(j)]);
        h1(j) = H1_density(d.u(j), d.ux(j), d.uxx(j), d.uxxx(j), x, sol.domain.t);
        h0(j) = H0_density(d.u(j), d.ux(j), d.uxx(j), d.uxxx(j), x, sol.domain.t);
        tr.H1[std::size_t(j)] = h1(j);
        tr.H0[std::size_t(j)] = h0(j);
    }
    const CVector h1x = e1 * apply_op(ops.D1, h1);
    const CVector h0x = e1 * apply_op(ops.D1, h0);
    tr.r1.resize(std::size_t(n));
    tr.r0.resize(std::size_t(n));
    const auto [a, b] = interior_two_thirds(sol.grid);
    for (int j = 0; j < n; ++j) {
        tr.r1[std::size_t(j)] = h1x(j) - d.u(j);
        tr.r0[std::size_t(j)] = h0x(j) - 1.5 * d.u(j) * d.u(j);
        if (j >= a && j <= b) {
            tr.r1_interior_norm = std::max(tr.r1_interior_norm, std::abs(tr.r1[std::size_t(j)]));
            tr.r0_interior_norm = std::max(tr.r0_interior_norm, std::abs(tr.r0[std::size_t(j)]));
        }
    }
    return tr;
}

double lax_residual(const LineSolution& sol, const std::vector<cplx>& lambda_samples) {
    const auto ops = spectral::build_diff_ops(sol.grid);
    const cplx e1 = std::polar(1.0, -sol.domain.phi);
    const Derivs d = spectral_derivatives(sol);
    const int n = int(sol.u.size());
    const auto [ia, ib] = interior_two_thirds(sol.grid);

    double worst = 0.0;
    for (const cplx lambda : lambda_samples) {
        CVector f_diag(n), f_plus(n), f_minus(n);
        for (int j = 0; j < n; ++j) {
            const cplx x = sol.x_of(sol.grid.nodes[std::size_t(j)]);
            f_diag(j) = A_diag(d.u(j), d.ux(j), d.uxxx(j), lambda);
            f_plus(j) = A_plus(d.u(j), d.uxx(j), sol.domain.t, lambda);
            f_minus(j) = A_minus(d.u(j), d.ux(j), d.uxx(j), x, sol.domain.t, lambda);
        }
        const CVector fdx = e1 * apply_op(ops.D1, f_diag);
        const CVector fpx = e1 * apply_op(ops.D1, f_plus);
        const CVector fmx = e1 * apply_op(ops.D1, f_minus);
        for (int j = ia; j <= ib; ++j) {
            const cplx x = sol.x_of(sol.grid.nodes[std::size_t(j)]);
            const Mat2 A = lax_A(d.u(j), d.ux(j), d.uxx(j), d.uxxx(j), x, sol.domain.t, lambda);
            const Mat2 B = lax_B(d.u(j), lambda);
            const Mat2 Ax{fdx(j), fpx(j), fmx(j), -fdx(j)};
            const Mat2 Bl{0.0, 0.0, 1.0, 0.0};
            const Mat2 M = Ax - Bl + (A * B - B * A);
            worst = std::max(worst, M.max_abs());
        }
    }
    return worst;
}

double lax_identity_residual(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t, cplx lambda) {
    const cplx uxxxx = -(10.0 * ux * ux + 20.0 * u * uxx + 40.0 * (u * u * u - 6.0 * t * u + 6.0 * x));
    const cplx dd = (-uxx * lambda - 3.0 * ux * ux - 3.0 * u * uxx - uxxxx / 4.0) / 60.0;
    const cplx dp = (ux * lambda + 3.0 * u * ux + uxxx / 4.0) / 30.0;
    const cplx dm = (-ux * lambda * lambda - (u * ux + uxxx / 4.0) * lambda + 6.0 * u * u * ux -
                     ux * uxx / 2.0 + (ux * uxx + u * uxxx) / 2.0 + 30.0) /
                    30.0;
    const Mat2 Ax{dd, dp, dm, -dd};
    const Mat2 A = lax_A(u, ux, uxx, uxxx, x, t, lambda);
    const Mat2 B = lax_B(u, lambda);
    const Mat2 Bl{0.0, 0.0, 1.0, 0.0};
    const Mat2 M = Ax - Bl + (A * B - B * A);
    return M.max_abs();
}

double kdv_residual(double t_center, double delta_t, const bvp::LineDomain& line_template,
                    const bvp::SolverOptions& opts) {
    auto solve_at = [&](double t) {
        bvp::LineDomain d = line_template;
        d.t = t;
        return bvp::solve_line(d, opts);
    };
    const LineSolution minus = solve_at(t_center - delta_t);
    const LineSolution center = solve_at(t_center);
    const LineSolution plus = solve_at(t_center + delta_t);

    const auto ops = spectral::build_diff_ops(center.grid);
    const cplx e1 = std::polar(1.0, -center.domain.phi);
    const CVector ux = e1 * apply_op(ops.D1, center.u);
    const CVector uxxx = e1 * e1 * e1 * apply_op(ops.D3, center.u);
    const CVector ut = (plus.u - minus.u) / (2.0 * delta_t);

    const auto [a, b] = interior_two_thirds(center.grid);
    double worst = 0.0;
    for (int j = a; j <= b; ++j)
        worst = std::max(worst, std::abs(ut(j) + center.u(j) * ux(j) + uxxx(j) / 12.0));
    return worst;
}

namespace {

// Superasymptotic evaluation of the t = 0 series on the arg x = 3 pi sheet:
// sum until the first term below `threshold` or until the minimal term.
cplx series_minimal_truncated(const std::vector<cplx>& a, const BranchedPoint& x,
                              double threshold) {
    // pre-scan for the stopping index: first term below threshold, otherwise
    // the global minimal term (superasymptotic truncation)
    double min_term = std::numeric_limits<double>::infinity();
    int stop = -1, min_index = -1;
    double coeff_scale = 0.0;
    for (int n = 0; n < int(a.size()); ++n) {
        const double mag = std::abs(a[std::size_t(n)]);
        coeff_scale = std::max(coeff_scale, mag);
        if (mag <= 1e-12 * coeff_scale) continue;
        const double term = mag * std::pow(x.modulus, -(n - 1) / 3.0);
        if (term < threshold) {
            stop = n;
            break;
        }
        if (term < min_term) {
            min_term = term;
            min_index = n;
        }
    }
    if (stop < 0) stop = min_index;
    cplx acc = 0.0;
    coeff_scale = 0.0;
    for (int n = 0; n <= stop; ++n) {
        const double mag = std::abs(a[std::size_t(n)]);
        coeff_scale = std::max(coeff_scale, mag);
        if (mag <= 1e-12 * coeff_scale) continue;
        acc += a[std::size_t(n)] * x.pow(-(n - 1) / 3.0);
    }
    return acc;
}

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinFit linear_fit(const std::vector<std::pair<double, double>>& pts) {
    const double n = double(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    LinFit f;
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (auto [x, y] : pts) {
        const double e = y - (f.slope * x + f.intercept);
        ss_res += e * e;
    }
    f.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 0.0;
    return f;
}

}  // namespace

DecayFit stokes_difference_from_solution(const LineSolution& sol, double window_lo,
                                         double window_hi) {
    const auto coeffs = series::coefficients(sol.domain.t, series::kDefaultTruncationCap);
    const double thr = sol.domain.threshold;

    const int nsamp = 4096;
    std::vector<double> xs(nsamp), dvals(nsamp), svals(nsamp);
    double dmax = 0.0;
    for (int i = 0; i < nsamp; ++i) {
        const double r = window_lo + (window_hi - window_lo) * double(i) / (nsamp - 1);
        xs[std::size_t(i)] = r;
        const BranchedPoint bp(r, 3.0 * M_PI);
        const cplx S = series_minimal_truncated(coeffs, bp, thr);
        const cplx un = sol.at(-r);  // xi = -r on the real-line domain
        const cplx d = un - S;
        dvals[std::size_t(i)] = std::abs(d);
        svals[std::size_t(i)] = std::real(d);
        dmax = std::max(dmax, std::abs(d));
    }
    if (dmax < std::max(10.0 * thr, 1e-12))
        throw SignalBelowNoiseFloor("stokes_difference: |U0 - S| below the truncation floor");

    DecayFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;

    // local maxima of |d| with parabolic refinement; regress the power-
    // corrected log envelope against s = |x|^{7/6}
    std::vector<std::pair<double, double>> env;
    for (int i = 1; i + 1 < nsamp; ++i) {
        if (dvals[std::size_t(i)] >= dvals[std::size_t(i) - 1] &&
            dvals[std::size_t(i)] >= dvals[std::size_t(i) + 1] &&
            dvals[std::size_t(i)] > 1e-13) {
            const double y0 = std::log(dvals[std::size_t(i) - 1]);
            const double y1 = std::log(dvals[std::size_t(i)]);
            const double y2 = std::log(dvals[std::size_t(i) + 1]);
            const double denom = y0 - 2.0 * y1 + y2;
            double shift = 0.0;
            if (denom < 0.0) shift = 0.5 * (y0 - y2) / denom;
            shift = std::clamp(shift, -0.5, 0.5);
            const double r = xs[std::size_t(i)] + shift * (xs[1] - xs[0]);
            const double ypk = y1 - 0.5 * denom * shift * shift;
            const double s = std::pow(r, 7.0 / 6.0);
            env.emplace_back(s, ypk + 0.25 * std::log(r));
            fit.samples.emplace_back(s, ypk);
        }
    }
    if (env.size() < 4)
        throw SignalBelowNoiseFloor("stokes_difference: too few envelope maxima in the window");
    const LinFit lf = linear_fit(env);
    fit.rate = -lf.slope;
    fit.r_squared = lf.r2;
    fit.n_samples = int(env.size());

    // period from zero crossings of the (real) difference
    std::vector<double> zeros;
    for (int i = 0; i + 1 < nsamp; ++i) {
        const double f0 = svals[std::size_t(i)], f1 = svals[std::size_t(i) + 1];
        if (f0 == 0.0 || f0 * f1 >= 0.0) continue;
        const double r = xs[std::size_t(i)] + (xs[std::size_t(i) + 1] - xs[std::size_t(i)]) * f0 / (f0 - f1);
        zeros.push_back(std::pow(r, 7.0 / 6.0));
    }
    if (zeros.size() >= 3) {
        double mean = 0.0;
        for (std::size_t i = 1; i < zeros.size(); ++i) mean += zeros[i] - zeros[i - 1];
        mean /= double(zeros.size() - 1);
        fit.period = 2.0 * mean;
    }
    return fit;
}

DecayFit stokes_difference(const StokesDifferenceOptions& opts) {
    bvp::LineDomain d;
    d.phi = 0.0;
    d.b = 0.0;
    d.xi_l = -opts.xi_end;
    d.xi_r = opts.xi_end;
    d.t = 0.0;
    d.Nc = opts.Nc;
    d.arg_left = 3.0 * M_PI;
    d.arg_right = 0.0;
    d.threshold = opts.boundary_threshold;
    bvp::SolverOptions so;
    so.tol = opts.solver_tol;
    const LineSolution sol = bvp::solve_line(d, so);
    return stokes_difference_from_solution(sol, opts.window_lo, opts.window_hi);
}

namespace {

// local cubic Lagrange interpolation on a uniform axis
cplx interp_axis(const std::vector<double>& axis, const std::vector<cplx>& vals, double q) {
    const int n = int(axis.size());
    if (n == 1) return vals[0];
    int i1 = int(std::lower_bound(axis.begin(), axis.end(), q) - axis.begin());
    i1 = std::clamp(i1, 1, n - 1);
    int i0 = std::clamp(i1 - 2, 0, n - 4 < 0 ? 0 : n - 4);
    const int m = std::min(4, n);
    cplx acc = 0.0;
    for (int a = 0; a < m; ++a) {
        double w = 1.0;
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            w *= (q - axis[std::size_t(i0 + b)]) / (axis[std::size_t(i0 + a)] - axis[std::size_t(i0 + b)]);
        }
        acc += w * vals[std::size_t(i0 + a)];
    }
    return acc;
}

void run_pool(int n_tasks, int workers, const std::function<void(int)>& task) {
    std::atomic<int> next{0};
    auto body = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks) return;
            task(i);
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::max(1, std::min(workers, n_tasks));
    pool.reserve(std::size_t(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
}

}  // namespace

SectorField sector_field(const SectorFieldOptions& opts) {
    if (opts.n_rays < 3) throw InvalidArgument("sector_field: need at least 3 rays");
    // coarse guard at t = 0: the requested angles must sit inside the family's
    // regular sector
    if (opts.t == cplx(0.0)) {
        bool ok = false;
        for (const auto& w : model_curve::regular_sector_t0(opts.family, opts.m))
            if (opts.theta_lo >= w.lo && opts.theta_hi <= w.hi) ok = true;
        if (!ok)
            throw InvalidArgument("sector_field: theta range is not inside the regular sector");
    }

    // ray bundle
    std::vector<double> ray_theta(std::size_t(opts.n_rays));
    for (int k = 0; k < opts.n_rays; ++k)
        ray_theta[std::size_t(k)] =
            opts.theta_lo + (opts.theta_hi - opts.theta_lo) * double(k) / (opts.n_rays - 1);
    std::vector<LineSolution> rays(std::size_t(opts.n_rays));
    std::vector<std::string> failures(std::size_t(opts.n_rays));
    run_pool(opts.n_rays, opts.workers, [&](int k) {
        bvp::LineDomain d;
        d.phi = ray_theta[std::size_t(k)];
        d.b = 0.0;
        d.xi_l = opts.r_lo;
        d.xi_r = opts.r_hi;
        d.t = opts.t;
        d.Nc = opts.ray_Nc;
        d.arg_left = ray_theta[std::size_t(k)];
        d.arg_right = ray_theta[std::size_t(k)];
        d.threshold = opts.threshold;
        try {
            rays[std::size_t(k)] = bvp::solve_line(d);
        } catch (const std::exception& e) {
            failures[std::size_t(k)] = e.what();
        }
    });
    for (int k = 0; k < opts.n_rays; ++k)
        if (!failures[std::size_t(k)].empty())
            throw Error("sector_field: ray " + std::to_string(k) + " failed: " + failures[std::size_t(k)]);

    SectorField f;
    f.method = opts.method;
    f.r.resize(std::size_t(opts.nr));
    f.theta.resize(std::size_t(opts.ntheta));
    for (int i = 0; i < opts.nr; ++i)
        f.r[std::size_t(i)] = opts.r_lo + (opts.r_hi - opts.r_lo) * double(i) / (opts.nr - 1);
    for (int j = 0; j < opts.ntheta; ++j)
        f.theta[std::size_t(j)] =
            opts.theta_lo + (opts.theta_hi - opts.theta_lo) * double(j) / (opts.ntheta - 1);
    f.u.assign(std::size_t(opts.nr) * std::size_t(opts.ntheta), cplx(0.0));

    // radial samples of every ray at the output radii
    std::vector<std::vector<cplx>> ray_at_r(std::size_t(opts.n_rays),
                                            std::vector<cplx>(std::size_t(opts.nr)));
    for (int k = 0; k < opts.n_rays; ++k)
        for (int i = 0; i < opts.nr; ++i)
            ray_at_r[std::size_t(k)][std::size_t(i)] = rays[std::size_t(k)].at(f.r[std::size_t(i)]);

    if (opts.method == FieldMethod::rays) {
        std::vector<cplx> along(std::size_t(opts.n_rays));
        for (int i = 0; i < opts.nr; ++i) {
            for (int k = 0; k < opts.n_rays; ++k) along[std::size_t(k)] = ray_at_r[std::size_t(k)][std::size_t(i)];
            for (int j = 0; j < opts.ntheta; ++j)
                f.u[std::size_t(i) * std::size_t(opts.ntheta) + std::size_t(j)] =
                    interp_axis(ray_theta, along, f.theta[std::size_t(j)]);
        }
        return f;
    }

    // laplace method: Dirichlet data on the four sides of the polar rectangle
    const int nr = opts.nr, nt = opts.ntheta;
    auto uref = [&](int i, int j) -> cplx& { return f.u[std::size_t(i) * std::size_t(nt) + std::size_t(j)]; };
    // side rays
    for (int i = 0; i < nr; ++i) {
        uref(i, 0) = ray_at_r.front()[std::size_t(i)];
        uref(i, nt - 1) = ray_at_r.back()[std::size_t(i)];
    }
    // outer arc from the series, inner arc from the ray bundle
    const auto coeffs = series::coefficients(opts.t, series::kDefaultTruncationCap);
    std::vector<cplx> inner(std::size_t(opts.n_rays));
    for (int k = 0; k < opts.n_rays; ++k) inner[std::size_t(k)] = ray_at_r[std::size_t(k)].front();
    for (int j = 0; j < nt; ++j) {
        const BranchedPoint outer_bp(f.r.back(), f.theta[std::size_t(j)]);
        uref(nr - 1, j) = series_minimal_truncated(coeffs, outer_bp, opts.threshold);
        uref(0, j) = interp_axis(ray_theta, inner, f.theta[std::size_t(j)]);
    }
    solve_laplace_interior(f);
    return f;
}

void solve_laplace_interior(SectorField& f) {
    const int nr = int(f.r.size()), nt = int(f.theta.size());
    if (nr < 3 || nt < 3) throw InvalidArgument("solve_laplace_interior: degenerate grid");
    auto uref = [&](int i, int j) -> cplx& { return f.u[std::size_t(i) * std::size_t(nt) + std::size_t(j)]; };
    const int ni = nr - 2, nj = nt - 2;
    const double hr = f.r[1] - f.r[0];
    const double ht = f.theta[1] - f.theta[0];
    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(std::size_t(ni) * std::size_t(nj) * 5);
    Eigen::VectorXd rhs_re = Eigen::VectorXd::Zero(ni * nj), rhs_im = Eigen::VectorXd::Zero(ni * nj);
    auto idx = [&](int i, int j) { return (i - 1) * nj + (j - 1); };
    for (int i = 1; i <= ni; ++i) {
        const double r = f.r[std::size_t(i)];
        const double cr = 1.0 / (hr * hr);
        const double cp = cr + 1.0 / (2.0 * hr * r);
        const double cm = cr - 1.0 / (2.0 * hr * r);
        const double ct = 1.0 / (ht * ht * r * r);
        const double cc = -2.0 * cr - 2.0 * ct;
        for (int j = 1; j <= nj; ++j) {
            const int row = idx(i, j);
            trips.emplace_back(row, row, cc);
            auto add = [&](int ii, int jj, double w) {
                if (ii == 0 || ii == nr - 1 || jj == 0 || jj == nt - 1) {
                    rhs_re(row) -= w * std::real(uref(ii, jj));
                    rhs_im(row) -= w * std::imag(uref(ii, jj));
                } else {
                    trips.emplace_back(row, idx(ii, jj), w);
                }
            };
            add(i + 1, j, cp);
            add(i - 1, j, cm);
            add(i, j + 1, ct);
            add(i, j - 1, ct);
        }
    }
    Eigen::SparseMatrix<double> Lap(ni * nj, ni * nj);
    Lap.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Lap);
    if (lu.info() != Eigen::Success) throw SingularSolve("sector_field: Laplace matrix singular");
    const Eigen::VectorXd sol_re = lu.solve(rhs_re);
    const Eigen::VectorXd sol_im = lu.solve(rhs_im);
    for (int i = 1; i <= ni; ++i)
        for (int j = 1; j <= nj; ++j)
            uref(i, j) = cplx(sol_re(idx(i, j)), sol_im(idx(i, j)));
}

}  // namespace pi2::analysis
