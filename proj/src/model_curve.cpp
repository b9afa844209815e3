#include "pi2/model_curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pi2/errors.hpp"

namespace pi2::model_curve {

namespace {

const double kSqrt5 = std::sqrt(5.0);
const cplx kI(0.0, 1.0);

// Roots of lambda^3 - 24 t lambda + 48 x (Cardano + Newton polish).
std::array<cplx, 3> cubic_roots(cplx t, cplx x) {
    const cplx p = -24.0 * t;
    const cplx q = 48.0 * x;
    std::array<cplx, 3> roots;
    const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx u3 = -q / 2.0 + disc;
    if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
    if (u3 == cplx(0.0)) {
        roots = {cplx(0.0), cplx(0.0), cplx(0.0)};
    } else {
        const cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx omega = std::polar(1.0, 2.0 * M_PI / 3.0);
        for (int k = 0; k < 3; ++k) {
            cplx uk = u * std::pow(omega, k);
            roots[std::size_t(k)] = uk - p / (3.0 * uk);
        }
    }
    // Newton polish
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            cplx f = r * r * r + p * r + q;
            cplx fp = 3.0 * r * r + p;
            if (std::abs(fp) == 0.0) break;
            r -= f / fp;
        }
    }
    return roots;
}

struct WalkState {
    cplx l5, w;
    double arg_d1, arg_d3, arg_l13;
};

WalkState anchor_t0(const BranchedPoint& x) {
    WalkState s;
    const double m5 = 2.0 * std::cbrt(6.0) * std::cbrt(x.modulus);
    const double arg5 = x.argument / 3.0 + M_PI;
    s.l5 = std::polar(m5, arg5);
    s.w = s.l5;
    const double at5 = arctan_inv_sqrt5();
    s.arg_d1 = x.argument / 3.0 - at5;  // arg(-l5 (5 - i sqrt5)/4)
    s.arg_d3 = x.argument / 3.0 + at5;
    s.arg_l13 = arg5 + M_PI / 2.0;      // arg((i sqrt5 / 2) w), w = l5
    return s;
}

void update_args(WalkState& s) {
    const cplx d1 = (-5.0 * s.l5 + kI * kSqrt5 * s.w) / 4.0;
    const cplx d3 = (-5.0 * s.l5 - kI * kSqrt5 * s.w) / 4.0;
    const cplx l13 = kI * kSqrt5 / 2.0 * s.w;
    s.arg_d1 = arg_near(d1, s.arg_d1);
    s.arg_d3 = arg_near(d3, s.arg_d3);
    s.arg_l13 = arg_near(l13, s.arg_l13);
}

// Track (lambda_5, w) from the t = 0 anchor along t(s) = s t. Returns false
// when the step resolution was insufficient (caller retries with more steps);
// tolerate_thin presses on regardless so that an endpoint degeneracy can still
// be diagnosed.
bool walk(const BranchedPoint& x, cplx t, int steps, WalkState& s, bool tolerate_thin = false) {
    s = anchor_t0(x);
    const cplx xval = x.value();
    for (int k = 1; k <= steps; ++k) {
        const cplx ts = t * (double(k) / steps);
        auto roots = cubic_roots(ts, xval);
        std::sort(roots.begin(), roots.end(),
                  [&](cplx a, cplx b) { return std::abs(a - s.l5) < std::abs(b - s.l5); });
        const double moved = std::abs(roots[0] - s.l5);
        const double sep = std::abs(roots[1] - s.l5);
        if (!tolerate_thin && moved > 0.4 * sep && moved > 1e-13 * std::abs(s.l5)) return false;
        s.l5 = roots[0];
        cplx wn = std::sqrt(s.l5 * s.l5 - 48.0 * ts);
        if (std::abs(wn - s.w) > std::abs(-wn - s.w)) wn = -wn;
        if (!tolerate_thin && std::abs(wn - s.w) > 0.45 * std::abs(2.0 * wn) && std::abs(wn) > 0.0)
            return false;
        s.w = wn;
        update_args(s);
    }
    return true;
}

cplx halfpow(double mod, double arg, double expo) {
    return std::polar(std::pow(mod, expo), expo * arg);
}

// F built from |d| and an explicitly supplied (unwrapped) argument of d.
cplx F_branched(cplx l5, cplx t, double dmod, double darg) {
    return halfpow(dmod, darg, 3.5) / 105.0 + l5 * halfpow(dmod, darg, 2.5) / 30.0 +
           (l5 * l5 / 24.0 - t / 3.0) * halfpow(dmod, darg, 1.5);
}

}  // namespace

double arctan_inv_sqrt5() { return std::atan(1.0 / kSqrt5); }
double alpha0() { return 3.0 * M_PI / 7.0 - (3.0 / 7.0) * arctan_inv_sqrt5(); }
double beta0() { return (3.0 / 7.0) * arctan_inv_sqrt5(); }

cplx h_const(int sigma) {
    const double mod = std::pow(5.0, 0.25) * std::pow(3.0, 5.0 / 12.0) * std::pow(2.0, 11.0 / 12.0);
    return std::polar(mod, sigma * 0.5 * arctan_inv_sqrt5());
}

cplx A_const(int sigma) {
    const double mod = std::pow(15.0, 0.125) / (std::pow(32.0, 0.125) * std::sqrt(M_PI));
    return std::polar(mod, sigma * (M_PI / 4.0 - 0.25 * arctan_inv_sqrt5()));
}

double rho0_of_t(cplx t, double rho0) { return rho0 * (1.0 + std::pow(std::abs(t), 1.5)); }

ModelCurvePoint branch_points(const BranchedPoint& x, cplx t, std::optional<cplx> continuity_hint) {
    WalkState s;
    bool thin_path = false;
    if (t == cplx(0.0)) {
        s = anchor_t0(x);
    } else {
        bool ok = false;
        for (int steps = 64; steps <= 65536; steps *= 4) {
            if (walk(x, t, steps, s)) { ok = true; break; }
        }
        if (!ok) {
            walk(x, t, 65536, s, /*tolerate_thin=*/true);
            thin_path = true;
        }
    }
    if (continuity_hint) {
        auto roots = cubic_roots(t, x.value());
        std::sort(roots.begin(), roots.end(), [&](cplx a, cplx b) {
            return std::abs(a - *continuity_hint) < std::abs(b - *continuity_hint);
        });
        if (std::abs(roots[0] - s.l5) > 1e-9 * std::max(1.0, std::abs(roots[0]))) {
            // Re-anchor on the hinted root; no continuation path is available,
            // so the half-power arguments fall back to principal values with w
            // in the half-plane of lambda_5.
            s.l5 = roots[0];
            cplx w = std::sqrt(s.l5 * s.l5 - 48.0 * t);
            if (std::real(std::conj(s.l5) * w) < 0.0) w = -w;
            s.w = w;
            s.arg_d1 = std::arg((-5.0 * s.l5 + kI * kSqrt5 * s.w) / 4.0);
            s.arg_d3 = std::arg((-5.0 * s.l5 - kI * kSqrt5 * s.w) / 4.0);
            s.arg_l13 = std::arg(kI * kSqrt5 / 2.0 * s.w);
        }
    }

    const double l5sq = std::norm(s.l5);
    if (std::abs(s.l5 * s.l5 - 8.0 * t) < 1e-8 * l5sq || std::abs(s.l5 * s.l5 - 48.0 * t) < 1e-8 * l5sq)
        throw DegenerateCurve("branch_points: triple/quadruple branch point at this (x, t)");
    if (thin_path && !continuity_hint)
        throw BranchTrackingFailure("branch_points: continuation path passes too close to a "
                                    "branch-point coalescence");

    ModelCurvePoint p;
    p.x = x;
    p.t = t;
    p.lambda5 = s.l5;
    p.lambda1 = (-s.l5 + kI * kSqrt5 * s.w) / 4.0;
    p.lambda3 = (-s.l5 - kI * kSqrt5 * s.w) / 4.0;
    p.arg_d1 = s.arg_d1;
    p.arg_d3 = s.arg_d3;
    p.arg_l13 = s.arg_l13;

    const double d1mod = std::abs(p.lambda1 - p.lambda5);
    const double d3mod = std::abs(p.lambda3 - p.lambda5);
    p.F1 = F_branched(p.lambda5, t, d1mod, s.arg_d1);
    p.F3 = F_branched(p.lambda5, t, d3mod, s.arg_d3);

    // F''(lambda_j) = (1/30)(lambda_j - lambda_k)(lambda_j - lambda_5)^{1/2}
    const double l13mod = std::abs(p.lambda1 - p.lambda3);
    p.Fpp1 = l13mod / 30.0 * std::polar(1.0, s.arg_l13) * halfpow(d1mod, s.arg_d1, 0.5);
    p.Fpp3 = l13mod / 30.0 * std::polar(1.0, s.arg_l13 - M_PI) * halfpow(d3mod, s.arg_d3, 0.5);

    // Inverse square roots with the branch pinned to the t = 0 closed forms
    // (F''(l1))^{-1/2} = +i 2 sqrt(pi) A_- x^{-1/4},
    // (F''(l3))^{-1/2} = -i 2 sqrt(pi) A_+ x^{-1/4};
    // the unwrapped argument bookkeeping makes the anchor offsets constant.
    const double argFpp1 = s.arg_l13 + s.arg_d1 / 2.0;
    const double argFpp3 = (s.arg_l13 - M_PI) + s.arg_d3 / 2.0;
    p.inv_sqrt_Fpp1 = std::polar(1.0 / std::sqrt(std::abs(p.Fpp1)), M_PI - argFpp1 / 2.0);
    p.inv_sqrt_Fpp3 = std::polar(1.0 / std::sqrt(std::abs(p.Fpp3)), -argFpp3 / 2.0);

    p.Fm1 = s.l5 * (t * s.l5 - 6.0 * x.value()) / 16.0;
    p.Fm2 = s.l5 * s.l5 * (2.0 * t * s.l5 - 9.0 * x.value()) / 40.0;
    return p;
}

cplx phase(const ModelCurvePoint& p, cplx lambda) {
    const double scale = std::max({1.0, std::abs(p.lambda1), std::abs(p.lambda3)});
    if (std::abs(lambda - p.lambda1) < 1e-11 * scale) return p.F1;
    if (std::abs(lambda - p.lambda3) < 1e-11 * scale) return p.F3;
    return phase_principal(p, lambda);
}

cplx phase_principal(const ModelCurvePoint& p, cplx lambda) {
    const cplx d = lambda - p.lambda5;
    if (d == cplx(0.0)) return cplx(0.0);
    return F_branched(p.lambda5, p.t, std::abs(d), std::arg(d));
}

cplx phase_second_derivative(const ModelCurvePoint& p, Which13 which) {
    return which == Which13::lambda1 ? p.Fpp1 : p.Fpp3;
}

AngularWindow omega_window_t0(int m) {
    const double c = 6.0 * M_PI * m / 7.0;
    return {c - alpha0(), c + alpha0()};
}

AngularWindow omega_hat_window_t0(int m) {
    const double c = 3.0 * M_PI + 6.0 * M_PI * m / 7.0;
    return {c - beta0(), c + beta0()};
}

std::vector<AngularWindow> regular_sector_t0(Family family, int m) {
    const double c = 6.0 * M_PI * m / 7.0;
    if (family == Family::typeII) {
        // omega-hat_{m-4} + omega_m + omega-hat_{m-3} merge into one interval.
        return {{c - 3.0 * M_PI / 7.0 - beta0(), c + 3.0 * M_PI / 7.0 + beta0()},
                omega_hat_window_t0(m)};
    }
    // typeI: omega_{m+3} + omega-hat_m + omega_{m+4}
    return {{c + 15.0 * M_PI / 7.0 + beta0(), c + 33.0 * M_PI / 7.0 - beta0()}};
}

namespace {

struct WindowEval {
    double g1, g3;       // signed Re F under the window's convention
    double scale;
};

// Evaluate the sign conditions of an omega- or omega-hat-type window anchored
// at `anchor` (in the canonical frame). The principal branch makes both
// inequalities read exactly as in the definitions of the solvability domains:
// omega: Re F(l1) >= 0 and Re F(l3) >= 0; omega-hat: both <= 0.
WindowEval eval_window(const ModelCurvePoint& p, bool hat) {
    const cplx F1p = phase_principal(p, p.lambda1);
    const cplx F3p = phase_principal(p, p.lambda3);
    WindowEval e;
    e.g1 = hat ? -std::real(F1p) : std::real(F1p);
    e.g3 = hat ? -std::real(F3p) : std::real(F3p);
    e.scale = (3.0 / 7.0) * std::abs(h_const(1)) * std::pow(p.x.modulus, 7.0 / 6.0);
    return e;
}

}  // namespace

SectorResult sector_membership(Family family, int m, const BranchedPoint& x, cplx t, double rho0) {
    if (m < 0 || m > 6) throw InvalidArgument("sector_membership: m must be 0..6");
    if (!(x.modulus > rho0_of_t(t, rho0)))
        throw InvalidArgument("sector_membership: |x| must exceed rho0(t)");

    const double rot = 6.0 * M_PI * m / 7.0;
    const BranchedPoint xr = x.rotated(-rot);
    const cplx tr = t * std::polar(1.0, -18.0 * M_PI * m / 7.0);
    const ModelCurvePoint p = branch_points(xr, tr);

    struct Candidate {
        double anchor;
        bool hat;
    };
    std::vector<Candidate> cands;
    if (family == Family::typeII) cands.push_back({0.0, false});
    cands.push_back({3.0 * M_PI, true});

    SectorResult best;
    best.membership = Membership::outside;
    best.margin = 0.0;
    bool have = false;
    for (const auto& c : cands) {
        if (std::abs(xr.argument - c.anchor) > 6.0 * M_PI / 7.0) continue;  // window gate
        const WindowEval e = eval_window(p, c.hat);
        const double worst = std::min(e.g1, e.g3);
        const double tol = 1e-9 * e.scale;
        SectorResult r;
        r.window_anchor = c.anchor + rot;
        r.margin = std::min(std::abs(e.g1), std::abs(e.g3));
        if (worst > tol)
            r.membership = Membership::inside;
        else if (worst > -tol)
            r.membership = Membership::boundary;
        else
            r.membership = Membership::outside;
        if (!have || int(r.membership) < int(best.membership)) {
            best = r;
            have = true;
        }
    }
    if (!have) {
        // no window gate matched; report against the omega-hat conditions
        const WindowEval e = eval_window(p, true);
        best.margin = std::min(std::abs(e.g1), std::abs(e.g3));
        best.window_anchor = rot;
        best.membership = Membership::outside;
    }
    return best;
}

StokesPrediction stokes_prediction(cplx t, double arg_x, StokesPairKind kind, int m, double xref) {
    const double rot = 6.0 * M_PI * m / 7.0;
    const BranchedPoint xr(xref, arg_x - rot);
    const cplx tr = t * std::polar(1.0, -18.0 * M_PI * m / 7.0);
    const ModelCurvePoint p = branch_points(xr, tr);
    const double s = std::pow(xref, 7.0 / 6.0);

    const cplx im = std::pow(kI, m);
    StokesPrediction out;
    out.power = -0.25;

    auto finish = [&](cplx Fdecay, double rate_other) {
        // the difference carries e^{-2 Fdecay}; decay per unit |x|^{7/6}
        out.rate = 2.0 * std::real(Fdecay) / s;
        out.period = M_PI * s / std::abs(std::imag(Fdecay));
        const double tol = 1e-9 * (3.0 / 7.0) * std::abs(h_const(1)) * s;
        if (out.rate < -tol / s)
            throw NotExponentiallySmall("stokes_prediction: difference grows at this direction");
        if (std::abs(out.rate) < tol / s) out.rate = 0.0;
        (void)rate_other;
    };

    switch (kind) {
        case StokesPairKind::hat_vs_u:
            // uhat^{(m-3)} - u^{(m)} = (-1)^{m+1}/(2 sqrt(pi)) (F''(l1))^{-1/2} e^{-2F(l1)}
            finish(p.F1, 0.0);
            out.prefactor1 = A_const(-1) * im / kI;  // A_- i^{m-1}
            out.prefactor3 = 0.0;
            break;
        case StokesPairKind::u_next_vs_hat:
            finish(p.F3, 0.0);
            out.prefactor1 = 0.0;
            out.prefactor3 = A_const(+1) * im;  // A_+ i^m
            break;
        case StokesPairKind::typeII_vs_typeI: {
            // U_m - V_m in the omega-hat_m window: two terms e^{+2F(l_j)} in the
            // principal branch; the leading (slower) decay sets the rate.
            const cplx F1p = phase_principal(p, p.lambda1);
            const cplx F3p = phase_principal(p, p.lambda3);
            const double r1 = -2.0 * std::real(F1p) / s;
            const double r3 = -2.0 * std::real(F3p) / s;
            const cplx lead = (r1 <= r3) ? F1p : F3p;
            finish(-lead, 0.0);
            out.prefactor1 = A_const(-1) * im;        // A_- i^m
            out.prefactor3 = -A_const(+1) * im * kI;  // -A_+ i^{m+1}
            break;
        }
    }
    return out;
}

LogPolar coefficient_asymptotics(int N, cplx t) {
    if (N < 1) throw InvalidArgument("coefficient_asymptotics: N must be >= 1");
    const double at5 = arctan_inv_sqrt5();
    const double logB = 0.5 * std::log(5.0) + (17.0 / 6.0) * std::log(3.0) + (11.0 / 6.0) * std::log(2.0);
    double logpref = -std::log(2.0 * std::sqrt(7.0 * M_PI));
    logpref += (2.0 * N / 7.0 - 1.0) * std::log(N - 11.0 / 4.0);
    logpref -= (2.0 * N / 7.0 - 11.0 / 14.0);
    logpref += (-double(N) / 7.0 + 0.25) * logB;

    cplx S = 0.0;
    for (int sigma : {+1, -1}) {
        cplx msum = 0.0;
        if (t == cplx(0.0)) {
            msum = (N % 7 == 0) ? cplx(7.0) : cplx(0.0);
        } else {
            const cplx bs = double(sigma) * std::pow(5.0, 1.0 / 7.0) * std::pow(3.0, -5.0 / 14.0) *
                            std::pow(2.0, 5.0 / 14.0) * std::polar(1.0, -sigma * 9.0 / 7.0 * at5);
            for (int mm = 0; mm < 7; ++mm) {
                const cplx b_sm = bs * std::polar(1.0, -18.0 * M_PI * mm / 7.0);
                msum += std::exp(kI * (2.0 * M_PI * N * mm / 7.0) - kI * t * std::pow(double(N), 3.0 / 7.0) * b_sm);
            }
        }
        S += A_const(-sigma) * std::polar(1.0, sigma * (N / 7.0 - 0.25) * at5) * msum;
    }

    LogPolar out;
    if (S == cplx(0.0)) {
        out.log_magnitude = -std::numeric_limits<double>::infinity();
        out.phase = 0.0;
    } else {
        out.log_magnitude = logpref + std::log(std::abs(S));
        out.phase = std::arg(S);
    }
    return out;
}

}  // namespace pi2::model_curve
