#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "pi2/branched_point.hpp"

namespace pi2::model_curve {

// ---- constants of the t = 0 configuration ----

// arctan(1/sqrt(5))
double arctan_inv_sqrt5();
// half-width of the omega-type window: 3*pi/7 - (3/7) arctan(1/sqrt(5))
double alpha0();
// half-width of the omega-hat-type window: (3/7) arctan(1/sqrt(5))
double beta0();
// h_{sigma} = 5^{1/4} 3^{5/12} 2^{11/12} e^{sigma (i/2) arctan(1/sqrt5)}
cplx h_const(int sigma);
// A_{sigma} = 15^{1/8} / (32^{1/8} sqrt(pi)) e^{sigma i (pi/4 - arctan(1/sqrt5)/4)}
cplx A_const(int sigma);

// ---- model curve data ----

// Branch points of the degenerate spectral curve at (x, t) together with the
// phase integral F and its second derivative at the double points. The
// arguments of lambda_j - lambda_5 are tracked UNWRAPPED along the straight
// path from t = 0, which pins the half-integer power branches; F1/F3/Fpp1/...
// then satisfy the exact t = 0 law F(lambda_{1,3}) = (1/2) h_{-/+} (6/7) x^{7/6}
// on every sheet of x.
struct ModelCurvePoint {
    BranchedPoint x;
    cplx t;
    cplx lambda5, lambda1, lambda3;
    cplx F1, F3;      // F at lambda_1, lambda_3 (continued branch)
    cplx Fpp1, Fpp3;  // F'' at lambda_1, lambda_3
    cplx inv_sqrt_Fpp1, inv_sqrt_Fpp3;  // (F'')^{-1/2}, branch fixed at t = 0
    cplx Fm1, Fm2;    // F_{-1}, F_{-2} of the large-lambda expansion
    // unwrapped arguments used for the half powers
    double arg_d1 = 0.0, arg_d3 = 0.0;  // arg(lambda_{1,3} - lambda_5)
    double arg_l13 = 0.0;               // arg(lambda_1 - lambda_3)
};

// Continuation of lambda_5 from the t = 0 anchor -2*6^{1/3} x^{1/3} along a
// straight path in t; continuity_hint overrides the root selection.
ModelCurvePoint branch_points(const BranchedPoint& x, cplx t,
                              std::optional<cplx> continuity_hint = std::nullopt);

// F(lambda) for general lambda with the principal half-power branch (cut where
// arg(lambda - lambda_5) = pi). If lambda coincides with lambda_1 or lambda_3
// the continued branch stored in the point is returned instead.
cplx phase(const ModelCurvePoint& p, cplx lambda);

// F(lambda) with the principal branch unconditionally. Near arg x = 3 pi this
// is the branch for which the omega-hat inequalities Re F(lambda_{1,3}) <= 0
// read literally.
cplx phase_principal(const ModelCurvePoint& p, cplx lambda);

enum class Which13 { lambda1, lambda3 };

// F''(lambda_j) = (1/30)(lambda_j - lambda_k) (lambda_j - lambda_5)^{1/2} with
// the continued half-power branch.
cplx phase_second_derivative(const ModelCurvePoint& p, Which13 which);

// ---- sectors ----

enum class Family { typeI, typeII };

enum class Membership { inside, boundary, outside };

struct SectorResult {
    Membership membership = Membership::outside;
    double margin = 0.0;          // min |Re F(lambda_{1,3})| in the active window
    double window_anchor = 0.0;   // unwrapped central direction of the window used
};

// Window test against the Re F(lambda_1), Re F(lambda_3) sign conditions.
// typeII:m covers the omega_m window (both >= 0, anchored at 6 pi m/7) plus the
// omega-hat_m window (both <= 0 in the principal branch, anchored at
// 3 pi + 6 pi m/7); typeI:m covers omega-hat_m only.
SectorResult sector_membership(Family family, int m, const BranchedPoint& x, cplx t,
                               double rho0 = 1.0);

// Angular bounds of the sign windows at t = 0 (exact closed forms).
struct AngularWindow {
    double lo = 0.0, hi = 0.0;
};
AngularWindow omega_window_t0(int m);      // [6 pi m/7 - alpha0, 6 pi m/7 + alpha0]
AngularWindow omega_hat_window_t0(int m);  // [3 pi + 6 pi m/7 - beta0, ... + beta0]

// Full angular range of algebraic asymptotics at t = 0 for a tritronquee
// family member (used as a guard by the sector-field assembly).
std::vector<AngularWindow> regular_sector_t0(Family family, int m);

// rho_0(t) = rho0 * (1 + |t|^{3/2})
double rho0_of_t(cplx t, double rho0 = 1.0);

// ---- quasi-linear Stokes predictions ----

enum class StokesPairKind {
    hat_vs_u,          // uhat^{(m-3)} - u^{(m)}  ~ e^{-2F(lambda_1)}
    u_next_vs_hat,     // u^{(m+1)} - uhat^{(m-3)} ~ e^{-2F(lambda_3)}
    typeII_vs_typeI,   // U_m - V_m near the omega-hat_m window: both exponentials
};

struct StokesPrediction {
    double rate = 0.0;        // decay per unit |x|^{7/6} (log envelope slope)
    double period = 0.0;      // oscillation period in |x|^{7/6}
    cplx prefactor1, prefactor3;  // the two A-type amplitude factors
    double power = -0.25;     // algebraic prefactor exponent
};

// Decay rate / period of the exponentially small difference at direction
// arg_x. m rotates the pair by the 7th-order symmetry; |x| = xref is used for
// the weakly |x|-dependent t != 0 case (exact t = 0 values are |x|-free).
StokesPrediction stokes_prediction(cplx t, double arg_x, StokesPairKind kind, int m = 0,
                                   double xref = 10.0);

// ---- large-N coefficient asymptotics ----

struct LogPolar {
    double log_magnitude = 0.0;  // natural log; -inf when the m-sum vanishes
    double phase = 0.0;
};

// Closed-form large-N approximation of a_N(t) in log-polar form.
LogPolar coefficient_asymptotics(int N, cplx t);

}  // namespace pi2::model_curve
