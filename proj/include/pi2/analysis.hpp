#pragma once

#include <vector>

#include "pi2/bvp.hpp"
#include "pi2/model_curve.hpp"

namespace pi2::analysis {

using bvp::CVector;
using bvp::LineSolution;

// H_1 and H_0 along a converged line solution together with the residuals of
// the derivative identities (H_1)_x = u and (H_0)_x = (3/2) u^2.
struct HamiltonianTrace {
    std::vector<cplx> H1, H0;
    std::vector<cplx> r1, r0;     // identity residuals on the nodes
    double r1_interior_norm = 0.0;  // inf-norms over the interior two-thirds
    double r0_interior_norm = 0.0;
};

HamiltonianTrace hamiltonians(const LineSolution& sol);

// Pointwise Hamiltonian densities (used by the trace and by tests).
cplx H1_density(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t);
cplx H0_density(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t);

// Max of ||A_x - B_lambda + [A,B]|| over the interior nodes and the given
// lambda samples, entries differentiated spectrally.
double lax_residual(const LineSolution& sol, const std::vector<cplx>& lambda_samples);

// Same residual with all derivatives supplied algebraically and u_xxxx
// eliminated through the ODE; identically zero for any state. Transcription
// check of the Lax pair.
double lax_identity_residual(cplx u, cplx ux, cplx uxx, cplx uxxx, cplx x, cplx t, cplx lambda);

// || u_t + u u_x + u_xxx / 12 ||_inf over the interior two-thirds, u_t by
// central differences of three solves sharing a grid.
double kdv_residual(double t_center, double delta_t, const bvp::LineDomain& line_template,
                    const bvp::SolverOptions& opts = {});

// Envelope fit of the measured exponentially small difference.
struct DecayFit {
    std::vector<std::pair<double, double>> samples;  // (|x|^{7/6}, log|d|)
    double rate = 0.0;     // decay per unit |x|^{7/6} of the power-corrected envelope
    double period = 0.0;   // from zero-crossing spacing, in |x|^{7/6}
    double r_squared = 0.0;
    double window_lo = 0.0, window_hi = 0.0;  // in |x|
    int n_samples = 0;
};

struct StokesDifferenceOptions {
    double window_lo = 4.0, window_hi = 10.0;  // |x| window on the negative axis
    double xi_end = 14.0;                      // half-length of the solve interval
    int Nc = 640;
    double boundary_threshold = 1e-13;
    double solver_tol = 1e-10;
};

// d(x) = U_0(x) - S(x) on the negative real axis at t = 0, S the
// near-minimal-term truncated series on the arg x = 3 pi sheet; fits the decay
// rate of the oscillation envelope against |x|^{7/6} and the period from zero
// crossings.
DecayFit stokes_difference(const StokesDifferenceOptions& opts = {});
DecayFit stokes_difference_from_solution(const LineSolution& sol, double window_lo,
                                         double window_hi);

// ---- sector fields ----

enum class FieldMethod { rays, laplace };

struct SectorField {
    std::vector<double> r, theta;     // grid axes (nr and ntheta entries)
    std::vector<cplx> u;              // row-major [i_r * ntheta + j_theta]
    FieldMethod method = FieldMethod::rays;

    cplx at(int i, int j) const { return u[std::size_t(i) * theta.size() + std::size_t(j)]; }
};

struct SectorFieldOptions {
    model_curve::Family family = model_curve::Family::typeII;
    int m = 0;
    cplx t = 0.0;
    double r_lo = 5.0, r_hi = 10.0;
    double theta_lo = -1.4, theta_hi = 1.4;
    int n_rays = 16;
    int nr = 40, ntheta = 40;   // output polar grid
    int ray_Nc = 256;
    double threshold = 1e-6;
    FieldMethod method = FieldMethod::rays;
    int workers = 2;
};

SectorField sector_field(const SectorFieldOptions& opts);

// 5-point finite-difference Laplace solve on the polar grid of f; the boundary
// entries of f.u must be filled, the interior is overwritten.
void solve_laplace_interior(SectorField& f);

}  // namespace pi2::analysis
