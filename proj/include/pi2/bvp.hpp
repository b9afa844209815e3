#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "pi2/series.hpp"
#include "pi2/spectral.hpp"

namespace pi2::bvp {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// A complex line x = e^{i phi} xi + b, xi in [xi_l, xi_r], with the unwrapped
// branch arguments the series evaluation uses at the two endpoints.
struct LineDomain {
    double phi = 0.0;
    cplx b = 0.0;
    double xi_l = -12.0, xi_r = 12.0;
    cplx t = 0.0;
    int Nc = 512;
    double arg_left = 3.0 * M_PI;
    double arg_right = 0.0;
    double threshold = 1e-6;  // series truncation threshold at the endpoints
    int truncation_cap = series::kDefaultTruncationCap;

    cplx x_of(double xi) const { return std::polar(1.0, phi) * xi + b; }
};

enum class InitialIterate { smooth, linear };

struct SolverOptions {
    double tol = 1e-8;          // interior residual inf-norm
    int max_iter = 100;
    double lambda_min = 1e-5;   // floor step of the line search
    double step_tol = 1e-14;    // step inf-norm convergence
    InitialIterate initial = InitialIterate::smooth;  // falls back to linear when invalid
    // stagnation handling: when the residual stops improving, return the best
    // iterate if it is at least this good instead of throwing NoConvergence
    // (continuation drivers raise it to ride through folds)
    double stall_return_level = 1e-4;
    // restrict the iteration to the invariant real subspace (real t, real-line
    // domains with real boundary data); keeps folds from shedding the iterate
    // onto complex branches
    bool project_real = false;
};

// Grid, operators and series boundary data for one line, built once per solve.
struct LineAssembly {
    LineDomain domain;
    spectral::ChebGrid grid;
    spectral::DiffOps ops;
    CVector x;  // x(xi_j)
    cplx S_left, dS_left, S_right, dS_right;  // series value and d/dx at the ends
    series::TruncationReport trunc_left, trunc_right;
};

LineAssembly assemble(const LineDomain& domain);

struct LineSolution {
    LineDomain domain;
    spectral::ChebGrid grid;
    CVector u;
    double residual_norm = 0.0;  // interior inf-norm at convergence
    int iterations = 0;
    int line_search_failures = 0;
    series::TruncationReport trunc_left, trunc_right;
    std::string warnings;

    cplx at(double xi) const { return spectral::interpolate(grid, u, xi); }
    cplx x_of(double xi) const { return domain.x_of(xi); }
};

// Collocation residual of the P_I^2 equation along the line: interior rows
// j = 2..Nc-2 carry
//   e^{-4 i phi} (D4 u)_j + 10 e^{-2 i phi} (D1 u)_j^2
//   + 20 e^{-2 i phi} u_j (D2 u)_j + 40 (u_j^3 - 6 t u_j + 6 x_j);
// rows {0, 1, Nc-1, Nc} carry the tau boundary conditions u - S and
// D1 u - e^{i phi} S'.
CVector residual(const LineAssembly& la, const CVector& u);
CVector residual(const LineDomain& domain, const CVector& u);

// Analytic Jacobian of the residual in u.
CMatrix jacobian(const LineAssembly& la, const CVector& u);
CMatrix jacobian(const LineDomain& domain, const CVector& u);

// Starting guess: smooth mode is -6^{1/3} x/(1+x^2)^{1/3} with the cube root
// branch matched to the endpoint arguments, linear mode interpolates the two
// boundary values. Smooth mode degrades to linear when 1 + x^2 vanishes on a
// node or the branch cannot be reconciled; *warnings is appended when given.
CVector initial_iterate(const LineAssembly& la, InitialIterate mode,
                        std::string* warnings = nullptr);

// Starting guess for strongly oscillatory cases: march the ODE as an initial
// value problem from the right endpoint (series data for u..u''') across the
// line with a fixed-step RK4. Pole-free lines only; the growing-mode
// contamination picked up in the smooth tails is Newton's job to remove.
CVector march_iterate(const LineAssembly& la, double step = 5e-3);

double interior_inf_norm(const LineAssembly& la, const CVector& r);

LineSolution newton_armijo(const LineAssembly& la, const CVector& u0, const SolverOptions& opts);

// auto_truncate at both ends, grid and operator construction, initial iterate,
// damped Newton.
LineSolution solve_line(const LineDomain& domain, const SolverOptions& opts = {});

}  // namespace pi2::bvp
