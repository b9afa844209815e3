#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pi2/branched_point.hpp"

namespace pi2::spectral {

using Matrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;

// Chebyshev extreme points mapped affinely onto [xi_l, xi_r], stored in
// ascending order with nodes[0] = xi_l and nodes[Nc] = xi_r.
struct ChebGrid {
    int Nc = 0;
    double xi_l = -1.0, xi_r = 1.0;
    std::vector<double> nodes;    // Nc+1 values
    std::vector<double> weights;  // barycentric weights for these nodes

    int size() const { return Nc + 1; }
};

ChebGrid build_grid(int Nc, double xi_l, double xi_r);

// Dense differentiation operators D1..D4 acting on node-value vectors; each
// carries the affine chain-rule factor (2/(xi_r - xi_l))^k. D1 uses the
// negative-sum trick on the diagonal; the higher orders are matrix powers of
// D1 with the diagonal re-balanced at each order.
struct DiffOps {
    Matrix D1, D2, D3, D4;
};

DiffOps build_diff_ops(const ChebGrid& grid);

// Differentiation matrix of arbitrary order formed directly by the recursive
// one-shot construction (not via matrix powers); used as a cross-check.
Matrix direct_diff_matrix(const ChebGrid& grid, int order);

// Barycentric interpolation of node values at xi_query in [xi_l, xi_r].
cplx interpolate(const ChebGrid& grid, const CVector& values, double xi_query);
double interpolate(const ChebGrid& grid, const std::vector<double>& values, double xi_query);

}  // namespace pi2::spectral
