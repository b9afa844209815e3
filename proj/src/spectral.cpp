#include "pi2/spectral.hpp"

#include <cmath>

#include "pi2/errors.hpp"

namespace pi2::spectral {

ChebGrid build_grid(int Nc, double xi_l, double xi_r) {
    if (Nc < 2) throw InvalidArgument("build_grid: Nc must be >= 2");
    if (!(xi_l < xi_r)) throw InvalidArgument("build_grid: invalid interval");
    ChebGrid g;
    g.Nc = Nc;
    g.xi_l = xi_l;
    g.xi_r = xi_r;
    g.nodes.resize(std::size_t(Nc) + 1);
    g.weights.resize(std::size_t(Nc) + 1);
    for (int j = 0; j <= Nc; ++j) {
        // ascending: 0.5*(1 - cos(j pi / Nc)) runs from 0 to 1
        const double c = std::cos(double(j) * M_PI / Nc);
        g.nodes[std::size_t(j)] = xi_l + (xi_r - xi_l) * 0.5 * (1.0 - c);
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == Nc) w *= 0.5;
        g.weights[std::size_t(j)] = w;
    }
    g.nodes.front() = xi_l;
    g.nodes.back() = xi_r;
    return g;
}

namespace {

// The operators are formed in extended precision: the conditioning of the 4th
// derivative (~ Nc^8 eps at the corners) otherwise eats most of the achievable
// accuracy. Application stays in double.
using LMat = std::vector<long double>;

LMat first_derivative_l(const ChebGrid& g) {
    // Node differences through the trig identity
    // cos(j pi/N) - cos(i pi/N) = 2 sin((i+j) pi/2N) sin((i-j) pi/2N),
    // which avoids the cancellation of the clustered endpoint nodes; rows of
    // the far half come from the reversal symmetry D(i,j) = -D(N-i,N-j) so the
    // sin arguments stay away from pi.
    const int n = g.size();
    const int N = g.Nc;
    const long double half = 0.5L * (static_cast<long double>(g.xi_r) - g.xi_l);
    LMat D(std::size_t(n) * std::size_t(n), 0.0L);
    auto wt = [&](int j) -> long double {
        long double w = (j % 2 == 0) ? 1.0L : -1.0L;
        if (j == 0 || j == N) w *= 0.5L;
        return w;
    };
    for (int i = 0; i <= N / 2; ++i) {
        long double diag = 0.0L;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const long double diff = 2.0L * half * sinl(0.5L * (i + j) * M_PIl / N) *
                                     sinl(0.5L * (i - j) * M_PIl / N);
            const long double v = (wt(j) / wt(i)) / diff;
            D[std::size_t(i) * std::size_t(n) + std::size_t(j)] = v;
            diag -= v;
        }
        D[std::size_t(i) * std::size_t(n) + std::size_t(i)] = diag;
    }
    for (int i = N / 2 + 1; i < n; ++i)
        for (int j = 0; j < n; ++j)
            D[std::size_t(i) * std::size_t(n) + std::size_t(j)] =
                -D[std::size_t(N - i) * std::size_t(n) + std::size_t(N - j)];
    return D;
}

LMat matmul_l(const LMat& A, const LMat& B, int n) {
    LMat C(std::size_t(n) * std::size_t(n), 0.0L);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const long double a = A[std::size_t(i) * std::size_t(n) + std::size_t(k)];
            const long double* brow = &B[std::size_t(k) * std::size_t(n)];
            long double* crow = &C[std::size_t(i) * std::size_t(n)];
            for (int j = 0; j < n; ++j) crow[j] += a * brow[j];
        }
    }
    return C;
}

void rebalance_l(LMat& D, int n) {
    for (int i = 0; i < n; ++i) {
        long double s = 0.0L;
        for (int j = 0; j < n; ++j)
            if (j != i) s += D[std::size_t(i) * std::size_t(n) + std::size_t(j)];
        D[std::size_t(i) * std::size_t(n) + std::size_t(i)] = -s;
    }
}

Matrix to_double(const LMat& D, int n) {
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = double(D[std::size_t(i) * std::size_t(n) + std::size_t(j)]);
    return M;
}

}  // namespace

DiffOps build_diff_ops(const ChebGrid& grid) {
    const int n = grid.size();
    const LMat d1 = first_derivative_l(grid);
    LMat d2 = matmul_l(d1, d1, n);
    rebalance_l(d2, n);
    LMat d3 = matmul_l(d1, d2, n);
    rebalance_l(d3, n);
    LMat d4 = matmul_l(d1, d3, n);
    rebalance_l(d4, n);
    DiffOps ops;
    ops.D1 = to_double(d1, n);
    ops.D2 = to_double(d2, n);
    ops.D3 = to_double(d3, n);
    ops.D4 = to_double(d4, n);
    return ops;
}

Matrix direct_diff_matrix(const ChebGrid& grid, int order) {
    // Welfert's recursion for collocation derivative matrices on arbitrary
    // nodes with barycentric weights.
    const int n = grid.size();
    const int N = grid.Nc;
    const double half = 0.5 * (grid.xi_r - grid.xi_l);
    Matrix Dprev = Matrix::Identity(n, n);
    Matrix D = Matrix::Zero(n, n);
    for (int k = 1; k <= order; ++k) {
        D = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            double diag = 0.0;
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double wij = grid.weights[std::size_t(j)] / grid.weights[std::size_t(i)];
                const double dx = 2.0 * half * std::sin(0.5 * (i + j) * M_PI / N) *
                                  std::sin(0.5 * (i - j) * M_PI / N);
                D(i, j) = double(k) / dx * (wij * Dprev(i, i) - Dprev(i, j));
                diag -= D(i, j);
            }
            D(i, i) = diag;
        }
        Dprev = D;
    }
    return order == 0 ? Dprev : D;
}

namespace {

template <typename Vec, typename Scalar>
Scalar bary_eval(const ChebGrid& g, const Vec& values, double xq) {
    if (xq < g.xi_l - 1e-12 * (g.xi_r - g.xi_l) || xq > g.xi_r + 1e-12 * (g.xi_r - g.xi_l))
        throw InvalidArgument("interpolate: query outside the grid interval");
    const int n = g.size();
    Scalar num = Scalar(0.0);
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
        const double dx = xq - g.nodes[std::size_t(j)];
        if (dx == 0.0) return values[j];
        const double q = g.weights[std::size_t(j)] / dx;
        num += q * values[j];
        den += q;
    }
    return num / den;
}

}  // namespace

cplx interpolate(const ChebGrid& grid, const CVector& values, double xi_query) {
    return bary_eval<CVector, cplx>(grid, values, xi_query);
}

double interpolate(const ChebGrid& grid, const std::vector<double>& values, double xi_query) {
    return bary_eval<std::vector<double>, double>(grid, values, xi_query);
}

}  // namespace pi2::spectral
