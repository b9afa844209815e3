#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pi2/errors.hpp"
#include "pi2/spectral.hpp"

using namespace pi2;
using namespace pi2::spectral;

TEST_CASE("grid: Nc=2 on [-1,1] gives {-1, 0, 1}") {
    const auto g = build_grid(2, -1.0, 1.0);
    CHECK(g.nodes[0] == doctest::Approx(-1.0));
    CHECK(g.nodes[1] == doctest::Approx(0.0));
    CHECK(g.nodes[2] == doctest::Approx(1.0));
}

TEST_CASE("grid: symmetry midpoint and monotonicity") {
    const auto g = build_grid(8, 0.0, 2.0);
    CHECK(g.nodes[4] == doctest::Approx(1.0));
    for (int j = 0; j < 8; ++j) CHECK(g.nodes[std::size_t(j)] < g.nodes[std::size_t(j) + 1]);
}

TEST_CASE("grid: endpoint clustering at Nc=512 on [-10,10]") {
    const auto g = build_grid(512, -10.0, 10.0);
    const double want = 20.0 * (1.0 - std::cos(M_PI / 512.0)) / 2.0;
    CHECK(g.nodes[1] - g.nodes[0] == doctest::Approx(want).epsilon(1e-10));
    CHECK(want == doctest::Approx(1.88e-4).epsilon(2e-3));
}

TEST_CASE("grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(1, -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(build_grid(16, 2.0, -1.0), InvalidArgument);
}

TEST_CASE("null vector: D_k applied to constants is zero") {
    const auto g = build_grid(48, -3.0, 5.0);
    const auto ops = build_diff_ops(g);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.size());
    for (const auto* D : {&ops.D1, &ops.D2, &ops.D3, &ops.D4})
        CHECK((*D * ones).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("D1 on xi gives the ones vector within conditioning") {
    const auto g = build_grid(64, -2.0, 2.0);
    const auto ops = build_diff_ops(g);
    Eigen::VectorXd xi(g.size());
    for (int j = 0; j < g.size(); ++j) xi(j) = g.nodes[std::size_t(j)];
    const Eigen::VectorXd d = ops.D1 * xi;
    const double tol = 1e-10 * double(g.Nc) * double(g.Nc);
    for (int j = 0; j < g.size(); ++j) CHECK(std::abs(d(j) - 1.0) < tol);
}

TEST_CASE("low-degree exactness: D1 xi^2 = 2 xi, D4 xi^4 = 24") {
    const auto g = build_grid(32, -1.5, 2.5);
    const auto ops = build_diff_ops(g);
    Eigen::VectorXd x2(g.size()), x4(g.size());
    for (int j = 0; j < g.size(); ++j) {
        const double xi = g.nodes[std::size_t(j)];
        x2(j) = xi * xi;
        x4(j) = xi * xi * xi * xi;
    }
    const Eigen::VectorXd d1 = ops.D1 * x2;
    const Eigen::VectorXd d4 = ops.D4 * x4;
    for (int j = 0; j < g.size(); ++j) {
        CHECK(std::abs(d1(j) - 2.0 * g.nodes[std::size_t(j)]) < 1e-8);
        // the extreme rows carry the full D4 conditioning; they are tau rows
        // in every actual solve
        const double tol = (j < 2 || j > g.Nc - 2) ? 1e-5 : 1e-6;
        CHECK(std::abs(d4(j) - 24.0) < tol);
    }
}

TEST_CASE("degree exactness of D1 on monomials up to Nc") {
    const auto g = build_grid(24, -1.0, 1.0);
    const auto ops = build_diff_ops(g);
    for (int p = 1; p <= 24; ++p) {
        Eigen::VectorXd v(g.size());
        for (int j = 0; j < g.size(); ++j) v(j) = std::pow(g.nodes[std::size_t(j)], p);
        const Eigen::VectorXd d = ops.D1 * v;
        for (int j = 0; j < g.size(); ++j)
            CHECK(std::abs(d(j) - p * std::pow(g.nodes[std::size_t(j)], p - 1)) <
                  1e-10 * 24.0 * 24.0);
    }
}

TEST_CASE("spectral accuracy: D2 sin on [-1,1] at Nc=64") {
    const auto g = build_grid(64, -1.0, 1.0);
    const auto ops = build_diff_ops(g);
    Eigen::VectorXd v(g.size());
    for (int j = 0; j < g.size(); ++j) v(j) = std::sin(g.nodes[std::size_t(j)]);
    const Eigen::VectorXd d = ops.D2 * v;
    double worst = 0.0, worst_all = 0.0;
    for (int j = 0; j < g.size(); ++j) {
        const double e = std::abs(d(j) + std::sin(g.nodes[std::size_t(j)]));
        worst_all = std::max(worst_all, e);
        if (j >= 2 && j <= g.Nc - 2) worst = std::max(worst, e);
    }
    CHECK(worst < 1e-10);      // rows that carry collocation equations
    CHECK(worst_all < 1e-9);   // the two extreme (tau) rows are a bit looser
}

TEST_CASE("chain rule scaling of the affine map") {
    // d/dxi e^{xi} on [0, 4]: interval halving doubles nothing - just check
    // against the analytic derivative on a non-unit interval
    const auto g = build_grid(48, 0.0, 4.0);
    const auto ops = build_diff_ops(g);
    Eigen::VectorXd v(g.size());
    for (int j = 0; j < g.size(); ++j) v(j) = std::exp(g.nodes[std::size_t(j)]);
    const Eigen::VectorXd d = ops.D1 * v;
    for (int j = 0; j < g.size(); ++j)
        CHECK(std::abs(d(j) - v(j)) < 1e-9 * std::exp(4.0));
}

TEST_CASE("matrix powers agree with the directly formed operators") {
    const auto g = build_grid(48, -1.0, 1.0);
    const auto ops = build_diff_ops(g);
    const double eps = std::numeric_limits<double>::epsilon();
    const double n8 = std::pow(double(g.Nc), 8.0);
    const Matrix direct4 = direct_diff_matrix(g, 4);
    CHECK((ops.D4 - direct4).lpNorm<Eigen::Infinity>() < n8 * eps * 10.0);
    const Matrix direct2 = direct_diff_matrix(g, 2);
    CHECK((ops.D2 - direct2).lpNorm<Eigen::Infinity>() <
          std::pow(double(g.Nc), 4.0) * eps * 10.0);
}

TEST_CASE("grid-reversal symmetry: D1 anticommutes with reversal on symmetric intervals") {
    const auto g = build_grid(30, -2.0, 2.0);
    const auto ops = build_diff_ops(g);
    const int n = g.size();
    Matrix R = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) R(j, n - 1 - j) = 1.0;
    CHECK((R * ops.D1 * R + ops.D1).lpNorm<Eigen::Infinity>() < 1e-9 * ops.D1.lpNorm<Eigen::Infinity>());
}

TEST_CASE("barycentric interpolation: nodes exact, constants exact, e^xi mid-interval") {
    const auto g = build_grid(64, -1.0, 1.0);
    CVector vals(g.size());
    for (int j = 0; j < g.size(); ++j) vals(j) = std::exp(g.nodes[std::size_t(j)]);
    // exact at a node
    CHECK(std::abs(interpolate(g, vals, g.nodes[17]) - vals(17)) == 0.0);
    // constants are reproduced anywhere
    CVector c = CVector::Constant(g.size(), cplx(2.5, -1.0));
    CHECK(std::abs(interpolate(g, c, 0.1234) - cplx(2.5, -1.0)) < 1e-14);
    // spectral interpolation accuracy mid-interval
    double worst = 0.0;
    for (double q : {-0.513, 0.0021, 0.377, 0.713}) {
        worst = std::max(worst, std::abs(interpolate(g, vals, q) - std::exp(q)));
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(interpolate(g, vals, 1.5), InvalidArgument);
}
