#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pi2/errors.hpp"
#include "pi2/series.hpp"

using namespace pi2;
using namespace pi2::series;

namespace {
const double kA0 = -std::cbrt(6.0);
}

TEST_CASE("a1 vanishes for generic t") {
    for (cplx t : {cplx(0.0), cplx(1.0), cplx(-2.0, 0.5), cplx(0.0, 1.0)}) {
        auto a = coefficients(t, 3);
        CHECK(std::abs(a[1]) == 0.0);
    }
}

TEST_CASE("a2 = c1/a0 = 2t/a0") {
    auto a = coefficients(1.0, 2);
    CHECK(std::abs(a[2] - 2.0 / kA0) < 1e-15);
}

TEST_CASE("a7(0) = 1/36") {
    auto a = coefficients(0.0, 7);
    CHECK(std::abs(a[7] - 1.0 / 36.0) < 1e-16);
}

TEST_CASE("t=0 recurrence: b0, b1 and the b2 triple cross-check") {
    auto b = coefficients_t0(2);
    CHECK(b[0] == doctest::Approx(kA0).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
    // b2 must match a_14(0) and the closed form c13(0) a0^{-13} = -21 a0^{-13}
    auto a = coefficients(0.0, 14);
    CHECK(b[2] == doctest::Approx(a[14].real()).epsilon(1e-13));
    CHECK(b[2] == doctest::Approx(-21.0 * std::pow(kA0, -13.0)).epsilon(1e-13));
}

TEST_CASE("recurrence consistency a_{7n}(0) = b_n up to n = 30") {
    auto b = coefficients_t0(30);
    auto a = coefficients(0.0, 210);
    for (int n = 0; n <= 30; ++n) {
        const double an = a[std::size_t(7 * n)].real();
        if (n <= 10) {
            CHECK(std::abs(an - b[std::size_t(n)]) <= 1e-10 * std::abs(b[std::size_t(n)]));
        } else {
            // log-magnitude comparison for the large entries
            CHECK(std::log(std::abs(an)) ==
                  doctest::Approx(std::log(std::abs(b[std::size_t(n)]))).epsilon(1e-10));
        }
    }
}

TEST_CASE("sparsity at t=0: a_k = 0 exactly unless 7 | k, k <= 210") {
    auto a = coefficients(0.0, 210);
    for (int k = 0; k <= 210; ++k) {
        if (k % 7 != 0) CHECK(std::abs(a[std::size_t(k)]) == 0.0);
    }
}

TEST_CASE("scaled-arithmetic log coefficients agree with the double recurrence") {
    auto b = coefficients_t0(40);
    auto lb = coefficients_t0_log(40);
    for (int n = 0; n <= 40; ++n) {
        if (b[std::size_t(n)] == 0.0) {
            CHECK(lb[std::size_t(n)].sign == 0);
            continue;
        }
        CHECK(lb[std::size_t(n)].sign == (b[std::size_t(n)] > 0 ? 1 : -1));
        CHECK(lb[std::size_t(n)].log_abs ==
              doctest::Approx(std::log(std::abs(b[std::size_t(n)]))).epsilon(1e-12));
    }
}

TEST_CASE("cn table residuals below 1e-10 for the spec sample of t") {
    for (cplx t : {cplx(0.0), cplx(1.0), cplx(-1.0), cplx(2.0), cplx(-2.0), cplx(0.0, 1.0)}) {
        auto res = cn_table_check(t);
        REQUIRE(res.size() == 14);
        for (double r : res) CHECK(r < 1e-10);
    }
}

TEST_CASE("cn table: exact polynomial identity against the closed forms") {
    auto ahat = coefficients_exact(15);
    auto c = cn_closed_forms();
    for (int n = 1; n <= 14; ++n) CHECK(ahat[std::size_t(n) + 1] == c[std::size_t(n)]);
}

TEST_CASE("cn table spot values: c5 at t=-1 and c11 at t=2") {
    auto c = cn_closed_forms();
    CHECK(c[5].eval(-1.0).real() == doctest::Approx(8.0 / 3.0));
    CHECK(c[11].eval(2.0).real() == doctest::Approx(-256.0 / 9.0 * 64.0));
}

TEST_CASE("evaluate: single-term series picks the sheet of x^{1/3}") {
    SeriesExpansion s;
    s.t = 0.0;
    s.a = {cplx(kA0)};
    CHECK(std::abs(evaluate(s, BranchedPoint(1.0, 0.0), 0) - cplx(kA0)) < 1e-15);
    // arg 3pi: the cube root gains e^{i pi}
    CHECK(std::abs(evaluate(s, BranchedPoint(1.0, 3.0 * M_PI), 0) - cplx(-kA0)) < 1e-14);
}

TEST_CASE("evaluate derivative orders against analytic powers") {
    SeriesExpansion s;
    s.t = 0.0;
    s.a = {cplx(kA0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0), cplx(1.0 / 36.0)};
    const BranchedPoint x(2.5, 0.4);
    // analytic: kA0 x^{1/3} + (1/36) x^{-2}
    for (int k = 0; k <= 4; ++k) {
        cplx expect = 0.0;
        double f1 = 1.0, f2 = 1.0;
        for (int j = 0; j < k; ++j) {
            f1 *= (1.0 / 3.0 - j);
            f2 *= (-2.0 - j);
        }
        expect = kA0 * f1 * x.pow(1.0 / 3.0 - k) + (1.0 / 36.0) * f2 * x.pow(-2.0 - k);
        CHECK(std::abs(evaluate(s, x, k) - expect) < 1e-13 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("branch law: argument + 2pi multiplies term n by e^{-2pi i (n-1)/3}") {
    auto s = make_series(cplx(0.5, 0.2), 12);
    const BranchedPoint x(3.0, 0.7);
    const BranchedPoint xs(3.0, 0.7 + 2.0 * M_PI);
    cplx direct = evaluate(s, xs, 0);
    cplx expect = 0.0;
    for (int n = 0; n < int(s.a.size()); ++n)
        expect += s.a[std::size_t(n)] * x.pow(-(n - 1) / 3.0) *
                  std::polar(1.0, -2.0 * M_PI * (n - 1) / 3.0);
    CHECK(std::abs(direct - expect) < 1e-12);
    // argument + 6pi returns to the same sheet for every x^{-(n-1)/3}
    const BranchedPoint x6(3.0, 0.7 + 6.0 * M_PI);
    CHECK(std::abs(evaluate(s, x6, 0) - evaluate(s, x, 0)) < 1e-12);
}

TEST_CASE("series rotational symmetry (7th-order, n = 3)") {
    // evaluate(series(t~), x~) = e^{-12 pi i/7} evaluate(series(t), x) with
    // x~ = e^{6 pi i/7} x, t~ = e^{18 pi i/7} t; coefficient law
    // a_n(t~) = e^{2 pi i n/7} a_n(t).
    const cplx t(0.7, -0.3);
    const cplx tr = t * std::polar(1.0, 18.0 * M_PI / 7.0);
    auto a = coefficients(t, 20);
    auto ar = coefficients(tr, 20);
    for (int n = 0; n <= 20; ++n) {
        const cplx expect = a[std::size_t(n)] * std::polar(1.0, 2.0 * M_PI * n / 7.0);
        CHECK(std::abs(ar[std::size_t(n)] - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
    auto s = make_series(t, 20);
    auto sr = make_series(tr, 20);
    const BranchedPoint x(4.0, 0.3);
    const BranchedPoint xr(4.0, 0.3 + 6.0 * M_PI / 7.0);
    const cplx lhs = evaluate(sr, xr, 0);
    const cplx rhs = std::polar(1.0, -12.0 * M_PI / 7.0) * evaluate(s, x, 0);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("auto_truncate: t=0, |x|=10, threshold 1e-6 ends below ~20 terms") {
    auto rep = auto_truncate(0.0, BranchedPoint(10.0, 0.0), 1e-6);
    CHECK(rep.threshold_reached);
    CHECK(rep.m_selected <= 20);
    CHECK(rep.last_term_size < 1e-6);
}

TEST_CASE("auto_truncate: threshold already satisfied by the leading term") {
    const BranchedPoint x(10.0, 0.0);
    const double lead = std::abs(kA0) * std::pow(10.0, 1.0 / 3.0);
    auto rep = auto_truncate(1.0, x, 1.01 * lead);
    CHECK(rep.m_selected == 0);
}

TEST_CASE("auto_truncate: threshold unreachable at |x| = 4 carries the minimal term") {
    // superasymptotic floor ~ e^{-(6/7)|h| 4^{7/6}} ~ 4e-9
    const double habs = std::pow(5.0, 0.25) * std::pow(3.0, 5.0 / 12.0) * std::pow(2.0, 11.0 / 12.0);
    const double floor_est = std::exp(-(6.0 / 7.0) * habs * std::pow(4.0, 7.0 / 6.0));
    bool threw = false;
    try {
        auto_truncate(0.0, BranchedPoint(4.0, M_PI), 1e-12);
    } catch (const ThresholdUnreachable& e) {
        threw = true;
        CHECK(e.achievable_minimum > 1e-12);
        CHECK(e.achievable_minimum < 100.0 * floor_est);
        CHECK(e.achievable_minimum > 0.01 * floor_est);
    }
    CHECK(threw);
    // the permissive policy returns the minimal-term report instead
    auto rep = auto_truncate(0.0, BranchedPoint(4.0, M_PI), 1e-12, kDefaultTruncationCap,
                             TruncationPolicy::allow_minimal);
    CHECK_FALSE(rep.threshold_reached);
    CHECK(rep.last_term_size > 1e-12);
}

TEST_CASE("formal-solution property: ODE residual of the truncated series decays in M") {
    const cplx t = 1.0;
    const BranchedPoint x(50.0, 0.0);
    double prev = std::abs(ode_residual_of_series(t, x, 10));
    for (int M : {15, 20, 25, 30}) {
        const double cur = std::abs(ode_residual_of_series(t, x, M));
        CHECK(cur < prev);
        prev = cur;
    }
    // remainder scale C |x|^{-(M-4)/3} at M = 30
    CHECK(prev < 1e4 * std::pow(50.0, -(30.0 - 4.0) / 3.0));
}

TEST_CASE("series evaluation matches n=2 row of the c-table at t=1") {
    auto a = coefficients(1.0, 2);
    CHECK(std::abs(a[2] - 2.0 * std::pow(kA0, -1.0)) < 1e-14);
}
