#include "pi2/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pi2/errors.hpp"
#include "pi2/scaled_real.hpp"

namespace pi2::series {

namespace {

const double kA0 = -std::cbrt(6.0);

// Shared body of the full recurrence; T is cplx or a polynomial type.
// a_k = a_0^{-2} ( 2 t a_{k-2}
//                  - sum_{m=2}^{k-2} (1/3) a_0 a_m a_{k-m}
//                  - sum_{n=2}^{k-1} sum_{m=0}^{k-n} (1/3) a_n a_m a_{k-n-m}
//                  - sum_{n=0}^{k-7} (n-1)(k+n-4)/108 a_n a_{k-n-7}
//                  - (k-15)(k-12)(k-9)(k-6)/9720 a_{k-14} ),
// empty sums dropped, a_j = 0 for j < 0.
template <typename T, typename Scale>
std::vector<T> recurrence(const T& t, const T& a0, int M, const Scale& scale) {
    std::vector<T> a(std::size_t(M) + 1, T(0));
    a[0] = a0;
    auto at = [&](int j) -> T { return (j >= 0 && j <= M) ? a[std::size_t(j)] : T(0); };
    const T third = scale(1, 3);
    for (int k = 1; k <= M; ++k) {
        T s = scale(2, 1) * t * at(k - 2);
        for (int m = 2; m <= k - 2; ++m) s = s - third * a0 * at(m) * at(k - m);
        for (int n = 2; n <= k - 1; ++n)
            for (int m = 0; m <= k - n; ++m) s = s - third * at(n) * at(m) * at(k - n - m);
        for (int n = 0; n <= k - 7; ++n)
            s = s - scale(std::int64_t(n - 1) * (k + n - 4), 108) * at(n) * at(k - n - 7);
        s = s - scale(std::int64_t(k - 15) * (k - 12) * (k - 9) * (k - 6), 9720) * at(k - 14);
        a[std::size_t(k)] = s / (a0 * a0);
    }
    return a;
}

// t = 0 recurrence for b_n = a_{7n}(0):
// b_{n+1} = - sum_{m=0}^{n-1} (1/3) b_0^{-1} b_{n-m} b_{m+1}
//           - sum_{l=0}^{n-1} sum_{m=0}^{n-l} (1/3) b_0^{-2} b_{n-m-l} b_{l+1} b_m
//           - sum_{m=0}^{n} (7m-1)(7n+7m+3)/108 b_0^{-2} b_m b_{n-m}
//           - (7n-8)(7n-5)(7n-2)(7n+1)/9720 b_0^{-2} b_{n-1}
template <typename T>
std::vector<T> recurrence_t0(int M) {
    std::vector<T> b(std::size_t(M) + 1, T(0.0));
    b[0] = T(kA0);
    if (M >= 1) b[1] = T(1.0 / 36.0);
    const T inv_b0 = T(1.0) / b[0];
    const T inv_b0_sq = inv_b0 * inv_b0;
    const T third = T(1.0 / 3.0);
    for (int n = 1; n < M; ++n) {
        T s(0.0);
        for (int m = 0; m <= n - 1; ++m) s = s - third * inv_b0 * b[n - m] * b[m + 1];
        for (int l = 0; l <= n - 1; ++l)
            for (int m = 0; m <= n - l; ++m)
                s = s - third * inv_b0_sq * b[n - m - l] * b[l + 1] * b[m];
        for (int m = 0; m <= n; ++m)
            s = s - T(double(7 * m - 1) * double(7 * n + 7 * m + 3) / 108.0) * inv_b0_sq * b[m] * b[n - m];
        s = s - T(double(7 * n - 8) * double(7 * n - 5) * double(7 * n - 2) * double(7 * n + 1) / 9720.0) *
                    inv_b0_sq * b[n - 1];
        b[std::size_t(n) + 1] = s;
    }
    return b;
}

void check_overflow(const std::vector<cplx>& a) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!std::isfinite(a[k].real()) || !std::isfinite(a[k].imag()))
            throw CoefficientOverflow("series coefficient overflow at index " + std::to_string(k), int(k));
    }
}

}  // namespace

std::vector<cplx> coefficients(cplx t, int M) {
    if (M < 0) throw InvalidArgument("coefficients: M must be >= 0");
    auto scale = [](std::int64_t num, std::int64_t den) { return cplx(double(num) / double(den)); };
    auto a = recurrence<cplx>(t, cplx(kA0), M, scale);
    check_overflow(a);
    return a;
}

std::vector<double> coefficients_t0(int M) {
    if (M < 0) throw InvalidArgument("coefficients_t0: M must be >= 0");
    auto b = recurrence_t0<double>(M);
    for (std::size_t n = 0; n < b.size(); ++n)
        if (!std::isfinite(b[n]))
            throw CoefficientOverflow("t=0 coefficient overflow at index " + std::to_string(n), int(n));
    return b;
}

std::vector<LogCoeff> coefficients_t0_log(int M) {
    if (M < 0) throw InvalidArgument("coefficients_t0_log: M must be >= 0");
    auto b = recurrence_t0<ScaledReal>(M);
    std::vector<LogCoeff> out(b.size());
    for (std::size_t n = 0; n < b.size(); ++n) out[n] = {b[n].sign(), b[n].log_abs()};
    return out;
}

std::vector<RationalPoly> coefficients_exact(int M) {
    // Reduced variables ahat_n with a_n = ahat_n * a_0^{1-n}. Powers of a_0
    // collapse to rationals: a_0^3 = -6, so the two shifted terms pick up
    // a_0^6 = 36 and a_0^12 = 1296.
    if (M < 0) throw InvalidArgument("coefficients_exact: M must be >= 0");
    std::vector<RationalPoly> a(std::size_t(M) + 1);
    a[0] = RationalPoly(Rational(1));
    auto at = [&](int j) -> RationalPoly {
        return (j >= 0 && j <= M) ? a[std::size_t(j)] : RationalPoly();
    };
    const RationalPoly t_poly = RationalPoly::t_power(1, Rational(1));
    for (int k = 1; k <= M; ++k) {
        RationalPoly s = Rational(2) * (t_poly * at(k - 2));
        for (int m = 2; m <= k - 2; ++m)
            s = s - Rational(1, 3) * (at(m) * at(k - m));
        for (int n = 2; n <= k - 1; ++n)
            for (int m = 0; m <= k - n; ++m)
                s = s - Rational(1, 3) * (at(n) * at(m) * at(k - n - m));
        for (int n = 0; n <= k - 7; ++n)
            s = s - Rational(36 * std::int64_t(n - 1) * (k + n - 4), 108) * (at(n) * at(k - n - 7));
        s = s - Rational(1296 * std::int64_t(k - 15) * (k - 12) * (k - 9) * (k - 6), 9720) * at(k - 14);
        a[std::size_t(k)] = s;
    }
    return a;
}

std::vector<RationalPoly> cn_closed_forms() {
    std::vector<RationalPoly> c(15);
    c[1] = RationalPoly::t_power(1, Rational(2));
    c[5] = RationalPoly::t_power(3, Rational(-8, 3));
    c[6] = RationalPoly(Rational(1));
    c[7] = RationalPoly::t_power(4, Rational(16, 3));
    c[8] = RationalPoly::t_power(1, Rational(-10, 3));
    c[10] = RationalPoly::t_power(2, Rational(-28, 3));
    c[11] = RationalPoly::t_power(6, Rational(-256, 9));
    c[12] = RationalPoly::t_power(3, Rational(96));
    c[13] = RationalPoly::t_power(7, Rational(640, 9)) - RationalPoly(Rational(21));
    c[14] = RationalPoly::t_power(4, Rational(-1936, 9));
    return c;
}

std::vector<double> cn_table_check(cplx t) {
    auto ahat = coefficients_exact(15);
    auto c = cn_closed_forms();
    std::vector<double> residuals;
    residuals.reserve(14);
    const double a0 = kA0;
    for (int n = 1; n <= 14; ++n) {
        // a_{n+1} = ahat_{n+1} a_0^{-n}; compare against c_n a_0^{-n}.
        double pw = std::pow(a0, -n);
        cplx lhs = ahat[std::size_t(n) + 1].eval(t) * pw;
        cplx rhs = c[std::size_t(n)].eval(t) * pw;
        residuals.push_back(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    return residuals;
}

SeriesExpansion make_series(cplx t, int M, double threshold) {
    SeriesExpansion s;
    s.t = t;
    s.a = coefficients(t, M);
    s.threshold = threshold;
    return s;
}

cplx evaluate(const SeriesExpansion& s, const BranchedPoint& x, int derivative_order) {
    if (derivative_order < 0 || derivative_order > 4)
        throw InvalidArgument("evaluate: derivative order must be 0..4");
    cplx acc = 0.0;
    for (int n = 0; n < int(s.a.size()); ++n) {
        if (s.a[std::size_t(n)] == cplx(0.0)) continue;
        double q = -(n - 1) / 3.0;
        double fac = 1.0;
        for (int j = 0; j < derivative_order; ++j) fac *= (q - j);
        if (fac == 0.0) continue;  // the n = 1 constant term under d/dx
        acc += s.a[std::size_t(n)] * fac * x.pow(q - derivative_order);
    }
    return acc;
}

TruncationReport auto_truncate(cplx t, const BranchedPoint& x, double threshold, int cap,
                               TruncationPolicy policy) {
    if (!(threshold > 0.0)) throw InvalidArgument("auto_truncate: threshold must be positive");
    auto a = coefficients(t, cap);
    TruncationReport rep;
    rep.endpoint = x;
    // full scan: term magnitudes can wiggle between orders for t != 0, so the
    // divergence guard is a global minimum over the cap, not a local rise
    double min_term = std::numeric_limits<double>::infinity();
    int min_index = 0;
    double coeff_scale = 0.0;  // analytically-zero entries carry recurrence roundoff
    for (int n = 0; n <= cap; ++n) {
        double mag = std::abs(a[std::size_t(n)]);
        coeff_scale = std::max(coeff_scale, mag);
        if (mag <= 1e-12 * coeff_scale) continue;
        double term = mag * std::pow(x.modulus, -(n - 1) / 3.0);
        if (term < threshold) {
            rep.m_selected = n;
            rep.last_term_size = term;
            rep.threshold_reached = true;
            return rep;
        }
        if (term < min_term) {
            min_term = term;
            min_index = n;
        }
    }
    rep.m_selected = min_index;
    rep.last_term_size = min_term;
    rep.threshold_reached = false;
    if (policy == TruncationPolicy::require_threshold)
        throw ThresholdUnreachable("auto_truncate: threshold unreachable, achievable minimum " +
                                       std::to_string(min_term) + " at index " + std::to_string(min_index),
                                   min_term, min_index);
    return rep;
}

cplx ode_residual_of_series(cplx t, const BranchedPoint& x, int M) {
    SeriesExpansion s = make_series(t, M);
    cplx u = evaluate(s, x, 0);
    cplx u1 = evaluate(s, x, 1);
    cplx u2 = evaluate(s, x, 2);
    cplx u4 = evaluate(s, x, 4);
    return u4 + 10.0 * u1 * u1 + 20.0 * u * u2 + 40.0 * (u * u * u - 6.0 * t * u + 6.0 * x.value());
}

}  // namespace pi2::series
