#pragma once

#include <complex>
#include <vector>

#include "pi2/branched_point.hpp"
#include "pi2/rational.hpp"

namespace pi2::series {

// Truncated formal solution  u_f(x,t) = sum_n a_n(t) x^{-(n-1)/3}.
// a_0 = -6^{1/3}, a_1 = 0; for real t all a_n are real; at t = 0 only the
// indices divisible by 7 survive.
struct SeriesExpansion {
    cplx t;
    std::vector<cplx> a;   // a_0 .. a_M
    double threshold = 0.0;

    int truncation_index() const { return int(a.size()) - 1; }
};

struct TruncationReport {
    int m_selected = 0;
    double last_term_size = 0.0;
    BranchedPoint endpoint;
    bool threshold_reached = true;
};

enum class TruncationPolicy {
    require_threshold,  // throw ThresholdUnreachable if the minimal term is too big
    allow_minimal,      // stop at the minimal term (superasymptotic truncation)
};

inline constexpr int kDefaultTruncationCap = 400;

// a_0 .. a_M from the full recurrence at parameter t.
std::vector<cplx> coefficients(cplx t, int M);

// b_0 .. b_M of the t = 0 form; b_n = a_{7n}(0).
std::vector<double> coefficients_t0(int M);

// (sign, log|b_n|) pairs computed in scaled arithmetic; immune to overflow.
struct LogCoeff {
    int sign = 0;
    double log_abs = 0.0;  // natural log; -inf for a zero coefficient
};
std::vector<LogCoeff> coefficients_t0_log(int M);

// Exact polynomial-in-t form of the reduced coefficients:
// a_n(t) = chat_n(t) * a_0^{1-n}, chat_{n+1} = c_n of the closed-form table.
std::vector<RationalPoly> coefficients_exact(int M);

// |a_{n+1}(t) - c_n(t) a_0^{-n}| / max(1, |c_n(t) a_0^{-n}|) for n = 1..14,
// where c_n are the closed forms and a_{n+1} comes from the exact recurrence.
std::vector<double> cn_table_check(cplx t);

// The closed-form table c_1..c_14 as rational polynomials in t.
std::vector<RationalPoly> cn_closed_forms();

SeriesExpansion make_series(cplx t, int M, double threshold = 0.0);

// Termwise evaluation of d^k/dx^k u_f at x, k = 0..4, on the sheet selected by
// x.argument.
cplx evaluate(const SeriesExpansion& s, const BranchedPoint& x, int derivative_order);

// Smallest truncation index whose (nonzero) term magnitude at x drops below
// threshold, with a divergence guard at the minimal term and a hard cap.
TruncationReport auto_truncate(cplx t, const BranchedPoint& x, double threshold,
                               int cap = kDefaultTruncationCap,
                               TruncationPolicy policy = TruncationPolicy::require_threshold);

// Residual of the truncated series substituted into the P_I^2 equation.
cplx ode_residual_of_series(cplx t, const BranchedPoint& x, int M);

}  // namespace pi2::series
