#pragma once

#include <cmath>
#include <cstdint>

namespace pi2 {

// Real number stored as mantissa * 2^exp2 with |mantissa| in [0.5, 1). Survives
// the factorial-type growth of the series coefficients without overflow; used
// by the log-magnitude recurrence mode.
struct ScaledReal {
    double mant = 0.0;
    std::int64_t exp2 = 0;

    ScaledReal() = default;
    ScaledReal(double v) { set(v); }

    void set(double v) {
        if (v == 0.0) { mant = 0.0; exp2 = 0; return; }
        int e;
        mant = std::frexp(v, &e);
        exp2 = e;
    }
    void renorm() {
        if (mant == 0.0) { exp2 = 0; return; }
        int e;
        mant = std::frexp(mant, &e);
        exp2 += e;
    }

    bool is_zero() const { return mant == 0.0; }
    int sign() const { return mant > 0 ? 1 : (mant < 0 ? -1 : 0); }

    // natural log of |value|; -inf for zero
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(mant)) + double(exp2) * M_LN2;
    }

    double to_double() const { return std::ldexp(mant, int(exp2)); }

    friend ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
        ScaledReal r;
        r.mant = a.mant * b.mant;
        r.exp2 = a.exp2 + b.exp2;
        r.renorm();
        return r;
    }
    friend ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
        ScaledReal r;
        r.mant = a.mant / b.mant;
        r.exp2 = a.exp2 - b.exp2;
        r.renorm();
        return r;
    }
    friend ScaledReal operator+(const ScaledReal& a, const ScaledReal& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ScaledReal *hi = &a, *lo = &b;
        if (hi->exp2 < lo->exp2) std::swap(hi, lo);
        std::int64_t shift = hi->exp2 - lo->exp2;
        if (shift > 1080) return *hi;  // lo is below the mantissa resolution
        ScaledReal r;
        r.mant = hi->mant + std::ldexp(lo->mant, -int(shift));
        r.exp2 = hi->exp2;
        r.renorm();
        return r;
    }
    friend ScaledReal operator-(const ScaledReal& a, const ScaledReal& b) {
        ScaledReal nb = b;
        nb.mant = -nb.mant;
        return a + nb;
    }
    ScaledReal operator-() const {
        ScaledReal r = *this;
        r.mant = -r.mant;
        return r;
    }
};

}  // namespace pi2
