#pragma once

#include <cmath>
#include <complex>

#include "pi2/errors.hpp"

namespace pi2 {

using cplx = std::complex<double>;

// A nonzero complex point carrying an UNWRAPPED argument. The argument is part
// of the identity of the point: (r, th) and (r, th + 2*pi) denote the same
// location but different sheets of x^{1/3}, x^{1/6}, ... All fractional powers
// used in this project go through this type so that no implicit principal
// branch sneaks in.
struct BranchedPoint {
    double modulus = 1.0;
    double argument = 0.0;

    BranchedPoint() = default;
    BranchedPoint(double mod, double arg) : modulus(mod), argument(arg) {
        if (!(mod > 0.0)) throw InvalidArgument("BranchedPoint: modulus must be positive");
    }

    cplx value() const { return std::polar(modulus, argument); }

    // modulus^p * e^{i p argument}, p real (fractional powers are unwrapped).
    cplx pow(double p) const {
        return std::polar(std::pow(modulus, p), p * argument);
    }

    cplx cbrt() const { return pow(1.0 / 3.0); }

    BranchedPoint rotated(double dtheta) const {
        return BranchedPoint(modulus, argument + dtheta);
    }
    BranchedPoint scaled(double factor) const {
        return BranchedPoint(modulus * factor, argument);
    }
};

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

// Unwrapped argument of z that is nearest to the reference angle.
inline double arg_near(cplx z, double ref) {
    return ref + wrap_angle(std::arg(z) - ref);
}

}  // namespace pi2
