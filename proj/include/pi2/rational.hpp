#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "pi2/errors.hpp"

namespace pi2 {

// Exact rational arithmetic on 64-bit terms with overflow detection. Only the
// exact coefficient mode needs this (polynomials in t through c_14), so the
// magnitudes stay far below the overflow guard in practice.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw InvalidArgument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw Error("Rational: overflow");
        return r;
    }
    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw Error("Rational: overflow");
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        std::int64_t g = std::gcd(a.den, b.den);
        std::int64_t da = a.den / g;
        std::int64_t db = b.den / g;
        Rational r;
        r.num = checked_add(checked_mul(a.num, db), checked_mul(b.num, da));
        r.den = checked_mul(checked_mul(da, g), db);
        r.normalize();
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.num, b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
        std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
        Rational r;
        r.num = checked_mul(a.num / g1, b.num / g2);
        r.den = checked_mul(a.den / g2, b.den / g1);
        r.normalize();
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw InvalidArgument("Rational: division by zero");
        return a * Rational(b.den, b.num);
    }
    Rational operator-() const { return Rational(-num, den); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    double to_double() const { return double(num) / double(den); }
};

// Polynomial in t with rational coefficients, coeffs[k] multiplies t^k.
struct RationalPoly {
    std::vector<Rational> coeffs;

    RationalPoly() = default;
    explicit RationalPoly(Rational c) : coeffs{c} {}

    static RationalPoly t_power(int k, Rational c) {
        RationalPoly p;
        p.coeffs.assign(k + 1, Rational(0));
        p.coeffs[k] = c;
        return p;
    }

    void trim() {
        while (!coeffs.empty() && coeffs.back().num == 0) coeffs.pop_back();
    }
    bool is_zero() const {
        for (const auto& c : coeffs)
            if (c.num != 0) return false;
        return true;
    }

    friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly r;
        r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Rational(0));
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] = a.coeffs[i];
        for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] + b.coeffs[i];
        r.trim();
        return r;
    }
    friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly nb = b;
        for (auto& c : nb.coeffs) c = -c;
        return a + nb;
    }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly r;
        if (a.coeffs.empty() || b.coeffs.empty()) return r;
        r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
            if (a.coeffs[i].num == 0) continue;
            for (std::size_t j = 0; j < b.coeffs.size(); ++j)
                r.coeffs[i + j] = r.coeffs[i + j] + a.coeffs[i] * b.coeffs[j];
        }
        r.trim();
        return r;
    }
    friend RationalPoly operator*(Rational c, const RationalPoly& p) {
        RationalPoly r = p;
        for (auto& x : r.coeffs) x = c * x;
        r.trim();
        return r;
    }

    std::complex<double> eval(std::complex<double> t) const {
        std::complex<double> acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = acc * t + it->to_double();
        return acc;
    }

    friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
        RationalPoly d = a - b;
        return d.is_zero();
    }
};

}  // namespace pi2
