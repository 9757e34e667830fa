// angle_ladder.hpp: Double-double reduction of b^n k modulo 2*pi
//
// theta_{n+1} = b * theta_n (mod 2*pi), carried as an unevaluated sum hi + lo.
// The product b*hi is split exactly with fma, and 2*pi is represented to
// ~160 bits, so each step loses only the amplification by b of the previous
// rounding (about 2^-106 relative per step).

#pragma once

#include <cmath>

namespace qlevy::detail {

inline constexpr double two_pi_hi = 6.283185307179586232e+00;
inline constexpr double two_pi_lo = 2.449293598294706414e-16;
inline constexpr double two_pi_lo2 = -5.989539619436679332e-33;
inline constexpr double pi_hi = 3.141592653589793116e+00;
inline constexpr double pi_lo = 1.224646799147353207e-16;

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) noexcept
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble renormalize(double hi, double lo) noexcept
{
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}

// (hi + lo) mod 2*pi into (-pi, pi].
inline DoubleDouble reduce_two_pi(double hi, double lo) noexcept
{
    const double q = std::nearbyint(hi / two_pi_hi);
    DoubleDouble r{hi, lo};
    if (q != 0.0) {
        const double p = q * two_pi_hi;
        const double p_err = std::fma(q, two_pi_hi, -p);
        const DoubleDouble s = two_sum(hi, -p);
        const double tail = ((s.lo - p_err) + lo) - q * two_pi_lo - q * two_pi_lo2;
        r = renormalize(s.hi, tail);
    }
    // Fold the half-open boundary: the result must satisfy -pi < r <= pi.
    if (r.hi > pi_hi || (r.hi == pi_hi && r.lo > pi_lo)) {
        const DoubleDouble s = two_sum(r.hi, -two_pi_hi);
        r = renormalize(s.hi, (s.lo + r.lo) - two_pi_lo);
    } else if (r.hi < -pi_hi || (r.hi == -pi_hi && r.lo <= -pi_lo)) {
        const DoubleDouble s = two_sum(r.hi, two_pi_hi);
        r = renormalize(s.hi, (s.lo + r.lo) + two_pi_lo);
    }
    return r;
}

class AngleLadder {
public:
    AngleLadder(double k, int b) noexcept : b_(static_cast<double>(b)), theta_(reduce_two_pi(k, 0.0)) {}

    void advance() noexcept
    {
        const double p = b_ * theta_.hi;
        const double p_err = std::fma(b_, theta_.hi, -p);
        theta_ = reduce_two_pi(p, p_err + b_ * theta_.lo);
    }

    double angle() const noexcept { return theta_.hi; }

    double cos() const noexcept { return std::cos(theta_.hi) - std::sin(theta_.hi) * theta_.lo; }
    double sin() const noexcept { return std::sin(theta_.hi) + std::cos(theta_.hi) * theta_.lo; }

private:
    double b_;
    DoubleDouble theta_;
};

} // namespace qlevy::detail
