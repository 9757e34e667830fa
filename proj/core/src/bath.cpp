// bath.cpp: Bath constants and dimensionless rates

#include "qlevy/bath.hpp"

#include <cmath>
#include <numbers>

#include "qlevy/errors.hpp"

namespace qlevy {

BathParams BathParams::physical(double alpha, double beta, double hbar, double omega_c)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("BathParams: alpha must be >= 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("BathParams: beta must be > 0");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParameterError("BathParams: hbar must be > 0");
    if (!(omega_c >= 0.0) || !std::isfinite(omega_c)) throw ParameterError("BathParams: omega_c must be >= 0");
    return BathParams{alpha, beta, hbar, omega_c};
}

BathParams BathParams::unit_diffusion(double r_c)
{
    // pi*alpha/(2*beta*hbar) = 1 with beta = hbar = 1.
    return physical(2.0 / std::numbers::pi, 1.0, 1.0, r_c);
}

double BathParams::diffusion() const noexcept
{
    return std::numbers::pi * alpha / (2.0 * beta * hbar);
}

double BathParams::r(const WalkParams& walk) const
{
    const double d = diffusion();
    if (!(d > 0.0)) throw DomainError("r = (Omega/hbar)/D undefined for D = 0");
    return walk.Omega() / hbar / d;
}

double BathParams::r_c() const
{
    const double d = diffusion();
    if (!(d > 0.0)) throw DomainError("r_c = omega_c/D undefined for D = 0");
    return omega_c / d;
}

double BathParams::r_e(const WalkParams& walk) const noexcept
{
    return hbar * omega_c / walk.Omega();
}

DimensionlessModel dimensionless_model(double A, int b, double r, double r_c)
{
    if (!(r > 0.0)) {
        // Omega > 0 is a WalkParams invariant; the r = 0 limit is reached
        // through KernelRates directly.
        throw ParameterError("dimensionless_model: r must be > 0");
    }
    return DimensionlessModel{WalkParams(A, b, r), BathParams::unit_diffusion(r_c)};
}

} // namespace qlevy
