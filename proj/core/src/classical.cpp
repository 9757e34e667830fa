// classical.cpp: Classical nearest-neighbour walk

#include "qlevy/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlevy/errors.hpp"

namespace qlevy {

ClassicalWalk::ClassicalWalk(double rate) : D(rate)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) throw ParameterError("ClassicalWalk: D must be > 0");
}

double classical_characteristic(double k, double t, const ClassicalWalk& walk)
{
    if (!(t >= 0.0)) throw ParameterError("classical_characteristic: t must be >= 0");
    return std::exp(2.0 * walk.D * t * (std::cos(k) - 1.0));
}

double classical_localized_probability(double t, const ClassicalWalk& walk, const QuadratureGrid& grid)
{
    if (!(t >= 0.0)) throw ParameterError("classical_localized_probability: t must be >= 0");
    return grid.integrate([&](double k) { return classical_characteristic(k, t, walk); }) /
           (2.0 * std::numbers::pi);
}

QuadratureGrid classical_grid(double t, const ClassicalWalk& walk)
{
    // Sixteen nodes per Gaussian width, at least 16 panels.
    const double width = 1.0 / std::sqrt(2.0 * walk.D * std::max(t, 1e-12));
    const int panels = std::clamp(static_cast<int>(std::ceil(2.0 * std::numbers::pi / width)), 16, 4096);
    return QuadratureGrid::brillouin_zone(panels, 16);
}

double classical_localized_probability(double t, const ClassicalWalk& walk)
{
    return classical_localized_probability(t, walk, classical_grid(t, walk));
}

double classical_relaxation_density(double gamma, const ClassicalWalk& walk)
{
    const double top = 4.0 * walk.D;
    if (!(gamma > 0.0 && gamma < top)) throw DomainError("classical_relaxation_density: gamma outside (0, 4D)");
    return 1.0 / (std::numbers::pi * std::sqrt(top * gamma - gamma * gamma));
}

double classical_relaxation_route(double t, const ClassicalWalk& walk, int n_points)
{
    if (!(t >= 0.0)) throw ParameterError("classical_relaxation_route: t must be >= 0");
    if (n_points <= 0) n_points = 64 + static_cast<int>(std::ceil(16.0 * std::sqrt(walk.D * t)));
    // rho(gamma) dgamma = dtheta / pi under gamma = 2D (1 - cos theta).
    const double h = std::numbers::pi / n_points;
    double sum = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double theta = (i + 0.5) * h;
        const double gamma = 2.0 * walk.D * (1.0 - std::cos(theta));
        const double jacobian = 2.0 * walk.D * std::sin(theta);
        sum += classical_relaxation_density(gamma, walk) * jacobian * std::exp(-gamma * t);
    }
    return sum * h;
}

double classical_relaxation_mass(const ClassicalWalk& walk, int n_points)
{
    return classical_relaxation_route(0.0, walk, n_points);
}

bool classical_weierstrass_moment_finite(const WalkParams& params) noexcept
{
    const double b = static_cast<double>(params.b());
    return params.b() == 1 || b * b < params.A();
}

bool quantum_moment_finite(const WalkParams& params) noexcept
{
    return params.b() == 1 || static_cast<double>(params.b()) < params.A();
}

} // namespace qlevy
