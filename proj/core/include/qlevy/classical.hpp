// classical.hpp: Classical nearest-neighbour random walk baseline

#pragma once

#include "qlevy/quadrature.hpp"
#include "qlevy/weierstrass.hpp"

namespace qlevy {

struct ClassicalWalk {
    double D = 1.0; // hop rate, 1/time

    explicit ClassicalWalk(double rate);
};

// lambda(k, t) = exp(2 D t (cos k - 1))
double classical_characteristic(double k, double t, const ClassicalWalk& walk);

// P0(t) = (1/2 pi) \int lambda(k, t) dk over the given grid.
double classical_localized_probability(double t, const ClassicalWalk& walk, const QuadratureGrid& grid);

// Same, on a full-zone grid sized for the Gaussian width 1/sqrt(2 D t).
double classical_localized_probability(double t, const ClassicalWalk& walk);
QuadratureGrid classical_grid(double t, const ClassicalWalk& walk);

// rho(gamma) = (1/pi) (4 gamma D - gamma^2)^(-1/2) on 0 < gamma < 4D.
double classical_relaxation_density(double gamma, const ClassicalWalk& walk);

// P0(t) = \int_0^{4D} rho(gamma) exp(-gamma t) dgamma, evaluated after
// gamma = 2D (1 - cos theta) with an n-point midpoint rule in theta.
// n_points = 0 picks a count from the spectral width of the integrand.
double classical_relaxation_route(double t, const ClassicalWalk& walk, int n_points = 0);

// \int_0^{4D} rho(gamma) dgamma by the same substitution (should be 1).
double classical_relaxation_mass(const ClassicalWalk& walk, int n_points = 256);

// Finite classical second moment per step: b^2 < A (b = 1 always finite).
bool classical_weierstrass_moment_finite(const WalkParams& params) noexcept;

// Quantum counterpart used in the comparison tables: b = 1 or b < A.
bool quantum_moment_finite(const WalkParams& params) noexcept;

} // namespace qlevy
