// bath.hpp: Thermal bath constants and the dimensionless rates built from them

#pragma once

#include "qlevy/weierstrass.hpp"

namespace qlevy {

// Dissipation data entering the master equation. Only the combinations
// D = pi*alpha/(2*beta*hbar) and omega_c survive the microscopic derivation.
struct BathParams {
    double alpha = 0.0;   // dissipative constant
    double beta = 1.0;    // inverse temperature
    double hbar = 1.0;
    double omega_c = 0.0; // Caldeira-Leggett cutoff

    // Validates alpha >= 0, beta > 0, hbar > 0, omega_c >= 0.
    static BathParams physical(double alpha, double beta, double hbar, double omega_c);

    // hbar = 1 and time measured in units of 1/D (D = 1); omega_c = r_c.
    static BathParams unit_diffusion(double r_c);

    double diffusion() const noexcept;
    bool unitary() const noexcept { return alpha == 0.0; }

    // (Omega/hbar)/D, omega_c/D and hbar*omega_c/Omega. r and r_c need D > 0.
    double r(const WalkParams& walk) const;
    double r_c() const;
    double r_e(const WalkParams& walk) const noexcept;
};

// The pair used by every figure: WalkParams{A, b, Omega = r} and a bath with
// D = 1, hbar = 1, omega_c = r_c.
struct DimensionlessModel {
    WalkParams walk;
    BathParams bath;
};

DimensionlessModel dimensionless_model(double A, int b, double r, double r_c);

} // namespace qlevy
