// evolution.hpp: Closed-form density-matrix dynamics in the Fourier basis
//
// The master equation is diagonal in (k1, k2):
//
//     rho(k1, k2, t) = rho(k1, k2, 0) * exp(F(k1, k2) t),
//     F = i [nu (C1 - C2) + omega_c (T1 - T2)] - D [(C1 - C2)^2 + (S1 - S2)^2],
//
// with nu = Omega/hbar, T = C^2 + S^2 and D = pi alpha / (2 beta hbar).
// EvolutionKernel tabulates C, S on a tensor Gauss–Legendre grid sized for the
// requested time horizon and lattice window; every observable is a weighted
// sum over that grid.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qlevy/bath.hpp"
#include "qlevy/quadrature.hpp"
#include "qlevy/weierstrass.hpp"

namespace qlevy {

struct PureWannier {
    std::int64_t l0 = 0;
};

// Uniform coherent block on [0, k_c]; Theta(0) = 1 (closed interval).
struct CoherentFourier {
    double k_c = 0.0;
};

using Preparation = std::variant<PureWannier, CoherentFourier>;

// Validates 0 < k_c <= pi.
CoherentFourier coherent_fourier(double k_c);

std::complex<double> initial_kernel(const Preparation& prep, double k1, double k2);

// Interval carrying the preparation's support along each axis.
std::pair<double, double> preparation_support(const Preparation& prep);

// Lattice site around which the preparation is centred (l0, or 0).
std::int64_t reference_site(const Preparation& prep) noexcept;

// Rates entering F, all in 1/time.
struct KernelRates {
    double coherent = 0.0;  // Omega / hbar
    double cutoff = 0.0;    // omega_c
    double diffusion = 0.0; // D

    static KernelRates from(const WalkParams& walk, const BathParams& bath);
    // Time in units of 1/D: (r, r_c, 1). r = 0 is the infinite-temperature limit.
    static KernelRates dimensionless(double r, double r_c);
};

std::complex<double> f_exponent(const LacunaryPair& p1, const LacunaryPair& p2,
                                const KernelRates& rates) noexcept;

struct ResolutionRequest {
    double t_max = 0.0;
    std::int64_t l_max = 0; // largest |l - reference_site| that will be probed
    double tol = 1e-10;
    int points_per_panel = 16;
    int min_nodes = 256;  // full-zone floor, scaled with the support length
    int max_nodes = 4096;
    int fixed_nodes = 0;  // > 0 bypasses the planner
    int series_terms = 0; // > 0 overrides auto_truncation(tol)
};

struct ResolutionReport {
    int series_terms = 0;       // N implied by the tolerance
    int frequency_terms = 0;    // N_freq actually tabulated (<= series_terms)
    double highest_frequency = 1.0; // b^(N_freq - 1)
    double aliasing_bound = 0.0;    // A^-N_freq
    int nodes_per_axis = 0;
    int panels = 0;
    bool capped = false;        // planner wanted more than max_nodes
    std::string warning;
};

class EvolutionKernel {
public:
    static EvolutionKernel build(const WalkParams& walk, const BathParams& bath,
                                 const Preparation& prep, const ResolutionRequest& request = {});
    static EvolutionKernel build(const WalkParams& walk, const KernelRates& rates,
                                 const Preparation& prep, const ResolutionRequest& request = {});

    const WalkParams& walk() const noexcept { return walk_; }
    const KernelRates& rates() const noexcept { return rates_; }
    const Preparation& preparation() const noexcept { return prep_; }
    const QuadratureGrid& grid() const noexcept { return grid_; }
    const LacunaryTables& tables() const noexcept { return tables_; }
    const ResolutionReport& report() const noexcept { return report_; }
    SeriesBudget budget() const noexcept;

    std::size_t size() const noexcept { return grid_.size(); }

    // F at grid nodes (i, j).
    std::complex<double> exponent(std::size_t i, std::size_t j) const noexcept
    {
        return f_exponent({tables_.C[i], tables_.S[i]}, {tables_.C[j], tables_.S[j]}, rates_);
    }

    // rho(k_i, k_j, 0) * exp(-i (k_i - k_j) l_ref): the initial kernel with the
    // reference-site phase removed (1/2pi for a Wannier state).
    std::complex<double> centred_initial(std::size_t i, std::size_t j) const;

    // Quadrature plus frequency-truncation error estimate for a grid sum at
    // time t probing sites up to |l - l_ref| = l_max.
    double error_estimate(double t, std::int64_t l_max) const;

    // Angular bandwidth of the integrand at (t, l_max), used by the planner.
    double bandwidth(double t, std::int64_t l_max) const noexcept;

private:
    WalkParams walk_{2.0, 1};
    KernelRates rates_;
    Preparation prep_;
    QuadratureGrid grid_;
    LacunaryTables tables_;
    ResolutionReport report_;
    double derivative_bound_ = 0.0; // sum_n w_n b^n over retained terms
    double tol_ = 1e-10;
};

// F(k1, k2) off the grid, with the kernel's tabulated truncation order.
std::complex<double> f_exponent(double k1, double k2, const EvolutionKernel& kernel);

// initial_kernel(k1, k2) * exp(F t)
std::complex<double> rho_kernel(const EvolutionKernel& kernel, double k1, double k2, double t);

} // namespace qlevy
