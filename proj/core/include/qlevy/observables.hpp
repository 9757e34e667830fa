// observables.hpp: Site probabilities, coherence witnesses, purity and moments
//
// Grid observables are double sums over the kernel's tensor grid. Lattice
// sums (normalisation, first and second moments) evaluate the whole window
// profile with one blocked matrix product per time point.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlevy/evolution.hpp"

namespace qlevy {

// Time series of a scalar observable plus the run parameters that produced it.
struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::map<std::string, std::string> meta;

    // Throws ParameterError unless times are strictly increasing, values are
    // finite and both have equal length.
    void validate() const;
};

// <l| rho(t) |l>. Throws ResolutionError when the residual imaginary part or a
// negative value exceeds ten times the quadrature error estimate.
double site_probability(const EvolutionKernel& kernel, std::int64_t l, double t);

std::vector<double> site_profile(const EvolutionKernel& kernel,
                                 std::span<const std::int64_t> sites, double t);

// Sites l_ref - half_width ... l_ref + half_width.
std::vector<std::int64_t> window_sites(const EvolutionKernel& kernel, std::int64_t half_width);

struct LocalizedCorrelation {
    double chi = 0.0;  // <l0|rho|l0> - 1/(2 pi)
    double chi0 = 0.0; // <l0|rho|l0>
};

// Requires a PureWannier preparation.
LocalizedCorrelation localized_correlation(const EvolutionKernel& kernel, double t);

// Tr rho^2 = sum |rho0|^2 exp(2 Re F t).
double purity(const EvolutionKernel& kernel, double t);
// Same quantity through the rescaled form exp{F|_{r = r_c = 0} * 2 D t} with F in units of D.
double purity_rescaled(const EvolutionKernel& kernel, double t);
// Same quantity through exp{(F(k1,k2) + F(k2,k1)) t} taken literally.
double purity_direct(const EvolutionKernel& kernel, double t);

// Printed closed form for <q^2(t)>. b = 1 and 1 < b < A only.
// DivergenceError for b > A, DomainError for b = A (pole).
double second_moment_closed(const WalkParams& walk, const BathParams& bath, std::int64_t l0, double t);
double second_moment_closed(const WalkParams& walk, const KernelRates& rates, std::int64_t l0, double t);

// <q^2(t)> from k-space derivatives of F on the diagonal, with the Fourier
// coefficients of nu C' + omega_c T' collected exactly by integer frequency.
// Wannier preparation; b < A (or b = 1).
double second_moment_spectral(const WalkParams& walk, const KernelRates& rates, std::int64_t l0,
                              double t, int n_terms = 0);

struct LatticeSumOptions {
    std::int64_t half_width = 0;  // 0 selects default_l_window
    double tail_tolerance = 1e-6; // max mass allowed in the outer tenth of the window
};

// sum_l l^2 P(l, t) over the window; WindowOverflowError when the outer band
// holds more than tail_tolerance.
double second_moment_quadrature(const EvolutionKernel& kernel, double t,
                                const LatticeSumOptions& options = {});

// sum_l l P(l, t) over the window.
double mean_position(const EvolutionKernel& kernel, double t, const LatticeSumOptions& options);

// sum_l P(l, t) over the window.
double total_probability(const EvolutionKernel& kernel, double t, std::int64_t half_width);

// l0 +- max(64, ceil(4 sigma)) from the closed form when it exists, else +-512.
std::int64_t default_l_window(const EvolutionKernel& kernel, double t);

// Drift of the lattice variance: 2D (b = 1), 2D (A-1)^2/(A^2-b^2) (b < A).
// DivergenceError for b >= A.
double dissipative_rate_sum(const WalkParams& walk, const BathParams& bath);
double dissipative_rate_sum(const WalkParams& walk, double diffusion);

// <p> for the coherent block preparation; defined for all b, A.
double mean_pseudo_momentum_coherent(const WalkParams& walk, double mass, double k_c,
                                     const SeriesBudget& budget, double hbar = 1.0);

// (1/2 pi) \int p_k^2 dk over grid; DomainError for b >= A.
double pseudo_momentum_second_moment(const WalkParams& walk, double mass, const SeriesBudget& budget,
                                     const QuadratureGrid& grid, double hbar = 1.0);

struct SecondMomentReport {
    double t = 0.0;
    std::optional<double> closed;   // printed formula (empty when undefined)
    double lattice = 0.0;           // sum_l l^2 P(l, t)
    std::optional<double> spectral; // exact k-space moment of the tabulated model
    std::optional<double> closed_relative_error;
    std::optional<double> spectral_relative_error;
};

SecondMomentReport second_moment_report(const EvolutionKernel& kernel, double t,
                                        const LatticeSumOptions& options = {});

} // namespace qlevy
