// spectral.hpp: Density of states, regime classification and graph dimension

#pragma once

#include <cstdint>
#include <vector>

#include "qlevy/weierstrass.hpp"

namespace qlevy {

enum class Regime { nn, smooth, critical };

const char* to_string(Regime regime) noexcept;

// b = 1 -> nn, 1 < b < A -> smooth, b >= A -> critical.
Regime classify_regime(const WalkParams& params) noexcept;

// Fraction of n_probes random k whose derivative partial sum is flagged as
// growing; the probe order adapts to b/A so that a convergent series has
// decayed well below the flag threshold by its second half.
double derivative_growth_fraction(const WalkParams& params, int n_probes = 32,
                                  std::uint64_t seed = 0x5eed);

// classify_regime cross-checked with the growth diagnostic (majority vote).
bool regime_consistent(const WalkParams& params, int n_probes = 32, std::uint64_t seed = 0x5eed);

struct DosEstimate {
    std::vector<double> bin_edges; // n_bins + 1 edges over [0, 2 Omega]
    std::vector<double> density;
    std::int64_t n_samples = 0;
    Regime regime = Regime::nn;

    double bin_width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
    // sum density * bin_width
    double normalization() const;
};

// Histogram of E_k over k ~ Uniform(-pi, pi] (or (0, pi] with half_zone).
// Sampling runs in fixed-size chunks, each seeded from (seed, chunk index).
DosEstimate dos_estimate(const WalkParams& params, const SeriesBudget& budget, std::int64_t n_samples,
                         int n_bins, std::uint64_t seed = 1, bool half_zone = false);

// (1/pi) (2 Omega E - E^2)^(-1/2) on 0 < E < 2 Omega; DomainError elsewhere.
double dos_nn_analytic(double E, double Omega);

// Integrated nearest-neighbour density, (1/pi) arccos(1 - E/Omega) on [0, 2 Omega].
double dos_nn_cumulative(double E, double Omega);

// L1 distance between an estimate and the bin-averaged b = 1 density.
double dos_nn_l1_distance(const DosEstimate& estimate, double Omega);

struct BoxCountResult {
    double dimension = 0.0;
    double fit_r2 = 0.0;
    bool poor_fit = false; // fit_r2 < 0.99
    std::vector<double> scales;
    std::vector<double> counts;
};

// Dyadic ladder 2^-first ... 2^-last.
std::vector<double> dyadic_scales(int first = 3, int last = 11);

// Box count of the graph {(k, E_k / Omega)}, k uniform on [-pi, pi], rescaled
// to the unit square. N(eps) sums, over columns of width eps, the number of
// eps-boxes spanned by the samples in that column.
BoxCountResult box_counting_dimension(const WalkParams& params, const SeriesBudget& budget,
                                      std::int64_t k_samples = std::int64_t{1} << 18,
                                      const std::vector<double>& scales = dyadic_scales());

} // namespace qlevy
