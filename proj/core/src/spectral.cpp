// spectral.cpp: DOS sampling, regime checks and box counting

#include "qlevy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qlevy/errors.hpp"

namespace qlevy {

namespace {

constexpr std::int64_t chunk_size = 1 << 16;
constexpr double growth_threshold = 0.5;

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

// 53-bit uniform in [0, 1), independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

int probe_order(const WalkParams& params)
{
    const double ratio = static_cast<double>(params.b()) / params.A();
    if (ratio >= 1.0) return 24;
    const int half = static_cast<int>(std::ceil(std::log(0.1 * growth_threshold) / std::log(ratio)));
    return std::clamp(2 * half, 24, 200);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace

const char* to_string(Regime regime) noexcept
{
    switch (regime) {
    case Regime::nn: return "nn";
    case Regime::smooth: return "smooth";
    case Regime::critical: return "critical";
    }
    return "unknown";
}

Regime classify_regime(const WalkParams& params) noexcept
{
    if (params.b() == 1) return Regime::nn;
    return static_cast<double>(params.b()) < params.A() ? Regime::smooth : Regime::critical;
}

double derivative_growth_fraction(const WalkParams& params, int n_probes, std::uint64_t seed)
{
    if (n_probes < 1) throw ParameterError("derivative_growth_fraction: n_probes must be >= 1");
    auto engine = chunk_engine(seed, 0);
    const int order = probe_order(params);
    int flagged = 0;
    for (int i = 0; i < n_probes; ++i) {
        const double k = std::numbers::pi * (1.0 - 2.0 * unit_uniform(engine));
        if (eigenenergy_derivative(k, params, order).growth_flag) ++flagged;
    }
    return static_cast<double>(flagged) / n_probes;
}

bool regime_consistent(const WalkParams& params, int n_probes, std::uint64_t seed)
{
    const bool growing = derivative_growth_fraction(params, n_probes, seed) > 0.5;
    return growing == (classify_regime(params) == Regime::critical);
}

double DosEstimate::normalization() const
{
    double s = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) s += density[i] * bin_width(i);
    return s;
}

DosEstimate dos_estimate(const WalkParams& params, const SeriesBudget& budget, std::int64_t n_samples,
                         int n_bins, std::uint64_t seed, bool half_zone)
{
    if (n_bins < 1) throw ParameterError("dos_estimate: n_bins must be >= 1");
    if (n_samples < 10 * static_cast<std::int64_t>(n_bins)) {
        throw ParameterError("dos_estimate: n_samples must be >= 10 * n_bins");
    }
    const double e_max = 2.0 * params.Omega();
    DosEstimate est;
    est.n_samples = n_samples;
    est.regime = classify_regime(params);
    est.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i) est.bin_edges[static_cast<std::size_t>(i)] = e_max * i / n_bins;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_bins), 0);
    const double span = half_zone ? std::numbers::pi : 2.0 * std::numbers::pi;
    for (std::int64_t start = 0, chunk = 0; start < n_samples; start += chunk_size, ++chunk) {
        auto engine = chunk_engine(seed, static_cast<std::uint64_t>(chunk));
        const std::int64_t stop = std::min(n_samples, start + chunk_size);
        for (std::int64_t s = start; s < stop; ++s) {
            const double k = std::numbers::pi - span * unit_uniform(engine);
            const double E = eigenenergy(k, params, budget);
            auto bin = static_cast<std::int64_t>(std::floor(E / e_max * n_bins));
            bin = std::clamp<std::int64_t>(bin, 0, n_bins - 1);
            ++counts[static_cast<std::size_t>(bin)];
        }
    }
    est.density.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        est.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(n_samples) * est.bin_width(i));
    }
    return est;
}

double dos_nn_analytic(double E, double Omega)
{
    if (!(Omega > 0.0)) throw ParameterError("dos_nn_analytic: Omega must be > 0");
    if (!(E > 0.0 && E < 2.0 * Omega)) throw DomainError("dos_nn_analytic: E outside (0, 2 Omega)");
    return 1.0 / (std::numbers::pi * std::sqrt(2.0 * Omega * E - E * E));
}

double dos_nn_cumulative(double E, double Omega)
{
    const double x = std::clamp(1.0 - E / Omega, -1.0, 1.0);
    return std::acos(x) / std::numbers::pi;
}

double dos_nn_l1_distance(const DosEstimate& estimate, double Omega)
{
    double l1 = 0.0;
    for (std::size_t i = 0; i < estimate.density.size(); ++i) {
        const double w = estimate.bin_width(i);
        const double mass = dos_nn_cumulative(estimate.bin_edges[i + 1], Omega) -
                            dos_nn_cumulative(estimate.bin_edges[i], Omega);
        l1 += std::abs(estimate.density[i] * w - mass);
    }
    return l1;
}

std::vector<double> dyadic_scales(int first, int last)
{
    if (first > last) throw ParameterError("dyadic_scales: first must be <= last");
    std::vector<double> scales;
    for (int j = first; j <= last; ++j) scales.push_back(std::ldexp(1.0, -j));
    return scales;
}

BoxCountResult box_counting_dimension(const WalkParams& params, const SeriesBudget& budget,
                                      std::int64_t k_samples, const std::vector<double>& scales)
{
    if (k_samples < (std::int64_t{1} << 16)) {
        throw ParameterError("box_counting_dimension: k_samples must be >= 2^16");
    }
    if (scales.size() < 3) throw ParameterError("box_counting_dimension: need at least 3 scales");
    const auto [lo_it, hi_it] = std::minmax_element(scales.begin(), scales.end());
    if (!(*lo_it > 0.0) || *hi_it / *lo_it < 100.0) {
        throw ParameterError("box_counting_dimension: scales must be positive and span >= 2 decades");
    }

    std::vector<double> x(static_cast<std::size_t>(k_samples));
    std::vector<double> y(x.size());
    for (std::int64_t i = 0; i < k_samples; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(k_samples - 1);
        const double k = std::numbers::pi * (2.0 * u - 1.0);
        x[static_cast<std::size_t>(i)] = u;
        y[static_cast<std::size_t>(i)] = eigenenergy(k, params, budget) / params.Omega();
    }
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    const double lo = *ymin;
    const double range = *ymax - lo;
    for (double& v : y) v = range > 0.0 ? (v - lo) / range : 0.0;

    BoxCountResult result;
    result.scales = scales;
    std::vector<double> log_eps;
    std::vector<double> log_n;
    for (double eps : scales) {
        const auto columns = static_cast<std::size_t>(std::ceil(1.0 / eps));
        std::vector<double> cmin(columns, 2.0);
        std::vector<double> cmax(columns, -1.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::size_t c = std::min(columns - 1, static_cast<std::size_t>(x[i] / eps));
            cmin[c] = std::min(cmin[c], y[i]);
            cmax[c] = std::max(cmax[c], y[i]);
        }
        double n = 0.0;
        for (std::size_t c = 0; c < columns; ++c) {
            if (cmax[c] < cmin[c]) continue;
            n += std::max(1.0, std::ceil((cmax[c] - cmin[c]) / eps));
        }
        result.counts.push_back(n);
        log_eps.push_back(std::log(eps));
        log_n.push_back(std::log(n));
    }
    const LineFit fit = least_squares(log_eps, log_n);
    result.dimension = -fit.slope;
    result.fit_r2 = fit.r2;
    result.poor_fit = fit.r2 < 0.99;
    return result;
}

} // namespace qlevy
