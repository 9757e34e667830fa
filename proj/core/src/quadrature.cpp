// quadrature.cpp: Composite Gauss–Legendre construction

#include "qlevy/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "qlevy/errors.hpp"

namespace qlevy {

void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w)
{
    if (n < 1) throw ParameterError("gauss_legendre_unit: n must be >= 1");
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[hi] = w[lo];
    }
    if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
}

QuadratureGrid QuadratureGrid::gauss_legendre(double lower, double upper, int panels,
                                              int points_per_panel)
{
    if (!(upper > lower)) throw ParameterError("QuadratureGrid: upper must exceed lower");
    if (panels < 1 || points_per_panel < 1) {
        throw ParameterError("QuadratureGrid: panels and points_per_panel must be >= 1");
    }
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre_unit(points_per_panel, x, w);

    QuadratureGrid grid;
    grid.panels = panels;
    grid.points_per_panel = points_per_panel;
    grid.lower = lower;
    grid.upper = upper;
    grid.nodes.reserve(static_cast<std::size_t>(panels) * x.size());
    grid.weights.reserve(grid.nodes.capacity());
    const double h = (upper - lower) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = lower + h * (p + 0.5);
        for (std::size_t j = 0; j < x.size(); ++j) {
            grid.nodes.push_back(mid + 0.5 * h * x[j]);
            grid.weights.push_back(0.5 * h * w[j]);
        }
    }
    return grid;
}

QuadratureGrid QuadratureGrid::brillouin_zone(int panels, int points_per_panel)
{
    return gauss_legendre(-std::numbers::pi, std::numbers::pi, panels, points_per_panel);
}

double gauss_legendre_error_estimate(double bandwidth, double panel_width, int points_per_panel)
{
    const double ratio = std::numbers::e * bandwidth * panel_width / (4.0 * points_per_panel);
    if (ratio >= 1.0) return 1.0;
    return std::pow(ratio, 2.0 * points_per_panel);
}

} // namespace qlevy
