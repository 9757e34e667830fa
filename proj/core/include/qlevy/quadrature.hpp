// quadrature.hpp: Composite Gauss–Legendre rules over Brillouin-zone intervals

#pragma once

#include <span>
#include <vector>

namespace qlevy {

struct QuadratureGrid {
    int panels = 0;
    int points_per_panel = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    // panels equal-width panels on [lower, upper], points_per_panel
    // Gauss–Legendre nodes each. Weights sum to upper - lower.
    static QuadratureGrid gauss_legendre(double lower, double upper, int panels,
                                         int points_per_panel);

    // Full zone (-pi, pi].
    static QuadratureGrid brillouin_zone(int panels, int points_per_panel);

    std::size_t size() const noexcept { return nodes.size(); }
    double length() const noexcept { return upper - lower; }
    double panel_width() const noexcept { return length() / panels; }

    template <class F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w);

// Heuristic remainder of an n-point Gauss–Legendre panel of width h applied to
// an integrand with local angular bandwidth K: (e K h / (4 n))^(2n).
double gauss_legendre_error_estimate(double bandwidth, double panel_width, int points_per_panel);

} // namespace qlevy
