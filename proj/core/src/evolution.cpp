// evolution.cpp: Kernel construction, grid planning and F evaluation

#include "qlevy/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlevy/errors.hpp"

namespace qlevy {

namespace {

constexpr double nodes_per_series_period = 6.0;

int round_up(int value, int multiple)
{
    return ((value + multiple - 1) / multiple) * multiple;
}

} // namespace

CoherentFourier coherent_fourier(double k_c)
{
    if (!(k_c > 0.0) || k_c > std::numbers::pi) {
        throw ParameterError("CoherentFourier: k_c must satisfy 0 < k_c <= pi");
    }
    return CoherentFourier{k_c};
}

std::complex<double> initial_kernel(const Preparation& prep, double k1, double k2)
{
    if (const auto* w = std::get_if<PureWannier>(&prep)) {
        const double phase = -(k1 - k2) * static_cast<double>(w->l0);
        return std::polar(1.0 / (2.0 * std::numbers::pi), phase);
    }
    const double k_c = std::get<CoherentFourier>(prep).k_c;
    const bool inside = k1 >= 0.0 && k1 <= k_c && k2 >= 0.0 && k2 <= k_c;
    return inside ? std::complex<double>(1.0 / k_c, 0.0) : std::complex<double>(0.0, 0.0);
}

std::pair<double, double> preparation_support(const Preparation& prep)
{
    if (std::holds_alternative<PureWannier>(prep)) {
        return {-std::numbers::pi, std::numbers::pi};
    }
    return {0.0, std::get<CoherentFourier>(prep).k_c};
}

std::int64_t reference_site(const Preparation& prep) noexcept
{
    if (const auto* w = std::get_if<PureWannier>(&prep)) return w->l0;
    return 0;
}

KernelRates KernelRates::from(const WalkParams& walk, const BathParams& bath)
{
    return KernelRates{walk.Omega() / bath.hbar, bath.omega_c, bath.diffusion()};
}

KernelRates KernelRates::dimensionless(double r, double r_c)
{
    if (!(r >= 0.0) || !(r_c >= 0.0)) {
        throw ParameterError("KernelRates: r and r_c must be >= 0");
    }
    return KernelRates{r, r_c, 1.0};
}

std::complex<double> f_exponent(const LacunaryPair& p1, const LacunaryPair& p2,
                                const KernelRates& rates) noexcept
{
    const double dC = p1.C - p2.C;
    const double dS = p1.S - p2.S;
    const double dT = p1.squared_norm() - p2.squared_norm();
    return {-rates.diffusion * (dC * dC + dS * dS), rates.coherent * dC + rates.cutoff * dT};
}

EvolutionKernel EvolutionKernel::build(const WalkParams& walk, const BathParams& bath,
                                       const Preparation& prep, const ResolutionRequest& request)
{
    return build(walk, KernelRates::from(walk, bath), prep, request);
}

EvolutionKernel EvolutionKernel::build(const WalkParams& walk, const KernelRates& rates,
                                       const Preparation& prep, const ResolutionRequest& request)
{
    if (!(request.tol > 0.0)) throw ParameterError("ResolutionRequest: tol must be > 0");
    if (!(request.t_max >= 0.0)) throw ParameterError("ResolutionRequest: t_max must be >= 0");
    if (request.l_max < 0) throw ParameterError("ResolutionRequest: l_max must be >= 0");
    if (request.points_per_panel < 1 || request.min_nodes < 1 ||
        request.max_nodes < request.points_per_panel) {
        throw ParameterError("ResolutionRequest: inconsistent node limits");
    }
    if (rates.coherent < 0.0 || rates.cutoff < 0.0 || rates.diffusion < 0.0) {
        throw ParameterError("KernelRates must be non-negative");
    }
    if (const auto* c = std::get_if<CoherentFourier>(&prep)) coherent_fourier(c->k_c);

    EvolutionKernel kernel;
    kernel.walk_ = walk;
    kernel.rates_ = rates;
    kernel.prep_ = prep;
    kernel.tol_ = request.tol;

    const auto [lower, upper] = preparation_support(prep);
    const double support_fraction = (upper - lower) / (2.0 * std::numbers::pi);
    const int p = request.points_per_panel;
    const double b = static_cast<double>(walk.b());

    ResolutionReport& report = kernel.report_;
    report.series_terms = request.series_terms > 0
        ? std::min(request.series_terms, SeriesBudget::max_terms)
        : SeriesBudget::automatic(walk, request.tol).n_terms;

    // Drop lacunary terms the grid cannot carry at 6 nodes per period; what
    // they would contribute is bounded by A^-N_freq.
    int n_freq = report.series_terms;
    if (walk.b() > 1) {
        while (n_freq > 1 &&
               nodes_per_series_period * std::pow(b, n_freq - 1) * support_fraction > request.max_nodes) {
            --n_freq;
        }
    }
    report.frequency_terms = n_freq;
    report.highest_frequency = std::pow(b, n_freq - 1);
    report.aliasing_bound = std::pow(walk.A(), -n_freq);

    double derivative_bound = 0.0;
    for (int n = 0; n < n_freq; ++n) derivative_bound += walk.weight(n) * std::pow(b, n);
    kernel.derivative_bound_ = derivative_bound;

    int nodes = 0;
    if (request.fixed_nodes > 0) {
        nodes = round_up(request.fixed_nodes, p);
    } else {
        const double floor_nodes = std::ceil(request.min_nodes * support_fraction);
        const double series_nodes =
            std::ceil(nodes_per_series_period * report.highest_frequency * support_fraction);
        const double K = kernel.bandwidth(request.t_max, request.l_max);
        // Panel width for which (e K h / 4p)^(2p) <= tol.
        const double h = 4.0 * p * std::pow(request.tol, 0.5 / p) / (std::numbers::e * std::max(K, 1e-12));
        const double K_nodes = std::ceil((upper - lower) / h) * p;
        const double wanted = std::max({floor_nodes, series_nodes, K_nodes, static_cast<double>(p)});
        if (wanted > request.max_nodes) {
            report.capped = true;
            nodes = (request.max_nodes / p) * p;
            std::ostringstream msg;
            msg << "quadrature capped at " << nodes << " nodes per axis (planner asked for "
                << static_cast<long long>(wanted) << "); results carry reduced accuracy";
            report.warning = msg.str();
        } else {
            nodes = round_up(static_cast<int>(wanted), p);
        }
    }
    report.panels = nodes / p;
    report.nodes_per_axis = nodes;

    kernel.grid_ = QuadratureGrid::gauss_legendre(lower, upper, report.panels, p);
    kernel.tables_ = LacunaryTables::build(kernel.grid_.nodes, walk, n_freq);
    return kernel;
}

SeriesBudget EvolutionKernel::budget() const noexcept
{
    SeriesBudget b;
    b.n_terms = report_.frequency_terms;
    b.series_tol = tol_;
    b.quad_points = report_.nodes_per_axis;
    return b;
}

std::complex<double> EvolutionKernel::centred_initial(std::size_t, std::size_t) const
{
    // Both preparations are constant on their support once the l0 phase is
    // factored out.
    if (std::holds_alternative<PureWannier>(prep_)) {
        return {1.0 / (2.0 * std::numbers::pi), 0.0};
    }
    return {1.0 / std::get<CoherentFourier>(prep_).k_c, 0.0};
}

double EvolutionKernel::bandwidth(double t, std::int64_t l_max) const noexcept
{
    // |C'| <= G and |T'| <= 2 G with G = sum_n w_n b^n (sum_n w_n <= 1).
    const double phase = static_cast<double>(l_max) +
        t * (rates_.coherent + 2.0 * rates_.cutoff) * derivative_bound_;
    // exp(-D t G dk^2) has spectral content up to 2 sqrt(D t G ln(1/tol)).
    const double decay = 2.0 * std::sqrt(rates_.diffusion * t * derivative_bound_ * derivative_bound_ *
                                         std::log(1.0 / tol_));
    return std::max(phase, decay);
}

double EvolutionKernel::error_estimate(double t, std::int64_t l_max) const
{
    const double h = grid_.panel_width();
    const int p = grid_.points_per_panel;
    const double rate_scale = 1.0 + t * (2.0 * rates_.coherent + 4.0 * rates_.cutoff + 8.0 * rates_.diffusion);
    double err = gauss_legendre_error_estimate(bandwidth(t, l_max), h, p);
    err += gauss_legendre_error_estimate(report_.highest_frequency, h, p) *
           walk_.weight(report_.frequency_terms - 1) * rate_scale;
    if (report_.frequency_terms < report_.series_terms) {
        err += report_.aliasing_bound * rate_scale;
    }
    return err + 1e-13;
}

std::complex<double> f_exponent(double k1, double k2, const EvolutionKernel& kernel)
{
    const SeriesBudget budget = kernel.budget();
    return f_exponent(lacunary_cs(canonical_k(k1), kernel.walk(), budget),
                      lacunary_cs(canonical_k(k2), kernel.walk(), budget), kernel.rates());
}

std::complex<double> rho_kernel(const EvolutionKernel& kernel, double k1, double k2, double t)
{
    if (!(t >= 0.0)) throw ParameterError("rho_kernel: t must be >= 0");
    const double c1 = canonical_k(k1);
    const double c2 = canonical_k(k2);
    const std::complex<double> rho0 = initial_kernel(kernel.preparation(), c1, c2);
    if (rho0 == std::complex<double>(0.0, 0.0)) return rho0;
    return rho0 * std::exp(f_exponent(c1, c2, kernel) * t);
}

} // namespace qlevy
