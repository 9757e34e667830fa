// observables.cpp: Grid sums and lattice sums over the evolution kernel

#include "qlevy/observables.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlevy/errors.hpp"

namespace qlevy {

namespace {

using cplx = std::complex<double>;

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::int64_t row_block = 128;

void require_time(double t, const char* who)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ParameterError(std::string(who) + ": t must be finite and >= 0");
    }
}

const PureWannier& require_wannier(const EvolutionKernel& kernel, const char* who)
{
    const auto* w = std::get_if<PureWannier>(&kernel.preparation());
    if (w == nullptr) throw ParameterError(std::string(who) + ": requires a PureWannier preparation");
    return *w;
}

// Complex P(l, t) before validation; sites are absolute lattice indices.
std::vector<cplx> raw_profile(const EvolutionKernel& kernel, std::span<const std::int64_t> sites, double t)
{
    const auto n = static_cast<Eigen::Index>(kernel.size());
    const auto L = static_cast<Eigen::Index>(sites.size());
    const auto& k = kernel.grid().nodes;
    const auto& w = kernel.grid().weights;
    const std::int64_t l_ref = reference_site(kernel.preparation());

    Eigen::MatrixXcd U(n, L);
    for (Eigen::Index s = 0; s < L; ++s) {
        const double dl = static_cast<double>(sites[static_cast<std::size_t>(s)] - l_ref);
        for (Eigen::Index i = 0; i < n; ++i) U(i, s) = std::polar(1.0, k[static_cast<std::size_t>(i)] * dl);
    }
    const Eigen::MatrixXcd Uc = U.conjugate();

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(L);
    Eigen::MatrixXcd M(std::min<Eigen::Index>(row_block, n), n);
    for (Eigen::Index i0 = 0; i0 < n; i0 += row_block) {
        const Eigen::Index nb = std::min<Eigen::Index>(row_block, n - i0);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            for (Eigen::Index a = 0; a < nb; ++a) {
                const auto ui = static_cast<std::size_t>(i0 + a);
                M(a, j) = w[ui] * w[uj] * kernel.centred_initial(ui, uj) *
                          std::exp(kernel.exponent(ui, uj) * t);
            }
        }
        const Eigen::MatrixXcd G = M.topRows(nb) * Uc;
        acc += U.middleRows(i0, nb).cwiseProduct(G).colwise().sum().transpose();
    }
    std::vector<cplx> out(static_cast<std::size_t>(L));
    for (Eigen::Index s = 0; s < L; ++s) out[static_cast<std::size_t>(s)] = acc(s) / two_pi;
    return out;
}

double validated_probability(const EvolutionKernel& kernel, cplx value, std::int64_t l, double t)
{
    const std::int64_t dl = std::abs(l - reference_site(kernel.preparation()));
    const double slack = 10.0 * kernel.error_estimate(t, dl) + 1e-12;
    if (std::abs(value.imag()) > slack || value.real() < -slack) {
        std::ostringstream msg;
        msg << "site probability at l=" << l << ", t=" << t << " is " << value.real() << " + "
            << value.imag() << "i; quadrature grid (" << kernel.report().nodes_per_axis
            << " nodes/axis) does not resolve the integrand";
        throw ResolutionError(msg.str());
    }
    return std::max(value.real(), 0.0);
}

// sum_ij w_i w_j f(i, j), accumulated row by row.
template <class F>
double grid_sum(const EvolutionKernel& kernel, F&& f)
{
    const auto& w = kernel.grid().weights;
    const std::size_t n = kernel.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += w[j] * f(i, j);
        total += w[i] * row;
    }
    return total;
}

double initial_magnitude_squared(const EvolutionKernel& kernel)
{
    return std::norm(kernel.centred_initial(0, 0));
}

struct WindowProfile {
    std::vector<std::int64_t> sites;
    std::vector<double> P;
};

WindowProfile window_profile(const EvolutionKernel& kernel, double t, const LatticeSumOptions& options)
{
    const std::int64_t half = options.half_width > 0 ? options.half_width : default_l_window(kernel, t);
    WindowProfile wp;
    wp.sites = window_sites(kernel, half);
    wp.P = site_profile(kernel, wp.sites, t);

    const std::int64_t band = std::max<std::int64_t>(1, half / 10);
    double tail = 0.0;
    for (std::size_t s = 0; s < wp.sites.size(); ++s) {
        const auto from_edge = std::min<std::int64_t>(static_cast<std::int64_t>(s),
                                                      static_cast<std::int64_t>(wp.sites.size() - 1 - s));
        if (from_edge < band) tail += wp.P[s];
    }
    if (tail > options.tail_tolerance) {
        std::ostringstream msg;
        msg << "lattice window +-" << half << " holds " << tail << " probability in its outer " << band
            << " sites at t=" << t << " (limit " << options.tail_tolerance << ")";
        throw WindowOverflowError(msg.str());
    }
    return wp;
}

std::int64_t int_pow(int b, int n)
{
    std::int64_t p = 1;
    for (int i = 0; i < n; ++i) {
        if (p > std::numeric_limits<std::int64_t>::max() / b) return -1;
        p *= b;
    }
    return p;
}

} // namespace

void ObservableSeries::validate() const
{
    if (times.size() != values.size()) throw ParameterError("ObservableSeries: length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
            throw ParameterError("ObservableSeries: non-finite entry");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw ParameterError("ObservableSeries: times must be strictly increasing");
        }
    }
}

std::vector<double> site_profile(const EvolutionKernel& kernel, std::span<const std::int64_t> sites, double t)
{
    require_time(t, "site_profile");
    const auto raw = raw_profile(kernel, sites, t);
    std::vector<double> out(raw.size());
    for (std::size_t s = 0; s < raw.size(); ++s) out[s] = validated_probability(kernel, raw[s], sites[s], t);
    return out;
}

double site_probability(const EvolutionKernel& kernel, std::int64_t l, double t)
{
    const std::int64_t site[1] = {l};
    return site_profile(kernel, site, t).front();
}

std::vector<std::int64_t> window_sites(const EvolutionKernel& kernel, std::int64_t half_width)
{
    if (half_width < 0) throw ParameterError("window half-width must be >= 0");
    const std::int64_t l_ref = reference_site(kernel.preparation());
    std::vector<std::int64_t> sites;
    sites.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t l = l_ref - half_width; l <= l_ref + half_width; ++l) sites.push_back(l);
    return sites;
}

LocalizedCorrelation localized_correlation(const EvolutionKernel& kernel, double t)
{
    require_time(t, "localized_correlation");
    require_wannier(kernel, "localized_correlation");
    double re = 0.0;
    double im = 0.0;
    const auto& w = kernel.grid().weights;
    const std::size_t n = kernel.size();
    for (std::size_t i = 0; i < n; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += w[j] * std::exp(kernel.exponent(i, j) * t);
        re += w[i] * row.real();
        im += w[i] * row.imag();
    }
    const double norm = 1.0 / (two_pi * two_pi);
    LocalizedCorrelation out;
    out.chi0 = validated_probability(kernel, {re * norm, im * norm}, reference_site(kernel.preparation()), t);
    out.chi = out.chi0 - 1.0 / two_pi;
    return out;
}

double purity(const EvolutionKernel& kernel, double t)
{
    require_time(t, "purity");
    const double scale = initial_magnitude_squared(kernel);
    return scale * grid_sum(kernel, [&](std::size_t i, std::size_t j) {
        return std::exp(2.0 * kernel.exponent(i, j).real() * t);
    });
}

double purity_rescaled(const EvolutionKernel& kernel, double t)
{
    require_time(t, "purity_rescaled");
    const double D = kernel.rates().diffusion;
    const KernelRates unit{0.0, 0.0, 1.0};
    const auto& tab = kernel.tables();
    const double scale = initial_magnitude_squared(kernel);
    return scale * grid_sum(kernel, [&](std::size_t i, std::size_t j) {
        const cplx f = f_exponent({tab.C[i], tab.S[i]}, {tab.C[j], tab.S[j]}, unit);
        return std::exp(f * (2.0 * D * t)).real();
    });
}

double purity_direct(const EvolutionKernel& kernel, double t)
{
    require_time(t, "purity_direct");
    const double scale = initial_magnitude_squared(kernel);
    return scale * grid_sum(kernel, [&](std::size_t i, std::size_t j) {
        return std::exp((kernel.exponent(i, j) + kernel.exponent(j, i)) * t).real();
    });
}

double second_moment_closed(const WalkParams& walk, const KernelRates& rates, std::int64_t l0, double t)
{
    require_time(t, "second_moment_closed");
    const double A = walk.A();
    const double b = static_cast<double>(walk.b());
    const double l0sq = static_cast<double>(l0) * static_cast<double>(l0);
    const double nu = rates.coherent;
    const double two_D = 2.0 * rates.diffusion; // pi alpha / (beta hbar)
    if (walk.b() == 1) {
        return 0.5 * (nu * t) * (nu * t) + two_D * t + l0sq;
    }
    if (b > A) throw DivergenceError("<q^2(t)> diverges for b > A");
    if (b == A) throw DomainError("<q^2(t)> closed form has a pole at b = A");
    const double wc = rates.cutoff;
    const double prefactor = (A - 1.0) * (A - 1.0) / (A * A - b * b);
    const double cutoff_term = 2.0 * wc * wc * (b - 1.0) * (b - 1.0) * t * t /
        ((1.0 - 1.0 / (A * A)) * (1.0 - b / (A * A)) * (1.0 - b / (A * A)));
    return prefactor * (0.5 * nu * nu * t * t + cutoff_term + two_D * t) + l0sq;
}

double second_moment_closed(const WalkParams& walk, const BathParams& bath, std::int64_t l0, double t)
{
    return second_moment_closed(walk, KernelRates::from(walk, bath), l0, t);
}

double second_moment_spectral(const WalkParams& walk, const KernelRates& rates, std::int64_t l0,
                              double t, int n_terms)
{
    require_time(t, "second_moment_spectral");
    const int b = walk.b();
    if (b > 1 && static_cast<double>(b) >= walk.A()) {
        throw DivergenceError("<q^2(t)> diverges for b >= A");
    }
    if (n_terms <= 0) {
        // Derivative weights decay like (b/A)^n.
        const double ratio = b == 1 ? 1.0 / walk.A() : static_cast<double>(b) / walk.A();
        n_terms = static_cast<int>(std::ceil(std::log(1e-15) / std::log(ratio)));
        n_terms = std::clamp(n_terms, 1, SeriesBudget::max_terms);
    }
    std::vector<std::int64_t> freq(static_cast<std::size_t>(n_terms));
    std::vector<double> wt(static_cast<std::size_t>(n_terms));
    for (int n = 0; n < n_terms; ++n) {
        freq[static_cast<std::size_t>(n)] = int_pow(b, n);
        wt[static_cast<std::size_t>(n)] = walk.weight(n);
    }

    // v(k) = nu C'(k) + omega_c T'(k) = sum_f amp_f sin(f k), f > 0.
    std::map<std::int64_t, double> amp;
    for (int n = 0; n < n_terms; ++n) {
        const auto fn = freq[static_cast<std::size_t>(n)];
        if (fn < 0) continue; // weight below A^-62
        amp[fn] -= rates.coherent * wt[static_cast<std::size_t>(n)] * static_cast<double>(fn);
        for (int m = 0; m < n_terms; ++m) {
            const auto fm = freq[static_cast<std::size_t>(m)];
            if (fm < 0 || fm == fn) continue;
            const std::int64_t f = std::abs(fn - fm);
            amp[f] -= rates.cutoff * wt[static_cast<std::size_t>(n)] * wt[static_cast<std::size_t>(m)] *
                      static_cast<double>(f);
        }
    }
    double mean_v2 = 0.0;
    for (const auto& [f, a] : amp) mean_v2 += 0.5 * a * a;

    // mean of C'^2 + S'^2 = sum over equal frequencies of w_n w_m b^(n+m).
    double mean_grad2 = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        for (int m = 0; m < n_terms; ++m) {
            const auto fn = freq[static_cast<std::size_t>(n)];
            const auto fm = freq[static_cast<std::size_t>(m)];
            if (fn < 0 || fm != fn) continue;
            mean_grad2 += wt[static_cast<std::size_t>(n)] * wt[static_cast<std::size_t>(m)] *
                          static_cast<double>(fn) * static_cast<double>(fm);
        }
    }
    const double l0sq = static_cast<double>(l0) * static_cast<double>(l0);
    return l0sq + t * t * mean_v2 + 2.0 * rates.diffusion * t * mean_grad2;
}

std::int64_t default_l_window(const EvolutionKernel& kernel, double t)
{
    const auto* w = std::get_if<PureWannier>(&kernel.preparation());
    const auto& walk = kernel.walk();
    const bool closed_exists = walk.b() == 1 || static_cast<double>(walk.b()) < walk.A();
    if (w == nullptr || !closed_exists) return 512;
    const double variance = second_moment_closed(walk, kernel.rates(), 0, t);
    return std::max<std::int64_t>(64, static_cast<std::int64_t>(std::ceil(4.0 * std::sqrt(variance))));
}

double second_moment_quadrature(const EvolutionKernel& kernel, double t, const LatticeSumOptions& options)
{
    require_time(t, "second_moment_quadrature");
    require_wannier(kernel, "second_moment_quadrature");
    const WindowProfile wp = window_profile(kernel, t, options);
    double sum = 0.0;
    for (std::size_t s = 0; s < wp.sites.size(); ++s) {
        const auto l = static_cast<double>(wp.sites[s]);
        sum += l * l * wp.P[s];
    }
    return sum;
}

double mean_position(const EvolutionKernel& kernel, double t, const LatticeSumOptions& options)
{
    require_time(t, "mean_position");
    const WindowProfile wp = window_profile(kernel, t, options);
    double sum = 0.0;
    for (std::size_t s = 0; s < wp.sites.size(); ++s) sum += static_cast<double>(wp.sites[s]) * wp.P[s];
    return sum;
}

double total_probability(const EvolutionKernel& kernel, double t, std::int64_t half_width)
{
    const auto sites = window_sites(kernel, half_width);
    const auto P = site_profile(kernel, sites, t);
    double sum = 0.0;
    for (double p : P) sum += p;
    return sum;
}

double dissipative_rate_sum(const WalkParams& walk, double diffusion)
{
    const double two_D = 2.0 * diffusion;
    if (walk.b() == 1) return two_D;
    const double A = walk.A();
    const double b = static_cast<double>(walk.b());
    if (b >= A) throw DivergenceError("dissipative rate sum diverges for b >= A");
    return two_D * (A - 1.0) * (A - 1.0) / (A * A - b * b);
}

double dissipative_rate_sum(const WalkParams& walk, const BathParams& bath)
{
    return dissipative_rate_sum(walk, bath.diffusion());
}

double mean_pseudo_momentum_coherent(const WalkParams& walk, double mass, double k_c,
                                     const SeriesBudget& budget, double hbar)
{
    coherent_fourier(k_c);
    if (!(hbar > 0.0)) throw ParameterError("mean_pseudo_momentum_coherent: hbar must be > 0");
    // (A-1)/A sum_n A^-n [1 - cos(k_c b^n)] = sum_n w_n - C(k_c)
    double weight_sum = 0.0;
    for (int n = 0; n < budget.n_terms; ++n) weight_sum += walk.weight(n);
    const double bracket = weight_sum - lacunary_cs(k_c, walk, budget).C;
    return mass * walk.Omega() / (hbar * k_c) * bracket;
}

double pseudo_momentum_second_moment(const WalkParams& walk, double mass, const SeriesBudget& budget,
                                     const QuadratureGrid& grid, double hbar)
{
    if (walk.b() > 1 && static_cast<double>(walk.b()) >= walk.A()) {
        throw DomainError("pseudo-momentum second moment undefined for b >= A");
    }
    const double integral = grid.integrate([&](double k) {
        const double p = pseudo_momentum_eigenvalue(k, walk, mass, budget, hbar);
        return p * p;
    });
    return integral / grid.length();
}

SecondMomentReport second_moment_report(const EvolutionKernel& kernel, double t,
                                        const LatticeSumOptions& options)
{
    const auto& walk = kernel.walk();
    const std::int64_t l0 = require_wannier(kernel, "second_moment_report").l0;
    SecondMomentReport report;
    report.t = t;
    report.lattice = second_moment_quadrature(kernel, t, options);
    try {
        report.closed = second_moment_closed(walk, kernel.rates(), l0, t);
    } catch (const DomainError&) {
    }
    try {
        report.spectral = second_moment_spectral(walk, kernel.rates(), l0, t, kernel.report().frequency_terms);
    } catch (const DomainError&) {
    }
    const double denom = std::max(std::abs(report.lattice), std::numeric_limits<double>::min());
    if (report.closed) report.closed_relative_error = std::abs(*report.closed - report.lattice) / denom;
    if (report.spectral) report.spectral_relative_error = std::abs(*report.spectral - report.lattice) / denom;
    return report;
}

} // namespace qlevy
