// weierstrass.cpp: Lacunary series, eigenenergies and shift-operator elements

#include "qlevy/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "angle_ladder.hpp"
#include "qlevy/bath.hpp"
#include "qlevy/errors.hpp"

namespace qlevy {

WalkParams::WalkParams(double A, int b, double Omega) : A_(A), b_(b), Omega_(Omega)
{
    if (!std::isfinite(A) || A < min_amplitude_ratio) {
        throw ParameterError("WalkParams: A must satisfy A >= 1 + 1e-6, got " + std::to_string(A));
    }
    if (b < 1) {
        throw ParameterError("WalkParams: b must be an integer >= 1, got " + std::to_string(b));
    }
    if (!std::isfinite(Omega) || Omega <= 0.0) {
        throw ParameterError("WalkParams: Omega must be > 0, got " + std::to_string(Omega));
    }
}

std::optional<double> WalkParams::mu() const noexcept
{
    if (b_ == 1) return std::nullopt;
    return std::log(A_) / std::log(static_cast<double>(b_));
}

double WalkParams::weight(int n) const noexcept
{
    return (A_ - 1.0) / A_ * std::pow(A_, -n);
}

int auto_truncation(const WalkParams& params, double tol)
{
    if (!(tol > 0.0)) {
        throw ParameterError("auto_truncation: tol must be > 0");
    }
    if (tol >= 1.0) return 1;
    // ceil of log(1/tol)/log(A), then fix up rounding on either side.
    int n = std::max(1, static_cast<int>(std::ceil(-std::log(tol) / std::log(params.A()))));
    while (n > 1 && std::pow(params.A(), -(n - 1)) <= tol) --n;
    while (std::pow(params.A(), -n) > tol) ++n;
    return n;
}

SeriesBudget SeriesBudget::automatic(const WalkParams& params, double tol)
{
    SeriesBudget budget;
    budget.series_tol = tol;
    budget.n_terms = std::min(auto_truncation(params, tol), max_terms);
    return budget;
}

double SeriesBudget::highest_frequency(const WalkParams& params) const noexcept
{
    return std::pow(static_cast<double>(params.b()), n_terms - 1);
}

double SeriesBudget::truncation_bound(const WalkParams& params) const noexcept
{
    return std::pow(params.A(), -n_terms);
}

double canonical_k(double k) noexcept
{
    return detail::reduce_two_pi(k, 0.0).hi;
}

LacunaryPair lacunary_cs(double k, const WalkParams& params, const SeriesBudget& budget)
{
    LacunaryPair out;
    detail::AngleLadder ladder(k, params.b());
    double w = (params.A() - 1.0) / params.A();
    for (int n = 0; n < budget.n_terms; ++n) {
        out.C += w * ladder.cos();
        out.S += w * ladder.sin();
        w /= params.A();
        ladder.advance();
    }
    return out;
}

LacunaryTables LacunaryTables::build(std::span<const double> nodes, const WalkParams& params,
                                     int n_terms)
{
    if (n_terms < 1) {
        throw ParameterError("LacunaryTables: n_terms must be >= 1");
    }
    LacunaryTables tables;
    tables.k_nodes.assign(nodes.begin(), nodes.end());
    tables.weights.resize(static_cast<std::size_t>(n_terms));
    for (int n = 0; n < n_terms; ++n) tables.weights[static_cast<std::size_t>(n)] = params.weight(n);

    SeriesBudget budget;
    budget.n_terms = n_terms;
    tables.C.resize(nodes.size());
    tables.S.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const LacunaryPair cs = lacunary_cs(nodes[i], params, budget);
        tables.C[i] = cs.C;
        tables.S[i] = cs.S;
    }
    return tables;
}

double LacunaryTables::weight_sum() const noexcept
{
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double eigenenergy(double k, const WalkParams& params, const SeriesBudget& budget)
{
    return params.Omega() * (1.0 - lacunary_cs(k, params, budget).C);
}

double effective_eigenenergy(double k, const WalkParams& params, const BathParams& bath,
                             const SeriesBudget& budget)
{
    if (bath.omega_c < 0.0) {
        throw ParameterError("effective_eigenenergy: omega_c must be >= 0");
    }
    const LacunaryPair cs = lacunary_cs(k, params, budget);
    return params.Omega() * (1.0 - cs.C) - bath.hbar * bath.omega_c * cs.squared_norm();
}

DerivativeSeries eigenenergy_derivative(double k, const WalkParams& params, int order)
{
    if (order < 1) {
        throw ParameterError("eigenenergy_derivative: order must be >= 1");
    }
    const double ratio = static_cast<double>(params.b()) / params.A();
    detail::AngleLadder ladder(k, params.b());
    double amplitude = (params.A() - 1.0) / params.A();
    double sum = 0.0;
    double early = 0.0;
    double late = 0.0;
    const int half = order / 2;
    for (int n = 0; n < order; ++n) {
        const double term = amplitude * ladder.sin();
        sum += term;
        if (n < half) {
            early = std::max(early, std::abs(term));
        } else {
            late = std::max(late, std::abs(term));
        }
        amplitude *= ratio;
        ladder.advance();
    }
    DerivativeSeries out;
    out.value = params.Omega() * sum;
    out.growth_flag = order >= 2 && late > 0.0 && late >= 0.5 * early;
    return out;
}

double pseudo_momentum_eigenvalue(double k, const WalkParams& params, double mass,
                                  const SeriesBudget& budget, double hbar)
{
    if (params.b() >= params.A()) {
        throw DomainError("pseudo-momentum eigenvalue undefined for b >= A");
    }
    if (!(hbar > 0.0)) {
        throw ParameterError("pseudo_momentum_eigenvalue: hbar must be > 0");
    }
    const double ratio = static_cast<double>(params.b()) / params.A();
    detail::AngleLadder ladder(k, params.b());
    double amplitude = (params.A() - 1.0) / params.A();
    double sum = 0.0;
    for (int n = 0; n < budget.n_terms; ++n) {
        sum += amplitude * ladder.sin();
        amplitude *= ratio;
        ladder.advance();
    }
    return mass * params.Omega() / hbar * sum;
}

namespace {

// b^n for n < n_terms; -1 marks powers beyond int64 range.
std::vector<std::int64_t> integer_powers(int b, int n_terms)
{
    std::vector<std::int64_t> powers(static_cast<std::size_t>(n_terms), -1);
    std::int64_t p = 1;
    bool overflow = false;
    for (int n = 0; n < n_terms; ++n) {
        if (!overflow) powers[static_cast<std::size_t>(n)] = p;
        if (!overflow && p > std::numeric_limits<std::int64_t>::max() / b) {
            overflow = true;
        } else {
            p *= b;
        }
    }
    return powers;
}

} // namespace

double shift_matrix_element(std::int64_t l1, std::int64_t l2, ShiftKind kind,
                            const WalkParams& params, const SeriesBudget& budget)
{
    const auto powers = integer_powers(params.b(), budget.n_terms);
    const std::int64_t delta = l1 - l2;
    double value = 0.0;
    switch (kind) {
    case ShiftKind::a:
    case ShiftKind::a_dagger: {
        // a|l> = sum_n w_n |l - b^n>,  a^dagger|l> = sum_n w_n |l + b^n>
        const std::int64_t target = kind == ShiftKind::a ? -delta : delta;
        for (int n = 0; n < budget.n_terms; ++n) {
            const std::int64_t p = powers[static_cast<std::size_t>(n)];
            if (p >= 0 && p == target) value += params.weight(n);
        }
        break;
    }
    case ShiftKind::a_dagger_a:
    case ShiftKind::a_a_dagger:
        // Both products reduce to sum_{n,m} w_n w_m [l1 - l2 = b^m - b^n].
        for (int n = 0; n < budget.n_terms; ++n) {
            for (int m = 0; m < budget.n_terms; ++m) {
                const std::int64_t pn = powers[static_cast<std::size_t>(n)];
                const std::int64_t pm = powers[static_cast<std::size_t>(m)];
                bool hit = false;
                if (n == m || params.b() == 1) {
                    hit = delta == 0;
                } else if (pn >= 0 && pm >= 0) {
                    hit = pm - pn == delta;
                }
                if (hit) value += params.weight(n) * params.weight(m);
            }
        }
        break;
    }
    return value;
}

double scaling_residual(double k, const WalkParams& params, const SeriesBudget& budget)
{
    // C(bk) is read off the same ladder one rung up, so bk never gets rounded.
    detail::AngleLadder ladder(k, params.b());
    const double cos_k = ladder.cos();
    double w = (params.A() - 1.0) / params.A();
    double c_k = 0.0;
    double c_bk = 0.0;
    for (int n = 0; n < budget.n_terms; ++n) {
        c_k += w * ladder.cos();
        ladder.advance();
        c_bk += w * ladder.cos();
        w /= params.A();
    }
    return std::abs(c_k - c_bk / params.A() - (params.A() - 1.0) / params.A() * cos_k);
}

} // namespace qlevy
