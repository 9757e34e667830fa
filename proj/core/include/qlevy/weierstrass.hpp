// weierstrass.hpp: Lacunary series generated by the Weierstrass shift operators
//
// Every spectral quantity of the walk factors through the two base series
//
//     C(k) = sum_n w_n cos(b^n k),    S(k) = sum_n w_n sin(b^n k),
//     w_n  = (A - 1)/A * A^-n,
//
// truncated after n_terms terms. Angles b^n k are reduced modulo 2*pi in
// double-double arithmetic, so the series stays accurate long after b^n
// leaves the range of a 64-bit integer.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qlevy {

struct BathParams;

// Weierstrass triple (A, b, Omega) defining the system Hamiltonian.
class WalkParams {
public:
    static constexpr double min_amplitude_ratio = 1.0 + 1e-6;

    WalkParams(double A, int b, double Omega = 1.0);

    double A() const noexcept { return A_; }
    int b() const noexcept { return b_; }
    double Omega() const noexcept { return Omega_; }

    bool nearest_neighbour() const noexcept { return b_ == 1; }

    // ln A / ln b; empty in the nearest-neighbour regime (b == 1).
    std::optional<double> mu() const noexcept;

    // w_n = (A-1)/A * A^-n
    double weight(int n) const noexcept;

    friend bool operator==(const WalkParams&, const WalkParams&) = default;

private:
    double A_;
    int b_;
    double Omega_;
};

struct SeriesBudget {
    static constexpr int max_terms = 64;
    static constexpr double default_tol = 1e-10;

    int n_terms = 1;
    double series_tol = default_tol;
    int quad_points = 256;

    // Truncation sized by auto_truncation(params, tol), capped at max_terms.
    static SeriesBudget automatic(const WalkParams& params, double tol = default_tol);

    // Highest retained frequency b^(n_terms - 1), as a double (may exceed 2^64).
    double highest_frequency(const WalkParams& params) const noexcept;

    // Truncation error bound A^-n_terms of every weighted lacunary sum.
    double truncation_bound(const WalkParams& params) const noexcept;
};

// Smallest N >= 1 with A^-N <= tol.
int auto_truncation(const WalkParams& params, double tol);

// Canonical Brillouin-zone representative of k in (-pi, pi].
double canonical_k(double k) noexcept;

struct LacunaryPair {
    double C = 0.0;
    double S = 0.0;

    double squared_norm() const noexcept { return C * C + S * S; }
};

LacunaryPair lacunary_cs(double k, const WalkParams& params, const SeriesBudget& budget);

// C(k), S(k) tabulated over a fixed set of nodes.
struct LacunaryTables {
    std::vector<double> k_nodes;
    std::vector<double> C;
    std::vector<double> S;
    std::vector<double> weights;

    static LacunaryTables build(std::span<const double> nodes, const WalkParams& params,
                                int n_terms);

    std::size_t size() const noexcept { return k_nodes.size(); }
    double T(std::size_t i) const noexcept { return C[i] * C[i] + S[i] * S[i]; }
    double weight_sum() const noexcept;
};

// E_k = Omega (1 - C(k))
double eigenenergy(double k, const WalkParams& params, const SeriesBudget& budget);

// E_k - hbar*omega_c*(C^2 + S^2): eigenvalue of H_eff = H_S - hbar*omega_c a^dagger a.
double effective_eigenenergy(double k, const WalkParams& params, const BathParams& bath,
                             const SeriesBudget& budget);

struct DerivativeSeries {
    double value = 0.0;
    // Term magnitudes stop decaying with order: the b >= A regime where
    // E_k is nowhere differentiable.
    bool growth_flag = false;
};

// Order-truncated partial sum of dE_k/dk = Omega (A-1)/A sum_n (b/A)^n sin(b^n k).
DerivativeSeries eigenenergy_derivative(double k, const WalkParams& params, int order);

// p_k = (m Omega / hbar) (A-1)/A sum_n (b/A)^n sin(b^n k). Throws DomainError
// when b >= A, where the eigenvalue does not exist.
double pseudo_momentum_eigenvalue(double k, const WalkParams& params, double mass,
                                  const SeriesBudget& budget, double hbar = 1.0);

enum class ShiftKind { a, a_dagger, a_dagger_a, a_a_dagger };

// Wannier matrix element <l1| op |l2> of the truncated shift operators.
double shift_matrix_element(std::int64_t l1, std::int64_t l2, ShiftKind kind,
                            const WalkParams& params, const SeriesBudget& budget);

// |C(k) - C(bk)/A - (A-1)/A cos k|; bounded by the truncation slack 2 A^-N.
double scaling_residual(double k, const WalkParams& params, const SeriesBudget& budget);

} // namespace qlevy
