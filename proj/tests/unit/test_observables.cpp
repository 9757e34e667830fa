#include <gtest/gtest.h>

#include <qlevy/errors.hpp>
#include <qlevy/evolution.hpp>
#include <qlevy/observables.hpp>

#include <cmath>
#include <numbers>

using namespace qlevy;

namespace {

constexpr double pi = std::numbers::pi;

EvolutionKernel wannier(double A, int b, double r, double rc, std::int64_t l0, double t_max, std::int64_t l_max)
{
    ResolutionRequest req;
    req.t_max = t_max;
    req.l_max = l_max;
    return EvolutionKernel::build(WalkParams(A, b), KernelRates::dimensionless(r, rc), PureWannier{l0}, req);
}

} // namespace

TEST(SiteProbability, PureStateAtTimeZero)
{
    const auto k = wannier(3.0, 2, 1.0, 0.5, 5, 1.0, 10);
    EXPECT_NEAR(site_probability(k, 5, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(site_probability(k, 6, 0.0), 0.0, 1e-12);
    EXPECT_NEAR(site_probability(k, -3, 0.0), 0.0, 1e-12);
}

TEST(SiteProbability, ReflectionSymmetry)
{
    for (int b : {1, 2, 4}) {
        const auto k = wannier(b == 4 ? 2.0 : 3.0, b, 1.0, 0.5, 2, 3.0, 20);
        for (std::int64_t dl = 1; dl <= 20; dl += 3) {
            EXPECT_NEAR(site_probability(k, 2 + dl, 3.0), site_probability(k, 2 - dl, 3.0), 1e-12) << "b=" << b;
        }
    }
}

TEST(SiteProbability, NearestNeighbourIncoherentLimitIsBessel)
{
    // r = 0, b = 1: F = -2D (1 - cos(k1 - k2)), so chi0 = e^{-2Dt} I_0(2Dt).
    const auto k = wannier(1e6, 1, 0.0, 0.0, 0, 20.0, 0);
    for (double t : {0.1, 1.0, 5.0, 20.0}) {
        const double expected = std::exp(-2 * t) * std::cyl_bessel_i(0.0, 2 * t);
        EXPECT_NEAR(localized_correlation(k, t).chi0, expected, 1e-9) << t;
    }
}

TEST(SiteProbability, ProfileMatchesPointwise)
{
    const auto k = wannier(3.0, 2, 1.0, 0.5, 0, 2.0, 8);
    const auto sites = window_sites(k, 8);
    const auto P = site_profile(k, sites, 2.0);
    for (std::size_t s = 0; s < sites.size(); ++s) {
        // Direct double sum, no matrix product.
        std::complex<double> acc = 0.0;
        const auto& g = k.grid();
        for (std::size_t i = 0; i < k.size(); ++i) {
            for (std::size_t j = 0; j < k.size(); ++j) {
                acc += g.weights[i] * g.weights[j] * std::exp(k.exponent(i, j) * 2.0) *
                       std::polar(1.0, (g.nodes[i] - g.nodes[j]) * static_cast<double>(sites[s]));
            }
        }
        EXPECT_NEAR(P[s], acc.real() / (4 * pi * pi), 1e-13);
    }
}

TEST(SiteProbability, CoherentInitialProfile)
{
    const double kc = pi / 4;
    ResolutionRequest req;
    req.l_max = 60;
    const auto k = EvolutionKernel::build(WalkParams(2.0, 1), KernelRates::dimensionless(1.0, 0.5), coherent_fourier(kc), req);
    EXPECT_NEAR(site_probability(k, 0, 0.0), kc / (2 * pi), 1e-13);
    for (std::int64_t l : {-60, -7, 1, 3, 8, 59}) {
        const double x = static_cast<double>(l);
        EXPECT_NEAR(site_probability(k, l, 0.0), (1 - std::cos(kc * x)) / (pi * kc * x * x), 1e-13) << l;
    }
}

TEST(LocalizedCorrelation, DefinitionAndLimits)
{
    const auto k = wannier(3.0, 2, 1.0, 0.5, 0, 50.0, 0);
    const auto c0 = localized_correlation(k, 0.0);
    EXPECT_NEAR(c0.chi0, 1.0, 1e-12);
    EXPECT_NEAR(c0.chi, 1.0 - 1.0 / (2 * pi), 1e-12);
    const auto late = localized_correlation(k, 50.0);
    EXPECT_GE(late.chi0, 0.0);
    EXPECT_LT(late.chi0, 0.2);
    EXPECT_NEAR(late.chi0, site_probability(k, 0, 50.0), 1e-12);

    ResolutionRequest req;
    const auto coh = EvolutionKernel::build(WalkParams(3.0, 2), KernelRates::dimensionless(1, 0), coherent_fourier(1.0), req);
    EXPECT_THROW(localized_correlation(coh, 1.0), ParameterError);
}

TEST(Purity, ThreeRoutesAgree)
{
    for (const auto& [A, b] : std::vector<std::pair<double, int>>{{2.0, 1}, {3.0, 2}, {2.0, 4}}) {
        const auto k = wannier(A, b, 1.0, 0.5, 0, 10.0, 0);
        for (double t : {0.0, 0.3, 3.0, 10.0}) {
            const double p = purity(k, t);
            EXPECT_NEAR(purity_rescaled(k, t), p, 1e-12);
            EXPECT_NEAR(purity_direct(k, t), p, 1e-12);
        }
    }
}

TEST(Purity, NearestNeighbourBessel)
{
    const auto k = wannier(1e6, 1, 1.0, 0.0, 0, 30.0, 0);
    for (double t : {0.5, 3.0, 30.0}) {
        EXPECT_NEAR(purity(k, t), std::exp(-4 * t) * std::cyl_bessel_i(0.0, 4 * t), 1e-9);
    }
}

TEST(Purity, CoherentPreparationStartsPure)
{
    ResolutionRequest req;
    req.t_max = 5.0;
    const auto k = EvolutionKernel::build(WalkParams(3.0, 2), KernelRates::dimensionless(1, 0.5), coherent_fourier(pi / 4), req);
    EXPECT_NEAR(purity(k, 0.0), 1.0, 1e-12);
    EXPECT_LT(purity(k, 5.0), 1.0);
}

TEST(SecondMoment, ClosedFormBranches)
{
    const auto rates = KernelRates::dimensionless(1.0, 0.5);
    EXPECT_NEAR(second_moment_closed(WalkParams(2.0, 1), rates, 3, 2.0), 0.5 * 4 + 2 * 2 + 9, 1e-12);
    EXPECT_THROW(second_moment_closed(WalkParams(2.0, 4), rates, 0, 1.0), DivergenceError);
    EXPECT_THROW(second_moment_closed(WalkParams(2.0, 2), rates, 0, 1.0), DomainError);
    EXPECT_THROW(second_moment_spectral(WalkParams(2.0, 4), rates, 0, 1.0), DivergenceError);
}

TEST(SecondMoment, ClosedFormMatchesSpectralWithoutCutoff)
{
    // With omega_c = 0 the printed b < A form and the exact moment coincide.
    const auto rates = KernelRates::dimensionless(1.3, 0.0);
    for (const auto& [A, b] : std::vector<std::pair<double, int>>{{3.0, 2}, {5.0, 2}, {10.0, 3}}) {
        const WalkParams p(A, b);
        for (double t : {0.5, 2.0}) {
            EXPECT_NEAR(second_moment_closed(p, rates, 1, t), second_moment_spectral(p, rates, 1, t), 1e-12);
        }
    }
}

TEST(SecondMoment, LatticeSumMatchesClosedFormNearestNeighbour)
{
    const auto k = wannier(1e6, 1, 1.0, 0.5, -2, 4.0, 80);
    LatticeSumOptions opt;
    opt.half_width = 80;
    for (double t : {0.25, 1.0, 4.0}) {
        const double closed = second_moment_closed(k.walk(), k.rates(), -2, t);
        EXPECT_NEAR(second_moment_quadrature(k, t, opt) / closed, 1.0, 1e-9);
    }
}

TEST(SecondMoment, LatticeSumMatchesSpectralLevy)
{
    // A = 5: probability at distance 2^n falls like 25^-n, so a +-256 window holds the moment.
    const auto k = wannier(5.0, 2, 1.0, 0.5, 0, 1.0, 256);
    LatticeSumOptions opt;
    opt.half_width = 256;
    const auto rep = second_moment_report(k, 1.0, opt);
    ASSERT_TRUE(rep.spectral.has_value());
    EXPECT_LT(*rep.spectral_relative_error, 1e-5);
    EXPECT_NEAR(mean_position(k, 1.0, opt), 0.0, 1e-10);
}

TEST(SecondMoment, WindowOverflowIsReported)
{
    const auto k = wannier(2.0, 1, 1.0, 0.0, 0, 50.0, 8);
    LatticeSumOptions opt;
    opt.half_width = 8;
    EXPECT_THROW(second_moment_quadrature(k, 50.0, opt), WindowOverflowError);
}

TEST(RateSum, Branches)
{
    EXPECT_DOUBLE_EQ(dissipative_rate_sum(WalkParams(2.0, 1), 0.5), 1.0);
    EXPECT_NEAR(dissipative_rate_sum(WalkParams(3.0, 2), 0.5), 0.8, 1e-15);
    EXPECT_THROW(dissipative_rate_sum(WalkParams(3.0, 4), 0.5), DivergenceError);
    EXPECT_THROW(dissipative_rate_sum(WalkParams(2.0, 2), 0.5), DivergenceError);
}

TEST(PseudoMomentum, CoherentMeanAndSecondMoment)
{
    const WalkParams nn(3.0, 1, 2.0);
    const auto budget = SeriesBudget::automatic(nn, 1e-15);
    EXPECT_NEAR(mean_pseudo_momentum_coherent(nn, 1.5, pi / 4, budget), 1.5 * 2.0 * (1 - std::cos(pi / 4)) / (pi / 4), 1e-13);
    // Defined even where the eigenvalue is not.
    const WalkParams crit(2.0, 4);
    EXPECT_GT(mean_pseudo_momentum_coherent(crit, 1.0, pi / 4, SeriesBudget::automatic(crit, 1e-12)), 0.0);

    const WalkParams p(3.0, 2);
    SeriesBudget pb;
    pb.n_terms = 8; // highest frequency 128, resolved by the grid below
    const auto grid = QuadratureGrid::brillouin_zone(64, 16);
    double expected = 0.0;
    for (int n = 0; n < pb.n_terms; ++n) expected += 0.5 * std::pow(2.0 / 3.0 * std::pow(2.0 / 3.0, n), 2);
    EXPECT_NEAR(pseudo_momentum_second_moment(p, 1.0, pb, grid), expected, 1e-12);
    EXPECT_THROW(pseudo_momentum_second_moment(crit, 1.0, pb, grid), DomainError);
}

TEST(ObservableSeries, Validation)
{
    ObservableSeries s{{1.0, 2.0}, {0.5, 0.4}, {}};
    EXPECT_NO_THROW(s.validate());
    s.times = {2.0, 1.0};
    EXPECT_THROW(s.validate(), ParameterError);
    s.times = {1.0};
    EXPECT_THROW(s.validate(), ParameterError);
    s = {{1.0, 2.0}, {0.5, std::nan("")}, {}};
    EXPECT_THROW(s.validate(), ParameterError);
}
