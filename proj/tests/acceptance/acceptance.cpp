// acceptance.cpp: End-to-end acceptance checks, one PASS/FAIL line each
//
// Usage: qlevy_acceptance [--cli PATH] [--work DIR]
// Exit status is the number of failed checks.

#include <qlevy/analysis.hpp>
#include <qlevy/classical.hpp>
#include <qlevy/errors.hpp>
#include <qlevy/evolution.hpp>
#include <qlevy/observables.hpp>
#include <qlevy/spectral.hpp>
#include <qlevy/weierstrass.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qlevy;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void run(int id, const std::string& title, const std::function<void(Outcome&)>& body)
{
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("criterion %2d: %s | %s | %.2fs |%s\n", id, out.pass ? "PASS" : "FAIL", title.c_str(), secs,
                out.detail.str().c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// |sum_n w_n (e^{i b^n k1} - e^{i b^n k2})|^2 expanded as a double sum, long double.
long double direct_double_sum(double k1, double k2, const WalkParams& walk, int n_terms)
{
    long double total = 0.0L;
    for (int n = 0; n < n_terms; ++n) {
        const long double fn = std::pow(static_cast<long double>(walk.b()), n);
        for (int m = 0; m < n_terms; ++m) {
            const long double fm = std::pow(static_cast<long double>(walk.b()), m);
            const long double ww = static_cast<long double>(walk.weight(n)) * walk.weight(m);
            total += ww * (std::cos((fn - fm) * k1) + std::cos((fn - fm) * k2) - 2.0L * std::cos(fn * k1 - fm * k2));
        }
    }
    return total;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

int main(int argc, char** argv)
{
    std::string cli;
    std::filesystem::path work = std::filesystem::temp_directory_path() / "qlevy_acceptance";
    for (int i = 1; i + 1 < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cli") cli = argv[++i];
        else if (a == "--work") work = argv[++i];
    }

    run(1, "nearest-neighbour closed forms", [](Outcome& o) {
        const auto t0 = std::chrono::steady_clock::now();
        const WalkParams walk(3.0, 1, 1.7);
        const SeriesBudget budget = SeriesBudget::automatic(walk, 1e-13);
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double k = -pi + 2.0 * pi * i / 2000.0;
            worst = std::max(worst, std::abs(eigenenergy(k, walk, budget) - walk.Omega() * (1.0 - std::cos(k))));
        }
        const DosEstimate dos = dos_estimate(walk, budget, 1'000'000, 200, 7);
        const double l1 = dos_nn_l1_distance(dos, walk.Omega());
        const double secs = seconds_since(t0);
        o.detail << " max|E_k - Omega(1-cos k)| = " << worst << "; DOS L1 = " << l1
                 << " (1e6 samples, 200 bins); normalization - 1 = " << dos.normalization() - 1.0;
        o.require(worst <= 1e-10, "eigenenergy within 1e-10");
        o.require(l1 < 0.02, "L1 < 0.02");
        o.require(std::abs(dos.normalization() - 1.0) <= 1e-9, "DOS normalization");
        o.require(secs < 10.0, "runtime < 10 s");
    });

    run(2, "shift-operator algebra", [](Outcome& o) {
        double worst = 0.0;
        double product = 0.0;
        for (const auto& [A, b] : std::vector<std::pair<double, int>>{{3.0, 2}, {2.0, 4}, {5.0, 3}, {2.0, 1}}) {
            const WalkParams walk(A, b);
            const SeriesBudget budget = SeriesBudget::automatic(walk, 1e-12);
            // Intermediate sites reachable by one hop from l1, enumerated per scale.
            std::vector<std::int64_t> hops;
            for (int n = 0; n < budget.n_terms; ++n) {
                const double f = std::pow(static_cast<double>(b), n);
                if (f > 1e15) break;
                hops.push_back(static_cast<std::int64_t>(f));
                if (b == 1) break;
            }
            for (std::int64_t l1 = -64; l1 <= 64; ++l1) {
                for (std::int64_t l2 = -64; l2 <= 64; ++l2) {
                    double aad = 0.0;
                    double ada = 0.0;
                    for (std::int64_t h : hops) {
                        for (std::int64_t l : {l1 - h, l1 + h}) {
                            aad += shift_matrix_element(l1, l, ShiftKind::a, walk, budget) *
                                   shift_matrix_element(l, l2, ShiftKind::a_dagger, walk, budget);
                            ada += shift_matrix_element(l1, l, ShiftKind::a_dagger, walk, budget) *
                                   shift_matrix_element(l, l2, ShiftKind::a, walk, budget);
                        }
                    }
                    const double direct = shift_matrix_element(l1, l2, ShiftKind::a_a_dagger, walk, budget) -
                                          shift_matrix_element(l1, l2, ShiftKind::a_dagger_a, walk, budget);
                    worst = std::max({worst, std::abs(aad - ada), std::abs(direct)});
                    product = std::max(product, std::abs(aad - shift_matrix_element(l1, l2, ShiftKind::a_a_dagger, walk, budget)));
                }
            }
        }
        const WalkParams walk(3.0, 2);
        const SeriesBudget budget = SeriesBudget::automatic(walk, 1e-14);
        const double diag = shift_matrix_element(5, 5, ShiftKind::a_dagger_a, walk, budget);
        const double expected = (3.0 - 1.0) / (3.0 + 1.0);
        o.detail << " max|[a, a+]| on 129^2 window = " << worst << "; max|(a a+) by hops - a a+| = " << product << "; <l|a+a|l>(b=2,A=3) - 1/2 = "
                 << diag - expected;
        o.require(worst <= 1e-12, "commutator within truncation tolerance");
        o.require(product <= 1e-12, "hop product matches a a+ element");
        o.require(std::abs(diag - expected) <= 1e-10, "diagonal a+a");
    });

    run(3, "kernel identities", [](Outcome& o) {
        double diag = 0.0;
        double max_re = -1.0;
        double collapse = 0.0;
        const int n_terms = 12;
        for (const auto& [b, A] : std::vector<std::pair<int, double>>{{1, 2.0}, {2, 3.0}, {2, 4.0}, {4, 2.0}}) {
            const WalkParams walk(A, b);
            ResolutionRequest req;
            req.fixed_nodes = 256;
            req.series_terms = n_terms;
            const auto kernel = EvolutionKernel::build(walk, KernelRates::dimensionless(1.0, 0.5), PureWannier{0}, req);
            for (std::size_t i = 0; i < kernel.size(); ++i) {
                diag = std::max(diag, std::abs(kernel.exponent(i, i)));
                for (std::size_t j = 0; j < kernel.size(); ++j) {
                    max_re = std::max(max_re, kernel.exponent(i, j).real());
                }
            }
            for (std::size_t i = 0; i < kernel.size(); i += 7) {
                for (std::size_t j = 0; j < kernel.size(); j += 5) {
                    const double k1 = kernel.grid().nodes[i];
                    const double k2 = kernel.grid().nodes[j];
                    const double collapsed = -kernel.exponent(i, j).real();
                    const auto direct =
                        static_cast<double>(direct_double_sum(k1, k2, walk, kernel.report().frequency_terms));
                    collapse = std::max(collapse, std::abs(collapsed - direct));
                }
            }
        }
        o.detail << " max|F(k,k)| = " << diag << "; max Re F = " << max_re
                 << "; max|collapse - direct double sum| = " << collapse;
        o.require(diag == 0.0, "F(k,k) == 0");
        o.require(max_re <= 0.0, "Re F <= 0");
        o.require(collapse <= 1e-12, "collapse identity 1e-12");
    });

    run(4, "dynamics invariants", [](Outcome& o) {
        const WalkParams nn(2.0, 1);
        const WalkParams levy(3.0, 2);
        const auto rates = KernelRates::dimensionless(1.0, 0.5);

        double drift = 0.0;
        double herm = 0.0;
        for (const auto& walk : {nn, levy, WalkParams(2.0, 4)}) {
            ResolutionRequest req;
            req.t_max = 5.0;
            const auto kernel = EvolutionKernel::build(walk, rates, PureWannier{3}, req);
            for (double k : {-2.9, -1.0, 0.0, 0.4, 1.3, 3.0}) {
                const auto r0 = rho_kernel(kernel, k, k, 0.0);
                for (double t : {0.5, 5.0, 50.0}) drift = std::max(drift, std::abs(rho_kernel(kernel, k, k, t) - r0));
                for (double k2 : {-0.7, 0.9, 2.2}) {
                    herm = std::max(herm, std::abs(rho_kernel(kernel, k, k2, 2.0) - std::conj(rho_kernel(kernel, k2, k, 2.0))));
                }
            }
        }

        double norm_err = 0.0;
        for (const auto& walk : {nn, levy}) {
            for (double t : {0.25, 1.0, 4.0}) {
                ResolutionRequest req;
                req.t_max = t;
                req.l_max = 128;
                const auto kernel = EvolutionKernel::build(walk, rates, PureWannier{0}, req);
                norm_err = std::max(norm_err, std::abs(total_probability(kernel, t, 128) - 1.0));
            }
        }
        {
            ResolutionRequest req;
            req.t_max = 2.0;
            req.l_max = 1024;
            const auto kernel = EvolutionKernel::build(nn, rates, coherent_fourier(pi / 4.0), req);
            norm_err = std::max(norm_err, std::abs(total_probability(kernel, 2.0, 1024) - 1.0));
        }

        double purity0 = 0.0;
        double rise = 0.0;
        for (const auto& walk : {nn, levy, WalkParams(2.0, 4)}) {
            ResolutionRequest req;
            req.t_max = 20.0;
            const auto kernel = EvolutionKernel::build(walk, rates, PureWannier{0}, req);
            purity0 = std::max(purity0, std::abs(purity(kernel, 0.0) - 1.0));
            double prev = purity(kernel, 0.0);
            for (double t : time_grid(0.01, 20.0, 40, true)) {
                const double p = purity(kernel, t);
                rise = std::max(rise, p - prev);
                prev = p;
            }
        }

        BathParams closed_bath = BathParams::physical(0.0, 1.0, 1.0, 0.3);
        double unitary = 0.0;
        for (const auto& walk : {nn, levy}) {
            ResolutionRequest req;
            req.t_max = 50.0;
            const auto kernel = EvolutionKernel::build(walk, closed_bath, PureWannier{0}, req);
            for (double t : {0.0, 1.0, 10.0, 50.0}) unitary = std::max(unitary, std::abs(purity(kernel, t) - 1.0));
        }

        o.detail << " diagonal drift = " << drift << "; hermiticity = " << herm << "; |sum P - 1| = " << norm_err
                 << "; |purity(0) - 1| = " << purity0 << "; max purity rise = " << rise
                 << "; alpha=0 |purity - 1| = " << unitary;
        o.require(drift <= 1e-14, "rho_kk constant");
        o.require(herm <= 1e-14, "hermiticity");
        o.require(norm_err <= 1e-3, "normalization");
        o.require(purity0 <= 1e-12, "purity(0) = 1");
        o.require(rise <= 1e-12, "purity non-increasing");
        o.require(unitary <= 1e-12, "alpha = 0 keeps purity at 1");
    });

    run(5, "asymptotic exponents", [](Outcome& o) {
        const FitWindow window{10.0, 100.0};
        const auto times = time_grid(10.0, 100.0, 16, true);
        const WalkParams nn(2.0, 1);
        ResolutionRequest req;
        req.t_max = 100.0;

        auto t0 = std::chrono::steady_clock::now();
        const auto k_pur = EvolutionKernel::build(nn, KernelRates::dimensionless(1.0, 0.0), PureWannier{0}, req);
        const TailFit pur = tail_exponent(purity_series(k_pur, times), window);
        const double t_pur = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const auto k_coh = EvolutionKernel::build(nn, KernelRates::dimensionless(2.0, 0.0), PureWannier{0}, req);
        const TailFit chi_r = tail_exponent(return_probability_series(k_coh, times), window);
        const double t_chi_r = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const auto k_inc = EvolutionKernel::build(nn, KernelRates::dimensionless(0.0, 0.0), PureWannier{0}, req);
        const TailFit chi_0 = tail_exponent(return_probability_series(k_inc, times), window);
        const double t_chi_0 = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const ClassicalWalk cw(1.0);
        ObservableSeries p0;
        p0.times = time_grid(10.0, 1000.0, 24, true);
        for (double t : p0.times) p0.values.push_back(classical_localized_probability(t, cw));
        const TailFit cl = tail_exponent(p0, {10.0, 1000.0});
        const double t_cl = seconds_since(t0);

        o.detail << " purity xi = " << pur.exponent << " (" << t_pur << "s); chi0 slope r=2 = " << -chi_r.exponent
                 << " (" << t_chi_r << "s); chi0 slope r=0 = " << -chi_0.exponent << " (" << t_chi_0
                 << "s); classical P0 slope = " << -cl.exponent << " (" << t_cl << "s)";
        o.require(std::abs(pur.exponent - 0.5) <= 0.05, "purity 0.5 +- 0.05");
        o.require(std::abs(chi_r.exponent - 1.0) <= 0.05, "chi slope -1 +- 0.05");
        o.require(std::abs(chi_0.exponent - 0.5) <= 0.05, "chi slope -0.5 +- 0.05");
        o.require(std::abs(cl.exponent - 0.5) <= 0.02, "classical slope -0.5 +- 0.02");
        o.require(std::max({t_pur, t_chi_r, t_chi_0, t_cl}) < 120.0, "each run < 2 min");
    });

    run(6, "second moment", [](Outcome& o) {
        const auto rates = KernelRates::dimensionless(1.0, 0.5);
        double worst = 0.0;
        const WalkParams nn(2.0, 1);
        for (double t : {0.25, 1.0, 4.0}) {
            ResolutionRequest req;
            req.t_max = t;
            req.l_max = 96;
            const auto kernel = EvolutionKernel::build(nn, rates, PureWannier{2}, req);
            LatticeSumOptions opt;
            opt.half_width = 96;
            const auto rep = second_moment_report(kernel, t, opt);
            worst = std::max(worst, *rep.closed_relative_error);
        }
        o.detail << " b=1 max relative error closed vs lattice = " << worst << ";";
        o.require(worst < 1e-4, "b=1 relative error < 1e-4");

        const WalkParams levy(3.0, 2);
        for (double t : {0.25, 1.0, 4.0}) {
            ResolutionRequest req;
            req.t_max = t;
            req.l_max = 256;
            const auto kernel = EvolutionKernel::build(levy, rates, PureWannier{0}, req);
            LatticeSumOptions opt;
            opt.half_width = 256;
            opt.tail_tolerance = 1e-4;
            const auto rep = second_moment_report(kernel, t, opt);
            o.detail << " (b=2,A=3,t=" << t << ") printed=" << *rep.closed << " lattice=" << rep.lattice
                     << " spectral=" << *rep.spectral << " rel(printed)=" << *rep.closed_relative_error
                     << " rel(spectral)=" << *rep.spectral_relative_error << ";";
        }
    });

    run(7, "moment thresholds", [](Outcome& o) {
        const BathParams bath = BathParams::physical(0.37, 2.5, 1.3, 0.0);
        const double unit = pi * bath.alpha / (bath.beta * bath.hbar);
        const double nn = dissipative_rate_sum(WalkParams(2.0, 1), bath);
        const double levy = dissipative_rate_sum(WalkParams(3.0, 2), bath);
        o.detail << " b=1: " << nn / unit << " x pi alpha/beta hbar; (2,3): " << levy / unit << " x pi alpha/beta hbar;";
        o.require(std::abs(nn / unit - 1.0) <= 4e-16, "b=1 branch");
        o.require(std::abs(levy / unit - 0.8) <= 4e-16, "(2,3) branch");
        bool diverged = false;
        try {
            dissipative_rate_sum(WalkParams(2.0, 3), bath);
        } catch (const DivergenceError&) {
            diverged = true;
        }
        o.require(diverged, "b > A raises DivergenceError");
        const WalkParams showcase(3.0, 2);
        const bool classical = classical_weierstrass_moment_finite(showcase);
        const bool quantum = quantum_moment_finite(showcase);
        o.detail << " (2,3): classical finite=" << classical << ", quantum finite=" << quantum;
        o.require(!classical && quantum, "classical and quantum criteria disagree at (2,3)");
        o.require(classical_weierstrass_moment_finite(WalkParams(5.0, 2)), "(2,5) classical finite");
    });

    run(8, "box-counting dimension", [](Outcome& o) {
        for (const auto& [b, expected] : std::vector<std::pair<int, double>>{{4, 1.5}, {8, 5.0 / 3.0}}) {
            const auto t0 = std::chrono::steady_clock::now();
            const WalkParams walk(2.0, b);
            const auto res = box_counting_dimension(walk, SeriesBudget::automatic(walk, 1e-10));
            const double secs = seconds_since(t0);
            o.detail << " b=" << b << ": D=" << res.dimension << " (expected " << expected << ", r2=" << res.fit_r2
                     << ", " << secs << "s);";
            o.require(std::abs(res.dimension - expected) <= 0.15, "dimension within 0.15");
            o.require(secs < 60.0, "runtime < 1 min");
        }
    });

    run(9, "coherent preparation", [](Outcome& o) {
        const double kc = pi / 4.0;
        const auto rates = KernelRates::dimensionless(1.0, 0.5);
        ResolutionRequest req;
        req.t_max = 5.0;
        req.l_max = 512;

        const auto qrw = EvolutionKernel::build(WalkParams(2.0, 1), rates, coherent_fourier(kc), req);
        double worst = 0.0;
        for (std::int64_t l = -40; l <= 40; ++l) {
            const double x = static_cast<double>(l);
            const double expected = l == 0 ? kc / (2.0 * pi) : (1.0 - std::cos(kc * x)) / (pi * kc * x * x);
            worst = std::max(worst, std::abs(site_probability(qrw, l, 0.0) - expected));
        }
        o.detail << " t=0 profile max error = " << worst << ";";
        o.require(worst <= 1e-10, "t=0 profile");

        LatticeSumOptions opt;
        opt.half_width = 512;
        opt.tail_tolerance = 1e-3;
        auto drift = [&](const EvolutionKernel& kernel) {
            const auto times = time_grid(0.0, 5.0, 6, false);
            double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
            for (double t : times) {
                const double x = mean_position(kernel, t, opt);
                st += t;
                sx += x;
                stt += t * t;
                stx += t * x;
            }
            const double n = static_cast<double>(times.size());
            return (n * stx - st * sx) / (n * stt - st * st);
        };
        const double v_qrw = drift(qrw);
        const double v_pred = rates.coherent * (1.0 - std::cos(kc)) / kc;
        const auto qlw = EvolutionKernel::build(WalkParams(3.0, 2), rates, coherent_fourier(kc), req);
        const double v_qlw = drift(qlw);
        const WalkParams levy(3.0, 2);
        const double v_qlw_pred = mean_pseudo_momentum_coherent(levy, 1.0, kc, SeriesBudget::automatic(levy, 1e-12));
        o.detail << " QRW drift = " << v_qrw << " vs predicted " << v_pred << " (rel " << std::abs(v_qrw / v_pred - 1.0)
                 << "); QLW drift = " << v_qlw << " (pseudo-momentum term alone " << v_qlw_pred << ")";
        o.require(std::abs(v_qrw / v_pred - 1.0) <= 0.05, "QRW drift within 5%");
        o.require(v_qlw > v_qrw, "QLW faster than QRW");
    });

    run(10, "CLI determinism", [&](Outcome& o) {
        if (cli.empty()) {
            o.require(false, "no --cli path given");
            return;
        }
        std::filesystem::create_directories(work);
        const auto a = work / "run_a";
        const auto b = work / "run_b";
        const auto c = work / "run_c";
        const std::vector<std::string> cmds = {
            "purity --b 2 --A 3 --t-grid 0.1:10:12:log",
            "profile --b 2 --A 3 --r 1 --rc 0.5 --prep fourier --kc 0.7853981633974483 --t-grid 0:4:3 --l-window 40",
            "dos --b 2 --A 4 --samples 200000 --bins 100 --seed 11",
        };
        int idx = 0;
        for (const auto& cmd : cmds) {
            const std::string name = "out" + std::to_string(idx++) + ".csv";
            for (const auto& dir : {a, b}) {
                std::filesystem::create_directories(dir);
                const std::string line = "\"" + cli + "\" " + cmd + " --out \"" + (dir / name).string() + "\"";
                o.require(std::system(line.c_str()) == 0, "cli run: " + cmd);
            }
            const std::string replay = "\"" + cli + "\" replay \"" + (a / (name + ".manifest.json")).string() +
                                       "\" --out \"" + (std::filesystem::create_directories(c), c / name).string() + "\"";
            o.require(std::system(replay.c_str()) == 0, "manifest replay: " + cmd);
            const auto ra = read_file(a / name);
            o.require(!ra.empty(), "non-empty CSV");
            o.require(ra == read_file(b / name), "identical args give identical CSV: " + cmd);
            o.require(ra == read_file(c / name), "manifest replay gives identical CSV: " + cmd);
            o.detail << " " << name << ": " << ra.size() << " bytes;";
        }
    });

    std::printf("acceptance: %d failure(s)\n", failures);
    return failures;
}
