// main.cpp: qlevy command-line front end
//
// Each subcommand writes one CSV table (header row, fixed column order) and,
// with --out, a PATH.manifest.json holding the argument list and every
// resolved parameter. `qlevy replay MANIFEST` re-runs a manifest.
//
// Time is in units of 1/D and energies in units of hbar D (D = 1, hbar = 1);
// r = (Omega/hbar)/D and rc = omega_c/D.
//
// Exit codes: 0 success, 2 invalid parameters, 3 undefined/divergent quantity
// or unresolved quadrature, 1 anything else.

#include <qlevy/analysis.hpp>
#include <qlevy/bath.hpp>
#include <qlevy/classical.hpp>
#include <qlevy/errors.hpp>
#include <qlevy/evolution.hpp>
#include <qlevy/observables.hpp>
#include <qlevy/spectral.hpp>
#include <qlevy/weierstrass.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "output.hpp"

#ifndef QLEVY_VERSION
#define QLEVY_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace qlevy;
using cli::Table;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Args {
    int b = 1;
    double A = 2.0;
    double r = 1.0;
    double rc = 0.0;
    std::string prep = "wannier";
    std::int64_t l0 = 0;
    double kc = std::numbers::pi / 4.0;
    std::string t_grid = "0:10:11";
    std::int64_t l_window = 0;
    int quad_points = 0;
    int series_terms = 0;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    std::string out;

    int n_k = 1024;
    std::int64_t samples = 1'000'000;
    int bins = 200;
    bool half_zone = false;
    std::string fit;
    double D = 1.0;
    std::int64_t k_samples = std::int64_t{1} << 18;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& s, const char* what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ParameterError(std::string("cannot parse ") + what + ": '" + s + "'");
    return v;
}

// start:stop:n[:log]
std::vector<double> parse_t_grid(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
        throw ParameterError("--t-grid expects start:stop:n[:log], got '" + text + "'");
    }
    const double start = parse_double(parts[0], "--t-grid start");
    const double stop = parse_double(parts[1], "--t-grid stop");
    const double n = parse_double(parts[2], "--t-grid n");
    if (n < 1 || n != std::floor(n)) throw ParameterError("--t-grid n must be a positive integer");
    return time_grid(start, stop, static_cast<int>(n), parts.size() == 4);
}

FitWindow parse_window(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ParameterError("--fit expects t_min:t_max, got '" + text + "'");
    return {parse_double(parts[0], "--fit t_min"), parse_double(parts[1], "--fit t_max")};
}

Preparation preparation(const Args& a)
{
    if (a.prep == "wannier") return PureWannier{a.l0};
    if (a.prep == "fourier") return coherent_fourier(a.kc);
    throw ParameterError("--prep must be wannier or fourier");
}

json walk_json(const Args& a)
{
    return {{"b", a.b}, {"A", a.A}};
}

json kernel_json(const EvolutionKernel& k)
{
    const auto& rep = k.report();
    json j = {{"nodes_per_axis", rep.nodes_per_axis},
              {"panels", rep.panels},
              {"points_per_panel", k.grid().points_per_panel},
              {"series_terms", rep.series_terms},
              {"frequency_terms", rep.frequency_terms},
              {"highest_frequency", rep.highest_frequency},
              {"aliasing_bound", rep.aliasing_bound},
              {"capped", rep.capped}};
    if (!rep.warning.empty()) j["warning"] = rep.warning;
    return j;
}

EvolutionKernel build_kernel(const Args& a, const std::vector<double>& times, std::int64_t l_max, json& manifest)
{
    const WalkParams walk(a.A, a.b);
    ResolutionRequest req;
    req.t_max = times.empty() ? 0.0 : times.back();
    req.l_max = l_max;
    req.tol = a.tol;
    req.fixed_nodes = a.quad_points;
    req.series_terms = a.series_terms;
    auto kernel = EvolutionKernel::build(walk, KernelRates::dimensionless(a.r, a.rc), preparation(a), req);
    if (kernel.report().capped) std::cerr << "warning: " << kernel.report().warning << '\n';
    manifest["parameters"] = walk_json(a);
    manifest["parameters"]["r"] = a.r;
    manifest["parameters"]["rc"] = a.rc;
    manifest["parameters"]["D"] = 1.0;
    manifest["parameters"]["prep"] = a.prep;
    if (a.prep == "wannier") manifest["parameters"]["l0"] = a.l0;
    else manifest["parameters"]["kc"] = a.kc;
    manifest["parameters"]["tol"] = a.tol;
    manifest["parameters"]["t_grid"] = a.t_grid;
    manifest["resolution"] = kernel_json(kernel);
    return kernel;
}

Table cmd_eigenenergy(const Args& a, json& m)
{
    if (a.n_k < 1) throw ParameterError("--n-k must be >= 1");
    const auto model = dimensionless_model(a.A, a.b, a.r, a.rc);
    SeriesBudget budget = SeriesBudget::automatic(model.walk, a.tol);
    if (a.series_terms > 0) budget.n_terms = a.series_terms;
    Table t{{"k", "E_k", "E_eff_k"}, {}};
    for (int i = 0; i < a.n_k; ++i) {
        const double k = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 1) / a.n_k;
        t.rows.push_back({k, eigenenergy(k, model.walk, budget), effective_eigenenergy(k, model.walk, model.bath, budget)});
    }
    m["parameters"] = walk_json(a);
    m["parameters"]["r"] = a.r;
    m["parameters"]["rc"] = a.rc;
    m["parameters"]["n_k"] = a.n_k;
    m["resolution"] = {{"series_terms", budget.n_terms}, {"truncation_bound", budget.truncation_bound(model.walk)}};
    return t;
}

Table cmd_dos(const Args& a, json& m)
{
    const WalkParams walk(a.A, a.b);
    SeriesBudget budget = SeriesBudget::automatic(walk, a.tol);
    if (a.series_terms > 0) budget.n_terms = a.series_terms;
    const DosEstimate est = dos_estimate(walk, budget, a.samples, a.bins, a.seed, a.half_zone);
    Table t{{"E", "density"}, {}};
    for (std::size_t i = 0; i < est.density.size(); ++i) {
        t.rows.push_back({0.5 * (est.bin_edges[i] + est.bin_edges[i + 1]), est.density[i]});
    }
    std::cerr << "regime: " << to_string(est.regime) << '\n';
    m["parameters"] = walk_json(a);
    m["parameters"]["samples"] = a.samples;
    m["parameters"]["bins"] = a.bins;
    m["parameters"]["seed"] = a.seed;
    m["parameters"]["half_zone"] = a.half_zone;
    m["regime"] = to_string(est.regime);
    m["resolution"] = {{"series_terms", budget.n_terms}, {"truncation_bound", budget.truncation_bound(walk)}};
    return t;
}

Table cmd_profile(const Args& a, json& m)
{
    const auto times = parse_t_grid(a.t_grid);
    const std::int64_t half = a.l_window > 0 ? a.l_window : 32;
    const auto kernel = build_kernel(a, times, half, m);
    m["parameters"]["l_window"] = half;
    const auto sites = window_sites(kernel, half);
    Table t{{"l", "t", "P"}, {}};
    for (double time : times) {
        const auto P = site_profile(kernel, sites, time);
        for (std::size_t s = 0; s < sites.size(); ++s) {
            t.rows.push_back({static_cast<double>(sites[s]), time, P[s]});
        }
    }
    return t;
}

Table cmd_chi(const Args& a, json& m)
{
    const auto times = parse_t_grid(a.t_grid);
    const auto kernel = build_kernel(a, times, 0, m);
    Table t{{"t", "chi", "chi0"}, {}};
    for (double time : times) {
        const auto c = localized_correlation(kernel, time);
        t.rows.push_back({time, c.chi, c.chi0});
    }
    return t;
}

Table cmd_purity(const Args& a, json& m)
{
    const auto times = parse_t_grid(a.t_grid);
    const auto kernel = build_kernel(a, times, 0, m);
    const ObservableSeries series = purity_series(kernel, times);
    Table t{{"t", "purity"}, {}};
    for (std::size_t i = 0; i < times.size(); ++i) t.rows.push_back({times[i], series.values[i]});
    if (!a.fit.empty()) {
        const TailFit fit = tail_exponent(series, parse_window(a.fit));
        m["tail_fit"] = {{"exponent", fit.exponent},
                         {"intercept", fit.intercept},
                         {"r2", fit.r2},
                         {"t_min", fit.fit_range.t_min},
                         {"t_max", fit.fit_range.t_max},
                         {"points", fit.points}};
        std::cerr << "tail exponent: " << cli::format_number(fit.exponent) << " (r2 "
                  << cli::format_number(fit.r2) << ")\n";
    }
    return t;
}

Table cmd_moments(const Args& a, json& m)
{
    if (a.prep != "wannier") throw ParameterError("moments requires --prep wannier");
    if (a.b > 1 && a.b >= a.A) {
        throw DivergenceError("second moment is infinite for b >= A (b=" + std::to_string(a.b) + ")");
    }
    const auto times = parse_t_grid(a.t_grid);
    const std::int64_t half = a.l_window > 0 ? a.l_window : 64;
    const auto kernel = build_kernel(a, times, half, m);
    m["parameters"]["l_window"] = half;
    LatticeSumOptions opt;
    opt.half_width = half;
    Table t{{"t", "q2_closed", "q2_quadrature", "mean_position"}, {}};
    for (double time : times) {
        double closed = nan;
        try {
            closed = second_moment_closed(kernel.walk(), kernel.rates(), a.l0, time);
        } catch (const DomainError&) {
        }
        t.rows.push_back({time, closed, second_moment_quadrature(kernel, time, opt), mean_position(kernel, time, opt)});
    }
    return t;
}

Table cmd_classical(const Args& a, json& m)
{
    const auto times = parse_t_grid(a.t_grid);
    const ClassicalWalk walk(a.D);
    Table t{{"t", "P0"}, {}};
    for (double time : times) t.rows.push_back({time, classical_localized_probability(time, walk)});
    m["parameters"] = {{"D", a.D}, {"t_grid", a.t_grid}};
    return t;
}

Table cmd_boxdim(const Args& a, json& m)
{
    const WalkParams walk(a.A, a.b);
    SeriesBudget budget = SeriesBudget::automatic(walk, a.tol);
    if (a.series_terms > 0) budget.n_terms = a.series_terms;
    const auto res = box_counting_dimension(walk, budget, a.k_samples);
    if (res.poor_fit) std::cerr << "warning: box-count fit r2 " << cli::format_number(res.fit_r2) << " < 0.99\n";
    const auto mu = walk.mu();
    Table t{{"D_est", "r2", "mu", "predicted"}, {}};
    t.rows.push_back({res.dimension, res.fit_r2, mu ? *mu : nan, mu ? 2.0 - *mu : nan});
    m["parameters"] = walk_json(a);
    m["parameters"]["k_samples"] = a.k_samples;
    m["resolution"] = {{"series_terms", budget.n_terms}, {"scales", res.scales}, {"counts", res.counts}};
    return t;
}

void error_line(const char* kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

int run(std::vector<std::string> argv_in);

int replay(const std::string& manifest_file, const std::string& out)
{
    std::ifstream in(manifest_file);
    if (!in) throw ParameterError("cannot read manifest " + manifest_file);
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed manifest: ") + e.what());
    }
    if (!m.contains("args") || !m.contains("output")) throw ParameterError("manifest lacks args/output");
    std::vector<std::string> args = {"qlevy"};
    for (const auto& v : m["args"]) args.push_back(v.get<std::string>());
    const auto target = out.empty()
        ? (std::filesystem::path(manifest_file).parent_path() / m["output"].get<std::string>()).string()
        : out;
    args.push_back("--out");
    args.push_back(target);
    return run(args);
}

int run(std::vector<std::string> argv_in)
{
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"qlevy: quantum Weierstrass walk observables as CSV"};
    app.set_version_flag("--version", QLEVY_VERSION);
    app.require_subcommand(1);
    Args a;

    auto add_walk = [&](CLI::App* sc) {
        sc->add_option("--b", a.b, "Weierstrass jump base b >= 1")->capture_default_str();
        sc->add_option("--A", a.A, "Weierstrass weight base A > 1")->capture_default_str();
        sc->add_option("--tol", a.tol, "series truncation / quadrature tolerance")->capture_default_str();
        sc->add_option("--series-terms", a.series_terms, "override the lacunary truncation order");
        sc->add_option("--out", a.out, "output CSV path (manifest at PATH.manifest.json); stdout if absent");
    };
    auto add_dynamics = [&](CLI::App* sc) {
        add_walk(sc);
        sc->add_option("--r", a.r, "(Omega/hbar)/D")->capture_default_str();
        sc->add_option("--rc", a.rc, "omega_c/D")->capture_default_str();
        sc->add_option("--prep", a.prep, "initial state: wannier | fourier")->capture_default_str();
        sc->add_option("--l0", a.l0, "Wannier site")->capture_default_str();
        sc->add_option("--kc", a.kc, "Fourier block edge, 0 < kc <= pi")->capture_default_str();
        sc->add_option("--t-grid", a.t_grid, "times start:stop:n[:log], units of 1/D")->capture_default_str();
        sc->add_option("--quad-points", a.quad_points, "fixed Gauss-Legendre nodes per axis (0: planner)");
    };

    auto* eig = app.add_subcommand("eigenenergy", "columns k,E_k,E_eff_k (E in units of hbar D)");
    add_walk(eig);
    eig->add_option("--r", a.r, "(Omega/hbar)/D > 0")->capture_default_str();
    eig->add_option("--rc", a.rc, "omega_c/D")->capture_default_str();
    eig->add_option("--n-k", a.n_k, "number of k points on (-pi, pi]")->capture_default_str();

    auto* dos = app.add_subcommand("dos", "columns E,density (E in units of Omega, bins over [0, 2])");
    add_walk(dos);
    dos->add_option("--samples", a.samples, "number of k samples")->capture_default_str();
    dos->add_option("--bins", a.bins, "number of energy bins")->capture_default_str();
    dos->add_option("--seed", a.seed, "sampling seed")->capture_default_str();
    dos->add_flag("--half-zone", a.half_zone, "sample k on (0, pi] only");

    auto* prof = app.add_subcommand("profile", "columns l,t,P");
    add_dynamics(prof);
    prof->add_option("--l-window", a.l_window, "half-width of the site window (default 32)");

    auto* chi = app.add_subcommand("chi", "columns t,chi,chi0 (Wannier preparation)");
    add_dynamics(chi);

    auto* pur = app.add_subcommand("purity", "columns t,purity; --fit adds a tail fit to the manifest");
    add_dynamics(pur);
    pur->add_option("--fit", a.fit, "tail-fit window t_min:t_max");

    auto* mom = app.add_subcommand("moments", "columns t,q2_closed,q2_quadrature,mean_position");
    add_dynamics(mom);
    mom->add_option("--l-window", a.l_window, "half-width of the lattice sum (default 64)");

    auto* cls = app.add_subcommand("classical", "columns t,P0 for the classical nearest-neighbour walk");
    cls->add_option("--D", a.D, "hop rate")->capture_default_str();
    cls->add_option("--t-grid", a.t_grid, "times start:stop:n[:log]")->capture_default_str();
    cls->add_option("--out", a.out, "output CSV path");

    auto* box = app.add_subcommand("boxdim", "columns D_est,r2,mu,predicted");
    add_walk(box);
    box->add_option("--k-samples", a.k_samples, "graph samples (>= 65536)")->capture_default_str();

    std::string manifest_file;
    auto* rep = app.add_subcommand("replay", "re-run a manifest");
    rep->add_option("manifest", manifest_file, "PATH.manifest.json")->required();
    rep->add_option("--out", a.out, "output path (default: the manifest's output next to it)");

    std::vector<std::string> reversed(argv_in.rbegin(), argv_in.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_line("parameter", e.what());
        return 2;
    }

    if (rep->parsed()) return replay(manifest_file, a.out);

    json manifest = {{"tool", "qlevy"}, {"version", QLEVY_VERSION}};
    std::vector<std::string> recorded;
    for (std::size_t i = 1; i < argv_in.size(); ++i) {
        if (argv_in[i] == "--out") {
            ++i;
            continue;
        }
        if (argv_in[i].rfind("--out=", 0) == 0) continue;
        recorded.push_back(argv_in[i]);
    }
    manifest["args"] = recorded;

    Table table;
    CLI::App* cmd = app.get_subcommands().front();
    manifest["command"] = cmd->get_name();
    if (cmd == eig) table = cmd_eigenenergy(a, manifest);
    else if (cmd == dos) table = cmd_dos(a, manifest);
    else if (cmd == prof) table = cmd_profile(a, manifest);
    else if (cmd == chi) table = cmd_chi(a, manifest);
    else if (cmd == pur) table = cmd_purity(a, manifest);
    else if (cmd == mom) table = cmd_moments(a, manifest);
    else if (cmd == cls) table = cmd_classical(a, manifest);
    else table = cmd_boxdim(a, manifest);

    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cli::emit(table, a.out, manifest);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(std::vector<std::string>(argv, argv + argc));
    } catch (const ParameterError& e) {
        error_line("parameter", e.what());
        return 2;
    } catch (const DivergenceError& e) {
        error_line("divergence", e.what());
        return 3;
    } catch (const DomainError& e) {
        error_line("domain", e.what());
        return 3;
    } catch (const ResolutionError& e) {
        error_line("resolution", e.what());
        return 3;
    } catch (const std::exception& e) {
        error_line("internal", e.what());
        return 1;
    }
}
