// analysis.cpp: Tail fits, exponent scans and envelope checks

#include "qlevy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlevy/errors.hpp"

namespace qlevy {

namespace {

bool in_window(double t, const FitWindow& w)
{
    const double slack = 1e-12;
    return t >= w.t_min * (1.0 - slack) && t <= w.t_max * (1.0 + slack);
}

} // namespace

TailFit tail_exponent(const ObservableSeries& series, const FitWindow& window)
{
    series.validate();
    if (!(window.t_min > 0.0) || window.t_max < 4.0 * window.t_min) {
        throw ParameterError("tail_exponent: window needs t_min > 0 and t_max / t_min >= 4");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        if (!in_window(series.times[i], window)) continue;
        if (!(series.values[i] > 0.0)) {
            std::ostringstream msg;
            msg << "tail_exponent: non-positive value " << series.values[i] << " at t=" << series.times[i];
            throw DomainError(msg.str());
        }
        x.push_back(std::log(series.times[i]));
        y.push_back(std::log(series.values[i]));
    }
    if (x.size() < 8) throw ParameterError("tail_exponent: fewer than 8 points in the fit window");

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
    TailFit fit;
    const double slope = sxy / sxx;
    fit.exponent = -slope;
    fit.intercept = my - slope * mx;
    const double ss_res = std::max(0.0, syy - slope * sxy);
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.fit_range = window;
    fit.points = static_cast<int>(x.size());
    return fit;
}

std::vector<double> time_grid(double start, double stop, int n, bool log_spaced)
{
    if (n < 1) throw ParameterError("time_grid: n must be >= 1");
    if (!(start >= 0.0) || stop < start) throw ParameterError("time_grid: need 0 <= start <= stop");
    if (log_spaced && !(start > 0.0)) throw ParameterError("time_grid: log spacing needs start > 0");
    std::vector<double> t(static_cast<std::size_t>(n));
    if (n == 1) {
        t[0] = start;
        return t;
    }
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        t[static_cast<std::size_t>(i)] =
            log_spaced ? start * std::pow(stop / start, u) : start + (stop - start) * u;
    }
    t.front() = start;
    t.back() = stop;
    return t;
}

ObservableSeries purity_series(const EvolutionKernel& kernel, const std::vector<double>& times)
{
    ObservableSeries s;
    s.times = times;
    s.values.reserve(times.size());
    for (double t : times) s.values.push_back(purity(kernel, t));
    s.meta["observable"] = "purity";
    return s;
}

ObservableSeries return_probability_series(const EvolutionKernel& kernel, const std::vector<double>& times)
{
    ObservableSeries s;
    s.times = times;
    s.values.reserve(times.size());
    for (double t : times) s.values.push_back(localized_correlation(kernel, t).chi0);
    s.meta["observable"] = "chi0";
    return s;
}

std::vector<XiPoint> xi_vs_A_scan(int b, const std::vector<double>& A_values, const ScanOptions& options)
{
    const auto times = time_grid(options.window.t_min, options.window.t_max, options.n_times, true);
    ResolutionRequest request = options.request;
    request.t_max = options.window.t_max;
    std::vector<XiPoint> out;
    out.reserve(A_values.size());
    for (double A : A_values) {
        const WalkParams walk(A, b);
        const auto kernel =
            EvolutionKernel::build(walk, KernelRates::dimensionless(0.0, 0.0), PureWannier{0}, request);
        const TailFit fit = tail_exponent(purity_series(kernel, times), options.window);
        out.push_back({A, fit.exponent, fit.r2, kernel.report().nodes_per_axis, kernel.report().capped});
    }
    return out;
}

TrendChange detect_trend_change(const std::vector<XiPoint>& scan, int b)
{
    std::vector<XiPoint> sorted = scan;
    std::sort(sorted.begin(), sorted.end(), [](const XiPoint& l, const XiPoint& r) { return l.A < r.A; });
    double below = 0.0;
    double above = 0.0;
    int n_below = 0;
    int n_above = 0;
    const double bb = static_cast<double>(b);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double slope = (sorted[i].xi - sorted[i - 1].xi) / std::log(sorted[i].A / sorted[i - 1].A);
        if (sorted[i].A < bb) {
            below += slope;
            ++n_below;
        } else {
            above += slope;
            ++n_above;
        }
    }
    if (n_below == 0 || n_above == 0) {
        throw ParameterError("detect_trend_change: need consecutive A pairs on both sides of b");
    }
    TrendChange tc;
    tc.slope_below = below / n_below;
    tc.slope_above = above / n_above;
    tc.detected = std::abs(tc.slope_below) > 3.0 * std::abs(tc.slope_above);
    return tc;
}

EnvelopeCheck power_envelope(const ObservableSeries& series, double p, const FitWindow& window, double slack)
{
    series.validate();
    const double t_mid = std::sqrt(window.t_min * window.t_max);
    EnvelopeCheck check;
    bool early_seen = false;
    bool late_seen = false;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        if (!in_window(t, window)) continue;
        const double scaled = series.values[i] * std::pow(t, p);
        if (t <= t_mid) {
            check.early_max = early_seen ? std::max(check.early_max, scaled) : scaled;
            early_seen = true;
        } else {
            check.late_max = late_seen ? std::max(check.late_max, scaled) : scaled;
            late_seen = true;
        }
    }
    if (!early_seen || !late_seen) throw ParameterError("power_envelope: window must cover both halves");
    check.bounded = check.late_max <= (1.0 + slack) * check.early_max;
    return check;
}

} // namespace qlevy
