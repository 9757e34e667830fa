// analysis.hpp: Power-law tail fits and exponent scans
//
// Fits are ordinary least squares on (ln t, ln y). The default window is
// D t in [10, 100]; earlier times are pre-asymptotic.

#pragma once

#include <utility>
#include <vector>

#include "qlevy/evolution.hpp"
#include "qlevy/observables.hpp"

namespace qlevy {

struct FitWindow {
    double t_min = 10.0;
    double t_max = 100.0;
};

struct TailFit {
    double exponent = 0.0; // xi, with y ~ t^-xi
    double intercept = 0.0;
    double r2 = 0.0;
    FitWindow fit_range;
    int points = 0;
};

// Requires >= 8 samples in the window, t_max / t_min >= 4 and y > 0 there.
TailFit tail_exponent(const ObservableSeries& series, const FitWindow& window = {});

// n points from start to stop, geometric when log_spaced.
std::vector<double> time_grid(double start, double stop, int n, bool log_spaced);

ObservableSeries purity_series(const EvolutionKernel& kernel, const std::vector<double>& times);
// chi0(t) = <l0|rho(t)|l0>; chi = chi0 - 1/(2 pi) tends to a constant, so tails are fitted on chi0.
ObservableSeries return_probability_series(const EvolutionKernel& kernel, const std::vector<double>& times);

struct XiPoint {
    double A = 0.0;
    double xi = 0.0;
    double r2 = 0.0;
    int nodes_per_axis = 0;
    bool capped = false;
};

struct ScanOptions {
    FitWindow window;
    int n_times = 16;
    ResolutionRequest request; // t_max is overwritten by window.t_max
};

// Purity tail exponent for each A, Wannier preparation, time in units of 1/D.
// The purity depends on Re F only, so r and r_c do not enter.
std::vector<XiPoint> xi_vs_A_scan(int b, const std::vector<double>& A_values,
                                  const ScanOptions& options = {});

struct TrendChange {
    double slope_below = 0.0; // mean d xi / d ln A over consecutive pairs with A < b
    double slope_above = 0.0; // same over pairs with A >= b
    bool detected = false;    // |slope_below| > 3 |slope_above|
};

// Requires at least one pair on each side of A = b.
TrendChange detect_trend_change(const std::vector<XiPoint>& scan, int b);

struct EnvelopeCheck {
    double early_max = 0.0; // max y t^p over the first half of the window
    double late_max = 0.0;  // same over the second half
    bool bounded = false;   // late_max <= (1 + slack) early_max
};

// One-sided check that y(t) stays under C t^-p across the window.
EnvelopeCheck power_envelope(const ObservableSeries& series, double p, const FitWindow& window,
                             double slack = 0.1);

} // namespace qlevy
