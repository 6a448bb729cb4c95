#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace creeppatch {

// Result of a power-law fit v ~ C * x^slope over a sample window:
// ordinary least squares on (log x, log|v|).  std_error is the classical
// slope standard error sqrt(SSR / (n-2) / Sxx); it is a stability indicator
// for data whose residuals are uncorrelated sample to sample, and an
// underestimate when the deviation from a pure power is slowly varying.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;  // log|v| = intercept + slope * log x
    double std_error = 0.0;
    int count = 0;           // samples inside the window
    double x_lo = 0.0;
    double x_hi = 0.0;
};

// Fit the log-log slope of `samples` restricted to x in [x_lo, x_hi].
// Requirements: a valid positive window, at least 8 in-window samples, and
// in-window values that are finite, nonzero, and of one sign (|v| is taken,
// so the common sign may be negative).  A sign change inside the window
// means the data is not in a clean power regime and the fit refuses.
inline SlopeFit slope_fit(const std::vector<std::pair<double, double>>& samples,
                          double x_lo, double x_hi) {
    if (!(x_lo > 0.0) || !(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
        throw validation_error("slope_fit: window must satisfy 0 < x_lo < x_hi");

    std::vector<double> us, ws;
    us.reserve(samples.size());
    ws.reserve(samples.size());
    int sign = 0;
    for (const auto& [x, v] : samples) {
        if (!(x >= x_lo) || !(x <= x_hi)) continue;
        if (!std::isfinite(v))
            throw numeric_error("slope_fit: non-finite value at x = " + std::to_string(x));
        if (v == 0.0)
            throw numeric_error("slope_fit: zero value at x = " + std::to_string(x) +
                                " inside the window");
        const int s = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign)
            throw numeric_error("slope_fit: sign change inside the window at x = " +
                                std::to_string(x));
        us.push_back(std::log(x));
        ws.push_back(std::log(std::abs(v)));
    }

    const int n = static_cast<int>(us.size());
    if (n < 8)
        throw validation_error("slope_fit: need at least 8 samples in the window, found " +
                               std::to_string(n));

    double ub = 0.0, wb = 0.0;
    for (int i = 0; i < n; ++i) { ub += us[i]; wb += ws[i]; }
    ub /= n;
    wb /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double du = us[i] - ub;
        sxx += du * du;
        sxy += du * (ws[i] - wb);
    }
    if (!(sxx > 0.0))
        throw numeric_error("slope_fit: degenerate abscissae (all x equal in window)");

    SlopeFit out;
    out.slope = sxy / sxx;
    out.intercept = wb - out.slope * ub;
    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ws[i] - (out.intercept + out.slope * us[i]);
        ssr += r * r;
    }
    out.std_error = std::sqrt(std::max(ssr, 0.0) / (n - 2) / sxx);
    out.count = n;
    out.x_lo = x_lo;
    out.x_hi = x_hi;
    return out;
}

// Convenience overload for separate abscissa/value arrays of equal length.
inline SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& vs,
                          double x_lo, double x_hi) {
    if (xs.size() != vs.size())
        throw validation_error("slope_fit: abscissa and value arrays differ in length");
    std::vector<std::pair<double, double>> samples;
    samples.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) samples.emplace_back(xs[i], vs[i]);
    return slope_fit(samples, x_lo, x_hi);
}

} // namespace creeppatch
