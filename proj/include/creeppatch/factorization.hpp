#pragma once

// Shared machinery for the closed-form half-line pipelines: complex panel
// quadrature on the transform line, stable hyperbolic kernels, winding-number
// bookkeeping for boundary symbols, and the sampled factorization table both
// pipelines report.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace creeppatch {

using complex_t = std::complex<double>;

// ---------------------------------------------------------------------------
// Complex-valued panel quadrature (the real-valued workhorse lives in
// quadrature.hpp; transform-line integrands are complex).
// ---------------------------------------------------------------------------

template <typename F>
complex_t integrate_panels_complex(F&& f, double a, double b, int panels,
                                   int points_per_panel = 16) {
    const QuadratureRule& rule = detail::legendre_rule(points_per_panel);
    complex_t acc{0.0, 0.0};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.size(); ++i)
            acc += 0.5 * h * rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Hyperbolic kernels, overflow-free and with the removable point handled.
// ---------------------------------------------------------------------------

// coth(pi z) for z != 0, stable for large |Re z|.
inline complex_t coth_pi(complex_t z) {
    const complex_t w = M_PI * z;
    if (w.real() >= 0.0) {
        const complex_t e = std::exp(-2.0 * w);
        return (1.0 + e) / (1.0 - e);
    }
    const complex_t e = std::exp(2.0 * w);
    return -(1.0 + e) / (1.0 - e);
}

inline double coth_pi(double s) {
    const double w = M_PI * std::abs(s);
    const double e = std::exp(-2.0 * w);
    const double c = (1.0 + e) / (1.0 - e);
    return s >= 0.0 ? c : -c;
}

// z coth(pi z): entire through z = 0 with value 1/pi; series below |z| = 1e-3
// keeps full precision where the quotient would lose digits.
inline complex_t z_coth_pi_z(complex_t z) {
    if (std::abs(z) < 1e-3) {
        const complex_t u = M_PI * M_PI * z * z;
        return (1.0 + u * (1.0 / 3.0 - u / 45.0)) / M_PI;
    }
    return z * coth_pi(z);
}

inline double z_coth_pi_z(double s) {
    if (std::abs(s) < 1e-3) {
        const double u = M_PI * M_PI * s * s;
        return (1.0 + u * (1.0 / 3.0 - u / 45.0)) / M_PI;
    }
    return s * coth_pi(s);
}

// tanh(pi z / 2), stable for large |Re z|.
inline complex_t tanh_half_pi(complex_t z) {
    const complex_t w = 0.5 * M_PI * z;
    if (w.real() >= 0.0) {
        const complex_t e = std::exp(-2.0 * w);
        return (1.0 - e) / (1.0 + e);
    }
    const complex_t e = std::exp(2.0 * w);
    return -(1.0 - e) / (1.0 + e);
}

inline double tanh_half_pi(double s) { return std::tanh(0.5 * M_PI * s); }

// ---------------------------------------------------------------------------
// Winding number of a symbol sampled along the compactified real line.
// ---------------------------------------------------------------------------

// Accumulates the unwrapped phase increment along consecutive samples and
// returns the integer winding.  Throws numeric_error when a sample comes too
// close to zero (singular symbol: no factorization exists) or when adjacent
// samples turn by more than a quarter circle (under-resolved phase, winding
// untrustworthy).
inline int winding_number(const std::vector<complex_t>& samples) {
    if (samples.size() < 3)
        throw validation_error("winding_number: need at least three samples");
    double floor_mag = std::numeric_limits<double>::infinity();
    double peak_mag = 0.0;
    for (const complex_t& v : samples) {
        const double m = std::abs(v);
        floor_mag = std::min(floor_mag, m);
        peak_mag = std::max(peak_mag, m);
    }
    if (!(floor_mag > 1e-12 * peak_mag) || !(peak_mag > 0.0))
        throw numeric_error("winding_number: symbol vanishes on the contour");
    double total = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double step = std::arg(samples[k] / samples[k - 1]);
        if (!(std::abs(step) < 0.5 * M_PI))
            throw numeric_error("winding_number: phase under-resolved between samples");
        total += step;
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

// ---------------------------------------------------------------------------
// Sampled factorization table.
// ---------------------------------------------------------------------------

// Boundary data of a Wiener-Hopf/Carleman factorization sampled on the seam:
// the normalized symbol, the two one-sided factors, and a per-sample residual
// measuring self-consistency of the boundary quadrature (dominant refinement
// error of the factor evaluation; the analytic jump identity itself is exact
// by construction, so the honest residual is the quadrature one).
struct FactorizationTable {
    std::vector<double> abscissae;
    std::vector<complex_t> symbol;
    std::vector<complex_t> plus_factor;
    std::vector<complex_t> minus_factor;
    std::vector<double> jump_residual;
    double max_jump_residual = 0.0;
    int winding = 0;
};

} // namespace creeppatch
