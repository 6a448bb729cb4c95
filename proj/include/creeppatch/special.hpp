#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "errors.hpp"

namespace creeppatch {

// Parameter pair (alpha, beta) of a Jacobi polynomial family / weight.
struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;
};

namespace detail {

// log|Gamma(x)| together with the sign of Gamma(x), valid for any real x that
// is not a non-positive integer. Needed because ultraspherical families with
// alpha < 0 produce Gamma arguments left of the origin (e.g. Gamma(-1/2)).
inline std::pair<double, int> signed_lgamma(double x) {
    if (x > 0.0) return {std::lgamma(x), 1};
    if (x == std::floor(x))
        throw numeric_error("signed_lgamma: pole at non-positive integer " + std::to_string(x));
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    const double s = std::sin(M_PI * x);
    const double lg = std::log(M_PI / std::abs(s)) - std::lgamma(1.0 - x);
    return {lg, s > 0.0 ? 1 : -1};
}

// Generalized binomial coefficient C(a, k) = Gamma(a+1) / (k! Gamma(a-k+1))
// for real a and integer k >= 0, with correct sign for negative arguments.
inline double general_binomial(double a, int k) {
    if (k < 0) return 0.0;
    if (k == 0) return 1.0;
    // Falling-factorial product is exact for the small k used here and avoids
    // Gamma poles when a-k+1 crosses non-positive integers.
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= (a - j) / (k - j);
    return prod;
}

} // namespace detail

// Jacobi polynomial P_n^{(alpha,beta)}(x).
//
// The standard three-term recurrence degenerates when its leading coefficient
// 2n(n+alpha+beta)(2n+alpha+beta-2) vanishes for some n <= degree (this
// happens for families such as alpha = beta = -3/2 at n = 3).  Those cases
// are evaluated through the terminating binomial representation
//   P_n(x) = sum_s C(n+alpha, s) C(n+beta, n-s) ((x-1)/2)^{n-s} ((x+1)/2)^s,
// which is a finite sum valid for any real parameters.
inline double jacobi_eval(const JacobiParams& p, int n, double x) {
    if (n < 0) throw validation_error("jacobi_eval: negative degree");
    const double a = p.alpha, b = p.beta;
    if (n == 0) return 1.0;

    bool recurrence_ok = true;
    for (int k = 2; k <= n; ++k) {
        const double c = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
        if (std::abs(c) < 1e-12 * std::max(1.0, static_cast<double>(k) * k)) {
            recurrence_ok = false;
            break;
        }
    }

    if (recurrence_ok) {
        long double pm1 = 1.0L;
        long double p0 = 0.5L * (a - b) + 0.5L * (a + b + 2.0L) * x;
        if (n == 1) return static_cast<double>(p0);
        for (int k = 2; k <= n; ++k) {
            const long double c0 = 2.0L * k * (k + a + b) * (2.0L * k + a + b - 2.0L);
            const long double c1 =
                (2.0L * k + a + b - 1.0L) *
                ((2.0L * k + a + b) * (2.0L * k + a + b - 2.0L) * x + a * a - b * b);
            const long double c2 = 2.0L * (k + a - 1.0L) * (k + b - 1.0L) * (2.0L * k + a + b);
            const long double pk = (c1 * p0 - c2 * pm1) / c0;
            pm1 = p0;
            p0 = pk;
        }
        return static_cast<double>(p0);
    }

    // Terminating binomial sum (degenerate-parameter fallback).
    const double xm = 0.5 * (x - 1.0);
    const double xp = 0.5 * (x + 1.0);
    double sum = 0.0;
    for (int s = 0; s <= n; ++s) {
        const double c1 = detail::general_binomial(n + a, s);
        const double c2 = detail::general_binomial(n + b, n - s);
        sum += c1 * c2 * std::pow(xm, n - s) * std::pow(xp, s);
    }
    return sum;
}

enum class ChebyshevKind { first, second };

// Chebyshev polynomial evaluated on the angular variable: T_m(cos t) = cos(mt)
// and U_m(cos t) = sin((m+1)t)/sin(t); the t -> 0 limit of the second kind is
// m+1.  Used to cross-check Jacobi ultraspherical values ("bridge" tests).
inline double chebyshev_bridge(ChebyshevKind kind, int m, double theta) {
    if (m < 0) throw validation_error("chebyshev_bridge: negative degree");
    if (kind == ChebyshevKind::first) return std::cos(m * theta);
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-12) {
        const double sign = std::cos(theta) > 0.0 ? 1.0 : ((m % 2 == 0) ? 1.0 : -1.0);
        return sign * (m + 1.0); // limits at t = 0 and t = pi
    }
    return std::sin((m + 1.0) * theta) / s;
}

// Gamma(m+a) / Gamma(m+b), stable for large m (log-space evaluation).
inline double gamma_ratio(double m, double a, double b) {
    if (m + a <= 0.0 || m + b <= 0.0) {
        auto [la, sa] = detail::signed_lgamma(m + a);
        auto [lb, sb] = detail::signed_lgamma(m + b);
        return sa * sb * std::exp(la - lb);
    }
    return std::exp(std::lgamma(m + a) - std::lgamma(m + b));
}

// Gauss hypergeometric 2F1(a, b; c; x).
//
// Supports the terminating case (a or b a non-positive integer: exact finite
// sum, any real x) and the convergent series region |x| < 1 (with the Euler
// acceleration applied for x in (0.5, 1)).  Other arguments are rejected.
inline double hyp2f1(double a, double b, double c, double x) {
    const auto is_nonpos_int = [](double v) {
        return v <= 0.0 && std::abs(v - std::round(v)) < 1e-12;
    };
    if (is_nonpos_int(c) ) {
        // Allowed only when the series terminates before the pole in c.
        const int terms_a = is_nonpos_int(a) ? static_cast<int>(-std::round(a)) : -1;
        const int terms_b = is_nonpos_int(b) ? static_cast<int>(-std::round(b)) : -1;
        const int cpole = static_cast<int>(-std::round(c));
        int nterm = -1;
        if (terms_a >= 0) nterm = terms_a;
        if (terms_b >= 0) nterm = (nterm < 0) ? terms_b : std::min(nterm, terms_b);
        if (nterm < 0 || nterm > cpole)
            throw validation_error("hyp2f1: c is a non-positive integer");
    }
    if (is_nonpos_int(a) || is_nonpos_int(b)) {
        const int n = static_cast<int>(-std::round(is_nonpos_int(a) ? a : b));
        const long double p = is_nonpos_int(a) ? b : a;
        long double term = 1.0L, sum = 1.0L;
        for (int k = 0; k < n; ++k) {
            term *= (-n + k) * (p + k) / ((c + k) * (k + 1.0L)) * x;
            sum += term;
        }
        return static_cast<double>(sum);
    }
    if (std::abs(x) >= 1.0)
        throw validation_error("hyp2f1: non-terminating series requires |x| < 1");
    if (x > 0.5) {
        // Euler transformation improves convergence near x = 1.
        return std::pow(1.0 - x, c - a - b) * hyp2f1(c - a, c - b, c, x);
    }
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 4000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * x;
        sum += term;
        if (std::abs(static_cast<double>(term)) < 1e-17 * std::abs(static_cast<double>(sum)))
            return static_cast<double>(sum);
    }
    throw numeric_error("hyp2f1: series did not converge");
}

// log Gamma(z) for complex z (principal branch), Lanczos approximation with
// reflection for Re z < 1/2.  Drives the Gamma factor of the strip kernel.
inline std::complex<double> lgamma_complex(std::complex<double> z) {
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        const std::complex<double> lp =
            std::log(M_PI) - std::log(std::sin(M_PI * z)) - lgamma_complex(1.0 - z);
        return lp;
    }
    z -= 1.0;
    std::complex<double> acc = coef[0];
    for (int i = 1; i < 9; ++i) acc += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + g + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

inline std::complex<double> gamma_complex(std::complex<double> z) {
    return std::exp(lgamma_complex(z));
}

} // namespace creeppatch
