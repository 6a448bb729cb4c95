#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "errors.hpp"

namespace creeppatch {

// A-priori endpoint classification for the transfer density when the patch
// stiffness profile vanishes like x^omega at a patch end.  The density phi
// behaves like x^alpha there; the classifier reports what is knowable about
// alpha from omega alone, without solving anything:
//
//   omega > 2        -> alpha is pinned to the single value omega - 1;
//   0 <= omega <= 2  -> alpha lies somewhere in the closed interval [0, 1]
//                       (its exact location depends on the full problem, cf.
//                       the half-line solver's transcendental root);
//   half-integer omega = n + 1/2 with n in {0, 1}
//                    -> the interval is open: the endpoints 0 and 1 are
//                       excluded for proper half-integer profiles.
//
// The traction q = phi' then decays one power lower (x^{alpha-1}).  This
// module never fits exponents from computed data; empirical slope estimation
// lives in fitting.hpp.
enum class ExponentKind { point, interval, open_interval };

struct ExponentClass {
    ExponentKind kind = ExponentKind::point;
    double value = 0.0;  // populated when kind == point
    double lower = 0.0;  // populated for the interval kinds
    double upper = 0.0;

    // Membership with the boundary semantics of the kind: closed for
    // `interval`, strict for `open_interval`, tolerant equality for `point`.
    [[nodiscard]] bool contains(double alpha) const {
        switch (kind) {
            case ExponentKind::point:
                return std::abs(alpha - value) <= 1e-12 * std::max(1.0, std::abs(value));
            case ExponentKind::interval:
                return lower <= alpha && alpha <= upper;
            case ExponentKind::open_interval:
                return lower < alpha && alpha < upper;
        }
        return false;
    }
};

// Classify the density exponent class for a stiffness profile ~ x^omega.
// omega = 2 sits on the boundary of the two regimes; it belongs to the
// interval branch (the weight class is continuous from below there).
inline ExponentClass classify(double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw validation_error(
            "classify: stiffness exponent must be a finite real >= 0, got " +
            std::to_string(omega));
    ExponentClass out;
    if (omega > 2.0) {
        out.kind = ExponentKind::point;
        out.value = omega - 1.0;
        out.lower = out.upper = out.value;
    } else {
        out.kind = ExponentKind::interval;
        out.lower = 0.0;
        out.upper = 1.0;
        out.value = 0.0;
    }
    return out;
}

// Refinement for half-integer profiles x^{n + 1/2}, n >= 0 integer.  For
// n >= 2 this agrees with classify(n + 1/2); for n in {0, 1} the generic
// closed interval sharpens to the open one.
inline ExponentClass classify_half_integer(int n) {
    if (n < 0)
        throw validation_error(
            "classify_half_integer: n must be a nonnegative integer, got " +
            std::to_string(n));
    ExponentClass out;
    if (n >= 2) {
        out.kind = ExponentKind::point;
        out.value = static_cast<double>(n) - 0.5;
        out.lower = out.upper = out.value;
    } else {
        out.kind = ExponentKind::open_interval;
        out.lower = 0.0;
        out.upper = 1.0;
        out.value = 0.0;
    }
    return out;
}

// Render a class the way the CLI prints it: "point 2", "interval 0 1",
// "open-interval 0 1".  Numbers use shortest-round-trip-friendly %g.
inline std::string describe(const ExponentClass& cls) {
    char buf[96];
    switch (cls.kind) {
        case ExponentKind::point:
            std::snprintf(buf, sizeof(buf), "point %.12g", cls.value);
            break;
        case ExponentKind::interval:
            std::snprintf(buf, sizeof(buf), "interval %.12g %.12g", cls.lower, cls.upper);
            break;
        case ExponentKind::open_interval:
            std::snprintf(buf, sizeof(buf), "open-interval %.12g %.12g", cls.lower, cls.upper);
            break;
        default:
            buf[0] = '\0';
    }
    return std::string(buf);
}

} // namespace creeppatch
