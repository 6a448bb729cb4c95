#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "special.hpp"

namespace creeppatch {

// Immutable Gauss-Jacobi rule: integrates f against (1-x)^alpha (1+x)^beta
// on [-1,1] exactly for polynomial f of degree <= 2n-1.
struct QuadratureRule {
    JacobiParams params;
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // positive

    [[nodiscard]] std::size_t size() const { return nodes.size(); }

    template <typename F>
    [[nodiscard]] double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }

    [[nodiscard]] double total_weight() const {
        double acc = 0.0;
        for (double w : weights) acc += w;
        return acc;
    }
};

// Zeroth moment of the Jacobi weight: 2^{a+b+1} B(a+1, b+1).
inline double jacobi_weight_moment(const JacobiParams& p) {
    return std::exp((p.alpha + p.beta + 1.0) * std::log(2.0) + std::lgamma(p.alpha + 1.0) +
                    std::lgamma(p.beta + 1.0) - std::lgamma(p.alpha + p.beta + 2.0));
}

// Golub-Welsch construction: nodes/weights from the symmetric tridiagonal
// Jacobi matrix of the orthonormal recurrence.  Deterministic ordering
// (eigenvalues ascending).
inline QuadratureRule gauss_jacobi_rule(double alpha, double beta, int n) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw validation_error("gauss_jacobi_rule: weight exponents must exceed -1");
    if (n < 1) throw validation_error("gauss_jacobi_rule: need at least one node");

    QuadratureRule rule;
    rule.params = {alpha, beta};
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double a = alpha, b = beta;
    const double mu0 = jacobi_weight_moment(rule.params);

    if (n == 1) {
        rule.nodes[0] = (b - a) / (a + b + 2.0);
        rule.weights[0] = mu0;
        return rule;
    }

    // The eigensolve runs in extended precision: double-precision roundoff
    // in the nodes is amplified by high-degree moments and would miss the
    // advertised 1e-12 exactness at larger n.
    using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    VectorXld diag(n), sub(n - 1);
    const long double la = a, lb = b;
    diag(0) = (lb - la) / (la + lb + 2.0L);
    for (int k = 1; k < n; ++k) {
        const long double s = 2.0L * k + la + lb;
        diag(k) = (lb * lb - la * la) / (s * (s + 2.0L));
        // Off-diagonal b_k^2; the (k+a+b)/(2k+a+b-1) bracket is an exact 0/0
        // limit equal to 1 at k = 1 when a+b = -1.
        const long double bracket = (k == 1) ? 1.0L : (k + la + lb) / (s - 1.0L);
        const long double bk2 = 4.0L * k * (k + la) * (k + lb) * bracket / (s * s * (s + 1.0L));
        sub(k - 1) = std::sqrt(bk2);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw numeric_error("gauss_jacobi_rule: tridiagonal eigensolve failed");
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = static_cast<double>(es.eigenvalues()(i));
        const long double q = es.eigenvectors()(0, i);
        rule.weights[i] = static_cast<double>(mu0 * q * q);
    }
    return rule;
}

namespace detail {

// Cached Gauss-Legendre reference rule on [-1,1].
inline const QuadratureRule& legendre_rule(int points) {
    static thread_local std::vector<std::pair<int, QuadratureRule>> cache;
    for (const auto& kv : cache)
        if (kv.first == points) return kv.second;
    cache.emplace_back(points, gauss_jacobi_rule(0.0, 0.0, points));
    return cache.back().second;
}

} // namespace detail

// Composite Gauss-Legendre integration of f over [a,b] with `panels` equal
// panels of a fixed-order rule.  Workhorse for the transform-plane integrals
// where the Jacobi weight machinery does not apply.
template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, int points_per_panel = 16) {
    const QuadratureRule& rule = detail::legendre_rule(points_per_panel);
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.size(); ++i)
            acc += 0.5 * h * rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    return acc;
}

// Integration with dyadic grading toward one endpoint, for integrands with an
// integrable endpoint singularity.  The truncated tail of the grading scales
// like span^{1+p} for an x^p singularity, so the default depth resolves
// exponents down to about -0.75 at full double precision.
template <typename F>
double integrate_graded(F&& f, double a, double b, bool toward_a, int levels = 100,
                        int panels = 4) {
    double acc = 0.0;
    double span = b - a;
    for (int l = 0; l < levels; ++l) {
        const bool last = (l + 1 == levels);
        const double inner = last ? 0.0 : 0.5 * span;
        const double lo = toward_a ? a + inner : b - span;
        const double hi = toward_a ? a + span : b - inner;
        // Stop once the shell is no longer resolvable in double precision;
        // the remaining tail is below the integrable-singularity truncation
        // error already accepted by the grading.
        if (!(hi - lo > std::numeric_limits<double>::epsilon() *
                            (std::abs(lo) + std::abs(hi) + 1e-300)))
            break;
        acc += integrate_panels(f, lo, hi, panels);
        span = inner;
    }
    return acc;
}

// Principal-value moment W(x) = PV int_{-1}^{1} (1-y)^a (1+y)^b / (y-x) dy
// for x in (-1,1).  Closed forms for the weights the solver uses; a graded
// symmetric-excision quadrature otherwise.
inline double pv_weight_moment(const JacobiParams& p, double x) {
    if (!(x > -1.0 && x < 1.0))
        throw validation_error("pv_weight_moment: x must lie in (-1,1)");
    const double a = p.alpha, b = p.beta;
    const auto close = [](double u, double v) { return std::abs(u - v) < 1e-12; };
    if (close(a, 0.5) && close(b, 0.5)) return -M_PI * x;
    if (close(a, -0.5) && close(b, -0.5)) return 0.0;
    if (close(a, 0.0) && close(b, 0.0)) return std::log((1.0 - x) / (1.0 + x));
    if (close(a, 1.5) && close(b, 1.5)) return -M_PI * x * (1.5 - x * x);

    if (!(a > -1.0) || !(b > -1.0))
        throw validation_error("pv_weight_moment: weight exponents must exceed -1");

    // Subtraction against the log moment removes the pole:
    //   W(x) = w(x) log((1-x)/(1+x)) + int [w(y)-w(x)]/(y-x) dy.
    // The remaining integrand has only the endpoint weight singularities;
    // near each endpoint it is integrated in the endpoint-distance variable
    // v so that the singular power v^a (resp. v^b) is evaluated exactly.
    const auto w = [a, b](double y) { return std::pow(1.0 - y, a) * std::pow(1.0 + y, b); };
    const double wx = w(x);
    const auto g = [&](double y) {
        const double d = y - x;
        if (std::abs(d) < 1e-7) {
            const double h = 1e-5;
            return (w(x + h) - w(x - h)) / (2.0 * h);
        }
        return (w(y) - wx) / d;
    };
    const double delta = std::min(0.5, 0.5 * std::min(1.0 - x, 1.0 + x));
    const auto near_minus = [&](double v) {
        return (std::pow(2.0 - v, a) * std::pow(v, b) - wx) / (v - (1.0 + x));
    };
    const auto near_plus = [&](double v) {
        return (std::pow(v, a) * std::pow(2.0 - v, b) - wx) / ((1.0 - x) - v);
    };
    double acc = wx * std::log((1.0 - x) / (1.0 + x));
    acc += integrate_graded(near_minus, 0.0, delta, /*toward_a=*/true);
    acc += integrate_graded(near_plus, 0.0, delta, /*toward_a=*/true);
    acc += integrate_graded(g, -1.0 + delta, x, /*toward_a=*/true);
    acc += integrate_graded(g, x, 1.0 - delta, /*toward_a=*/false);
    return acc;
}

// PV int w(y) f(y) / (y-x) dy via singularity subtraction:
//   = int w(y) [f(y)-f(x)]/(y-x) dy + f(x) W(x).
// The subtracted integrand is smooth, so the Gauss-Jacobi rule applies.
template <typename F>
double cauchy_pv(F&& f, const JacobiParams& p, double x, int n = 64) {
    if (!(x > -1.0 && x < 1.0)) throw validation_error("cauchy_pv: x must lie in (-1,1)");
    static thread_local std::vector<std::pair<std::pair<JacobiParams, int>, QuadratureRule>>
        cache;
    const QuadratureRule* rule = nullptr;
    for (const auto& kv : cache)
        if (kv.first.second == n && kv.first.first.alpha == p.alpha &&
            kv.first.first.beta == p.beta)
            rule = &kv.second;
    if (!rule) {
        cache.push_back({{p, n}, gauss_jacobi_rule(p.alpha, p.beta, n)});
        rule = &cache.back().second;
    }
    const double fx = f(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule->size(); ++i) {
        const double y = rule->nodes[i];
        const double d = y - x;
        double q;
        if (std::abs(d) < 1e-9) {
            // Node essentially collides with x: use a centered derivative.
            const double h = 1e-5;
            q = (f(std::min(x + h, 1.0 - 1e-12)) - f(std::max(x - h, -1.0 + 1e-12))) /
                (2.0 * h);
        } else {
            q = (f(y) - fx) / d;
        }
        acc += rule->weights[i] * q;
    }
    return acc + fx * pv_weight_moment(p, x);
}

// Closed-form Hilbert image of the weighted ultraspherical family:
//   PV int_{-1}^1 (1-s^2)^{n-1/2} P_m^{(n-1/2,n-1/2)}(s) / (s-x) ds
//     = (-1)^n 2^{2n-1} pi P_{m+2n-1}^{(1/2-n,1/2-n)}(x).
inline double spectral_image(int n, int m, double x) {
    if (n < 1) throw validation_error("spectral_image: n must be >= 1");
    if (m < 0) throw validation_error("spectral_image: m must be >= 0");
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double scale = sign * std::ldexp(1.0, 2 * n - 1) * M_PI;
    return scale * jacobi_eval({0.5 - n, 0.5 - n}, m + 2 * n - 1, x);
}

} // namespace creeppatch
