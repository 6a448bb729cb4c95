#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "errors.hpp"
#include "quadrature.hpp"

namespace creeppatch {

// Ageing function of the hyperbolic family phi(tau) = c0 + c1/tau, the form
// used by the worked concrete scenario.  Closed-form calculus keeps every
// time profile free of finite differencing.
struct AgingFunction {
    double c0 = 0.0;
    double c1 = 0.0;

    [[nodiscard]] bool is_zero() const { return c0 == 0.0 && c1 == 0.0; }
    [[nodiscard]] bool is_constant() const { return c1 == 0.0; }

    [[nodiscard]] double value(double tau) const {
        if (c1 == 0.0) return c0;
        if (!(tau > 0.0))
            throw validation_error("AgingFunction: 1/tau law requires positive age");
        return c0 + c1 / tau;
    }
    [[nodiscard]] double derivative(double tau) const {
        if (c1 == 0.0) return 0.0;
        if (!(tau > 0.0))
            throw validation_error("AgingFunction: 1/tau law requires positive age");
        return -c1 / (tau * tau);
    }
    [[nodiscard]] double second_derivative(double tau) const {
        if (c1 == 0.0) return 0.0;
        if (!(tau > 0.0))
            throw validation_error("AgingFunction: 1/tau law requires positive age");
        return 2.0 * c1 / (tau * tau * tau);
    }
    // int_s^t phi(tau) dtau.
    [[nodiscard]] double integral(double s, double t) const {
        if (c1 == 0.0) return c0 * (t - s);
        if (!(s > 0.0) || !(t > 0.0))
            throw validation_error("AgingFunction: 1/tau law requires positive age");
        return c0 * (t - s) + c1 * std::log(t / s);
    }
};

// One material's hereditary description: instantaneous modulus M, ageing
// function phi, relaxation rate gamma, age shift rho, and the load instant.
struct CreepLaw {
    double modulus = 1.0;      // E_i for the solids, G_0 for the glue
    AgingFunction aging;       // phi_i
    double gamma = 1.0;        // relaxation rate (1/time)
    double age_shift = 0.0;    // rho_i >= 0
    double load_instant = 0.0; // t_0

    void validate() const {
        if (!(modulus > 0.0)) throw validation_error("CreepLaw: modulus must be positive");
        if (!(gamma > 0.0)) throw validation_error("CreepLaw: gamma must be positive");
        if (age_shift < 0.0) throw validation_error("CreepLaw: age shift must be non-negative");
        if (aging.c0 < 0.0)
            throw validation_error("CreepLaw: ageing function must stay non-negative");
        if (!aging.is_constant()) {
            if (!(load_instant + age_shift > 0.0))
                throw validation_error("CreepLaw: 1/tau ageing requires positive initial age");
            if (aging.value(load_instant + age_shift) < 0.0)
                throw validation_error("CreepLaw: ageing function must stay non-negative");
        }
    }

    // mu(t) = M phi(t + rho): the dimensionless creep intensity driving every
    // time profile.
    [[nodiscard]] double mu(double t) const { return modulus * aging.value(t + age_shift); }
    [[nodiscard]] double mu_derivative(double t) const {
        return modulus * aging.derivative(t + age_shift);
    }
    [[nodiscard]] double mu_second_derivative(double t) const {
        return modulus * aging.second_derivative(t + age_shift);
    }
    // int_s^t mu(p) dp.
    [[nodiscard]] double mu_integral(double s, double t) const {
        return modulus * aging.integral(s + age_shift, t + age_shift);
    }
};

// Thin glue layer; compliance k0 is derived, never stored independently.
struct GlueLayer {
    double thickness = 1.0;     // h_0
    double shear_modulus = 1.0; // G_0

    void validate() const {
        if (!(thickness > 0.0)) throw validation_error("GlueLayer: thickness must be positive");
        if (!(shear_modulus > 0.0))
            throw validation_error("GlueLayer: shear modulus must be positive");
    }
    [[nodiscard]] double compliance() const { return thickness / shear_modulus; }
};

// Supporting plate constants; lambda is derived, never stored independently.
struct PlateConstants {
    double young = 1.0;   // E_2
    double poisson = 0.3; // nu_2

    void validate() const {
        if (!(young > 0.0)) throw validation_error("PlateConstants: Young modulus must be positive");
        if (!(poisson > 0.0 && poisson < 0.5))
            throw validation_error("PlateConstants: Poisson ratio must lie in (0, 0.5)");
    }
    [[nodiscard]] double lambda() const { return 2.0 * (1.0 - poisson * poisson) / young; }
};

// Patch constants; the stiffness profile E(x) = E_1 h_1(x) / (1 - nu_1^2).
struct PatchConstants {
    double young = 1.0;   // E_1
    double poisson = 0.3; // nu_1
    std::function<double(double)> thickness_profile = [](double) { return 1.0; };

    void validate() const {
        if (!(young > 0.0)) throw validation_error("PatchConstants: Young modulus must be positive");
        if (!(poisson > 0.0 && poisson < 1.0))
            throw validation_error("PatchConstants: Poisson ratio must lie in (0, 1)");
        if (!thickness_profile)
            throw validation_error("PatchConstants: thickness profile must be set");
    }
    [[nodiscard]] double stiffness(double x) const {
        return young * thickness_profile(x) / (1.0 - poisson * poisson);
    }
};

// Creep measure C_i(t, tau) = phi_i(tau) (1 - e^{-gamma (t - tau)}).
inline double creep_measure(const CreepLaw& law, double t, double tau) {
    if (t < tau) throw validation_error("creep_measure: causality requires t >= tau");
    if (tau < law.load_instant)
        throw validation_error("creep_measure: tau must not precede the load instant");
    return law.aging.value(tau) * (-std::expm1(-law.gamma * (t - tau)));
}

// Hereditary kernel in the adopted observation-age convention:
//   K_i(t, tau) = M gamma phi_i(t) e^{-gamma (t - tau)},
// fixed so that (I - L_i) applied to a Heaviside-in-time input produces the
// relaxation factor 1 - M phi_i(t)(1 - e^{-gamma (t - t0)}).
inline double creep_kernel(const CreepLaw& law, double t, double tau) {
    if (t < tau) throw validation_error("creep_kernel: causality requires t >= tau");
    return law.modulus * law.gamma * law.aging.value(t) * std::exp(-law.gamma * (t - tau));
}

// Diagnostic only: the literal memory-time derivative M dC/dtau, which has the
// opposite sign pattern for constant phi and is NOT the kernel the solver uses.
inline double creep_kernel_raw(const CreepLaw& law, double t, double tau) {
    if (t < tau) throw validation_error("creep_kernel_raw: causality requires t >= tau");
    const double decay = std::exp(-law.gamma * (t - tau));
    return law.modulus *
           (law.aging.derivative(tau) * (1.0 - decay) - law.gamma * law.aging.value(tau) * decay);
}

namespace detail {

// Product-integration coefficients for one step of length h against the
// exponential kernel e^{-gamma (t_right - tau)} with the density linear on
// the step:  integral = I0 * psi_left + I1 * psi_right.
// expm1-based forms stay accurate for theta = gamma h -> 0.
struct ExpStepCoeffs {
    double I0, I1;
};
inline ExpStepCoeffs exp_step_coeffs(double gamma, double h) {
    const double theta = gamma * h;
    if (theta == 0.0) return {0.5 * h, 0.5 * h};
    const double em = -std::expm1(-theta); // 1 - e^{-theta}
    const double I1 = (1.0 - em / theta) / gamma;
    const double I0 = em / gamma - I1;
    return {I0, I1};
}

} // namespace detail

// (I - L_i) psi (t): identity minus the hereditary integral, evaluated with
// the exponential factor integrated exactly on each step of a uniform grid
// (product-trapezoid; exact for psi piecewise linear on the grid).
template <typename Psi>
double apply_time_operator(const CreepLaw& law, Psi&& psi, double t, int steps = 256) {
    const double t0 = law.load_instant;
    if (t < t0) throw validation_error("apply_time_operator: t must not precede load instant");
    if (steps < 1) throw validation_error("apply_time_operator: need at least one step");
    if (t == t0) return psi(t0);

    const double h = (t - t0) / steps;
    const auto coeff = detail::exp_step_coeffs(law.gamma, h);
    // J = int_{t0}^{t} e^{-gamma (t - tau)} psi(tau) dtau.
    double J = 0.0;
    double psi_left = psi(t0);
    for (int k = 0; k < steps; ++k) {
        const double tau_right = t0 + (k + 1) * h;
        const double psi_right = psi(tau_right);
        J += std::exp(-law.gamma * (t - tau_right)) * (coeff.I0 * psi_left + coeff.I1 * psi_right);
        psi_left = psi_right;
    }
    const double mu_t = law.mu(t);
    return psi(t) - law.gamma * mu_t * J;
}

// Exact scalar resolvent of (I - L) u = g for a single exponential-ageing
// kernel gamma mu(t) e^{-gamma (t - tau)}:
//   u(t) = g(t) + gamma mu(t) int_{t0}^{t} exp(-gamma[(t-s) - (beta(t)-beta(s))]) g(s) ds,
// with beta the running integral of mu.  The integrand concentrates near
// s = t for large gamma (t - t0), so the quadrature grades toward that end.
template <typename Mu, typename Beta, typename G>
double invert_time_operator(double gamma, Mu&& mu, Beta&& beta, G&& g, double t0, double t,
                            int levels = 48) {
    if (t < t0) throw validation_error("invert_time_operator: t must not precede load instant");
    if (t == t0) return g(t0);
    const double beta_t = beta(t);
    const auto integrand = [&](double s) {
        return std::exp(-gamma * ((t - s) - (beta_t - beta(s)))) * g(s);
    };
    const double integral = integrate_graded(integrand, t0, t, /*toward_a=*/false, levels);
    return g(t) + gamma * mu(t) * integral;
}

// Exponential ageing weight alpha(t) = exp( int_{t0}^{t} gamma (1 + mu3(s)) ds )
// of the glue law, with the ageing integral in closed form.
inline double aging_weight(const CreepLaw& glue_law, double t) {
    const double t0 = glue_law.load_instant;
    if (t < t0) throw validation_error("aging_weight: t must not precede load instant");
    const double exponent = glue_law.gamma * ((t - t0) + glue_law.mu_integral(t0, t));
    return std::exp(exponent);
}

// Strip weight b(w, tau, t0) = (tau - t0)
//   + [E1 e^w psi1(tau,t0) + E2 psi2(tau,t0)] / (1 + e^w),
// psi_j the running integrals of phi_j.  Logistic factors are computed in the
// overflow-free form.
inline double strip_weight_b(double t0, double tau, double w,
                             const std::pair<CreepLaw, CreepLaw>& laws) {
    if (tau < t0) throw validation_error("strip_weight_b: tau must not precede t0");
    const double sig_plus = 1.0 / (1.0 + std::exp(-w));  // e^w/(1+e^w)
    const double sig_minus = 1.0 / (1.0 + std::exp(w));  // 1/(1+e^w)
    const double psi1 = laws.first.mu_integral(t0, tau);
    const double psi2 = laws.second.mu_integral(t0, tau);
    return (tau - t0) + sig_plus * psi1 + sig_minus * psi2;
}

} // namespace creeppatch
