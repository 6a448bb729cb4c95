#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "field.hpp"
#include "material.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace creeppatch {

// ---------------------------------------------------------------------------
// Basis selection.
//
// The load-transfer density is expanded as
//     phi'(t,x) = sum_k X_k(t) (1-x^2)^a P_k^{(a,a)}(x),   k = 1..N,
// with a = 1/2 for a square-root contact edge and a = 3/2 for the smoother
// edge forced by a stiffness profile E(x) = (1-x^2)^{5/2} b0(x).  The
// primitive follows termwise from
//     int_{-1}^{x} (1-y^2)^a P_k^{(a,a)}(y) dy
//         = -(1/2k) (1-x^2)^{a+1} P_{k-1}^{(a+1,a+1)}(x),
// so phi(t,+-1) = 0 holds identically for every truncation.
// ---------------------------------------------------------------------------

enum class Ansatz { square_root, three_halves };

[[nodiscard]] inline double basis_exponent(Ansatz a) {
    return a == Ansatz::square_root ? 0.5 : 1.5;
}

// Galerkin test functions are P_{m+1}^{(c,c)} with c = a - 1: the family in
// which the finite-part image of the basis is diagonal.
[[nodiscard]] inline double test_exponent(Ansatz a) {
    return a == Ansatz::square_root ? -0.5 : 0.5;
}

// ---------------------------------------------------------------------------
// Stiffness profile E(x) = (1-x^2)^{exponent} * b0(x) of the patch,
// E(x) = E_1 h_1(x) / (1 - nu_1^2).  The degeneracy exponent is declared, not
// inferred: the solver needs it to pick integration weights and to reject
// ansatz/profile combinations whose coupling integrals do not exist.
// ---------------------------------------------------------------------------

struct StiffnessProfile {
    double exponent = 0.0;                  // endpoint degeneracy power
    double constant = 1.0;                  // b0 when no profile callback set
    std::function<double(double)> factor;   // optional smooth positive b0(x)

    [[nodiscard]] double b0(double x) const { return factor ? factor(x) : constant; }

    [[nodiscard]] double value(double x) const {
        return std::pow(1.0 - x * x, exponent) * b0(x);
    }

    void validate() const {
        if (!std::isfinite(exponent) || exponent < 0.0)
            throw validation_error("StiffnessProfile: exponent must be finite and >= 0");
        for (double x : {0.0, -0.6, 0.6, -0.95, 0.95}) {
            const double b = b0(x);
            if (!std::isfinite(b) || b <= 0.0)
                throw validation_error("StiffnessProfile: b0(x) must be finite and positive");
        }
    }
};

// ---------------------------------------------------------------------------
// Applied shear profile q0(x) on the patch face and its principal-value
// transform H[q0](x) = PV int q0(y)/(y-x) dy.  The semicircle profile carries
// its transform in closed form; polynomials and custom profiles fall back to
// singularity-subtraction quadrature.
// ---------------------------------------------------------------------------

struct ForcingProfile {
    enum class Kind { semicircle, polynomial, custom };

    Kind kind = Kind::semicircle;
    double amplitude = 0.0;                // semicircle: q0 = amplitude sqrt(1-x^2)
    std::vector<double> coefficients;      // polynomial: q0 = sum_j c_j x^j
    std::function<double(double)> value_fn;       // custom profile
    std::function<double(double)> derivative_fn;  // custom profile slope
    std::function<double(double)> hilbert_fn;     // optional closed-form transform

    [[nodiscard]] double value(double x) const {
        switch (kind) {
            case Kind::semicircle:
                return amplitude * std::sqrt(std::max(0.0, 1.0 - x * x));
            case Kind::polynomial: {
                double acc = 0.0;
                for (std::size_t j = coefficients.size(); j-- > 0;)
                    acc = acc * x + coefficients[j];
                return acc;
            }
            case Kind::custom:
                return value_fn(x);
        }
        return 0.0;
    }

    // dq0/dx; for the semicircle this is endpoint-singular and is only ever
    // evaluated at interior quadrature nodes.
    [[nodiscard]] double derivative(double x) const {
        switch (kind) {
            case Kind::semicircle:
                return -amplitude * x / std::sqrt(std::max(1e-300, 1.0 - x * x));
            case Kind::polynomial: {
                double acc = 0.0;
                for (std::size_t j = coefficients.size(); j-- > 1;)
                    acc = acc * x + static_cast<double>(j) * coefficients[j];
                return acc;
            }
            case Kind::custom:
                return derivative_fn(x);
        }
        return 0.0;
    }

    [[nodiscard]] double hilbert(double x) const {
        switch (kind) {
            case Kind::semicircle:
                // PV int sqrt(1-y^2)/(y-x) dy = -pi x on (-1,1).
                return -kPi * amplitude * x;
            case Kind::polynomial:
                return cauchy_pv([this](double y) { return value(y); },
                                 JacobiParams{0.0, 0.0}, x,
                                 static_cast<int>(coefficients.size()) + 8);
            case Kind::custom:
                if (hilbert_fn) return hilbert_fn(x);
                return cauchy_pv([this](double y) { return value_fn(y); },
                                 JacobiParams{0.0, 0.0}, x, 96);
        }
        return 0.0;
    }

    [[nodiscard]] bool vanishes() const {
        switch (kind) {
            case Kind::semicircle:
                return amplitude == 0.0;
            case Kind::polynomial:
                return std::all_of(coefficients.begin(), coefficients.end(),
                                   [](double c) { return c == 0.0; });
            case Kind::custom:
                return false;
        }
        return true;
    }

    void validate() const {
        switch (kind) {
            case Kind::semicircle:
                if (!std::isfinite(amplitude))
                    throw validation_error("ForcingProfile: amplitude must be finite");
                break;
            case Kind::polynomial:
                for (double c : coefficients)
                    if (!std::isfinite(c))
                        throw validation_error("ForcingProfile: coefficients must be finite");
                break;
            case Kind::custom:
                if (!value_fn || !derivative_fn)
                    throw validation_error(
                        "ForcingProfile: custom profiles need value and derivative callbacks");
                break;
        }
    }

private:
    static constexpr double kPi = 3.14159265358979323846;
};

// ---------------------------------------------------------------------------
// Full problem statement for the finite patch.
// ---------------------------------------------------------------------------

struct ProblemConfig {
    PlateConstants plate;
    PatchConstants patch;
    GlueLayer glue;

    CreepLaw patch_law;   // intensity E_1 phi_1
    CreepLaw plate_law;   // intensity E_2 phi_2
    CreepLaw glue_law;    // intensity G_0 phi_3

    ForcingProfile forcing;
    StiffnessProfile stiffness;

    double load_instant = 0.0;
    std::vector<double> time_grid;          // starts at load_instant, increasing
    Ansatz ansatz = Ansatz::square_root;
    int truncation = 12;

    [[nodiscard]] double lambda() const { return plate.lambda(); }
    [[nodiscard]] double compliance() const { return glue.compliance(); }

    void validate() const {
        plate.validate();
        patch.validate();
        glue.validate();
        patch_law.validate();
        plate_law.validate();
        glue_law.validate();
        forcing.validate();
        stiffness.validate();

        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b)) + 1e-300;
        };
        if (!close(patch_law.modulus, patch.young))
            throw validation_error("ProblemConfig: patch law modulus must equal E_1");
        if (!close(plate_law.modulus, plate.young))
            throw validation_error("ProblemConfig: plate law modulus must equal E_2");
        if (!close(glue_law.modulus, glue.shear_modulus))
            throw validation_error("ProblemConfig: glue law modulus must equal G_0");
        for (const CreepLaw* law : {&patch_law, &plate_law, &glue_law})
            if (!close(law->load_instant, load_instant))
                throw validation_error(
                    "ProblemConfig: all creep laws must share the load instant");

        if (time_grid.empty())
            throw validation_error("ProblemConfig: time grid must not be empty");
        if (!close(time_grid.front(), load_instant))
            throw validation_error("ProblemConfig: time grid must start at the load instant");
        for (std::size_t i = 1; i < time_grid.size(); ++i)
            if (!(time_grid[i] > time_grid[i - 1]))
                throw validation_error("ProblemConfig: time grid must increase strictly");

        if (truncation < 1)
            throw validation_error("ProblemConfig: truncation must be at least 1");

        if (ansatz == Ansatz::three_halves && stiffness.exponent != 2.5)
            throw validation_error(
                "ProblemConfig: the three-halves ansatz is tied to a stiffness profile "
                "(1-x^2)^{5/2} b0(x)");
        if (ansatz == Ansatz::square_root && stiffness.exponent >= 2.5)
            throw validation_error(
                "ProblemConfig: stiffness degeneracy (1-x^2)^{5/2} is outside the "
                "square-root ansatz; select the three-halves ansatz");

        // The declared profile and the patch constants must describe the same
        // stiffness; two sources of truth are accepted only when they agree.
        for (double x : {0.0, -0.3, 0.3, -0.77, 0.77}) {
            const double a = stiffness.value(x);
            const double b = patch.stiffness(x);
            if (std::abs(a - b) > 1e-6 * (std::abs(a) + std::abs(b)))
                throw validation_error(
                    "ProblemConfig: stiffness profile disagrees with patch constants");
        }
    }
};

// ---------------------------------------------------------------------------
// Solution containers.
// ---------------------------------------------------------------------------

struct SpectralSolution {
    Ansatz ansatz = Ansatz::square_root;
    std::vector<double> times;
    Eigen::MatrixXd coefficients;       // truncation x times.size()
    std::vector<double> residuals;      // relative residual of each solve
    double condition = 0.0;             // 1-norm condition estimate of the elastic matrix
    std::vector<std::string> warnings;

    [[nodiscard]] int truncation() const { return static_cast<int>(coefficients.rows()); }
};

// ---------------------------------------------------------------------------
// Coupling matrices.
// ---------------------------------------------------------------------------

enum class CouplingMatrix { R1, R2, R3, R4 };

namespace detail {

inline const QuadratureRule& cached_rule(double alpha, double beta, int n) {
    thread_local std::map<std::tuple<double, double, int>, QuadratureRule> cache;
    auto key = std::make_tuple(alpha, beta, n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, gauss_jacobi_rule(alpha, beta, n)).first;
    return it->second;
}

// Normalisation constant of the Chebyshev bridge, Gamma(j+1/2)/(sqrt(pi) Gamma(j+1)).
inline double chebyshev_constant(int j) {
    return gamma_ratio(j, 0.5, 1.0) / std::sqrt(3.14159265358979323846);
}

} // namespace detail

// Diagonal glue weight of mode m: the finite-part image of the second
// derivative of basis element m against its own test function.
[[nodiscard]] inline double diagonal_weight(const ProblemConfig& config, int m) {
    if (m < 1) throw validation_error("diagonal_weight: mode index must be >= 1");
    const double k0 = config.compliance();
    if (config.ansatz == Ansatz::square_root) {
        const double r = gamma_ratio(m, 1.5, 2.0);
        return k0 * (m + 1) * r * r;
    }
    const double r = gamma_ratio(m, 2.5, 3.0);
    return 4.0 * k0 * (m + 1) * r * r;
}

// Coupling matrix entries.  R1/R2 belong to the square-root ansatz, R3/R4 to
// the three-halves ansatz; requesting a matrix against the wrong ansatz is a
// configuration error, not a numerical one.
[[nodiscard]] inline double compute_Rmk(const ProblemConfig& config, CouplingMatrix which,
                                        int m, int k) {
    if (m < 1 || k < 1)
        throw validation_error("compute_Rmk: mode indices must be >= 1");
    const bool square = (which == CouplingMatrix::R1 || which == CouplingMatrix::R2);
    if (square && config.ansatz != Ansatz::square_root)
        throw validation_error("compute_Rmk: R1/R2 are defined for the square-root ansatz");
    if (!square && config.ansatz != Ansatz::three_halves)
        throw validation_error("compute_Rmk: R3/R4 are defined for the three-halves ansatz");

    const double lambda = config.lambda();

    switch (which) {
        case CouplingMatrix::R1: {
            // (1/2) int (1-x^2)^{3/2} / E(x) * P_{k-1}^{(3/2,3/2)} P_{m+1}^{(-1/2,-1/2)} dx.
            // With E = (1-x^2)^{w} b0 the residual weight is (1-x^2)^{3/2-w}.
            const double e = 1.5 - config.stiffness.exponent;
            if (e <= -1.0)
                throw validation_error(
                    "compute_Rmk: R1 integrand is non-integrable for this stiffness "
                    "degeneracy; use the three-halves ansatz");
            const int n = std::max(48, (m + k) / 2 + 16);
            const auto& rule = detail::cached_rule(e, e, n);
            return 0.5 * rule.integrate([&](double x) {
                return jacobi_eval({1.5, 1.5}, k - 1, x) *
                       jacobi_eval({-0.5, -0.5}, m + 1, x) / config.stiffness.b0(x);
            });
        }
        case CouplingMatrix::R2: {
            // -(2 lambda) c_{k+1} c_{m+1} I_{km} with the Chebyshev overlap
            //   I_mm = 1 - 1/((2m+1)(2m+3)),  I_km = 0 for k+m odd, otherwise
            //   I_km = -[ 1/((k+m+3)(k+m+1)) + 1/((k-m+1)(k-m-1)) ].
            double overlap;
            if ((k + m) % 2 == 1) {
                overlap = 0.0;
            } else if (k == m) {
                overlap = 1.0 - 1.0 / (static_cast<double>(2 * m + 1) * (2 * m + 3));
            } else {
                overlap = -(1.0 / (static_cast<double>(k + m + 3) * (k + m + 1)) +
                            1.0 / (static_cast<double>(k - m + 1) * (k - m - 1)));
            }
            return -2.0 * lambda * detail::chebyshev_constant(k + 1) *
                   detail::chebyshev_constant(m + 1) * overlap;
        }
        case CouplingMatrix::R3: {
            // 8 lambda int P_{k+3}^{(-3/2,-3/2)} P_{m+1}^{(1/2,1/2)} dx (plain weight).
            const int n = (m + k + 4) / 2 + 4;
            const auto& rule = detail::cached_rule(0.0, 0.0, std::max(8, n));
            return 8.0 * lambda * rule.integrate([&](double x) {
                return jacobi_eval({-1.5, -1.5}, k + 3, x) *
                       jacobi_eval({0.5, 0.5}, m + 1, x);
            });
        }
        case CouplingMatrix::R4: {
            // (1/2) int (1-x^2)^{5/2} / E(x) * P_{k-1}^{(5/2,5/2)} P_{m+1}^{(1/2,1/2)} dx.
            const double e = 2.5 - config.stiffness.exponent;
            if (e <= -1.0)
                throw validation_error(
                    "compute_Rmk: R4 integrand is non-integrable for this stiffness "
                    "degeneracy");
            const int n = std::max(48, (m + k) / 2 + 16);
            const auto& rule = detail::cached_rule(e, e, n);
            return 0.5 * rule.integrate([&](double x) {
                return jacobi_eval({2.5, 2.5}, k - 1, x) *
                       jacobi_eval({0.5, 0.5}, m + 1, x) / config.stiffness.b0(x);
            });
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Forcing moments.  The right-hand side of the reduced system is
//   g_m(t) = p_m F_plate(t) + d_m F_glue(t),
// where p_m projects the plate part -(lambda/pi) H[q0](x), d_m projects the
// glue part -k0 q0'(x), and each F is the relaxation factor
//   F(t) = 1 - mu(t) (1 - e^{-gamma (t - t0)})
// of the corresponding creep law.
// ---------------------------------------------------------------------------

[[nodiscard]] inline double forcing_factor(const CreepLaw& law, double t) {
    const double decay = -std::expm1(-law.gamma * (t - law.load_instant));
    return 1.0 - law.mu(t) * decay;
}

[[nodiscard]] inline double forcing_factor_rate(const CreepLaw& law, double t) {
    const double e = std::exp(-law.gamma * (t - law.load_instant));
    return -law.mu_derivative(t) * (1.0 - e) - law.mu(t) * law.gamma * e;
}

[[nodiscard]] inline double forcing_factor_accel(const CreepLaw& law, double t) {
    const double e = std::exp(-law.gamma * (t - law.load_instant));
    const double g = law.gamma;
    return -law.mu_second_derivative(t) * (1.0 - e) - 2.0 * law.mu_derivative(t) * g * e +
           law.mu(t) * g * g * e;
}

namespace detail {

struct ForcingAmplitudes {
    Eigen::VectorXd plate_part;   // p_m, multiplies F_plate(t)
    Eigen::VectorXd glue_part;    // d_m, multiplies F_glue(t)
};

// Time-independent projections of the two spatial forcing components onto the
// test family P_{m+1}^{(c,c)}, m = 1..N.
inline ForcingAmplitudes forcing_amplitudes(const ProblemConfig& config, int N) {
    const double c = test_exponent(config.ansatz);
    const double lambda = config.lambda();
    const double k0 = config.compliance();
    const auto& forcing = config.forcing;

    ForcingAmplitudes out;
    out.plate_part = Eigen::VectorXd::Zero(N);
    out.glue_part = Eigen::VectorXd::Zero(N);
    if (forcing.vanishes()) return out;

    for (int m = 1; m <= N; ++m) {
        auto test = [&](double x) { return jacobi_eval({c, c}, m + 1, x); };

        // Plate part: -(lambda/pi) int H[q0](x) P_{m+1}(x) dx.
        double plate;
        if (forcing.kind == ForcingProfile::Kind::semicircle) {
            // H[q0] = -pi amp x exactly; the integrand is a polynomial.
            const auto& rule = detail::cached_rule(0.0, 0.0, (m + 3) / 2 + 4);
            plate = rule.integrate(
                [&](double x) { return lambda * forcing.amplitude * x * test(x); });
        } else {
            // H[q0] carries integrable log singularities at the ends; grade
            // toward each endpoint separately.
            auto f = [&](double x) {
                return -(lambda / 3.14159265358979323846) * forcing.hilbert(x) * test(x);
            };
            plate = integrate_graded(f, -1.0, 0.0, /*toward_a=*/true) +
                    integrate_graded(f, 0.0, 1.0, /*toward_a=*/false);
        }

        // Glue part: -k0 int q0'(x) P_{m+1}(x) dx.
        double glue;
        if (forcing.kind == ForcingProfile::Kind::semicircle) {
            // q0' = -amp x (1-x^2)^{-1/2}: absorb the weight into a
            // Gauss-Jacobi rule.
            const auto& rule = detail::cached_rule(-0.5, -0.5, (m + 3) / 2 + 8);
            glue = rule.integrate(
                [&](double x) { return -k0 * (-forcing.amplitude * x) * test(x); });
        } else if (forcing.kind == ForcingProfile::Kind::polynomial) {
            const int deg = static_cast<int>(forcing.coefficients.size());
            const auto& rule = detail::cached_rule(0.0, 0.0, (deg + m) / 2 + 4);
            glue = rule.integrate([&](double x) { return -k0 * forcing.derivative(x) * test(x); });
        } else {
            // Custom slopes may carry integrable endpoint singularities.
            auto f = [&](double x) { return -k0 * forcing.derivative(x) * test(x); };
            glue = integrate_graded(f, -1.0, 0.0, /*toward_a=*/true) +
                   integrate_graded(f, 0.0, 1.0, /*toward_a=*/false);
        }

        out.plate_part[m - 1] = plate;
        out.glue_part[m - 1] = glue;
    }
    return out;
}

} // namespace detail

// g_m(t) and its first two time derivatives (analytic in t).
[[nodiscard]] inline double forcing_moment(const ProblemConfig& config, int m, double t) {
    if (m < 1) throw validation_error("forcing_moment: mode index must be >= 1");
    if (t < config.load_instant)
        throw validation_error("forcing_moment: t must not precede the load instant");
    const auto amps = detail::forcing_amplitudes(config, m);
    return amps.plate_part[m - 1] * forcing_factor(config.plate_law, t) +
           amps.glue_part[m - 1] * forcing_factor(config.glue_law, t);
}

[[nodiscard]] inline double forcing_moment_rate(const ProblemConfig& config, int m, double t) {
    const auto amps = detail::forcing_amplitudes(config, m);
    return amps.plate_part[m - 1] * forcing_factor_rate(config.plate_law, t) +
           amps.glue_part[m - 1] * forcing_factor_rate(config.glue_law, t);
}

[[nodiscard]] inline double forcing_moment_accel(const ProblemConfig& config, int m, double t) {
    const auto amps = detail::forcing_amplitudes(config, m);
    return amps.plate_part[m - 1] * forcing_factor_accel(config.plate_law, t) +
           amps.glue_part[m - 1] * forcing_factor_accel(config.glue_law, t);
}

// Pointwise forcing field g(t,x); diagnostic.
[[nodiscard]] inline double forcing_field(const ProblemConfig& config, double t, double x) {
    const double lambda = config.lambda();
    const double k0 = config.compliance();
    return -(lambda / 3.14159265358979323846) * forcing_factor(config.plate_law, t) *
               config.forcing.hilbert(x) -
           k0 * forcing_factor(config.glue_law, t) * config.forcing.derivative(x);
}

// ---------------------------------------------------------------------------
// System assembly and elastic solve.
// ---------------------------------------------------------------------------

namespace detail {

struct SystemMatrices {
    Eigen::MatrixXd glue;     // diag of diagonal_weight
    Eigen::MatrixXd plate;    // R2 (or R3)
    Eigen::MatrixXd patch;    // R1/k (or R4/k): primitive picks up the 1/k
    Eigen::MatrixXd elastic;  // glue - plate - patch
};

inline SystemMatrices assemble_matrices(const ProblemConfig& config, int N) {
    SystemMatrices s;
    s.glue = Eigen::MatrixXd::Zero(N, N);
    s.plate = Eigen::MatrixXd::Zero(N, N);
    s.patch = Eigen::MatrixXd::Zero(N, N);
    const bool square = config.ansatz == Ansatz::square_root;
    const CouplingMatrix plate_kind = square ? CouplingMatrix::R2 : CouplingMatrix::R3;
    const CouplingMatrix patch_kind = square ? CouplingMatrix::R1 : CouplingMatrix::R4;
    for (int m = 1; m <= N; ++m) {
        s.glue(m - 1, m - 1) = diagonal_weight(config, m);
        for (int k = 1; k <= N; ++k) {
            s.plate(m - 1, k - 1) = compute_Rmk(config, plate_kind, m, k);
            s.patch(m - 1, k - 1) = compute_Rmk(config, patch_kind, m, k) / k;
        }
    }
    s.elastic = s.glue - s.plate - s.patch;
    return s;
}

inline double condition_estimate(const Eigen::MatrixXd& a,
                                 const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const double norm_a = a.cwiseAbs().colwise().sum().maxCoeff();
    const Eigen::MatrixXd inv = lu.inverse();
    const double norm_inv = inv.cwiseAbs().colwise().sum().maxCoeff();
    return norm_a * norm_inv;
}

// Solve a s = r with one round of iterative refinement; returns the relative
// residual in the infinity norm.
inline double refined_solve(const Eigen::MatrixXd& a,
                            const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                            const Eigen::VectorXd& r, Eigen::VectorXd& s) {
    s = lu.solve(r);
    const double scale = std::max(r.cwiseAbs().maxCoeff(), 1e-300);
    double res = (a * s - r).cwiseAbs().maxCoeff() / scale;
    if (res > 1e-12) {
        s += lu.solve(r - a * s);
        res = (a * s - r).cwiseAbs().maxCoeff() / scale;
    }
    return res;
}

inline void require_well_conditioned(double condition) {
    if (!std::isfinite(condition) || condition > 1e14) {
        std::ostringstream msg;
        msg << "elastic system is numerically singular (condition estimate " << condition
            << ")";
        throw numeric_error(msg.str());
    }
}

inline bool laws_equal(const CreepLaw& a, const CreepLaw& b) {
    auto close = [](double x, double y) {
        return std::abs(x - y) <= 1e-9 * (std::abs(x) + std::abs(y)) + 1e-300;
    };
    return close(a.modulus * a.aging.c0, b.modulus * b.aging.c0) &&
           close(a.modulus * a.aging.c1, b.modulus * b.aging.c1) &&
           close(a.gamma, b.gamma) && close(a.age_shift, b.age_shift);
}

inline bool equal_aging(const ProblemConfig& config) {
    return laws_equal(config.patch_law, config.glue_law) &&
           laws_equal(config.plate_law, config.glue_law);
}

} // namespace detail

// Quasi-static solve at time t: the hereditary terms are dropped and the
// instantaneous system  A X = -g(t)  is solved directly.  At t = t0 this is
// the exact elastic state.
[[nodiscard]] inline SpectralSolution assemble_and_solve(const ProblemConfig& config, double t) {
    config.validate();
    if (t < config.load_instant)
        throw validation_error("assemble_and_solve: t must not precede the load instant");

    const int N = config.truncation;
    const auto sys = detail::assemble_matrices(config, N);
    const auto amps = detail::forcing_amplitudes(config, N);
    const Eigen::VectorXd rhs = -(amps.plate_part * forcing_factor(config.plate_law, t) +
                                  amps.glue_part * forcing_factor(config.glue_law, t));

    SpectralSolution sol;
    sol.ansatz = config.ansatz;
    sol.times = {t};
    sol.coefficients = Eigen::MatrixXd::Zero(N, 1);
    sol.residuals = {0.0};

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.elastic);
    sol.condition = detail::condition_estimate(sys.elastic, lu);
    detail::require_well_conditioned(sol.condition);

    if (rhs.cwiseAbs().maxCoeff() == 0.0) return sol;   // zero forcing -> zero state

    Eigen::VectorXd x;
    const double res = detail::refined_solve(sys.elastic, lu, rhs, x);
    if (res > 1e-10) {
        std::ostringstream msg;
        msg << "assemble_and_solve: residual " << res << " exceeds 1e-10";
        throw numeric_error(msg.str());
    }
    sol.coefficients.col(0) = x;
    sol.residuals[0] = res;
    return sol;
}

// ---------------------------------------------------------------------------
// Volterra march.  The hereditary operators act slotwise:
//   [glue] diag term with law 3, [plate] R2 with law 2, [patch] R1/k with law 1;
// each memory integral J_i(t) = int_{t0}^{t} e^{-gamma_i (t-tau)} X(tau) dtau
// advances by product integration that is exact for X piecewise linear:
//   J_i(t_n) = e^{-theta_i} J_i(t_{n-1}) + I0_i X_{n-1} + I1_i X_n.
// The t0 slice is the elastic solution; each later slice solves
//   (A - sum_i s_i gamma_i mu_i(t_n) I1_i D_i) X_n = -g(t_n)
//       + sum_i s_i gamma_i mu_i(t_n) D_i (e^{-theta_i} J_i + I0_i X_{n-1}),
// with slot signs s = (+1, -1, -1) inherited from A = D_glue - D_plate - D_patch.
// ---------------------------------------------------------------------------

[[nodiscard]] inline SpectralSolution volterra_direct(const ProblemConfig& config, int N) {
    config.validate();
    if (N < 1) throw validation_error("volterra_direct: truncation must be at least 1");

    const auto sys = detail::assemble_matrices(config, N);
    const auto amps = detail::forcing_amplitudes(config, N);
    const auto& grid = config.time_grid;
    const std::size_t nt = grid.size();

    auto rhs_at = [&](double t) -> Eigen::VectorXd {
        return -(amps.plate_part * forcing_factor(config.plate_law, t) +
                 amps.glue_part * forcing_factor(config.glue_law, t));
    };

    SpectralSolution sol;
    sol.ansatz = config.ansatz;
    sol.times = grid;
    sol.coefficients = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(nt));
    sol.residuals.assign(nt, 0.0);

    Eigen::PartialPivLU<Eigen::MatrixXd> elastic_lu(sys.elastic);
    sol.condition = detail::condition_estimate(sys.elastic, elastic_lu);
    detail::require_well_conditioned(sol.condition);

    // Slot layout: {matrix, sign, law}.
    struct Slot {
        const Eigen::MatrixXd* matrix;
        double sign;
        const CreepLaw* law;
        Eigen::VectorXd history;
    };
    std::array<Slot, 3> slots = {{{&sys.glue, +1.0, &config.glue_law, Eigen::VectorXd::Zero(N)},
                                  {&sys.plate, -1.0, &config.plate_law, Eigen::VectorXd::Zero(N)},
                                  {&sys.patch, -1.0, &config.patch_law, Eigen::VectorXd::Zero(N)}}};

    // Elastic slice at t0.
    Eigen::VectorXd x;
    sol.residuals[0] = detail::refined_solve(sys.elastic, elastic_lu, rhs_at(grid[0]), x);
    sol.coefficients.col(0) = x;

    bool warned_coarse = false;
    for (std::size_t n = 1; n < nt; ++n) {
        const double t = grid[n];
        const double h = t - grid[n - 1];
        if (!warned_coarse) {
            for (const auto& slot : slots)
                if (slot.law->gamma * h > 5.0) {
                    sol.warnings.push_back(
                        "time step is coarse against the relaxation scale "
                        "(gamma * dt > 5); accuracy of the march degrades");
                    warned_coarse = true;
                    break;
                }
        }

        Eigen::MatrixXd m = sys.elastic;
        Eigen::VectorXd r = rhs_at(t);
        struct StepTerm {
            double decay, i0, i1, factor;
        };
        std::array<StepTerm, 3> terms{};
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const auto& law = *slots[i].law;
            const auto c = detail::exp_step_coeffs(law.gamma, h);
            const double decay = std::exp(-law.gamma * h);
            const double factor = slots[i].sign * law.gamma * law.mu(t);
            terms[i] = {decay, c.I0, c.I1, factor};
            m -= factor * c.I1 * (*slots[i].matrix);
            r += factor * (*slots[i].matrix) * (decay * slots[i].history + c.I0 * x);
        }

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
        Eigen::VectorXd xn;
        sol.residuals[n] = detail::refined_solve(m, lu, r, xn);
        if (sol.residuals[n] > 1e-10) {
            std::ostringstream msg;
            msg << "volterra_direct: residual " << sol.residuals[n] << " at t = " << t
                << " exceeds 1e-10";
            throw numeric_error(msg.str());
        }

        for (std::size_t i = 0; i < slots.size(); ++i)
            slots[i].history = terms[i].decay * slots[i].history + terms[i].i0 * x +
                               terms[i].i1 * xn;
        x = xn;
        sol.coefficients.col(n) = x;
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Exact reduction for equal ageing.  When the three creep intensities
// coincide, every operator in the system equals (I - L) and
//   A (I - L) X = -g   =>   (I - L) X_m = Z_m,  Z(s) = A^{-1} (-g(s)),
// so each mode is recovered by the exact scalar resolvent.
// ---------------------------------------------------------------------------

[[nodiscard]] inline SpectralSolution solve_reduced(const ProblemConfig& config) {
    config.validate();
    if (!detail::equal_aging(config))
        throw validation_error(
            "solve_reduced: the exact reduction needs the three creep intensities to "
            "coincide; use volterra_direct for general laws");

    const int N = config.truncation;
    const auto sys = detail::assemble_matrices(config, N);
    const auto amps = detail::forcing_amplitudes(config, N);
    const CreepLaw& law = config.glue_law;
    const double t0 = config.load_instant;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.elastic);

    SpectralSolution sol;
    sol.ansatz = config.ansatz;
    sol.times = config.time_grid;
    sol.coefficients = Eigen::MatrixXd::Zero(N, static_cast<Eigen::Index>(config.time_grid.size()));
    sol.residuals.assign(config.time_grid.size(), 0.0);
    sol.condition = detail::condition_estimate(sys.elastic, lu);
    detail::require_well_conditioned(sol.condition);

    // Z(s) is evaluated at quadrature nodes shared by all modes; memoise the
    // solve per node.
    std::map<double, Eigen::VectorXd> z_cache;
    auto z_at = [&](double s) -> const Eigen::VectorXd& {
        auto it = z_cache.find(s);
        if (it == z_cache.end()) {
            const Eigen::VectorXd rhs =
                -(amps.plate_part * forcing_factor(config.plate_law, s) +
                  amps.glue_part * forcing_factor(config.glue_law, s));
            it = z_cache.emplace(s, lu.solve(rhs)).first;
        }
        return it->second;
    };

    auto mu = [&](double s) { return law.mu(s); };
    auto beta = [&](double s) { return law.mu_integral(t0, s); };

    for (std::size_t it = 0; it < config.time_grid.size(); ++it) {
        const double t = config.time_grid[it];
        for (int m = 0; m < N; ++m) {
            auto zm = [&](double s) { return z_at(s)[m]; };
            sol.coefficients(m, static_cast<Eigen::Index>(it)) =
                invert_time_operator(law.gamma, mu, beta, zm, t0, t);
        }
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Creep correction profile.  For equal ageing the reduced system collapses to
// the scalar problem whose right-hand side profile is
//   T(t) = Gdot(t0) int_{t0}^{t} dtau / alpha(tau)
//        + int_{t0}^{t} (1/alpha(tau)) int_{t0}^{tau} (Gddot + gamma Gdot)(s)
//                                                       alpha(s) ds dtau,
// with alpha(t) = exp( int_{t0}^{t} gamma (1 + mu3) ).  The equivalent
// initial-value form  d/dt [alpha T'] = (Gddot + gamma Gdot) alpha,
// T(t0) = 0, T'(t0) = Gdot(t0), is integrated by a classical Runge-Kutta
// march; that avoids nested quadrature against the exponentially growing
// weight.
// ---------------------------------------------------------------------------

template <typename GDot, typename GDDot, typename Alpha>
[[nodiscard]] double time_profile_formula(double gdot0, GDot&& gdot, GDDot&& gddot,
                                          Alpha&& alpha, double gamma, double t0, double t) {
    if (t < t0)
        throw validation_error("time_profile_formula: t must not precede the load instant");
    if (t == t0) return 0.0;

    const double span = t - t0;
    const int steps = std::min(200000, std::max(500, static_cast<int>(50.0 * gamma * span)));
    const double h = span / steps;

    // State y = (T, u) with u = alpha T'; T' = u / alpha, u' = (gddot + gamma gdot) alpha.
    auto f_t = [&](double tau, double u) { return u / alpha(tau); };
    auto f_u = [&](double tau) { return (gddot(tau) + gamma * gdot(tau)) * alpha(tau); };

    double T = 0.0;
    double u = gdot0;   // alpha(t0) = 1
    for (int n = 0; n < steps; ++n) {
        const double tau = t0 + n * h;
        const double k1t = f_t(tau, u);
        const double k1u = f_u(tau);
        const double k2t = f_t(tau + 0.5 * h, u + 0.5 * h * k1u);
        const double k2u = f_u(tau + 0.5 * h);
        const double k3t = f_t(tau + 0.5 * h, u + 0.5 * h * k2u);
        const double k3u = k2u;
        const double k4t = f_t(tau + h, u + h * k3u);
        const double k4u = f_u(tau + h);
        T += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    }
    return T;
}

// T_m(t) for the oriented forcing G = -g_m.  Defined under equal ageing, where
// the scalar reduction is exact.
[[nodiscard]] inline double time_profile(const ProblemConfig& config, int m, double t) {
    config.validate();
    if (m < 1) throw validation_error("time_profile: mode index must be >= 1");
    if (!detail::equal_aging(config))
        throw validation_error(
            "time_profile: the scalar reduction needs the three creep intensities to "
            "coincide; use volterra_direct for general laws");

    const auto amps = detail::forcing_amplitudes(config, m);
    const double p = amps.plate_part[m - 1];
    const double d = amps.glue_part[m - 1];
    const CreepLaw& plate = config.plate_law;
    const CreepLaw& glue = config.glue_law;

    auto gdot = [&](double s) {
        return -(p * forcing_factor_rate(plate, s) + d * forcing_factor_rate(glue, s));
    };
    auto gddot = [&](double s) {
        return -(p * forcing_factor_accel(plate, s) + d * forcing_factor_accel(glue, s));
    };
    auto alpha = [&](double s) { return aging_weight(config.glue_law, s); };

    return time_profile_formula(gdot(config.load_instant), gdot, gddot, alpha,
                                glue.gamma, config.load_instant, t);
}

// Creep correction of the coefficient vector: A^{-1} T(t).
[[nodiscard]] inline Eigen::VectorXd solve_increment(const ProblemConfig& config, double t) {
    config.validate();
    const int N = config.truncation;
    const auto sys = detail::assemble_matrices(config, N);
    Eigen::VectorXd rhs(N);
    for (int m = 1; m <= N; ++m) rhs[m - 1] = time_profile(config, m, t);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.elastic);
    detail::require_well_conditioned(detail::condition_estimate(sys.elastic, lu));
    return lu.solve(rhs);
}

// ---------------------------------------------------------------------------
// Stress recovery.
// ---------------------------------------------------------------------------

[[nodiscard]] inline StressField reconstruct_stress(const SpectralSolution& solution,
                                                    const ProblemConfig& config,
                                                    const std::vector<double>& grid, double t) {
    std::size_t slice = solution.times.size();
    for (std::size_t i = 0; i < solution.times.size(); ++i) {
        if (std::abs(solution.times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
            slice = i;
            break;
        }
    }
    if (slice == solution.times.size())
        throw validation_error("reconstruct_stress: t is not a grid time of the solution");

    const double a = basis_exponent(solution.ansatz);
    const int N = solution.truncation();
    const Eigen::VectorXd x = solution.coefficients.col(static_cast<Eigen::Index>(slice));

    StressField field;
    field.grid = grid;
    field.time = t;
    field.endpoint_exponent = a;
    field.values.reserve(grid.size());
    field.transfer.reserve(grid.size());
    field.primitive.reserve(grid.size());

    for (double xg : grid) {
        if (!(xg >= -1.0 && xg <= 1.0))
            throw validation_error("reconstruct_stress: grid points must lie in [-1, 1]");
        const double w = std::pow(std::max(0.0, 1.0 - xg * xg), a);
        const double wp = std::pow(std::max(0.0, 1.0 - xg * xg), a + 1.0);
        double slope = 0.0;
        double prim = 0.0;
        for (int k = 1; k <= N; ++k) {
            const double xk = x[k - 1];
            if (xk == 0.0) continue;
            slope += xk * w * jacobi_eval({a, a}, k, xg);
            prim += xk * (-0.5 / k) * wp * jacobi_eval({a + 1.0, a + 1.0}, k - 1, xg);
        }
        field.transfer.push_back(slope);
        field.primitive.push_back(prim);
        field.values.push_back(slope + config.forcing.value(xg));
    }
    return field;
}

// Componentwise drift between the quasi-static states at truncations N and
// N-2; the standard convergence report.
struct ConvergenceReport {
    int coarse = 0;
    int fine = 0;
    double max_abs_drift = 0.0;
    double max_rel_drift = 0.0;
};

[[nodiscard]] inline ConvergenceReport convergence_report(const ProblemConfig& config, double t) {
    ConvergenceReport rep;
    rep.fine = config.truncation;
    rep.coarse = std::max(1, config.truncation - 2);

    ProblemConfig coarse_cfg = config;
    coarse_cfg.truncation = rep.coarse;
    const auto fine = assemble_and_solve(config, t);
    const auto coarse = assemble_and_solve(coarse_cfg, t);

    const double scale = std::max(fine.coefficients.col(0).cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 0; k < rep.coarse; ++k) {
        const double d = std::abs(fine.coefficients(k, 0) - coarse.coefficients(k, 0));
        rep.max_abs_drift = std::max(rep.max_abs_drift, d);
        rep.max_rel_drift = std::max(rep.max_rel_drift, d / scale);
    }
    return rep;
}

} // namespace creeppatch
