#pragma once

// Closed-form pipeline for the linearly tapered patch occupying 0 < x < 1 on
// a creeping plate: patch stiffness E(x) = h x, glue compliance k0(x) = k0 x,
// edge force P switched on at the load instant.  In the log variable
// xi = ln x the transmitted load psi(xi) (running integral of the traction)
// satisfies a convolution equation; its half-line Fourier transform Phi^-(s)
// solves a scalar Riemann problem on the transform line with boundary symbol
//
//     G1(s)  = 1 + lamh s coth(pi s) + k0h s^2,      lamh = lambda h,
//     G01(s) = G1(s) / (k0h (1 + s^2)),              k0h  = k0 h,
//
// factorized as G01 = X+ / X- by a Cauchy integral of ln G01.  The driving
// boundary term carries a simple pole at s = 0 (from the coth transform of
// the edge load) whose delta half-weight cancels against the principal-value
// limit on the minus side, plus one free constant fixed by the decay of the
// minus solution at infinity.  The remaining unknown, the edge slope
// psi'(0^-) = tau(1^-), is closed by matching the 1/s moment of the minus
// solution against the transform of the edge data.
//
// Under the equal-ageing tie G0 phi3 = E1 phi1 = E2 phi2 the creep operator
// is a scalar Volterra factor acting on the whole equation, so the traction
// field is time-invariant for t >= t0; the scalar ageing response T(t) is
// reported separately as a diagnostic computed from the ageing integrals.
//
// The free tip x -> 0+ behaves like tau ~ x^{y0 - 1} where y0 in (0,1) is
// the root of the symbol on the imaginary axis,
// W(y) = G1(i y) = 1 + lamh y cot(pi y) - k0h y^2; when W keeps one sign the
// tip traction is bounded instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "factorization.hpp"
#include "field.hpp"
#include "material.hpp"
#include "quadrature.hpp"

namespace creeppatch {

// ---------------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------------

struct CaseBConfig {
    double stiffness_slope = 1.0;  // h in E(x) = h x (modulus-thickness per unit x)
    double glue_slope = 1.0;       // k0 in k0(x) = k0 x (glue compliance per unit x)
    double plate_compliance = 0.0; // lambda = 2 (1 - nu2^2)/E2; 0 = rigid plate
    double load = 1.0;             // edge force P applied at the load instant

    CreepLaw patch_law{};
    CreepLaw plate_law{};
    CreepLaw glue_law{};

    // Transform-line numerics (defaults sized for ~1e-6 factor accuracy).
    double factor_cutoff = 16000.0;  // |y| truncation of the symbol quadrature
    double inversion_cutoff = 150.0; // |s| truncation of the Fourier inversion
    double inversion_step = 0.02;    // inversion grid step
    double closure_point = 40.0;     // base abscissa of the edge-slope closure
    int refinement = 1;              // quadrature density multiplier

    [[nodiscard]] double k0h() const { return glue_slope * stiffness_slope; }
    [[nodiscard]] double lamh() const { return plate_compliance * stiffness_slope; }
    [[nodiscard]] double load_instant() const { return glue_law.load_instant; }

    void validate() const {
        if (!(stiffness_slope > 0.0))
            throw validation_error("CaseBConfig: stiffness slope must be positive");
        if (!(glue_slope > 0.0))
            throw validation_error("CaseBConfig: glue slope must be positive");
        if (!(plate_compliance >= 0.0))
            throw validation_error("CaseBConfig: plate compliance must be non-negative");
        if (!std::isfinite(load) || load == 0.0)
            throw validation_error("CaseBConfig: load must be finite and non-zero");
        patch_law.validate();
        plate_law.validate();
        glue_law.validate();
        if (patch_law.gamma != glue_law.gamma || plate_law.gamma != glue_law.gamma)
            throw validation_error("CaseBConfig: creep laws must share the relaxation rate");
        if (patch_law.load_instant != glue_law.load_instant ||
            plate_law.load_instant != glue_law.load_instant)
            throw validation_error("CaseBConfig: creep laws must share the load instant");
        // Equal ageing: the three modulus-weighted ageing intensities must
        // coincide, otherwise the scalar reduction of the time operator (and
        // with it this whole closed form) does not apply.
        const double t0 = glue_law.load_instant;
        for (double dt : {0.0, 3.0, 10.0, 31.0, 100.0, 365.0}) {
            const double m1 = patch_law.mu(t0 + dt);
            const double m2 = plate_law.mu(t0 + dt);
            const double m3 = glue_law.mu(t0 + dt);
            const double scale = std::max({std::abs(m1), std::abs(m2), std::abs(m3), 1e-300});
            if (std::abs(m1 - m3) > 1e-9 * scale || std::abs(m2 - m3) > 1e-9 * scale)
                throw validation_error(
                    "CaseBConfig: equal-ageing tie violated (glue, patch and plate "
                    "ageing intensities must coincide)");
        }
        if (!(factor_cutoff >= 256.0))
            throw validation_error("CaseBConfig: factor cutoff too small");
        if (!(inversion_cutoff > 8.0) || !(inversion_step > 0.0) ||
            !(inversion_step <= 0.1))
            throw validation_error("CaseBConfig: bad inversion grid");
        if (!(closure_point >= 8.0))
            throw validation_error("CaseBConfig: closure point must be at least 8");
        if (!(factor_cutoff >= 8.0 * std::max(inversion_cutoff, 4.0 * closure_point)))
            throw validation_error(
                "CaseBConfig: factor cutoff must dominate the inversion range");
        if (refinement < 1 || refinement > 16)
            throw validation_error("CaseBConfig: refinement out of range");
    }
};

// ---------------------------------------------------------------------------
// Tip exponent.
// ---------------------------------------------------------------------------

struct CaseBExponent {
    bool bounded = false;          // no root: tip traction stays bounded
    bool boundary_warning = false; // root within 1e-3 of an endpoint
    double root = 0.0;             // y0 in (0,1) with W(y0) = 0
    double stress_exponent = 0.0;  // y0 - 1 (tau ~ x^{y0-1}); 0 when bounded
};

// W(y) = 1 + lamh y cot(pi y) - k0h y^2 is strictly decreasing on (0,1) from
// W(0+) = 1 + lamh/pi > 0, so it has at most one root; for lamh > 0 the cot
// factor forces W -> -inf at y -> 1-, so a root always exists.
inline CaseBExponent caseB_exponent(double k0h, double lamh) {
    if (!std::isfinite(k0h) || !(k0h > 0.0))
        throw validation_error("caseB_exponent: k0h must be positive");
    if (!std::isfinite(lamh) || !(lamh >= 0.0))
        throw validation_error("caseB_exponent: lamh must be non-negative");
    const auto W = [&](double y) {
        const double cot = std::cos(M_PI * y) / std::sin(M_PI * y);
        return 1.0 + lamh * y * cot - k0h * y * y;
    };
    CaseBExponent out;
    double hi = 1.0 - 1e-12;
    if (!(W(hi) < 0.0)) {
        out.bounded = true;
        return out;
    }
    double lo = 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (W(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.root = 0.5 * (lo + hi);
    out.stress_exponent = out.root - 1.0;
    out.boundary_warning = (out.root < 1e-3) || (1.0 - out.root < 1e-3);
    return out;
}

// ---------------------------------------------------------------------------
// Transform-line workspace.
// ---------------------------------------------------------------------------

namespace detail {
namespace caseb {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;

// Fixed quadrature rule over (-Y, Y): dense core for the hyperbolic
// structure, log-graded wings where everything varies on the scale of ln y.
struct LineRule {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights;
    double cutoff = 0.0;
};

inline LineRule build_line_rule(double cutoff, int refinement) {
    const QuadratureRule& gauss = creeppatch::detail::legendre_rule(16);
    const double core = 8.0;
    const int core_panels = 80 * refinement;
    const int wing_panels =
        std::max(24, static_cast<int>(std::ceil(12.0 * std::log(cutoff / core)))) *
        refinement;

    std::vector<std::pair<double, double>> pts; // (node, weight)
    const double hc = 2.0 * core / core_panels;
    for (int p = 0; p < core_panels; ++p) {
        const double mid = -core + (p + 0.5) * hc;
        for (std::size_t i = 0; i < gauss.size(); ++i)
            pts.emplace_back(mid + 0.5 * hc * gauss.nodes[i], 0.5 * hc * gauss.weights[i]);
    }
    const double v_lo = std::log(core), v_hi = std::log(cutoff);
    const double hv = (v_hi - v_lo) / wing_panels;
    for (int p = 0; p < wing_panels; ++p) {
        const double mid = v_lo + (p + 0.5) * hv;
        for (std::size_t i = 0; i < gauss.size(); ++i) {
            const double v = mid + 0.5 * hv * gauss.nodes[i];
            const double w = 0.5 * hv * gauss.weights[i] * std::exp(v);
            pts.emplace_back(std::exp(v), w);
            pts.emplace_back(-std::exp(v), w);
        }
    }
    std::sort(pts.begin(), pts.end());
    LineRule rule;
    rule.cutoff = cutoff;
    rule.nodes.reserve(pts.size());
    rule.weights.reserve(pts.size());
    for (const auto& [n, w] : pts) {
        rule.nodes.push_back(n);
        rule.weights.push_back(w);
    }
    return rule;
}

// Normalized boundary symbol together with its far-field log expansion
// ln G01 ~ A/|y| + B/y^2 (exact to O(1/|y|^3) because G01 is even).  An
// override replaces the symbol (hook for degenerate and singular cases);
// overrides are assumed to approach 1 fast enough that the tail vanishes.
struct SymbolData {
    double k0h = 1.0;
    double lamh = 0.0;
    std::function<complex_t(double)> override_fn;

    [[nodiscard]] complex_t value(double s) const {
        if (override_fn) return override_fn(s);
        const double g1 = 1.0 + lamh * z_coth_pi_z(s) + k0h * s * s;
        return complex_t(g1 / (k0h * (1.0 + s * s)), 0.0);
    }
    [[nodiscard]] double tail_A() const { return override_fn ? 0.0 : lamh / k0h; }
    [[nodiscard]] double tail_B() const {
        if (override_fn) return 0.0;
        const double a = lamh / k0h;
        return (1.0 - k0h) / k0h - 0.5 * a * a;
    }
};

// Workspace: the symbol log sampled on the master rule, plus (optionally)
// the plus factor at every node, which only the stress pipeline needs.
struct Workspace {
    SymbolData symbol;
    LineRule rule;
    std::vector<complex_t> logsym; // ln G01(y_k), phase-unwrapped along the line
    std::vector<complex_t> xplus;  // X+(y_k); empty unless requested
};

// Continuous log along the sampled line (production symbols are real and
// positive so the unwrap is trivial; kept general for override symbols).
inline std::vector<complex_t> unwrapped_log(const SymbolData& sym,
                                            const std::vector<double>& nodes) {
    std::vector<complex_t> out(nodes.size());
    double shift = 0.0;
    double prev_arg = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const complex_t v = sym.value(nodes[k]);
        const double mag = std::abs(v);
        if (!(mag > 0.0) || !std::isfinite(mag))
            throw numeric_error("riemann factorization: symbol vanishes on the line");
        const double a = std::arg(v);
        if (k > 0) {
            while (a + shift - prev_arg > M_PI) shift -= 2.0 * M_PI;
            while (a + shift - prev_arg < -M_PI) shift += 2.0 * M_PI;
        }
        prev_arg = a + shift;
        out[k] = complex_t(std::log(mag), prev_arg);
    }
    return out;
}

// ln of the symbol at an off-node point, branch-aligned with the nearest
// node of the unwrapped sampling.
inline complex_t logsym_at(const Workspace& ws, double s) {
    const complex_t v = ws.symbol.value(s);
    if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v)))
        throw numeric_error("riemann factorization: symbol vanishes on the line");
    complex_t lg = std::log(v);
    auto it = std::lower_bound(ws.rule.nodes.begin(), ws.rule.nodes.end(), s);
    if (it == ws.rule.nodes.end()) --it;
    const std::size_t k = static_cast<std::size_t>(it - ws.rule.nodes.begin());
    const double ref = ws.logsym[k].imag();
    double im = lg.imag();
    while (im - ref > M_PI) im -= 2.0 * M_PI;
    while (im - ref < -M_PI) im += 2.0 * M_PI;
    return complex_t(lg.real(), im);
}

// Cauchy integral of the symbol log on the line,
//   C(s) = (2 pi i)^{-1} PV int ln G01(y) / (y - s) dy,
// with subtracted singularity, closed-form principal value of the constant,
// and closed-form tails from ln G01 ~ A/|y| + B/y^2 beyond the cutoff.
inline complex_t cauchy_log(const Workspace& ws, double s) {
    const double Y = ws.rule.cutoff;
    if (!(std::abs(s) < 0.999999 * Y))
        throw numeric_error("riemann factorization: abscissa outside the resolved line");
    const complex_t Ls = logsym_at(ws, s);
    complex_t acc{0.0, 0.0};
    for (std::size_t k = 0; k < ws.rule.nodes.size(); ++k) {
        const double d = ws.rule.nodes[k] - s;
        if (std::abs(d) < 1e-9 * (1.0 + std::abs(s))) {
            const double eps = 1e-6 * (1.0 + std::abs(s));
            acc += ws.rule.weights[k] *
                   (logsym_at(ws, s + eps) - logsym_at(ws, s - eps)) / (2.0 * eps);
        } else {
            acc += ws.rule.weights[k] * (ws.logsym[k] - Ls) / d;
        }
    }
    acc += Ls * std::log((Y - s) / (Y + s));
    const double A = ws.symbol.tail_A();
    const double B = ws.symbol.tail_B();
    if (std::abs(s) > 1e-8)
        acc += -(A / s) * std::log1p(-(s / Y) * (s / Y));
    else
        acc += A * s / (Y * Y);
    acc += B * 2.0 * s / (3.0 * Y * Y * Y);
    return acc / complex_t(0.0, 2.0 * M_PI);
}

// Boundary values of the two factors at a point of the line.
struct LinePoint {
    complex_t xplus{1.0, 0.0};
    complex_t xminus{1.0, 0.0};
};

inline LinePoint factors_at(const Workspace& ws, double s) {
    const complex_t C = cauchy_log(ws, s);
    const complex_t L = logsym_at(ws, s);
    return {std::exp(C + 0.5 * L), std::exp(C - 0.5 * L)};
}

inline complex_t x_plus(const Workspace& ws, double s) { return factors_at(ws, s).xplus; }
inline complex_t x_minus(const Workspace& ws, double s) { return factors_at(ws, s).xminus; }

inline Workspace build_workspace(const SymbolData& sym, double cutoff, int refinement,
                                 bool with_node_factors) {
    Workspace ws;
    ws.symbol = sym;
    ws.rule = build_line_rule(cutoff, refinement);
    ws.logsym = unwrapped_log(sym, ws.rule.nodes);
    if (with_node_factors) {
        ws.xplus.resize(ws.rule.nodes.size());
        for (std::size_t k = 0; k < ws.rule.nodes.size(); ++k)
            ws.xplus[k] = std::exp(cauchy_log(ws, ws.rule.nodes[k]) + 0.5 * ws.logsym[k]);
    }
    return ws;
}

// Winding of the symbol along the compactified line (tan-substituted grid,
// endpoint limits appended explicitly).
inline int symbol_winding(const SymbolData& sym) {
    const int n = 4001;
    std::vector<complex_t> samples;
    samples.reserve(n + 2);
    samples.push_back(complex_t(1.0, 0.0));
    for (int j = 0; j < n; ++j) {
        const double u = -0.5 * M_PI + M_PI * (j + 0.5) / n;
        samples.push_back(sym.value(std::tan(u)));
    }
    samples.push_back(complex_t(1.0, 0.0));
    return winding_number(samples);
}

// ---------------------------------------------------------------------------
// Inhomogeneous boundary data.
//
// The edge-load boundary term, divided by X+(y)(y+i), is
//     f(y) = (i P lamh coth(pi y) + i P k0h y - k0h psi'0) /
//            (sqrt(2 pi) X+(y) (y + i)),
// affine in the unknown edge slope psi'0: f = f_a + psi'0 f_b.  f_a carries
// a simple pole r0/y at the origin (removed below; its delta half-weight
// cancels against the principal-value limit on the minus side) and the
// constant c_inf = i P k0h / sqrt(2 pi) at infinity.
// ---------------------------------------------------------------------------

// Far-field model of a density, g ~ c_inf + (p + q sgn y)/y, integrated in
// closed form beyond the quadrature cutoff.
struct TailSpec {
    complex_t c_inf{0.0, 0.0};
    complex_t p{0.0, 0.0};
    complex_t q{0.0, 0.0};
};

struct BoundaryData {
    Workspace ws;
    double P = 1.0;
    double k0h = 1.0;
    double lamh = 0.0;
    double r0 = 0.0;               // residue of f_a at y = 0
    complex_t c_inf{0.0, 0.0};     // f_a at +-infinity
    std::vector<complex_t> fa_reg; // f_a - r0/y at the master nodes
    std::vector<complex_t> fb;     // f_b at the master nodes
    TailSpec tail_a;               // far-field model of fa_reg
    TailSpec tail_b;               // far-field model of fb
};

// y f_a(y): entire through y = 0; its value at 0 is the pole residue r0.
inline complex_t fa_times_y(const BoundaryData& bd, double y, complex_t xplus_y) {
    const complex_t num = complex_t(0.0, bd.P * bd.lamh) * z_coth_pi_z(y) +
                          complex_t(0.0, bd.P * bd.k0h) * y * y;
    return num / (kSqrt2Pi * xplus_y * complex_t(y, 1.0));
}

inline complex_t fa_reg_at(const BoundaryData& bd, double y, complex_t xplus_y) {
    if (std::abs(y) < 1e-8) {
        // Removable point: return the derivative of y f_a at 0.
        const double d = 1e-5;
        const complex_t hi = fa_times_y(bd, d, x_plus(bd.ws, d));
        const complex_t lo = fa_times_y(bd, -d, x_plus(bd.ws, -d));
        return (hi - lo) / (2.0 * d);
    }
    return (fa_times_y(bd, y, xplus_y) - bd.r0) / y;
}

inline complex_t fb_at(const BoundaryData& bd, double y, complex_t xplus_y) {
    return -bd.k0h / (kSqrt2Pi * xplus_y * complex_t(y, 1.0));
}

inline BoundaryData build_boundary_data(const Workspace& ws, double P, double k0h,
                                        double lamh) {
    BoundaryData bd;
    bd.ws = ws;
    bd.P = P;
    bd.k0h = k0h;
    bd.lamh = lamh;
    const complex_t xp0 = x_plus(ws, 0.0);
    // r0 = lim_{y->0} y f_a(y); X+(0) is real for the even production symbol.
    bd.r0 = (P * lamh / M_PI) / (kSqrt2Pi * xp0.real());
    bd.c_inf = complex_t(0.0, P * k0h / kSqrt2Pi);
    const std::size_t n = ws.rule.nodes.size();
    bd.fa_reg.resize(n);
    bd.fb.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = ws.rule.nodes[k];
        bd.fa_reg[k] = fa_reg_at(bd, y, ws.xplus[k]);
        bd.fb[k] = fb_at(bd, y, ws.xplus[k]);
    }
    // Empirical far-field coefficients, sampled near the cutoff so that the
    // 1/y terms the plus factor contributes are captured as well.
    const double ys = 0.98 * ws.rule.cutoff;
    const complex_t xp_pos = x_plus(ws, ys);
    const complex_t xp_neg = x_plus(ws, -ys);
    const complex_t ua_pos = ys * (fa_reg_at(bd, ys, xp_pos) - bd.c_inf);
    const complex_t ua_neg = -ys * (fa_reg_at(bd, -ys, xp_neg) - bd.c_inf);
    bd.tail_a = TailSpec{bd.c_inf, 0.5 * (ua_pos + ua_neg), 0.5 * (ua_pos - ua_neg)};
    const complex_t ub_pos = ys * fb_at(bd, ys, xp_pos);
    const complex_t ub_neg = -ys * fb_at(bd, -ys, xp_neg);
    bd.tail_b =
        TailSpec{complex_t(0.0, 0.0), 0.5 * (ub_pos + ub_neg), 0.5 * (ub_pos - ub_neg)};
    return bd;
}

// Lower boundary value of the Cauchy integral of a sampled density:
//   C^-(s) = (2 pi i)^{-1} [ PV int g/(y-s) dy + tails ] - g(s)/2.
// `value_at` is only consulted when s collides with a quadrature node.
template <typename AtFn>
complex_t cauchy_lower(const Workspace& ws, const std::vector<complex_t>& samples,
                       complex_t gs, AtFn&& value_at, const TailSpec& tail, double s) {
    const double Y = ws.rule.cutoff;
    if (!(std::abs(s) < 0.5 * Y))
        throw numeric_error("caseB: abscissa outside the resolved line");
    complex_t acc{0.0, 0.0};
    for (std::size_t k = 0; k < ws.rule.nodes.size(); ++k) {
        const double d = ws.rule.nodes[k] - s;
        if (std::abs(d) < 1e-9 * (1.0 + std::abs(s))) {
            const double eps = 1e-6 * (1.0 + std::abs(s));
            acc += ws.rule.weights[k] *
                   (value_at(s + eps) - value_at(s - eps)) / (2.0 * eps);
        } else {
            acc += ws.rule.weights[k] * (samples[k] - gs) / d;
        }
    }
    acc += gs * std::log((Y - s) / (Y + s));
    acc += tail.c_inf * std::log((Y + s) / (Y - s));
    if (std::abs(s) > 1e-8) {
        acc += (tail.p / s) * std::log((Y + s) / (Y - s));
        acc += -(tail.q / s) * std::log1p(-(s / Y) * (s / Y));
    } else {
        acc += tail.p * 2.0 / Y;
        acc += tail.q * s / (Y * Y);
    }
    return acc / complex_t(0.0, 2.0 * M_PI) - 0.5 * gs;
}

// Frozen spatial solution on the transform line.
struct HalfLineSolution {
    BoundaryData bd;
    double psi_prime0 = 0.0; // edge slope tau(1^-)
    double closure_residual = 0.0;
    complex_t kappa{0.0, 0.0};   // Liouville constant of the minus solution
    std::vector<complex_t> freg; // f_a_reg + psi'0 f_b at the master nodes
    TailSpec tail;               // far-field model of freg
};

// Minus solution M^-(s) = X-(s) (C^-_f(s) + kappa); the transform of the
// transmitted load is Phi^-(s) = M^-(s) / (k0h (s - i)).
inline complex_t minus_data(const HalfLineSolution& hs, double s, const LinePoint& pt) {
    const auto at = [&](double y) {
        const complex_t xpy = x_plus(hs.bd.ws, y);
        return fa_reg_at(hs.bd, y, xpy) + hs.psi_prime0 * fb_at(hs.bd, y, xpy);
    };
    const complex_t gs =
        fa_reg_at(hs.bd, s, pt.xplus) + hs.psi_prime0 * fb_at(hs.bd, s, pt.xplus);
    const complex_t Cf = cauchy_lower(hs.bd.ws, hs.freg, gs, at, hs.tail, s);
    return pt.xminus * (Cf + hs.kappa);
}

inline complex_t phi_minus(const HalfLineSolution& hs, double s) {
    const LinePoint pt = factors_at(hs.bd.ws, s);
    return minus_data(hs, s, pt) / (hs.bd.k0h * complex_t(s, -1.0));
}

// Closure: as s -> infinity, s (M^-(s) + c_inf) -> k0h (psi'0 - P)/sqrt(2pi).
// Both sides are affine in psi'0; three-point Richardson extrapolation in s
// removes the 1/s and 1/s^2 contamination of the limit.
inline HalfLineSolution solve_half_line(const BoundaryData& bd, double closure_point) {
    HalfLineSolution hs;
    hs.bd = bd;
    hs.kappa = -0.5 * bd.c_inf;

    const TailSpec& tail_a = bd.tail_a;
    const TailSpec& tail_b = bd.tail_b;

    const auto at_a = [&](double y) { return fa_reg_at(bd, y, x_plus(bd.ws, y)); };
    const auto at_b = [&](double y) { return fb_at(bd, y, x_plus(bd.ws, y)); };

    const auto D_pair = [&](double s) {
        const LinePoint pt = factors_at(bd.ws, s);
        const complex_t Ca = cauchy_lower(bd.ws, bd.fa_reg, fa_reg_at(bd, s, pt.xplus),
                                          at_a, tail_a, s);
        const complex_t Cb =
            cauchy_lower(bd.ws, bd.fb, fb_at(bd, s, pt.xplus), at_b, tail_b, s);
        return std::make_pair(s * (pt.xminus * (Ca + hs.kappa) + bd.c_inf),
                              s * pt.xminus * Cb);
    };

    const auto [Da1, Db1] = D_pair(closure_point);
    const auto [Da2, Db2] = D_pair(2.0 * closure_point);
    const auto [Da4, Db4] = D_pair(4.0 * closure_point);
    const complex_t Da = (Da1 - 6.0 * Da2 + 8.0 * Da4) / 3.0;
    const complex_t Db = (Db1 - 6.0 * Db2 + 8.0 * Db4) / 3.0;

    const double rhs_scale = bd.k0h / kSqrt2Pi;
    const double denom = Db.real() - rhs_scale;
    if (!(std::abs(denom) > 1e-12 * (std::abs(Db.real()) + rhs_scale)))
        throw numeric_error("caseB: edge-slope closure is singular");
    hs.psi_prime0 = -(rhs_scale * bd.P + Da.real()) / denom;
    const double dscale = std::abs(Da) + std::abs(Db) * std::abs(hs.psi_prime0) + 1e-300;
    hs.closure_residual =
        (std::abs(Da.imag()) + std::abs(Db.imag() * hs.psi_prime0)) / dscale;

    hs.freg.resize(bd.fa_reg.size());
    for (std::size_t k = 0; k < bd.fa_reg.size(); ++k)
        hs.freg[k] = bd.fa_reg[k] + hs.psi_prime0 * bd.fb[k];
    hs.tail = TailSpec{tail_a.c_inf, tail_a.p + hs.psi_prime0 * tail_b.p,
                       tail_a.q + hs.psi_prime0 * tail_b.q};
    return hs;
}

} // namespace caseb
} // namespace detail

// ---------------------------------------------------------------------------
// Factorization table (reporting + cutoff self-convergence residual).
// ---------------------------------------------------------------------------

inline FactorizationTable riemann_factorization(
    const CaseBConfig& cfg, const std::function<complex_t(double)>& symbol_override) {
    cfg.validate();
    detail::caseb::SymbolData sym;
    sym.k0h = cfg.k0h();
    sym.lamh = cfg.lamh();
    sym.override_fn = symbol_override;

    FactorizationTable table;
    table.winding = detail::caseb::symbol_winding(sym);
    if (table.winding != 0)
        throw numeric_error("riemann factorization: nonzero winding index " +
                            std::to_string(table.winding) +
                            ": factorization inapplicable");

    // Plemelj self-consistency: the plus factor from one discretization is
    // compared against symbol * minus factor from an independent one (half
    // the resolved line).  The panel quadrature converges to rounding, so the
    // residual is dominated by the far-field truncation and shrinks when the
    // refinement knob extends the resolved line.
    const double cutoff = cfg.factor_cutoff * cfg.refinement;
    const auto fine = detail::caseb::build_workspace(sym, cutoff, cfg.refinement, false);
    const auto partner =
        detail::caseb::build_workspace(sym, 0.5 * cutoff, cfg.refinement, false);

    const int n = 161;
    for (int j = 0; j < n; ++j) {
        const double s = -20.0 + 40.0 * j / (n - 1);
        const auto pf = detail::caseb::factors_at(fine, s);
        const auto pp = detail::caseb::factors_at(partner, s);
        if (!(std::abs(pf.xplus) > 0.0) || !(std::abs(pf.xminus) > 0.0) ||
            !std::isfinite(std::abs(pf.xplus)) || !std::isfinite(std::abs(pf.xminus)))
            throw numeric_error("riemann factorization: factor vanished on a sample");
        table.abscissae.push_back(s);
        table.symbol.push_back(sym.value(s));
        table.plus_factor.push_back(pf.xplus);
        table.minus_factor.push_back(pf.xminus);
        const double res =
            std::abs(pf.xplus / (sym.value(s) * pp.xminus) - 1.0) +
            std::abs(pp.xplus / (sym.value(s) * pf.xminus) - 1.0);
        table.jump_residual.push_back(res);
        table.max_jump_residual = std::max(table.max_jump_residual, res);
    }
    if (!(table.max_jump_residual < 1e-6))
        throw numeric_error("riemann factorization: jump residual " +
                            std::to_string(table.max_jump_residual) +
                            " exceeds 1e-6; refine the boundary quadrature");
    return table;
}

inline FactorizationTable riemann_factorization(const CaseBConfig& cfg) {
    return riemann_factorization(cfg, {});
}

// ---------------------------------------------------------------------------
// Ageing response diagnostic.
//
// Scalar response of the equal-ageing time operator to the step load:
//   T(t) = gamma mu(t0) int_{t0}^t e^{-gamma b(tau)} dtau
//        + int_{t0}^t e^{-gamma b(tau)} [ int_{t0}^tau e^{gamma b(p)} dp ] dtau,
//   b(tau) = (tau - t0) + int_{t0}^tau mu(q) dq.
// Marched with exponential rescaling: every exponent that actually enters is
// -gamma (b(tau) - b(p)) <= 0, so nothing overflows.
// ---------------------------------------------------------------------------

inline double caseB_time_factor(const CaseBConfig& cfg, double t) {
    cfg.validate();
    const double t0 = cfg.load_instant();
    if (t < t0)
        throw validation_error("caseB_time_factor: t must not precede the load instant");
    if (t == t0) return 0.0;
    const CreepLaw& law = cfg.patch_law;
    const double gamma = law.gamma;
    const auto b = [&](double tau) { return (tau - t0) + law.mu_integral(t0, tau); };

    const int n = 2048;
    const double h = (t - t0) / n;
    const QuadratureRule& gauss = detail::legendre_rule(8);

    double J0 = 0.0;     // int e^{-gamma b}
    double I1 = 0.0;     // e^{-gamma b(tau_j)} int_{t0}^{tau_j} e^{gamma b(p)} dp
    double T2 = 0.0;     // trapezoid of the marched I1 values
    double b_prev = 0.0; // b(t0) = 0
    for (int j = 0; j < n; ++j) {
        const double a = t0 + j * h;
        const double b_hi = b(a + h);
        double local_J0 = 0.0;
        double local_I1 = 0.0;
        for (std::size_t i = 0; i < gauss.size(); ++i) {
            const double p = a + 0.5 * h * (1.0 + gauss.nodes[i]);
            const double w = 0.5 * h * gauss.weights[i];
            const double bp = b(p);
            local_J0 += w * std::exp(-gamma * bp);
            local_I1 += w * std::exp(-gamma * (b_hi - bp));
        }
        const double I1_next = I1 * std::exp(-gamma * (b_hi - b_prev)) + local_I1;
        T2 += 0.5 * h * (I1 + I1_next);
        I1 = I1_next;
        J0 += local_J0;
        b_prev = b_hi;
    }
    return gamma * law.mu(t0) * J0 + T2;
}

// ---------------------------------------------------------------------------
// Stress reconstruction.
// ---------------------------------------------------------------------------

struct CaseBSolution {
    StressField field;          // tau on the requested grid (time-invariant)
    double edge_slope = 0.0;    // tau(1^-) = psi'(0^-)
    double load_balance = 0.0;  // int_0^1 tau dx recomputed from the field
    double time_factor = 0.0;   // ageing response diagnostic T(t)
    CaseBExponent exponent;     // tip classification
    double closure_residual = 0.0;
    double tail_residual = 0.0; // inversion truncation estimate
};

namespace detail {
namespace caseb {

// Everything needed to evaluate psi'(xi) and psi(xi) by the subtracted
// Fourier fold on the uniform half-grid s_j = j h (Simpson weights).
struct InversionTable {
    std::vector<double> s;
    std::vector<complex_t> R;    // psi' spectrum after subtractions
    std::vector<complex_t> Rpsi; // psi spectrum after subtractions
    double h = 0.0;
    double P = 1.0;
    double psi_prime0 = 0.0;
    double c2 = 0.0;    // fitted 1/(s-i)^2 coefficient of the psi' spectrum
    double c2psi = 0.0; // fitted 1/(s-i)^2 coefficient of the psi spectrum
    double tail_residual = 0.0;
};

inline InversionTable build_inversion_table(const HalfLineSolution& hs, double cutoff,
                                            double step) {
    InversionTable inv;
    inv.P = hs.bd.P;
    inv.psi_prime0 = hs.psi_prime0;
    int m = static_cast<int>(std::lround(cutoff / step));
    if (m % 2 == 1) ++m;
    inv.h = step;
    inv.s.resize(m + 1);
    inv.R.resize(m + 1);
    inv.Rpsi.resize(m + 1);

    // Q~(s) = P/sqrt(2pi) - i s Phi^-(s) transforms psi'; its 1/(s - i)
    // coefficient is exactly -i psi'0 / sqrt(2pi).
    const complex_t c1(0.0, -hs.psi_prime0 / kSqrt2Pi);
    std::vector<complex_t> qt(m + 1), rpsi_raw(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double s = j * step;
        inv.s[j] = s;
        const complex_t phi = phi_minus(hs, s);
        qt[j] = hs.bd.P / kSqrt2Pi - complex_t(0.0, 1.0) * s * phi;
        rpsi_raw[j] = phi + complex_t(0.0, hs.bd.P / kSqrt2Pi) / complex_t(s, -1.0);
    }
    // Fit the real second-order coefficients on the 0.75..0.85 cutoff band.
    double c2_acc = 0.0, c2psi_acc = 0.0;
    int c2_n = 0;
    for (int j = 0; j <= m; ++j) {
        const double s = inv.s[j];
        if (s < 0.75 * cutoff || s > 0.85 * cutoff) continue;
        const complex_t si(s, -1.0);
        c2_acc += ((qt[j] - c1 / si) * si * si).real();
        c2psi_acc += (rpsi_raw[j] * si * si).real();
        ++c2_n;
    }
    if (c2_n == 0) throw numeric_error("caseB: inversion grid too coarse for tail fit");
    inv.c2 = c2_acc / c2_n;
    inv.c2psi = c2psi_acc / c2_n;

    for (int j = 0; j <= m; ++j) {
        const complex_t si(inv.s[j], -1.0);
        inv.R[j] = qt[j] - c1 / si - inv.c2 / (si * si);
        inv.Rpsi[j] = rpsi_raw[j] - inv.c2psi / (si * si);
    }
    double tail_peak = 0.0;
    for (int j = static_cast<int>(0.9 * m); j <= m; ++j)
        tail_peak = std::max(tail_peak, std::abs(inv.R[j]));
    inv.tail_residual = tail_peak * cutoff; // scale of the discarded integral
    return inv;
}

// (2/sqrt(2pi)) Re int_0^S F(s) e^{-i s xi} ds by Simpson on the stored grid.
inline double hermitian_fold(const std::vector<double>& s,
                             const std::vector<complex_t>& F, double h, double xi) {
    const std::size_t m = s.size() - 1;
    const complex_t rot = std::exp(complex_t(0.0, -h * xi));
    complex_t phase(1.0, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc += w * (F[j] * phase).real();
        phase *= rot;
    }
    return (2.0 / kSqrt2Pi) * acc * h / 3.0;
}

// psi'(xi) = psi'0 e^xi + sqrt(2pi) c2 xi e^xi + fold(R); the closed-form
// terms are the inverse transforms of the subtracted 1/(s-i) and 1/(s-i)^2.
inline double psi_prime_at(const InversionTable& inv, double xi) {
    const double ex = std::exp(xi);
    return inv.psi_prime0 * ex + kSqrt2Pi * inv.c2 * xi * ex +
           hermitian_fold(inv.s, inv.R, inv.h, xi);
}

inline double psi_at(const InversionTable& inv, double xi) {
    const double ex = std::exp(xi);
    return inv.P * ex + kSqrt2Pi * inv.c2psi * xi * ex +
           hermitian_fold(inv.s, inv.Rpsi, inv.h, xi);
}

} // namespace caseb
} // namespace detail

inline CaseBSolution caseB_stress(const CaseBConfig& cfg, double t,
                                  const std::vector<double>& x_grid) {
    cfg.validate();
    const double t0 = cfg.load_instant();
    if (!(t >= t0))
        throw validation_error("caseB_stress: t must not precede the load instant");
    if (x_grid.empty()) throw validation_error("caseB_stress: empty grid");
    for (double x : x_grid)
        if (!(x > 0.0) || !(x <= 1.0))
            throw validation_error("caseB_stress: grid points must lie in (0, 1]");

    const double k0h = cfg.k0h();
    const double lamh = cfg.lamh();

    detail::caseb::SymbolData sym;
    sym.k0h = k0h;
    sym.lamh = lamh;
    if (detail::caseb::symbol_winding(sym) != 0)
        throw numeric_error("caseB_stress: nonzero symbol winding");

    const auto ws = detail::caseb::build_workspace(
        sym, cfg.factor_cutoff * cfg.refinement, cfg.refinement, true);
    const auto bd = detail::caseb::build_boundary_data(ws, cfg.load, k0h, lamh);
    const auto hs = detail::caseb::solve_half_line(bd, cfg.closure_point);
    const auto inv = detail::caseb::build_inversion_table(hs, cfg.inversion_cutoff,
                                                          cfg.inversion_step);

    if (!(inv.tail_residual < 1e-3 * std::abs(cfg.load)))
        throw numeric_error(
            "caseB_stress: inversion truncation residual too large; raise the "
            "inversion cutoff");

    CaseBSolution sol;
    sol.exponent = caseB_exponent(k0h, lamh);
    sol.edge_slope = hs.psi_prime0;
    sol.closure_residual = hs.closure_residual;
    sol.tail_residual = inv.tail_residual;
    sol.time_factor = caseB_time_factor(cfg, t);

    sol.field.grid = x_grid;
    sol.field.time = t;
    sol.field.endpoint_exponent =
        sol.exponent.bounded ? 0.0 : sol.exponent.stress_exponent;
    sol.field.values.resize(x_grid.size());
    sol.field.transfer.resize(x_grid.size());
    sol.field.primitive.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double xi = std::log(x_grid[i]);
        const double dpsi = detail::caseb::psi_prime_at(inv, xi);
        sol.field.values[i] = dpsi / x_grid[i];
        sol.field.transfer[i] = sol.field.values[i];
        sol.field.primitive[i] = detail::caseb::psi_at(inv, xi);
    }
    for (double v : sol.field.values)
        if (!std::isfinite(v)) throw numeric_error("caseB_stress: non-finite traction");

    // Load balance: int tau dx = int psi'(xi) dxi, with psi(xi_min) carrying
    // the whole tip contribution below the lower limit.
    const double xi_min = -9.0;
    const int n_xi = 600;
    const double h_xi = -xi_min / n_xi;
    double acc = 0.0;
    for (int j = 0; j <= n_xi; ++j) {
        const double xi = xi_min + j * h_xi;
        const double w = (j == 0 || j == n_xi) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        acc += w * detail::caseb::psi_prime_at(inv, xi);
    }
    sol.load_balance = acc * h_xi / 3.0 + detail::caseb::psi_at(inv, xi_min);

    return sol;
}

} // namespace creeppatch
