#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <creeppatch/special.hpp>

using namespace creeppatch;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("jacobi_eval degree zero is one for any parameters") {
    for (double a : {-1.5, -0.5, 0.0, 0.5, 1.5, 2.5})
        for (double x : {-0.9, -0.3, 0.0, 0.7, 1.0})
            CHECK(jacobi_eval({a, a}, 0, x) == 1.0);
}

TEST_CASE("jacobi_eval linear ultraspherical case") {
    // P_1^{(1/2,1/2)}(x) = 3x/2.
    for (double x : {-1.0, -0.37, 0.0, 0.25, 0.99})
        CHECK_THAT(jacobi_eval({0.5, 0.5}, 1, x), Catch::Matchers::WithinAbs(1.5 * x, 1e-14));
}

TEST_CASE("jacobi_eval quadratic Chebyshev-weight value at origin") {
    CHECK_THAT(jacobi_eval({-0.5, -0.5}, 2, 0.0), Catch::Matchers::WithinAbs(-3.0 / 8.0, 1e-15));
}

TEST_CASE("jacobi_eval handles parameters below -1 where the recurrence degenerates") {
    // Degrees 2..4 at alpha = beta = -3/2; the three-term recurrence has a
    // vanishing leading coefficient at n = 3, so these exercise the
    // binomial-sum fallback.
    CHECK_THAT(jacobi_eval({-1.5, -1.5}, 2, 0.3), Catch::Matchers::WithinAbs(-0.125, 1e-13));
    CHECK_THAT(jacobi_eval({-1.5, -1.5}, 2, -0.9), Catch::Matchers::WithinAbs(-0.125, 1e-13));
    CHECK_THAT(jacobi_eval({-1.5, -1.5}, 3, 0.7),
               Catch::Matchers::WithinAbs(-0.088375, 1e-12));
    CHECK_THAT(jacobi_eval({-1.5, -1.5}, 4, 0.0),
               Catch::Matchers::WithinAbs(0.1171875, 1e-12));
}

TEST_CASE("jacobi_eval symmetry for equal parameters") {
    for (double a : {-1.5, -0.5, 0.5, 1.5, 2.5}) {
        for (int n = 0; n <= 12; ++n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            for (double x : {0.11, 0.5, 0.83}) {
                const double lhs = jacobi_eval({a, a}, n, -x);
                const double rhs = sign * jacobi_eval({a, a}, n, x);
                CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-13 * (1.0 + std::abs(rhs))));
            }
        }
    }
}

TEST_CASE("jacobi_eval validates the degree") {
    CHECK_THROWS_AS(jacobi_eval({0.5, 0.5}, -1, 0.0), validation_error);
}

TEST_CASE("chebyshev_bridge reproduces the trigonometric definitions") {
    CHECK_THAT(chebyshev_bridge(ChebyshevKind::first, 2, kPi / 3.0),
               Catch::Matchers::WithinAbs(-0.5, 1e-14));
    CHECK_THAT(chebyshev_bridge(ChebyshevKind::second, 3, kPi / 2.0),
               Catch::Matchers::WithinAbs(0.0, 1e-14));
    // Endpoint limits of U_m: sin((m+1)t)/sin(t) -> m+1 at t = 0 and
    // (-1)^m (m+1) at t = pi.
    CHECK_THAT(chebyshev_bridge(ChebyshevKind::second, 4, 0.0),
               Catch::Matchers::WithinAbs(5.0, 1e-14));
    CHECK_THAT(chebyshev_bridge(ChebyshevKind::second, 3, kPi),
               Catch::Matchers::WithinAbs(-4.0, 1e-13));
}

TEST_CASE("chebyshev_bridge ties the half-integer Jacobi families to T and U") {
    // P_m^{(1/2,1/2)}(cos t)  = [2 Gamma(m+3/2) / (sqrt(pi) Gamma(m+2))] U_m(cos t)
    // P_m^{(-1/2,-1/2)}(cos t) = [Gamma(m+1/2) / (sqrt(pi) Gamma(m+1))] T_m(cos t)
    for (int m = 0; m <= 10; ++m) {
        const double cu =
            2.0 * std::exp(std::lgamma(m + 1.5) - std::lgamma(m + 2.0)) / std::sqrt(kPi);
        const double ct =
            std::exp(std::lgamma(m + 0.5) - std::lgamma(m + 1.0)) / std::sqrt(kPi);
        for (double t : {0.2, 1.0, 1.9, 2.8}) {
            const double x = std::cos(t);
            CHECK_THAT(jacobi_eval({0.5, 0.5}, m, x),
                       Catch::Matchers::WithinAbs(
                           cu * chebyshev_bridge(ChebyshevKind::second, m, t), 1e-13));
            CHECK_THAT(jacobi_eval({-0.5, -0.5}, m, x),
                       Catch::Matchers::WithinAbs(
                           ct * chebyshev_bridge(ChebyshevKind::first, m, t), 1e-13));
        }
    }
}

TEST_CASE("gamma_ratio equal offsets give one") {
    for (int m : {1, 5, 40, 1000}) CHECK(gamma_ratio(m, 0.75, 0.75) == 1.0);
}

TEST_CASE("gamma_ratio small argument against direct log-gamma") {
    const double expect = std::exp(std::lgamma(1.0 + 1.5) - std::lgamma(1.0 + 1.0));
    CHECK_THAT(gamma_ratio(1, 1.5, 1.0), Catch::Matchers::WithinRel(expect, 1e-14));
}

TEST_CASE("gamma_ratio matches the power-law asymptote at large order") {
    // Gamma(m+a)/Gamma(m+b) = m^{a-b} (1 + O(1/m)).
    const double r = gamma_ratio(1000, 1.5, 1.0);
    CHECK_THAT(r / std::pow(1000.0, 0.5), Catch::Matchers::WithinAbs(1.0, 1e-3));
}

TEST_CASE("hyp2f1 basic values") {
    CHECK(hyp2f1(0.3, 1.7, 2.2, 0.0) == 1.0);
    // F(1,1;2;x) = -log(1-x)/x.
    CHECK_THAT(hyp2f1(1.0, 1.0, 2.0, 0.5), Catch::Matchers::WithinRel(2.0 * std::log(2.0), 1e-14));
    CHECK_THAT(hyp2f1(1.0, 1.0, 2.0, -0.7),
               Catch::Matchers::WithinRel(-std::log(1.7) / -0.7, 1e-13));
}

TEST_CASE("hyp2f1 terminating series ties back to jacobi_eval") {
    // P_m^{(a,b)}(x) = [Gamma(a+m+1)/(m! Gamma(1+a))] F(-m, a+b+m+1; a+1; (1-x)/2).
    for (int m = 0; m <= 8; ++m) {
        const double a = 0.5, b = 0.5;
        const double front =
            std::exp(std::lgamma(a + m + 1.0) - std::lgamma(m + 1.0) - std::lgamma(1.0 + a));
        for (double x : {-0.8, -0.2, 0.4, 0.9}) {
            const double viaF = front * hyp2f1(-m, a + b + m + 1.0, a + 1.0, 0.5 * (1.0 - x));
            CHECK_THAT(jacobi_eval({a, b}, m, x),
                       Catch::Matchers::WithinAbs(viaF, 1e-12 * (1.0 + std::abs(viaF))));
        }
    }
}

TEST_CASE("hyp2f1 rejects the polynomial-pole combination") {
    // c a non-positive integer with no earlier termination has a genuine pole.
    CHECK_THROWS_AS(hyp2f1(0.5, 0.7, -2.0, 0.3), validation_error);
}

TEST_CASE("lgamma_complex agrees with the real log-gamma on the real axis") {
    for (double x : {0.5, 1.0, 2.5, 7.3}) {
        const auto v = lgamma_complex(std::complex<double>(x, 0.0));
        const double expect = std::lgamma(x);
        CHECK_THAT(v.real(),
                   Catch::Matchers::WithinAbs(expect, 1e-12 * (1.0 + std::abs(expect))));
        CHECK_THAT(v.imag(), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("lgamma_complex reflection magnitude identity on the imaginary axis") {
    // |Gamma(1+iy)|^2 = pi y / sinh(pi y).
    for (double y : {0.3, 1.0, 2.7}) {
        const auto g = gamma_complex(std::complex<double>(1.0, y));
        const double expect = kPi * y / std::sinh(kPi * y);
        CHECK_THAT(std::norm(g), Catch::Matchers::WithinRel(expect, 1e-11));
    }
}

TEST_CASE("lgamma_complex conjugate symmetry") {
    const std::complex<double> z(1.7, 2.3);
    const auto a = lgamma_complex(z);
    const auto b = lgamma_complex(std::conj(z));
    CHECK_THAT(a.real(), Catch::Matchers::WithinRel(b.real(), 1e-12));
    CHECK_THAT(a.imag(), Catch::Matchers::WithinRel(-b.imag(), 1e-12));
}
