#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <creeppatch/quadrature.hpp>

using namespace creeppatch;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent moment oracle: M_k = int_{-1}^1 (1-x)^a (1+x)^b x^k dx.
// Integrating d/dx[(1-x)^{a+1}(1+x)^{b+1}x^k] over the interval gives the
// cancellation-free recursion M_{k+1} = [(b-a) M_k + k M_{k-1}]/(a+b+k+2),
// seeded by the Beta-function value of M_0.
double weighted_monomial_moment(double a, double b, int k) {
    const long double la = a, lb = b;
    long double m_prev = 0.0L;
    long double m = std::exp((la + lb + 1.0L) * std::log(2.0L) + std::lgamma(la + 1.0L) +
                             std::lgamma(lb + 1.0L) - std::lgamma(la + lb + 2.0L));
    for (int j = 0; j < k; ++j) {
        const long double m_next = ((lb - la) * m + j * m_prev) / (la + lb + j + 2.0L);
        m_prev = m;
        m = m_next;
    }
    return static_cast<double>(m);
}

} // namespace

TEST_CASE("gauss_jacobi_rule single Legendre node is the midpoint rule") {
    const auto r = gauss_jacobi_rule(0.0, 0.0, 1);
    REQUIRE(r.size() == 1);
    CHECK_THAT(r.nodes[0], Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(r.weights[0], Catch::Matchers::WithinAbs(2.0, 1e-15));
}

TEST_CASE("gauss_jacobi_rule total weight equals the Beta moment") {
    struct Case {
        double a, b;
    };
    for (const Case c : {Case{0.0, 0.0}, Case{0.5, 0.5}, Case{-0.5, -0.5}, Case{1.5, 1.5},
                         Case{2.5, -0.5}, Case{-0.9, 3.0}}) {
        for (int n : {1, 2, 5, 16, 64}) {
            const auto r = gauss_jacobi_rule(c.a, c.b, n);
            const double expect = jacobi_weight_moment({c.a, c.b});
            CHECK_THAT(r.total_weight(), Catch::Matchers::WithinRel(expect, 1e-12));
        }
    }
    // Semicircle weight total is pi/2.
    CHECK_THAT(gauss_jacobi_rule(0.5, 0.5, 8).total_weight(),
               Catch::Matchers::WithinRel(kPi / 2.0, 1e-13));
}

TEST_CASE("gauss_jacobi_rule nodes ascend inside the interval with positive weights") {
    const auto r = gauss_jacobi_rule(1.5, -0.5, 24);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.nodes[i] > -1.0);
        CHECK(r.nodes[i] < 1.0);
        CHECK(r.weights[i] > 0.0);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
}

TEST_CASE("gauss_jacobi_rule is exact to degree 2n-1 against the Beta-moment oracle") {
    struct Case {
        double a, b;
    };
    for (const Case c : {Case{0.0, 0.0}, Case{0.5, 0.5}, Case{-0.5, -0.5}, Case{1.5, 1.5},
                         Case{2.5, -0.5}}) {
        for (int n : {1, 2, 3, 5, 8}) {
            const auto r = gauss_jacobi_rule(c.a, c.b, n);
            for (int k = 0; k <= 2 * n - 1; ++k) {
                const double got = r.integrate([k](double x) { return std::pow(x, k); });
                const double expect = weighted_monomial_moment(c.a, c.b, k);
                CHECK_THAT(got, Catch::Matchers::WithinAbs(
                                    expect, 1e-12 * std::max(1.0, std::abs(expect))));
            }
        }
    }
}

TEST_CASE("gauss_jacobi_rule converges spectrally on an entire function") {
    const auto r = gauss_jacobi_rule(0.0, 0.0, 20);
    const double expect = std::exp(1.0) - std::exp(-1.0);
    CHECK_THAT(r.integrate([](double x) { return std::exp(x); }),
               Catch::Matchers::WithinRel(expect, 1e-14));
}

TEST_CASE("gauss_jacobi_rule validates its inputs") {
    CHECK_THROWS_AS(gauss_jacobi_rule(-1.0, 0.0, 4), validation_error);
    CHECK_THROWS_AS(gauss_jacobi_rule(0.0, -1.2, 4), validation_error);
    CHECK_THROWS_AS(gauss_jacobi_rule(0.0, 0.0, 0), validation_error);
}

TEST_CASE("integrate_panels integrates a smooth function") {
    CHECK_THAT(integrate_panels([](double t) { return std::sin(t); }, 0.0, kPi, 8),
               Catch::Matchers::WithinRel(2.0, 1e-13));
}

TEST_CASE("pv_weight_moment closed forms") {
    for (double x : {-0.75, -0.3, 0.0, 0.41, 0.9}) {
        CHECK_THAT(pv_weight_moment({0.5, 0.5}, x), Catch::Matchers::WithinAbs(-kPi * x, 1e-14));
        CHECK_THAT(pv_weight_moment({-0.5, -0.5}, x), Catch::Matchers::WithinAbs(0.0, 1e-14));
        CHECK_THAT(pv_weight_moment({0.0, 0.0}, x),
                   Catch::Matchers::WithinAbs(std::log((1.0 - x) / (1.0 + x)), 1e-14));
        CHECK_THAT(pv_weight_moment({1.5, 1.5}, x),
                   Catch::Matchers::WithinAbs(-kPi * x * (1.5 - x * x), 1e-14));
    }
}

TEST_CASE("pv_weight_moment generic fallback against closed-form oracles") {
    // (1,1):   PV int (1-y^2)/(y-x) dy = (1-x^2) log((1-x)/(1+x)) - 2x.
    // (1/2,-1/2): PV int sqrt((1-y)/(1+y))/(y-x) dy = -pi identically.
    for (double x : {-0.6, -0.1, 0.33, 0.8}) {
        const double expect11 = (1.0 - x * x) * std::log((1.0 - x) / (1.0 + x)) - 2.0 * x;
        CHECK_THAT(pv_weight_moment({1.0, 1.0}, x), Catch::Matchers::WithinAbs(expect11, 1e-9));
        CHECK_THAT(pv_weight_moment({0.5, -0.5}, x), Catch::Matchers::WithinAbs(-kPi, 1e-9));
    }
}

TEST_CASE("cauchy_pv semicircle-weight anchors") {
    // Constant density: PV int sqrt(1-y^2)/(y-x) dy = -pi x.
    CHECK_THAT(cauchy_pv([](double) { return 1.0; }, {0.5, 0.5}, 0.3),
               Catch::Matchers::WithinAbs(-0.3 * kPi, 1e-12));
    // Density y: result is pi/2 - pi x^2.
    for (double x : {-0.5, 0.0, 0.7}) {
        CHECK_THAT(cauchy_pv([](double y) { return y; }, {0.5, 0.5}, x),
                   Catch::Matchers::WithinAbs(kPi / 2.0 - kPi * x * x, 1e-12));
    }
    // The weighted linear density reproduces 3 pi / 4 at the origin.
    CHECK_THAT(cauchy_pv([](double y) { return 1.5 * y; }, {0.5, 0.5}, 0.0),
               Catch::Matchers::WithinAbs(0.75 * kPi, 1e-12));
}

TEST_CASE("cauchy_pv parity: even density over a symmetric weight gives an odd transform") {
    const auto f = [](double y) { return std::cos(2.0 * y); };
    for (double x : {0.2, 0.55, 0.85}) {
        const double plus = cauchy_pv(f, {0.5, 0.5}, x);
        const double minus = cauchy_pv(f, {0.5, 0.5}, -x);
        CHECK_THAT(plus + minus, Catch::Matchers::WithinAbs(0.0, 1e-11));
    }
    const auto g = [](double y) { return std::sin(3.0 * y); };
    for (double x : {0.2, 0.55, 0.85}) {
        const double plus = cauchy_pv(g, {0.5, 0.5}, x);
        const double minus = cauchy_pv(g, {0.5, 0.5}, -x);
        CHECK_THAT(plus - minus, Catch::Matchers::WithinAbs(0.0, 1e-11));
    }
}

TEST_CASE("cauchy_pv rejects evaluation points outside the cut") {
    CHECK_THROWS_AS(cauchy_pv([](double) { return 1.0; }, {0.5, 0.5}, 1.0), validation_error);
}

TEST_CASE("spectral_image frozen anchors") {
    CHECK_THAT(spectral_image(1, 1, 0.0), Catch::Matchers::WithinAbs(0.75 * kPi, 1e-12));
    // Image of m = 3 under n = 1 is a degree-4 polynomial whose value at the
    // origin is -2 pi Gamma(9/2) / (sqrt(pi) Gamma(5)) = -35 pi / 64.
    CHECK_THAT(spectral_image(1, 3, 0.0),
               Catch::Matchers::WithinAbs(-35.0 * kPi / 64.0, 1e-12));
    CHECK_THAT(spectral_image(2, 0, 0.41),
               Catch::Matchers::WithinAbs(-1.7155577747, 1e-9));
    CHECK_THAT(spectral_image(2, 1, 0.0),
               Catch::Matchers::WithinAbs(15.0 * kPi / 16.0, 1e-12));
    CHECK_THAT(spectral_image(2, 1, 0.41), Catch::Matchers::WithinAbs(1.1867963937, 1e-9));
    CHECK_THAT(spectral_image(2, 2, 0.41), Catch::Matchers::WithinAbs(2.5229447478, 1e-9));
    CHECK_THAT(spectral_image(2, 3, 0.0), Catch::Matchers::WithinAbs(-2.5770877236, 1e-9));
    CHECK_THAT(spectral_image(2, 3, 0.41), Catch::Matchers::WithinAbs(1.0303678487, 1e-9));
    CHECK_THAT(spectral_image(2, 4, 0.41), Catch::Matchers::WithinAbs(-1.4002888400, 1e-9));
}

TEST_CASE("spectral_image agrees with direct principal-value quadrature") {
    for (int n : {1, 2}) {
        const JacobiParams wp{n - 0.5, n - 0.5};
        for (int m = 0; m <= 8; ++m) {
            for (int i = 1; i <= 21; ++i) {
                const double x = -1.0 + 2.0 * i / 22.0;
                const double direct = cauchy_pv(
                    [&](double s) { return jacobi_eval(wp, m, s); }, wp, x, 96);
                const double image = spectral_image(n, m, x);
                const double scale = std::max(1.0, std::abs(image));
                CHECK_THAT(direct, Catch::Matchers::WithinAbs(image, 1e-8 * scale));
            }
        }
    }
}

TEST_CASE("spectral_image parity follows the image polynomial") {
    for (int n : {1, 2})
        for (int m = 0; m <= 5; ++m)
            for (double x : {0.3, 0.77}) {
                const double sign = ((m + 2 * n - 1) % 2 == 0) ? 1.0 : -1.0;
                CHECK_THAT(spectral_image(n, m, -x),
                           Catch::Matchers::WithinAbs(sign * spectral_image(n, m, x), 1e-11));
            }
}

TEST_CASE("spectral_image validates its arguments") {
    CHECK_THROWS_AS(spectral_image(0, 1, 0.0), validation_error);
    CHECK_THROWS_AS(spectral_image(1, -1, 0.0), validation_error);
}

TEST_CASE("antiderivative identity for the weighted ultraspherical family") {
    // int_{-1}^x (1-y^2)^a P_k^{(a,a)}(y) dy = -(1/2k) (1-x^2)^{a+1} P_{k-1}^{(a+1,a+1)}(x).
    for (double a : {0.5, 1.5}) {
        for (int k = 1; k <= 8; ++k) {
            for (double x : {-0.7, -0.2, 0.35, 0.9}) {
                const double lhs = integrate_graded(
                    [&](double y) {
                        return std::pow(1.0 - y * y, a) * jacobi_eval({a, a}, k, y);
                    },
                    -1.0, x, /*toward_a=*/true);
                const double rhs = -(1.0 / (2.0 * k)) * std::pow(1.0 - x * x, a + 1.0) *
                                   jacobi_eval({a + 1.0, a + 1.0}, k - 1, x);
                CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-8 * (1.0 + std::abs(rhs))));
            }
        }
    }
}
