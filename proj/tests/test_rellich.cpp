#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hle/rellich.hpp"
#include "support.hpp"

using namespace hle;

TEST_CASE("appendix Gamma closed form") {
    CHECK(gamma_appendix(5, 2.0, 0.0) == doctest::Approx(1.25).epsilon(1e-15));   // (1/2)(5/2)
    CHECK(gamma_appendix(4, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));    // (3-2)(4-3)
    CHECK(gamma_appendix(4, 2.0, 6.0) == doctest::Approx(-3.0).epsilon(1e-15));   // (5-2)(4-5)
    CHECK_THROWS_AS(gamma_appendix(4, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(gamma_appendix(1, 2.0, 0.0), ValidationError);
}

TEST_CASE("mu2 brute-force agreement and special values") {
    // classical Rellich constant n^2 (n-4)^2 / 16 at n = 5
    const Mu2Result m5 = mu2(5, 0.0);
    CHECK(m5.value == 25.0 / 16.0);
    CHECK(m5.k == 0);

    // resonance: Gamma = -3, k = 1 gives -3 + 1*(2+1) = 0
    const Mu2Result m46 = mu2(4, 6.0);
    CHECK(m46.value == 0.0);
    CHECK(m46.k == 1);

    const Mu2Result m42 = mu2(4, 2.0);
    CHECK(m42.value == 1.0);
    CHECK(m42.k == 0);

    // brute force over a wide k range as the independent oracle
    for (int n = 2; n <= 7; ++n) {
        for (double alpha = -6.0; alpha <= 8.0; alpha += 0.37) {
            const double gamma = gamma_appendix(n, 2.0, alpha);
            double brute = gamma * gamma;
            int brute_k = 0;
            for (int k = 1; k <= 2000; ++k) {
                const double v = gamma + k * (n - 2.0 + k);
                if (v * v < brute) {
                    brute = v * v;
                    brute_k = k;
                }
            }
            const Mu2Result got = mu2(n, alpha);
            CHECK(got.value == doctest::Approx(brute).epsilon(1e-15));
            CHECK(got.k == brute_k);
        }
    }
}

TEST_CASE("mu2 vanishes exactly iff Gamma = -k(n-2+k) for some k >= 0") {
    for (int n = 2; n <= 6; ++n) {
        for (int k = 0; k <= 5; ++k) {
            // choose alpha so Gamma = -k(n-2+k): with theta=2, Gamma(alpha) solves a
            // quadratic in (n+alpha)/2; pick the root analytically
            const double target = -static_cast<double>(k) * (n - 2.0 + k);
            // Gamma = (x-2)(n-x), x=(n+alpha)/2 -> x^2 -(n+2)x + (2n+Gamma) = 0
            const double disc = (n + 2.0) * (n + 2.0) / 4.0 - (2.0 * n + target);
            REQUIRE(disc >= 0.0);
            const double x = (n + 2.0) / 2.0 + std::sqrt(disc);
            const double alpha = 2.0 * x - n;
            const Mu2Result res = mu2(n, alpha);
            CHECK(res.value <= 1e-24);
        }
    }
}

TEST_CASE("mu2 argmin is nondecreasing as Gamma decreases") {
    // with theta = 2, Gamma decreases as alpha grows past the vertex; sweep alpha up
    int prev_k = 0;
    for (double alpha = 2.0; alpha <= 40.0; alpha += 0.25) {
        const Mu2Result r = mu2(4, alpha);
        CHECK(r.k >= prev_k);
        prev_k = r.k;
    }
}

TEST_CASE("mu_theta: Mitidieri closed form and the theta = 2 overlap") {
    CHECK(mu_theta(4, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mu_theta(5, 2.0, 0.0) == doctest::Approx(25.0 / 16.0).epsilon(1e-15));

    // agreement with mu2 wherever theta = 2 and Gamma >= 0, to 1e-14
    for (double alpha = -3.0; alpha <= 3.0; alpha += 0.1) {
        for (int n = 2; n <= 7; ++n) {
            const double gamma = gamma_appendix(n, 2.0, alpha);
            if (gamma < 0.0) continue;
            CHECK(std::fabs(mu_theta(n, 2.0, alpha) - mu2(n, alpha).value) <=
                  1e-14 * std::max(1.0, gamma * gamma));
        }
    }

    // |Gamma|^theta arithmetic: Gamma = 2 at theta = 3 needs n >= 6 (the product
    // (x-2)(n-x) tops out at ((n-2)/2)^2); alpha = 6 + 3 sqrt(2) gives Gamma = 2
    // exactly at n = 6, so mu_theta = 2^3 = 8
    const double alpha2 = 6.0 + 3.0 * std::sqrt(2.0);
    CHECK(gamma_appendix(6, 3.0, alpha2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mu_theta(6, 3.0, alpha2) == doctest::Approx(8.0).epsilon(1e-13));

    // Gamma < 0, theta != 2: no closed form
    CHECK(gamma_appendix(4, 3.0, 20.0) < 0.0);
    CHECK_THROWS_WITH_AS(mu_theta(4, 3.0, 20.0), doctest::Contains("formula unavailable"),
                         ValidationError);
    // Gamma < 0, theta = 2 defers to mu2
    CHECK(mu_theta(4, 2.0, 6.0) == mu2(4, 6.0).value);
}

TEST_CASE("theta_double_star") {
    const auto v52 = theta_double_star(5, 2.0);
    REQUIRE(v52.has_value());
    CHECK(*v52 == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_FALSE(theta_double_star(3, 2.0).has_value());  // n < 2 theta: unbounded
    const auto v92 = theta_double_star(9, 2.0);
    REQUIRE(v92.has_value());
    CHECK(*v92 == doctest::Approx(3.6).epsilon(1e-15));
}

TEST_CASE("radial isometry identity on the instanton") {
    const LineGrid grid = LineGrid::make(12.0, 0.01);
    // u = 2 sqrt(2) / (1 + r^2) with n=4, theta=2, alpha=0
    const auto u = testsupport::sample_fn(grid, [](double s) {
        const double r = std::exp(-s);
        return 2.0 * std::sqrt(2.0) / (1.0 + r * r);
    });
    const IsometryReport rep = radial_isometry_check(grid, u, 4, 2.0, 0.0);
    CHECK(rep.lhs > 0.0);
    CHECK(rep.defect <= 1e-4);

    // zero profile: both sides vanish
    std::vector<double> zero(grid.size(), 0.0);
    const IsometryReport rz = radial_isometry_check(grid, zero, 4, 2.0, 0.0);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs == 0.0);
}

TEST_CASE("isometry defect halves at order 2 on a Gaussian bump") {
    // bump given in s, mapped to a radial profile through the appendix transform
    auto make_u = [](const LineGrid& grid, int n, double theta, double alpha) {
        const double kappa = (2.0 * theta - n - alpha) / theta;
        return testsupport::sample_fn(grid, [=](double s) {
            const double g = std::exp(-0.5 * s * s);
            return std::exp(-kappa * s) * g;  // u = r^kappa g(s), r = e^{-s}
        });
    };
    const LineGrid coarse = LineGrid::make(10.0, 0.02);
    const LineGrid fine = LineGrid::make(10.0, 0.01);
    const auto uc = make_u(coarse, 4, 2.0, 1.0);
    const auto uf = make_u(fine, 4, 2.0, 1.0);
    const double dc = radial_isometry_check(coarse, uc, 4, 2.0, 1.0).defect;
    const double df = radial_isometry_check(fine, uf, 4, 2.0, 1.0).defect;
    CHECK(dc / df >= 3.0);
    CHECK(dc / df <= 5.5);
    CHECK(df <= 1e-4);
}
