#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hle/params.hpp"
#include "support.hpp"

using namespace hle;

TEST_CASE("hyperbola membership") {
    CHECK(check_hyperbola({4, 0.0, 0.0, 4.0, 4.0}));         // 1 + 1 = 2
    CHECK_FALSE(check_hyperbola({4, 0.0, 0.0, 4.0, 5.0}));   // 1 + 0.8 != 2
    CHECK(check_hyperbola({3, -4.0, 3.0, 2.0, 4.0}));        // -0.5 + 1.5 = 1
    CHECK(check_hyperbola({3, 0.0, 0.0, 4.0, 12.0}));
    CHECK(check_hyperbola({2, -1.0, -4.0, 2.0, 4.0}));
}

TEST_CASE("reduction constants") {
    const ReducedParams r1 = derive_reduced({4, 0.0, 0.0, 4.0, 4.0});
    CHECK(r1.lambda1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r1.lambda2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r1.A == doctest::Approx(0.0));
    CHECK(r1.Gamma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r1.delta == doctest::Approx(8.0).epsilon(1e-14));

    const ReducedParams r2 = derive_reduced({3, 0.0, 0.0, 4.0, 12.0});
    CHECK(r2.lambda1 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r2.lambda2 == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r2.A == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r2.Gamma == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(r2.delta == doctest::Approx(32.0).epsilon(1e-14));

    const ReducedParams r3 = derive_reduced({3, -4.0, 3.0, 2.0, 4.0});
    CHECK(r3.lambda1 == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r3.lambda2 == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(r3.A == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r3.Gamma == doctest::Approx(-0.75).epsilon(1e-14));
    CHECK(r3.delta == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("validation names the violated relation") {
    CHECK_THROWS_WITH_AS(derive_reduced({4, 0.0, 0.0, 4.0, 5.0}),
                         doctest::Contains("hyperbola"), ValidationError);
    CHECK_THROWS_WITH_AS(derive_reduced({4, 0.0, 0.0, 0.5, 4.0}),
                         doctest::Contains("p must exceed 1"), ValidationError);
    // p = q = 2 sits on the hyperbola for n=4, a=b=-2 but fails anticoercivity
    CHECK_THROWS_WITH_AS(derive_reduced({4, -2.0, -2.0, 2.0, 2.0}),
                         doctest::Contains("anticoercivity"), ValidationError);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime({4, 0.0, 0.0, 4.0, 4.0}).tag == RegimeTag::PositiveExistence);
    CHECK(classify_regime({3, -4.0, 3.0, 2.0, 4.0}).tag == RegimeTag::NonexistenceNonneg);
    CHECK(classify_regime({2, -1.0, -4.0, 2.0, 4.0}).tag == RegimeTag::NonexistenceNonneg);
    // a = -n: Gamma = 0. For n=3, a=-3, p=2: lambda2 = 0, lambda1 = 1 = n-2, pick q with
    // (b+n)/q = 1: q = 4, b = 1.
    CHECK(classify_regime({3, -3.0, 1.0, 2.0, 4.0}).tag == RegimeTag::Degenerate);

    // classification matches the sign of Gamma
    testsupport::ParamGen gen(20260810);
    for (int i = 0; i < 300; ++i) {
        const SystemParams params = gen.next();
        ReducedParams red;
        Regime regime;
        try {
            red = derive_reduced(params);
            regime = classify_regime(params);
        } catch (const ValidationError&) {
            continue;
        }
        if (regime.tag == RegimeTag::PositiveExistence) CHECK(red.Gamma > 0.0);
        if (regime.tag == RegimeTag::Degenerate) CHECK(red.Gamma == 0.0);
        if (regime.tag == RegimeTag::NonexistenceNonneg) CHECK(red.Gamma < 0.0);
        const bool n2_positive =
            params.n == 2 && regime.tag == RegimeTag::PositiveExistence;
        CHECK_FALSE(n2_positive);
    }
}

TEST_CASE("A^2 + Gamma = ((n-2)/2)^2 over randomized on-hyperbola inputs") {
    testsupport::ParamGen gen(99173);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const SystemParams params = gen.next();
        ReducedParams red;
        try {
            red = derive_reduced(params);
        } catch (const ValidationError&) {
            continue;
        }
        const double target = 0.25 * (params.n - 2.0) * (params.n - 2.0);
        CHECK(std::fabs(red.A * red.A + red.Gamma - target) <=
              1e-12 * std::max(1.0, target));
        CHECK(std::fabs(red.lambda1 + red.lambda2 - (params.n - 2.0)) <= 1e-12 *
              std::max(1.0, std::fabs(params.n - 2.0)));
        CHECK(red.delta > 0.0);
        CHECK(red.q > red.p_conj);
        ++checked;
    }
    CHECK(checked > 200);
}

TEST_CASE("a-priori bounds") {
    // Gamma=1, p=q=4: g_bound = 3^{3/8}
    const ReducedParams r1 = derive_reduced({4, 0.0, 0.0, 4.0, 4.0});
    const AprioriBounds b1 = apriori_bounds(r1);
    CHECK(b1.g_bound == doctest::Approx(std::pow(3.0, 3.0 / 8.0)).epsilon(1e-12));
    CHECK(b1.f_bound == doctest::Approx(b1.g_bound).epsilon(1e-12));

    // Gamma = 0 -> both zero
    ReducedParams degenerate = r1;
    degenerate.Gamma = 0.0;
    const AprioriBounds b0 = apriori_bounds(degenerate);
    CHECK(b0.g_bound == 0.0);
    CHECK(b0.f_bound == 0.0);

    // Gamma=0.1875, p=4, q=12: evaluate the closed form independently
    const ReducedParams r2 = derive_reduced({3, 0.0, 0.0, 4.0, 12.0});
    const AprioriBounds b2 = apriori_bounds(r2);
    const double pc = 4.0 / 3.0;
    const double expect = std::pow(12.0 / pc * std::pow(0.1875, pc), 1.0 / (12.0 - pc));
    CHECK(b2.g_bound == doctest::Approx(expect).epsilon(1e-12));
    CHECK(b2.g_bound == doctest::Approx(0.9967).epsilon(2e-4));

    // monotone increasing in |Gamma| at fixed p, q
    ReducedParams sweep = r1;
    double prev = 0.0;
    for (double gamma = 0.25; gamma <= 4.0; gamma += 0.25) {
        sweep.Gamma = gamma;
        const AprioriBounds bb = apriori_bounds(sweep);
        CHECK(bb.g_bound > prev);
        prev = bb.g_bound;
    }
}

TEST_CASE("equilibria satisfy the constant-solution equations") {
    // Gamma=1 -> +/-(1,1)
    const ReducedParams r1 = derive_reduced({4, 0.0, 0.0, 4.0, 4.0});
    auto eq1 = equilibria(r1);
    REQUIRE(eq1.size() == 3);
    CHECK(eq1[1].x1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eq1[1].x2 == doctest::Approx(1.0).epsilon(1e-14));

    // Gamma=4, p=q=4 (delta=8) -> +/-(2,2): substitution into the constant equations
    ReducedParams r4 = r1;
    r4.Gamma = 4.0;
    auto eq4 = equilibria(r4);
    CHECK(eq4[1].x1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eq4[1].x2 == doctest::Approx(2.0).epsilon(1e-14));

    // Gamma=-0.75, p=2, q=4 (delta=2) -> +/-(0.75, -0.5625); no positive equilibrium
    const ReducedParams r3 = derive_reduced({3, -4.0, 3.0, 2.0, 4.0});
    auto eq3 = equilibria(r3);
    CHECK(eq3[1].x1 == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(eq3[1].x2 == doctest::Approx(-0.5625).epsilon(1e-14));
    CHECK(eq3[1].x2 < 0.0);

    // substitution residual < 1e-12 across randomized admissible parameters
    testsupport::ParamGen gen(5150);
    for (int i = 0; i < 200; ++i) {
        ReducedParams red;
        try {
            red = derive_reduced(gen.next());
        } catch (const ValidationError&) {
            continue;
        }
        if (red.Gamma == 0.0) continue;
        for (const Equilibrium& e : equilibria(red)) {
            const double res1 = red.Gamma * e.x1 - hle::odd_power(e.x2, red.p);
            const double res2 = red.Gamma * e.x2 - hle::odd_power(e.x1, red.q);
            const double scale = std::max({1.0, std::fabs(red.Gamma * e.x1),
                                           std::fabs(red.Gamma * e.x2)});
            CHECK(std::fabs(res1) <= 1e-12 * scale);
            CHECK(std::fabs(res2) <= 1e-12 * scale);
        }
    }

    // Gamma = 0: only the origin
    ReducedParams r0 = r1;
    r0.Gamma = 0.0;
    CHECK(equilibria(r0).size() == 1);
}
