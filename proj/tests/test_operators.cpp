#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hle/operators.hpp"
#include "support.hpp"

using namespace hle;
using testsupport::soliton;

namespace {

ReducedParams soliton_red() { return derive_reduced({4, 0.0, 0.0, 4.0, 4.0}); }

TrajectoryPair soliton_pair(double L, double h) {
    const LineGrid grid = LineGrid::make(L, h);
    TrajectoryPair t{grid, testsupport::sample(grid, soliton),
                     testsupport::sample(grid, soliton), soliton_red()};
    return t;
}

}  // namespace

TEST_CASE("grid construction") {
    const LineGrid g = LineGrid::make(15.0, 0.01);
    CHECK(g.size() == 3001);
    CHECK(g.node(g.zero_index()) == 0.0);
    CHECK(g.node(0) == doctest::Approx(-15.0).epsilon(1e-15));
    CHECK(g.node(g.size() - 1) == doctest::Approx(15.0).epsilon(1e-15));
    CHECK_THROWS_AS(LineGrid::make(10.0, 0.2), ValidationError);   // above accuracy floor
    CHECK_THROWS_AS(LineGrid::make(-1.0, 0.01), ValidationError);
    CHECK_THROWS_AS(LineGrid::make(10.0, 0.0), ValidationError);
}

TEST_CASE("L+ on the closed-form soliton: -g'' + g = g^3 to O(h^2)") {
    const LineGrid grid = LineGrid::make(15.0, 0.01);
    const auto g = testsupport::sample(grid, soliton);
    const auto lg = apply_lplus(grid, 0.0, 1.0, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::fabs(grid.node(i)) > 10.0) continue;
        sup = std::max(sup, std::fabs(lg[i] - g[i] * g[i] * g[i]));
    }
    // |g''''| <= 5 sqrt(2) on the line, so the truncation constant is below 1
    CHECK(sup <= 2.0 * 0.01 * 0.01);
}

TEST_CASE("L+ is linear and vanishes on zero") {
    const LineGrid grid = LineGrid::make(5.0, 0.05);
    std::vector<double> zero(grid.size(), 0.0);
    for (double v : apply_lplus(grid, 0.7, -0.3, zero)) CHECK(v == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> g1(grid.size()), g2(grid.size()), combo(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        g1[i] = u(rng);
        g2[i] = u(rng);
        combo[i] = 1.75 * g1[i] - 0.6 * g2[i];
    }
    const auto l1 = apply_lplus(grid, 0.7, -0.3, g1);
    const auto l2 = apply_lplus(grid, 0.7, -0.3, g2);
    const auto lc = apply_lplus(grid, 0.7, -0.3, combo);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(lc[i] == doctest::Approx(1.75 * l1[i] - 0.6 * l2[i]).epsilon(1e-11));
    }
}

TEST_CASE("L- equals L+ with the drift negated; exact on linear data") {
    const LineGrid grid = LineGrid::make(5.0, 0.05);
    // A=0: the operators coincide
    const auto g = testsupport::sample(grid, soliton);
    const auto lp = apply_lplus(grid, 0.0, 1.0, g);
    const auto lm = apply_lminus(grid, 0.0, 1.0, g);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(lp[i] == lm[i]);

    // A=1, Gamma=0, f(s)=s: -f'' - 2f' = -2 exactly at interior nodes
    const auto lin = testsupport::sample_fn(grid, [](double s) { return s; });
    const auto lml = apply_lminus(grid, 1.0, 0.0, lin);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        CHECK(lml[i] == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("energy values") {
    // zero pair
    const LineGrid grid = LineGrid::make(10.0, 0.05);
    TrajectoryPair zero{grid, std::vector<double>(grid.size(), 0.0),
                        std::vector<double>(grid.size(), 0.0), soliton_red()};
    for (double e : energy(zero)) CHECK(e == 0.0);

    // equilibrium pair g = f = 1, Gamma = 1, p = q = 4: E = -1 + 1/4 + 1/4 = -1/2
    TrajectoryPair eqpair{grid, std::vector<double>(grid.size(), 1.0),
                          std::vector<double>(grid.size(), 1.0), soliton_red()};
    const auto e = energy(eqpair);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        CHECK(e[i] == doctest::Approx(-0.5).epsilon(1e-14));
    }

    // soliton pair: E = 0 within C h^2 (identity 2 sech^2 (tanh^2 - 1 + sech^2) = 0)
    const TrajectoryPair sol = soliton_pair(15.0, 0.01);
    const auto es = energy(sol);
    CHECK(interior_sup(sol.grid, es) <= 5.0 * 0.01 * 0.01);
}

TEST_CASE("hamiltonian matches the energy identity") {
    ReducedParams red = soliton_red();

    HamiltonianState origin{0.0, 0.0, 0.0, 0.0, red};
    CHECK(hamiltonian(origin) == 0.0);

    HamiltonianState st{1.0, 1.0, 0.0, 0.0, red};
    CHECK(hamiltonian(st) == doctest::Approx(-0.5).epsilon(1e-14));

    // H(X(g,f), Y(g,f)) = E(g,f) at every node for an arbitrary pair
    const LineGrid grid = LineGrid::make(8.0, 0.05);
    ReducedParams red2 = derive_reduced({3, 0.0, 0.0, 4.0, 12.0});
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrajectoryPair t{grid, std::vector<double>(grid.size()),
                     std::vector<double>(grid.size()), red2};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        t.g[i] = std::exp(-0.3 * s * s) * (1.0 + 0.3 * u(rng));
        t.f[i] = std::exp(-0.4 * s * s) * (1.0 - 0.2 * u(rng));
    }
    const auto e = energy(t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double h = hamiltonian(state_at_node(t, i));
        CHECK(h == doctest::Approx(e[i]).epsilon(1e-12));
    }
}

TEST_CASE("system residual: zero, equilibrium constants, soliton") {
    const LineGrid grid = LineGrid::make(12.0, 0.02);
    const ReducedParams red = soliton_red();

    TrajectoryPair zero{grid, std::vector<double>(grid.size(), 0.0),
                        std::vector<double>(grid.size(), 0.0), red};
    const SystemResidual rz = system_residual(zero);
    CHECK(rz.sup1 == 0.0);
    CHECK(rz.sup2 == 0.0);

    // constant equilibrium pairs: residual at round-off at interior nodes
    for (const Equilibrium& e : equilibria(red)) {
        TrajectoryPair c{grid, std::vector<double>(grid.size(), e.x1),
                         std::vector<double>(grid.size(), e.x2), red};
        const SystemResidual rc = system_residual(c);
        CHECK(rc.sup1 <= 1e-12);
        CHECK(rc.sup2 <= 1e-12);
    }

    const TrajectoryPair sol = soliton_pair(15.0, 0.01);
    const SystemResidual rs = system_residual(sol);
    CHECK(rs.sup1 <= 2.0 * 0.01 * 0.01);
    CHECK(rs.sup2 <= 2.0 * 0.01 * 0.01);
}

TEST_CASE("discrete operators converge at order 2 on the soliton") {
    const TrajectoryPair coarse = soliton_pair(12.0, 0.02);
    const TrajectoryPair fine = soliton_pair(12.0, 0.01);
    const double rc = system_residual(coarse).sup1;
    const double rf = system_residual(fine).sup1;
    const double ratio = rc / rf;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("fourth-order residual") {
    const ReducedParams red = derive_reduced({4, -1.0, -2.0, 2.0, 4.0});
    const LineGrid grid = LineGrid::make(8.0, 0.02);

    // zero profile
    std::vector<double> zero(grid.size(), 0.0);
    for (double r : fourth_order_residual(grid, red, zero)) CHECK(r == 0.0);

    // rejects p != 2
    CHECK_THROWS_AS(fourth_order_residual(grid, soliton_red(), zero), ValidationError);

    // constant g = c solves when Gamma^2 c = c^{q-1}: c = Gamma^{2/(q-2)}
    const double c = std::pow(red.Gamma * red.Gamma, 1.0 / (red.q - 2.0));
    std::vector<double> cons(grid.size(), c);
    const auto rc = fourth_order_residual(grid, red, cons);
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
        CHECK(std::fabs(rc[i]) <= 1e-12);
    }

    // random smooth polynomial vs symbolic differentiation oracle
    testsupport::Poly poly;
    poly.c = {0.3, -0.45, 0.11, 0.07, -0.02, 0.013, -0.004, 0.0021};
    const testsupport::Poly d1 = poly.derivative();
    const testsupport::Poly d2 = d1.derivative();
    const testsupport::Poly d3 = d2.derivative();
    const testsupport::Poly d4 = d3.derivative();
    const testsupport::Poly d6 = d4.derivative().derivative();

    const auto gp = testsupport::sample_fn(grid, [&](double s) { return poly.eval(s); });
    const auto res = fourth_order_residual(grid, red, gp);
    const double c2 = 2.0 * (2.0 * red.A * red.A + red.Gamma);
    const double h = grid.spacing();
    for (std::size_t i = 2; i + 2 < grid.size(); ++i) {
        const double s = grid.node(i);
        const double exact = d4.eval(s) - c2 * d2.eval(s) +
                             red.Gamma * red.Gamma * poly.eval(s) -
                             odd_power(poly.eval(s), red.q);
        // truncation bound: h^2 (|g^(6)|/6 + |c2| |g^(4)|/12), with margin
        const double bound =
            h * h * (std::fabs(d6.eval(s)) / 6.0 + std::fabs(c2 * d4.eval(s)) / 12.0);
        CHECK(std::fabs(res[i] - exact) <= 2.0 * bound + 1e-10);
    }
}

TEST_CASE("p=2 elimination identity: small system residual forces small 4th-order residual") {
    // With f := L+ g the first equation is exact and the second equals the composed
    // operator; the direct 5-point form differs by the D^2 - D2 stencil gap = O(h^2).
    const ReducedParams red = derive_reduced({4, -1.0, -2.0, 2.0, 4.0});
    const LineGrid grid = LineGrid::make(10.0, 0.02);
    const auto g = testsupport::sample_fn(
        grid, [](double s) { return std::exp(-0.5 * s * s) * (1.0 + 0.2 * s); });
    TrajectoryPair t{grid, g, apply_lplus(grid, red.A, red.Gamma, g), red};
    const SystemResidual sr = system_residual(t);
    const auto r4 = fourth_order_residual(grid, red, g);
    const double sup4 = interior_sup(grid, r4, 2);
    CHECK(sup4 <= sr.sup2 + 50.0 * grid.spacing() * grid.spacing());
}
