#pragma once

// Shared oracles and helpers for the test suites. Everything here is
// independent of the implementation paths it checks: closed-form identities,
// quadrature, symbolic polynomial differentiation, randomized on-hyperbola
// parameter generation.

#include <cmath>
#include <random>
#include <vector>

#include "hle/grid.hpp"
#include "hle/operators.hpp"
#include "hle/params.hpp"

namespace testsupport {

// --- closed-form soliton family for A = 0, Gamma = 1, p = q = 4:
//     g = f = sqrt(2) sech(s) solves -g'' + g = g^3.
inline double soliton(double s) { return std::sqrt(2.0) / std::cosh(s); }

inline std::vector<double> sample(const hle::LineGrid& grid, double (*fn)(double)) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
    return v;
}

template <typename F>
inline std::vector<double> sample_fn(const hle::LineGrid& grid, F fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
    return v;
}

// Trapezoid quadrature of fn over [-L, L] with n panels (oracle-side integration).
template <typename F>
inline double trapezoid(F fn, double L, std::size_t n) {
    const double h = 2.0 * L / static_cast<double>(n);
    double s = 0.5 * (fn(-L) + fn(L));
    for (std::size_t i = 1; i < n; ++i) s += fn(-L + static_cast<double>(i) * h);
    return s * h;
}

// --- polynomial with exact derivatives: independent differentiation oracle.
struct Poly {
    std::vector<double> c;  // c[k] s^k

    double eval(double s) const {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
        return acc;
    }
    Poly derivative() const {
        Poly d;
        if (c.size() <= 1) return d;
        d.c.resize(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) {
            d.c[k - 1] = c[k] * static_cast<double>(k);
        }
        return d;
    }
};

// --- randomized on-hyperbola parameter generation: fix (n, a, p, q) with
//     anticoercivity by construction and solve the hyperbola for b exactly.
struct ParamGen {
    std::mt19937_64 rng;

    explicit ParamGen(unsigned long seed) : rng(seed) {}

    hle::SystemParams next() {
        std::uniform_int_distribution<int> dim(2, 6);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const int n = dim(rng);
        const double a = -static_cast<double>(n) + 0.05 + 4.0 * unit(rng);
        const double p = 1.1 + 4.0 * unit(rng);
        const double q_min = p / (p - 1.0) * 1.05;  // strict anticoercivity
        const double q = q_min + 6.0 * unit(rng);
        const double b =
            q * (static_cast<double>(n) - 2.0 - (a + n) / p) - static_cast<double>(n);
        return {n, a, b, p, q};
    }
};

}  // namespace testsupport
