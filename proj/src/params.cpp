#include "hle/params.hpp"

#include <cmath>
#include <cstdio>

namespace hle {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void validate_basics(const SystemParams& params) {
    if (params.n < 2) {
        throw ValidationError("dimension must satisfy n >= 2, got n = " +
                              std::to_string(params.n));
    }
    if (!(std::isfinite(params.a) && std::isfinite(params.b) && std::isfinite(params.p) &&
          std::isfinite(params.q))) {
        throw ValidationError("parameters must be finite");
    }
    if (!(params.p > 1.0)) {
        throw ValidationError("exponent p must exceed 1, got p = " + fmt(params.p));
    }
    if (!(params.q > 1.0)) {
        throw ValidationError("exponent q must exceed 1, got q = " + fmt(params.q));
    }
}

}  // namespace

const char* regime_tag_name(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::PositiveExistence: return "PositiveExistence";
        case RegimeTag::NonexistenceNonneg: return "NonexistenceNonneg";
        case RegimeTag::Degenerate: return "Degenerate";
    }
    return "unknown";
}

bool check_hyperbola(const SystemParams& params) {
    const double n = static_cast<double>(params.n);
    const double lhs = (params.a + n) / params.p + (params.b + n) / params.q;
    const double rhs = n - 2.0;
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
    return std::fabs(lhs - rhs) <= kHyperbolaRelTol * scale;
}

ReducedParams derive_reduced(const SystemParams& params) {
    validate_basics(params);
    const double n = static_cast<double>(params.n);
    if (!check_hyperbola(params)) {
        const double lhs = (params.a + n) / params.p + (params.b + n) / params.q;
        throw ValidationError("critical hyperbola violated: (a+n)/p + (b+n)/q = " + fmt(lhs) +
                              " but n-2 = " + fmt(n - 2.0));
    }
    const double coercivity = 1.0 / params.p + 1.0 / params.q;
    if (!(coercivity < 1.0)) {
        throw ValidationError("anticoercivity violated: 1/p + 1/q = " + fmt(coercivity) +
                              " >= 1");
    }

    ReducedParams red;
    red.n = params.n;
    red.p = params.p;
    red.q = params.q;
    red.lambda1 = (params.b + n) / params.q;
    red.lambda2 = (params.a + n) / params.p;
    red.A = (n - 2.0) / 2.0 - red.lambda1;
    red.Gamma = red.lambda1 * red.lambda2;
    red.delta = params.p * params.q - (params.p + params.q);
    red.p_conj = params.p / (params.p - 1.0);
    red.q_conj = params.q / (params.q - 1.0);
    return red;
}

Regime classify_regime(const SystemParams& params) {
    const ReducedParams red = derive_reduced(params);
    const double n = static_cast<double>(params.n);

    Regime regime;
    if (params.a > -n && params.b > -n) {
        regime.tag = RegimeTag::PositiveExistence;
        regime.reasons.push_back(
            "a > -n and b > -n: Gamma = " + fmt(red.Gamma) +
            " > 0, a nontrivial radial solution exists and any decaying pair is "
            "sign-definite (u v > 0)");
    } else if (params.a == -n || params.b == -n || red.Gamma == 0.0) {
        regime.tag = RegimeTag::Degenerate;
        regime.reasons.push_back(
            "a = -n or b = -n: Gamma = 0, every decaying pair is trivial; solvers "
            "refuse this regime");
    } else {
        regime.tag = RegimeTag::NonexistenceNonneg;
        regime.reasons.push_back(
            "a <= -n or b <= -n with Gamma = " + fmt(red.Gamma) +
            " < 0: no nonnegative nontrivial solution with finite scaled limits at 0 "
            "or infinity");
        regime.reasons.push_back(
            "caveat: the conclusion assumes the scaled limits |x|^{(b+n)/q} u and "
            "|x|^{(a+n)/p} v exist and are finite on at least one end");
        if (params.n == 2) {
            regime.reasons.push_back(
                "n = 2: lambda1 = -lambda2 forces Gamma <= 0 on the whole hyperbola");
        }
    }
    return regime;
}

AprioriBounds apriori_bounds(const ReducedParams& red) {
    AprioriBounds bounds;
    const double abs_gamma = std::fabs(red.Gamma);
    if (abs_gamma == 0.0) return bounds;  // g = f = 0 is the only decaying pair
    bounds.g_bound = std::pow((red.q / red.p_conj) * std::pow(abs_gamma, red.p_conj),
                              1.0 / (red.q - red.p_conj));
    bounds.f_bound = std::pow((red.p / red.q_conj) * std::pow(abs_gamma, red.q_conj),
                              1.0 / (red.p - red.q_conj));
    return bounds;
}

std::vector<Equilibrium> equilibria(const ReducedParams& red) {
    std::vector<Equilibrium> out;
    out.push_back({0.0, 0.0});
    if (red.Gamma == 0.0) return out;
    if (!(red.delta > 0.0)) {
        throw ValidationError("delta = pq - (p+q) must be positive, got delta = " +
                              fmt(red.delta));
    }
    const double abs_gamma = std::fabs(red.Gamma);
    const double c1 = std::pow(abs_gamma, red.p / red.delta);
    const double c2 = std::pow(abs_gamma, -1.0 + red.q / red.delta) * red.Gamma;
    out.push_back({c1, c2});
    out.push_back({-c1, -c2});
    return out;
}

}  // namespace hle
