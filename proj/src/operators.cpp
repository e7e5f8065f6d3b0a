#include "hle/operators.hpp"

#include <algorithm>
#include <cmath>

namespace hle {

namespace {

inline double at(std::span<const double> v, std::ptrdiff_t i) {
    // zero extension beyond the endpoints
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(v.size())) return 0.0;
    return v[static_cast<std::size_t>(i)];
}

void check_sizes(const LineGrid& grid, std::span<const double> v) {
    if (v.size() != grid.size()) {
        throw ValidationError("value array size does not match the grid");
    }
}

}  // namespace

std::vector<double> central_derivative(const LineGrid& grid, std::span<const double> v) {
    check_sizes(grid, v);
    const double inv2h = 1.0 / (2.0 * grid.spacing());
    std::vector<double> out(v.size());
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(v.size()); ++i) {
        out[i] = (at(v, i + 1) - at(v, i - 1)) * inv2h;
    }
    return out;
}

std::vector<double> apply_lplus(const LineGrid& grid, double A, double Gamma,
                                std::span<const double> g) {
    check_sizes(grid, g);
    const double h = grid.spacing();
    const double invh2 = 1.0 / (h * h);
    const double Aoverh = A / h;
    std::vector<double> out(g.size());
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(g.size()); ++i) {
        const double gm = at(g, i - 1);
        const double gc = g[i];
        const double gp = at(g, i + 1);
        out[i] = -(gp - 2.0 * gc + gm) * invh2 + Aoverh * (gp - gm) + Gamma * gc;
    }
    return out;
}

std::vector<double> apply_lminus(const LineGrid& grid, double A, double Gamma,
                                 std::span<const double> f) {
    return apply_lplus(grid, -A, Gamma, f);
}

std::vector<double> energy(const TrajectoryPair& t) {
    check_sizes(t.grid, t.g);
    check_sizes(t.grid, t.f);
    const auto gp = central_derivative(t.grid, t.g);
    const auto fp = central_derivative(t.grid, t.f);
    const double p = t.red.p;
    const double q = t.red.q;
    std::vector<double> out(t.g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = gp[i] * fp[i] - t.red.Gamma * t.g[i] * t.f[i] +
                 std::pow(std::fabs(t.g[i]), q) / q + std::pow(std::fabs(t.f[i]), p) / p;
    }
    return out;
}

double energy_term_scale(const TrajectoryPair& t) {
    const auto gp = central_derivative(t.grid, t.g);
    const auto fp = central_derivative(t.grid, t.f);
    const double p = t.red.p;
    const double q = t.red.q;
    double scale = 0.0;
    for (std::size_t i = 1; i + 1 < t.g.size(); ++i) {
        scale = std::max({scale, std::fabs(gp[i] * fp[i]),
                          std::fabs(t.red.Gamma * t.g[i] * t.f[i]),
                          std::pow(std::fabs(t.g[i]), q) / q,
                          std::pow(std::fabs(t.f[i]), p) / p});
    }
    return scale;
}

double hamiltonian(const HamiltonianState& st) {
    const double p = st.red.p;
    const double q = st.red.q;
    const double coupling = st.red.A * st.red.A + st.red.Gamma;
    return st.y1 * st.y2 + st.red.A * (st.x1 * st.y1 - st.x2 * st.y2) -
           coupling * st.x1 * st.x2 + std::pow(std::fabs(st.x1), q) / q +
           std::pow(std::fabs(st.x2), p) / p;
}

HamiltonianState state_at_node(const TrajectoryPair& t, std::size_t i) {
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
    const double inv2h = 1.0 / (2.0 * t.grid.spacing());
    const double gp = (at(t.g, k + 1) - at(t.g, k - 1)) * inv2h;
    const double fp = (at(t.f, k + 1) - at(t.f, k - 1)) * inv2h;
    HamiltonianState st;
    st.red = t.red;
    st.x1 = t.g[i];
    st.x2 = t.f[i];
    st.y1 = fp + t.red.A * t.f[i];
    st.y2 = gp - t.red.A * t.g[i];
    return st;
}

SystemResidual system_residual(const TrajectoryPair& t) {
    SystemResidual res;
    const auto lp = apply_lplus(t.grid, t.red.A, t.red.Gamma, t.g);
    const auto lm = apply_lminus(t.grid, t.red.A, t.red.Gamma, t.f);
    const std::size_t n = t.g.size();
    res.r1.resize(n);
    res.r2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.r1[i] = lp[i] - odd_power(t.f[i], t.red.p);
        res.r2[i] = lm[i] - odd_power(t.g[i], t.red.q);
    }
    res.sup1 = interior_sup(t.grid, res.r1);
    res.sup2 = interior_sup(t.grid, res.r2);
    return res;
}

std::vector<double> fourth_order_residual(const LineGrid& grid, const ReducedParams& red,
                                          std::span<const double> g) {
    if (red.p != 2.0) {
        throw ValidationError("fourth-order residual requires p = 2");
    }
    check_sizes(grid, g);
    const double h = grid.spacing();
    const double invh2 = 1.0 / (h * h);
    const double invh4 = invh2 * invh2;
    const double c2 = 2.0 * (2.0 * red.A * red.A + red.Gamma);
    const double c0 = red.Gamma * red.Gamma;
    std::vector<double> out(g.size());
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(g.size()); ++i) {
        const double g2m = at(g, i - 2);
        const double gm = at(g, i - 1);
        const double gc = g[i];
        const double gp = at(g, i + 1);
        const double g2p = at(g, i + 2);
        const double d4 = (g2m - 4.0 * gm + 6.0 * gc - 4.0 * gp + g2p) * invh4;
        const double d2 = (gp - 2.0 * gc + gm) * invh2;
        out[i] = d4 - c2 * d2 + c0 * gc - odd_power(gc, red.q);
    }
    return out;
}

double interior_sup(const LineGrid& grid, std::span<const double> v, std::size_t margin) {
    double sup = 0.0;
    if (v.size() != grid.size() || v.size() < 2 * margin + 1) return sup;
    for (std::size_t i = margin; i + margin < v.size(); ++i) {
        sup = std::max(sup, std::fabs(v[i]));
    }
    return sup;
}

}  // namespace hle
