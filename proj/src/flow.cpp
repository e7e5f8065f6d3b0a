#include "hle/flow.hpp"

#include <algorithm>
#include <cmath>

namespace hle {

namespace {

struct State4 {
    double x1, x2, y1, y2;
};

// Right-hand side of X' = dH/dY, Y' = -dH/dX, written out analytically.
inline State4 rhs(const State4& s, double A, double coupling, double p, double q) {
    State4 d;
    d.x1 = s.y2 + A * s.x1;
    d.x2 = s.y1 - A * s.x2;
    d.y1 = -(A * s.y1 - coupling * s.x2 + odd_power(s.x1, q));
    d.y2 = -(-A * s.y2 - coupling * s.x1 + odd_power(s.x2, p));
    return d;
}

inline State4 axpy(const State4& s, double a, const State4& d) {
    return {s.x1 + a * d.x1, s.x2 + a * d.x2, s.y1 + a * d.y1, s.y2 + a * d.y2};
}

inline State4 rk4_step(const State4& s, double dt, double A, double coupling, double p,
                       double q) {
    const State4 k1 = rhs(s, A, coupling, p, q);
    const State4 k2 = rhs(axpy(s, 0.5 * dt, k1), A, coupling, p, q);
    const State4 k3 = rhs(axpy(s, 0.5 * dt, k2), A, coupling, p, q);
    const State4 k4 = rhs(axpy(s, dt, k3), A, coupling, p, q);
    State4 out = s;
    const double w = dt / 6.0;
    out.x1 += w * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1);
    out.x2 += w * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2);
    out.y1 += w * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1);
    out.y2 += w * (k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2);
    return out;
}

inline double sup_norm(const State4& s) {
    return std::max({std::fabs(s.x1), std::fabs(s.x2), std::fabs(s.y1), std::fabs(s.y2)});
}

HamiltonianState to_state(const State4& s, const ReducedParams& red) {
    HamiltonianState st;
    st.x1 = s.x1;
    st.x2 = s.x2;
    st.y1 = s.y1;
    st.y2 = s.y2;
    st.red = red;
    return st;
}

// Signed-span integrator used by both the public op and the two-sided cross check.
// `span` may be negative (backward integration); `dt_mag` is the positive step size.
FlowTrajectory integrate_signed(const HamiltonianState& start, double t0, double span,
                                double dt_mag, const FlowOptions& opts) {
    FlowTrajectory traj;
    const ReducedParams& red = start.red;
    const double coupling = red.A * red.A + red.Gamma;
    State4 s{start.x1, start.x2, start.y1, start.y2};

    const long nsteps =
        std::max(1L, static_cast<long>(std::llround(std::fabs(span) / dt_mag)));
    const double dt = span / static_cast<double>(nsteps);

    traj.times.reserve(nsteps + 1);
    traj.states.reserve(nsteps + 1);
    traj.H_values.reserve(nsteps + 1);
    traj.times.push_back(t0);
    traj.states.push_back(to_state(s, red));
    traj.H_values.push_back(hamiltonian(traj.states.back()));

    for (long k = 1; k <= nsteps; ++k) {
        s = rk4_step(s, dt, red.A, coupling, red.p, red.q);
        if (!std::isfinite(sup_norm(s)) || sup_norm(s) > opts.blowup_cap) {
            traj.blew_up = true;
            break;
        }
        traj.times.push_back(t0 + static_cast<double>(k) * dt);
        traj.states.push_back(to_state(s, red));
        traj.H_values.push_back(hamiltonian(traj.states.back()));
    }
    return traj;
}

}  // namespace

FlowTrajectory integrate(const HamiltonianState& start, std::pair<double, double> t_span,
                         const FlowOptions& opts) {
    if (!(t_span.second >= t_span.first)) {
        throw ValidationError("time span must be ordered");
    }
    if (!(opts.dt > 0.0)) throw ValidationError("flow step must be positive");
    if (!std::isfinite(std::fabs(start.x1) + std::fabs(start.x2) + std::fabs(start.y1) +
                       std::fabs(start.y2))) {
        throw ValidationError("start state must be finite");
    }
    return integrate_signed(start, t_span.first, t_span.second - t_span.first, opts.dt, opts);
}

double hamiltonian_drift(const FlowTrajectory& traj) {
    if (traj.H_values.empty()) return 0.0;
    const double h0 = traj.H_values.front();
    double drift = 0.0;
    for (double h : traj.H_values) drift = std::max(drift, std::fabs(h - h0));
    return drift;
}

CrossCheckReport cross_check(const TrajectoryPair& pair, const CrossCheckOptions& opts) {
    const LineGrid& grid = pair.grid;
    const std::size_t N = grid.size();
    const double h = grid.spacing();
    const double L = grid.half_length();

    std::size_t i_star = 0;
    for (std::size_t i = 1; i < N; ++i) {
        if (std::fabs(pair.g[i]) > std::fabs(pair.g[i_star])) i_star = i;
    }

    CrossCheckReport rep;
    rep.handoff_s = grid.node(i_star);

    // Snap the step so nodes are hit exactly.
    const long substeps =
        std::max(1L, static_cast<long>(std::ceil(h / opts.flow.dt - 1e-12)));
    FlowOptions fopts = opts.flow;
    fopts.dt = h / static_cast<double>(substeps);

    const double s_cap = opts.window_fraction * L;
    const HamiltonianState start = state_at_node(pair, i_star);

    for (int dir = 0; dir < 2; ++dir) {
        const double sign = dir == 0 ? 1.0 : -1.0;
        const double reach =
            dir == 0 ? s_cap - rep.handoff_s : rep.handoff_s + s_cap;  // distance to cap
        // Whole grid intervals only, so flow samples land on nodes exactly.
        const long node_count = static_cast<long>(std::floor(reach / h + 1e-12));
        if (node_count < 1) continue;
        const double span = sign * static_cast<double>(node_count) * h;
        const FlowTrajectory traj = integrate_signed(start, 0.0, span, fopts.dt, fopts);
        rep.blew_up = rep.blew_up || traj.blew_up;
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            if (k % static_cast<std::size_t>(substeps) != 0) continue;
            const long node_offset = sign > 0 ? static_cast<long>(k / substeps)
                                              : -static_cast<long>(k / substeps);
            const long idx = static_cast<long>(i_star) + node_offset;
            if (idx < 0 || idx >= static_cast<long>(N)) break;
            const std::size_t i = static_cast<std::size_t>(idx);
            if (std::max(std::fabs(pair.g[i]), std::fabs(pair.f[i])) <
                opts.magnitude_floor) {
                continue;
            }
            const double dev = std::max(std::fabs(traj.states[k].x1 - pair.g[i]),
                                        std::fabs(traj.states[k].x2 - pair.f[i]));
            rep.deviation_sup = std::max(rep.deviation_sup, dev);
            ++rep.compared_nodes;
        }
    }
    return rep;
}

CrossCheckReport cross_check(const VariationalResult& vr, const CrossCheckOptions& opts) {
    if (!vr.converged) {
        throw ValidationError("cross check requires a converged variational result");
    }
    return cross_check(vr.pair, opts);
}

}  // namespace hle
