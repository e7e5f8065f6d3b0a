#pragma once

#include <utility>
#include <vector>

#include "hle/operators.hpp"
#include "hle/variational.hpp"

namespace hle {

struct FlowOptions {
    double dt = 1e-3;          // fixed step of the classical 4th-order scheme
    double blowup_cap = 1e8;   // early stop once the state sup norm exceeds this
};

struct FlowTrajectory {
    std::vector<double> times;
    std::vector<HamiltonianState> states;
    std::vector<double> H_values;
    bool blew_up = false;
};

/// Integrates X' = dH/dY, Y' = -dH/dX with a fixed-step classical RK4 scheme.
/// The span (t0,t1) must be ordered; the step is snapped so the end point is hit
/// exactly. H is recorded at every step.
FlowTrajectory integrate(const HamiltonianState& start, std::pair<double, double> t_span,
                         const FlowOptions& opts);

/// max_t |H(t) - H(0)| over the recorded trajectory.
double hamiltonian_drift(const FlowTrajectory& traj);

struct CrossCheckReport {
    double deviation_sup = 0.0;   // sup |X1(t) - g(s)| over compared nodes
    std::size_t compared_nodes = 0;
    bool blew_up = false;         // either direction (expected for homoclinics; not fatal)
    double handoff_s = 0.0;
};

struct CrossCheckOptions {
    FlowOptions flow;
    double magnitude_floor = 1e-6;  // score only where max(|g|,|f|) exceeds this
    double window_fraction = 0.8;   // cap integration at |s| <= fraction * L
};

/// Independent oracle: integrates the Hamiltonian flow from the grid state at the
/// node nearest argmax |g|, both directions, and reports the sup deviation from
/// the grid trajectory over the scored window.
CrossCheckReport cross_check(const VariationalResult& vr, const CrossCheckOptions& opts);
CrossCheckReport cross_check(const TrajectoryPair& pair, const CrossCheckOptions& opts);

}  // namespace hle
