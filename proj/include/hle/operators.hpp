#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hle/grid.hpp"
#include "hle/params.hpp"

namespace hle {

/// Grid-sampled pair (g,f) on [-L,L]. Values beyond the endpoints are treated
/// as zero by every stencil (homogeneous extension of decaying trajectories).
struct TrajectoryPair {
    LineGrid grid;
    std::vector<double> g;
    std::vector<double> f;
    ReducedParams red;
};

/// State of the first-order Hamiltonian form: X = (g,f), Y = (f'+Af, g'-Ag).
struct HamiltonianState {
    double x1 = 0.0;
    double x2 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    ReducedParams red;
};

/// The odd map t -> |t|^{r-2} t, evaluated as sign(t)|t|^{r-1} with value 0 at t = 0.
/// Continuous for r > 1; no regularization needed for evaluation.
inline double odd_power(double t, double r) {
    if (t == 0.0) return 0.0;
    const double mag = std::pow(std::fabs(t), r - 1.0);
    return t > 0.0 ? mag : -mag;
}

/// Central first derivative with zero extension beyond the endpoints.
std::vector<double> central_derivative(const LineGrid& grid, std::span<const double> v);

/// L+ g = -g'' + 2A g' + Gamma g with O(h^2) central stencils.
std::vector<double> apply_lplus(const LineGrid& grid, double A, double Gamma,
                                std::span<const double> g);

/// L- f = -f'' - 2A f' + Gamma f (the formal adjoint of L+ under zero extension).
std::vector<double> apply_lminus(const LineGrid& grid, double A, double Gamma,
                                 std::span<const double> f);

/// Conserved energy E = g'f' - Gamma gf + |g|^q/q + |f|^p/p at each node.
std::vector<double> energy(const TrajectoryPair& t);

/// Largest magnitude attained by any of the four energy terms over interior nodes.
/// Normalizer for "null energy" checks.
double energy_term_scale(const TrajectoryPair& t);

/// H(X,Y) = y1 y2 + A(x1 y1 - x2 y2) - (A^2+Gamma) x1 x2 + |x1|^q/q + |x2|^p/p.
double hamiltonian(const HamiltonianState& st);

/// Hamiltonian state read off a trajectory at node i (central-difference derivatives).
HamiltonianState state_at_node(const TrajectoryPair& t, std::size_t i);

struct SystemResidual {
    std::vector<double> r1;  // L+ g - |f|^{p-2} f
    std::vector<double> r2;  // L- f - |g|^{q-2} g
    double sup1 = 0.0;       // sup norms over interior nodes
    double sup2 = 0.0;
};

/// Residual of the reduced system at every node; norms exclude the two endpoint
/// nodes whose stencils touch the zero extension.
SystemResidual system_residual(const TrajectoryPair& t);

/// Residual of the fourth-order equation g'''' - 2(2A^2+Gamma) g'' + Gamma^2 g = |g|^{q-2} g
/// that the g-component satisfies when p = 2. Five-point stencil for g''''.
/// Throws ValidationError if red.p != 2.
std::vector<double> fourth_order_residual(const LineGrid& grid, const ReducedParams& red,
                                          std::span<const double> g);

/// Sup norm over nodes at least `margin` away from each end (margin >= 1 skips
/// the zero-extension stencils).
double interior_sup(const LineGrid& grid, std::span<const double> v, std::size_t margin = 1);

}  // namespace hle
