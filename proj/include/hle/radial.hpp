#pragma once

#include <span>
#include <vector>

#include "hle/operators.hpp"

namespace hle {

/// Radial solution sampled on the log grid r_i = exp(-s_i) (decreasing in s).
/// u_i = r_i^{-lambda1} g(s_i), v_i = r_i^{-lambda2} f(s_i) exactly by construction.
struct RadialSolution {
    std::vector<double> radii;
    std::vector<double> u;
    std::vector<double> v;
    SystemParams params;
    ReducedParams red;
    LineGrid sgrid;
};

/// Tail estimates of |x|^{lambda1} u and |x|^{lambda2} v: sup of |g| resp. |f|
/// over the outer 10% of the grid on each side.
struct DecayReport {
    double lim_u_inf = 0.0;  // s -> -infty side (|x| -> infty)
    double lim_u_0 = 0.0;    // s -> +infty side (x -> 0)
    double lim_v_inf = 0.0;
    double lim_v_0 = 0.0;
    double window = 0.0;     // width 0.1*L of each tail window
};

RadialSolution to_radial(const TrajectoryPair& t, const SystemParams& params);

/// Left inverse of to_radial; rejects radii that do not form the canonical log grid.
TrajectoryPair from_radial(const RadialSolution& sol);

struct PdeResidual {
    std::vector<double> r1;  // -Delta u - r^a |v|^{p-2} v
    std::vector<double> r2;  // -Delta v - r^b |u|^{q-2} u
    double rel_sup1 = 0.0;   // interior residual sup / largest local term magnitude
    double rel_sup2 = 0.0;
};

/// Residual of the radial PDE system, evaluated through s-derivatives on the log
/// grid (uniform O(h^2) accuracy; the chain-rule form agrees analytically with the
/// direct radial Laplacian).
PdeResidual pde_residual(const RadialSolution& sol);

/// Requires half length L >= 10.
DecayReport decay_limits(const TrajectoryPair& t);

struct P2Options {
    double evenness_tol = 1e-3;   // relative to ||g||_inf
    double noise_floor = 1e-6;    // magnitude below which sign checks are skipped
    double monotone_slack = 1e-10;
};

struct P2Report {
    double center = 0.0;        // interpolated argmax of g
    double even_defect = 0.0;   // sup_t |g(s*+t) - g(s*-t)|
    bool even_ok = false;
    bool positive_ok = false;   // g > 0 wherever |g| exceeds the noise floor
    bool monotone_ok = false;   // strictly decreasing away from the peak (with slack)
    bool f_sign_ok = false;     // f positive iff Gamma > 0
    bool all_ok = false;
};

/// Qualitative checks for the p = 2 case: evenness about the peak, positivity,
/// strict monotone decay on each side, and the sign of f against sign(Gamma).
/// Requires p = 2, q > 2, Gamma != 0, A^2+Gamma >= 0.
P2Report p2_qualitative_check(const TrajectoryPair& t, const P2Options& opts = {});

/// Quadratic-fit location of the peak of g (sub-node resolution).
double peak_center(const LineGrid& grid, std::span<const double> g);

/// Cubic (4-point Lagrange) interpolation of grid values at an arbitrary point;
/// zero outside [-L, L].
double interp_value(const LineGrid& grid, std::span<const double> v, double s);

/// Sup difference between two profiles modulo translation (sub-node), reflection
/// and sign: the line realization of the dilation/Kelvin equivalence class.
double profile_defect(const LineGrid& grid, std::span<const double> g1,
                      std::span<const double> g2);

}  // namespace hle
