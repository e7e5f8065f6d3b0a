#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hle/operators.hpp"

namespace hle {

struct SolveOptions {
    double tol = 1e-8;          // relative stationarity target
    long max_iter = 200000;
    unsigned long seed = 0;     // drives multistart initial bumps
    int multistarts = 1;
    double eps_start = 1e-3;    // kernel regularization schedule eps_k = max(floor, start*2^-k)
    double eps_floor = 1e-9;
    bool polish = true;         // finish with the exact (eps = 0) kernel gradient
    // Endgame descent on the stationarity-residual norm itself: tail rows
    // contribute less than one ulp to the quotient, so only a residual-based
    // merit function can converge them.
    bool residual_polish = true;
    long residual_polish_max_iter = 1500;
    long polish_max_iter = 30000;
    bool plain_gradient = false;  // disable the metric; raw projected gradient descent
    double trivial_tol = 1e-6;  // nonneg probe collapse threshold
    bool record_history = true;
};

/// Result of the quotient minimization, rescaled to an exact-solution candidate.
///
/// Raw sup norms over all interior nodes carry a double-precision artifact for
/// p' < 2: once the pair decays below ~(eps/h^4)^{1/3}, stencil roundoff drowns
/// L+g and the kernel amplifies it into O(1) residual noise. The _core fields
/// restrict the sup to nodes above that noise window.
struct VariationalResult {
    TrajectoryPair pair;        // (c ghat, recover_f(c ghat))
    double m = 0.0;             // quotient value at the unit-constraint minimizer
    double mu = 0.0;            // Lagrange multiplier
    long iterations = 0;
    bool converged = false;
    double residual_sup1 = 0.0;  // system residual sup norms of `pair`, all interior nodes
    double residual_sup2 = 0.0;
    double residual_core1 = 0.0;  // same, restricted to the core window
    double residual_core2 = 0.0;
    double stationarity = 0.0;      // projected-gradient sup norm (eps = 0), all nodes
    double stationarity_core = 0.0; // restricted to the core window
    int start_index = 0;
    double eps_final = 0.0;
    std::vector<double> unit_minimizer;    // ghat, with sum |ghat|^q h = 1
    std::vector<double> objective_history; // quotient after each accepted step
};

/// Minimizes sum_i |L+ g|^{p'} h subject to sum_i |g|^q h = 1 by projected descent,
/// then rescales the minimizer to a solution of the reduced system.
/// Requires Gamma != 0, A^2+Gamma >= 0 and anticoercivity; throws ValidationError
/// otherwise (Gamma = 0 is the degenerate regime and is refused).
/// Converges when the projected-gradient sup norm falls below tol*(1+|m|) or when
/// the objective plateaus at machine precision (numerical stationarity; for p' < 2
/// the gradient sup has a roundoff floor, see VariationalResult).
VariationalResult minimize_quotient(const ReducedParams& red, const LineGrid& grid,
                                    const SolveOptions& opts);

/// f_i = |L+ g_i|^{p'-2} (L+ g)_i. With this sign the pair (g,f) satisfies the
/// first equation of the reduced system identically.
std::vector<double> recover_f(const LineGrid& grid, const ReducedParams& red,
                              std::span<const double> g);

/// Rescales a unit-constraint minimizer with multiplier mu > 0 by c = mu^{1/(q-p')}.
/// Throws NonconvergenceError if mu <= 0.
TrajectoryPair rescale_to_solution(const LineGrid& grid, const ReducedParams& red,
                                   std::span<const double> ghat, double mu);

struct DualityReport {
    double m = 0.0;        // I_{p',q}(A, Gamma)
    double m_tilde = 0.0;  // I_{q',p}(-A, Gamma)
    double defect = 0.0;   // |m~^{(q-p')/q} - m^{(p-q')/p}| / m^{(p-q')/p}
    bool converged = false;
};

/// Runs the two dual minimizations and evaluates the exchange identity defect.
DualityReport duality_check(const SystemParams& params, const LineGrid& grid,
                            const SolveOptions& opts);

enum class ProbeVerdict { Collapse, ResidualFloor };

struct ProbeReport {
    ProbeVerdict verdict = ProbeVerdict::ResidualFloor;
    double final_sup_g = 0.0;
    double final_sup_f = 0.0;
    double best_residual_sup = 0.0;
    double final_residual_sup = 0.0;
    long iterations = 0;
    std::vector<double> sup_history;  // ||g||_inf after each accepted step
};

/// Nonnegativity-constrained nonexistence probe for Gamma <= 0: least-squares
/// descent on the system residual with g projected onto {g >= 0} and the
/// recovered f clamped to {f >= 0}. A collapse verdict (final ||g||_inf below
/// opts.trivial_tol) is consistent with the nonexistence of decaying nonnegative
/// pairs; it is a numerical witness, not a proof.
/// Throws ValidationError when Gamma > 0 (sign-definite solutions exist there).
ProbeReport nonneg_probe(const ReducedParams& red, const LineGrid& grid,
                         const SolveOptions& opts);
ProbeReport nonneg_probe(const ReducedParams& red, const LineGrid& grid,
                         std::span<const double> g0, const SolveOptions& opts);

}  // namespace hle
