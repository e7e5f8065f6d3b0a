#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hle {

/// Invalid problem data (message names the violated relation).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Solver failed to reach the requested stationarity.
class NonconvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// PDE data for the Henon-Lane-Emden system
///   -Delta u = |x|^a |v|^{p-2} v,  -Delta v = |x|^b |u|^{q-2} u
/// on punctured n-space, with (p,q) on the weighted critical hyperbola.
struct SystemParams {
    int n = 0;
    double a = 0.0;
    double b = 0.0;
    double p = 0.0;
    double q = 0.0;
};

/// Constants of the Emden-Fowler reduction to the 1-D system
///   -g'' + 2A g' + Gamma g = |f|^{p-2} f
///   -f'' - 2A f' + Gamma f = |g|^{q-2} g.
struct ReducedParams {
    double lambda1 = 0.0;  // (b+n)/q
    double lambda2 = 0.0;  // (a+n)/p
    double A = 0.0;        // (n-2)/2 - lambda1
    double Gamma = 0.0;    // lambda1 * lambda2
    double delta = 0.0;    // p*q - (p+q)
    double p_conj = 0.0;   // p/(p-1)
    double q_conj = 0.0;   // q/(q-1)
    double p = 0.0;
    double q = 0.0;
    int n = 0;
};

enum class RegimeTag {
    PositiveExistence,   // a > -n and b > -n  (Gamma > 0)
    NonexistenceNonneg,  // a <= -n or b <= -n with Gamma != 0  (Gamma < 0)
    Degenerate,          // a = -n or b = -n   (Gamma = 0)
};

struct Regime {
    RegimeTag tag = RegimeTag::Degenerate;
    std::vector<std::string> reasons;
};

const char* regime_tag_name(RegimeTag tag);

/// Relative tolerance used to test membership of the critical hyperbola.
inline constexpr double kHyperbolaRelTol = 1e-12;

/// True iff (a+n)/p + (b+n)/q = n-2 within relative tolerance 1e-12.
/// Pure predicate; requires p,q > 1.
bool check_hyperbola(const SystemParams& params);

/// Derives all reduction constants. Throws ValidationError naming the violated
/// relation if p,q <= 1, the hyperbola fails, or anticoercivity 1/p+1/q < 1 fails.
ReducedParams derive_reduced(const SystemParams& params);

/// Existence/nonexistence classification of validated parameters.
Regime classify_regime(const SystemParams& params);

struct AprioriBounds {
    double g_bound = 0.0;  // ((q/p') |Gamma|^{p'})^{1/(q-p')}
    double f_bound = 0.0;  // ((p/q') |Gamma|^{q'})^{1/(p-q')}
};

/// Sup-norm bounds satisfied by any decaying (null-energy) solution pair.
/// Both bounds are 0 when Gamma = 0.
AprioriBounds apriori_bounds(const ReducedParams& red);

/// A constant solution (g,f) = (x1,x2) of the reduced system.
struct Equilibrium {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Constant solutions: the origin, plus +/-(|Gamma|^{p/delta}, |Gamma|^{-1+q/delta} Gamma)
/// when Gamma != 0. Each nontrivial pair satisfies
///   Gamma*x1 = |x2|^{p-2} x2 and Gamma*x2 = |x1|^{q-2} x1.
std::vector<Equilibrium> equilibria(const ReducedParams& red);

}  // namespace hle
