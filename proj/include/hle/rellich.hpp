#pragma once

#include <optional>
#include <span>

#include "hle/grid.hpp"
#include "hle/params.hpp"

namespace hle {

/// Data of the weighted Rellich quotient over radial functions:
/// inf ∫|x|^alpha |Delta u|^theta / ∫|x|^{alpha-2theta} |u|^theta.
struct RellichParams {
    int n = 0;
    double theta = 0.0;
    double alpha = 0.0;
    double Gamma_appx = 0.0;  // ((n+alpha)/theta - 2)(n - (n+alpha)/theta)
    double A_appx = 0.0;      // (2(theta-alpha) + n(theta-2)) / (2 theta)
};

/// Validates n >= 2, theta > 1.
RellichParams make_rellich(int n, double theta, double alpha);

double gamma_appendix(int n, double theta, double alpha);
double drift_appendix(int n, double theta, double alpha);

struct Mu2Result {
    double value = 0.0;
    int k = 0;  // minimizing index
};

/// mu_2(alpha) = min_{k >= 0} |Gamma + k(n-2+k)|^2, exact scan; the map
/// k -> Gamma + k(n-2+k) is increasing, which bounds the scan range.
Mu2Result mu2(int n, double alpha);

/// mu_theta(alpha) = |Gamma|^theta, valid for Gamma >= 0. For Gamma < 0 the
/// theta = 2 case defers to mu2; otherwise no closed form is available and a
/// ValidationError is thrown.
double mu_theta(int n, double theta, double alpha);

/// theta n/(n - 2 theta) when n > 2 theta; nullopt means no upper bound applies.
std::optional<double> theta_double_star(int n, double theta);

struct IsometryReport {
    double lhs = 0.0;     // ∫ r^{alpha+n-1} |Delta u|^theta dr    (omega_n divided out)
    double rhs = 0.0;     // ∫ |g'' - 2A g' - Gamma g|^theta ds
    double defect = 0.0;  // |lhs - rhs| / max(lhs, tiny)
};

/// Change-of-variables identity check for a radial profile u given at the log
/// nodes r_i = exp(-s_i): the left side is computed with nonuniform stencils and
/// quadrature directly in r, the right side on the transformed line profile.
IsometryReport radial_isometry_check(const LineGrid& sgrid, std::span<const double> u,
                                     int n, double theta, double alpha);

}  // namespace hle
