#include "hle/rellich.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hle {

namespace {

void validate_rellich(int n, double theta) {
    if (n < 2) throw ValidationError("dimension must satisfy n >= 2");
    if (!(theta > 1.0) || !std::isfinite(theta)) {
        throw ValidationError("exponent theta must exceed 1");
    }
}

}  // namespace

double gamma_appendix(int n, double theta, double alpha) {
    validate_rellich(n, theta);
    const double nn = static_cast<double>(n);
    const double ratio = (nn + alpha) / theta;
    return (ratio - 2.0) * (nn - ratio);
}

double drift_appendix(int n, double theta, double alpha) {
    validate_rellich(n, theta);
    const double nn = static_cast<double>(n);
    return (2.0 * (theta - alpha) + nn * (theta - 2.0)) / (2.0 * theta);
}

RellichParams make_rellich(int n, double theta, double alpha) {
    RellichParams rp;
    rp.n = n;
    rp.theta = theta;
    rp.alpha = alpha;
    rp.Gamma_appx = gamma_appendix(n, theta, alpha);
    rp.A_appx = drift_appendix(n, theta, alpha);
    return rp;
}

Mu2Result mu2(int n, double alpha) {
    const double gamma = gamma_appendix(n, 2.0, alpha);
    const double abs_gamma = std::fabs(gamma);
    const double nn = static_cast<double>(n);

    // k -> gamma + k(n-2+k) is increasing in k >= 0, so once the value exceeds
    // |gamma| every later |.|^2 is larger than the k = 0 candidate.
    Mu2Result best{gamma * gamma, 0};
    int k = 1;
    int past_bound = 0;
    while (past_bound < 2) {
        const double kk = static_cast<double>(k);
        const double value = gamma + kk * (nn - 2.0 + kk);
        if (value * value < best.value) {
            best.value = value * value;
            best.k = k;
        }
        if (value > abs_gamma) ++past_bound;
        ++k;
    }
    return best;
}

double mu_theta(int n, double theta, double alpha) {
    const double gamma = gamma_appendix(n, theta, alpha);
    if (gamma >= 0.0) {
        return std::pow(gamma, theta);
    }
    if (theta == 2.0) {
        return mu2(n, alpha).value;
    }
    throw ValidationError(
        "formula unavailable: no closed form for the Rellich constant with Gamma < 0 "
        "and theta != 2");
}

std::optional<double> theta_double_star(int n, double theta) {
    validate_rellich(n, theta);
    const double nn = static_cast<double>(n);
    if (nn > 2.0 * theta) {
        return theta * nn / (nn - 2.0 * theta);
    }
    return std::nullopt;  // no upper bound applies
}

IsometryReport radial_isometry_check(const LineGrid& sgrid, std::span<const double> u,
                                     int n, double theta, double alpha) {
    if (u.size() != sgrid.size()) {
        throw ValidationError("profile size does not match the grid");
    }
    validate_rellich(n, theta);
    const double nn = static_cast<double>(n);
    const double A = drift_appendix(n, theta, alpha);
    const double gamma = gamma_appendix(n, theta, alpha);
    const double kappa = (2.0 * theta - nn - alpha) / theta;  // u = r^kappa g(-log r)
    const std::size_t N = sgrid.size();
    const double h = sgrid.spacing();

    // Right side: line integral of |g'' - 2A g' - Gamma g|^theta, uniform stencils.
    std::vector<double> g(N);
    for (std::size_t i = 0; i < N; ++i) {
        g[i] = u[i] * std::exp(kappa * sgrid.node(i));
    }
    std::vector<double> rhs_integrand(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double d2 = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
        const double d1 = (g[i + 1] - g[i - 1]) / (2.0 * h);
        rhs_integrand[i] = std::pow(std::fabs(d2 - 2.0 * A * d1 - gamma * g[i]), theta);
    }
    double rhs = 0.0;
    for (std::size_t i = 1; i + 2 < N; ++i) {
        rhs += 0.5 * (rhs_integrand[i] + rhs_integrand[i + 1]) * h;
    }

    // Left side: radial integral of r^{alpha+n-1} |Delta u|^theta, nonuniform
    // 3-point stencils directly in r (an independent discrete route).
    std::vector<double> r(N);
    for (std::size_t i = 0; i < N; ++i) r[i] = std::exp(-sgrid.node(i));
    std::vector<double> lhs_integrand(N, 0.0);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        const double dm = r[i - 1] - r[i];  // positive: r decreases in i
        const double dp = r[i] - r[i + 1];
        const double slope_m = (u[i] - u[i - 1]) / (r[i] - r[i - 1]);
        const double slope_p = (u[i + 1] - u[i]) / (r[i + 1] - r[i]);
        const double dd2 = (slope_p - slope_m) / (r[i + 1] - r[i - 1]);
        const double upp = 2.0 * dd2;
        const double up = slope_m + (r[i] - r[i - 1]) * dd2;
        const double laplacian = upp + (nn - 1.0) * up / r[i];
        lhs_integrand[i] =
            std::pow(r[i], alpha + nn - 1.0) * std::pow(std::fabs(laplacian), theta);
        (void)dm;
        (void)dp;
    }
    double lhs = 0.0;
    for (std::size_t i = 1; i + 2 < N; ++i) {
        lhs += 0.5 * (lhs_integrand[i] + lhs_integrand[i + 1]) * (r[i] - r[i + 1]);
    }

    IsometryReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.defect = std::fabs(lhs - rhs) / std::max(lhs, 1e-300);
    return rep;
}

}  // namespace hle
