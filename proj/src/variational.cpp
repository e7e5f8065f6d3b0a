#include "hle/variational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace hle {

namespace {

// ---------------------------------------------------------------------------
// Banded symmetric positive definite Cholesky, lower storage:
// band[i*(bw+1)+k] = A_{i,i-k}, k = 0..bw.
// ---------------------------------------------------------------------------

bool banded_cholesky(std::vector<double>& band, std::size_t n, std::size_t bw) {
    const std::size_t w = bw + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t kmax = std::min(bw, i);
        for (std::size_t k = kmax; k >= 1; --k) {
            const std::size_t j = i - k;
            double s = band[i * w + k];
            for (std::size_t t = 1; t + k <= bw && t <= j; ++t) {
                s -= band[i * w + (k + t)] * band[j * w + t];
            }
            band[i * w + k] = s / band[j * w];
        }
        double s = band[i * w];
        for (std::size_t t = 1; t <= kmax; ++t) {
            const double l = band[i * w + t];
            s -= l * l;
        }
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        band[i * w] = std::sqrt(s);
    }
    return true;
}

void banded_solve(const std::vector<double>& band, std::size_t n, std::size_t bw,
                  std::vector<double>& x) {
    const std::size_t w = bw + 1;
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
        double s = x[i];
        for (std::size_t t = 1; t <= std::min(bw, i); ++t) {
            s -= band[i * w + t] * x[i - t];
        }
        x[i] = s / band[i * w];
    }
    for (std::size_t ii = n; ii-- > 0;) {  // L^T x = y
        double s = x[ii];
        for (std::size_t t = 1; t <= bw && ii + t < n; ++t) {
            s -= band[(ii + t) * w + t] * x[ii + t];
        }
        x[ii] = s / band[ii * w];
    }
}

// ---------------------------------------------------------------------------
// Regularized odd kernel and its derivatives.
// ---------------------------------------------------------------------------

inline double kernel_phi(double t, double eps, double kp) {
    if (eps == 0.0) return odd_power(t, kp);
    return std::pow(t * t + eps * eps, 0.5 * (kp - 2.0)) * t;
}

inline double kernel_psi(double t, double eps, double kp) {
    if (eps == 0.0) return std::pow(std::fabs(t), kp);
    return std::pow(t * t + eps * eps, 0.5 * kp);
}

inline double kernel_dphi(double t, double eps, double kp) {
    const double s = t * t + eps * eps;
    if (s == 0.0) return 0.0;  // kp > 1: derivative limit at the origin for kp >= 2
    return std::pow(s, 0.5 * kp - 2.0) * ((kp - 1.0) * t * t + eps * eps);
}

struct LplusCoeffs {
    double am, a0, ap;  // stencil weights of g_{i-1}, g_i, g_{i+1}
};

LplusCoeffs lplus_coeffs(const LineGrid& grid, double A, double Gamma) {
    const double h = grid.spacing();
    const double invh2 = 1.0 / (h * h);
    return {-invh2 - A / h, 2.0 * invh2 + Gamma, -invh2 + A / h};
}

// Lower-band storage of L+^T diag(sigma) L+ (pentadiagonal, symmetric).
void sandwich_band(const LineGrid& grid, double A, double Gamma,
                   std::span<const double> sigma, std::vector<double>& band) {
    const auto [am, a0, ap] = lplus_coeffs(grid, A, Gamma);
    const std::size_t n = grid.size();
    band.assign(n * 3, 0.0);
    auto sig = [&](std::ptrdiff_t i) -> double {
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) return 0.0;
        return sigma[static_cast<std::size_t>(i)];
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::ptrdiff_t ii = static_cast<std::ptrdiff_t>(i);
        band[i * 3 + 0] = sig(ii - 1) * ap * ap + sig(ii) * a0 * a0 + sig(ii + 1) * am * am;
        if (i >= 1) band[i * 3 + 1] = sig(ii - 1) * a0 * ap + sig(ii) * am * a0;
        if (i >= 2) band[i * 3 + 2] = sig(ii - 1) * am * ap;
    }
}

double sup_abs(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

// ---------------------------------------------------------------------------
// Quotient minimization core: minimize sum |L+ g|^{kp} h on { sum |g|^{cq} h = 1 }.
// The dual problem of Remark-style exchange reuses this with (A,kp,cq) swapped.
// ---------------------------------------------------------------------------

struct QuotientProblem {
    double A = 0.0;
    double Gamma = 0.0;
    double kp = 0.0;  // kernel exponent, in (1,2]
    double cq = 0.0;  // constraint exponent, > kp
};

struct CoreResult {
    std::vector<double> ghat;
    double m = 0.0;
    double mu = 0.0;
    long iterations = 0;
    bool converged = false;
    double stationarity = 0.0;       // exact-kernel projected gradient sup norm
    double stationarity_core = 0.0;  // restricted to nodes above the noise window
    double eps_final = 0.0;
    int start_index = 0;
    std::vector<double> history;
};

// Sup of |v| over nodes where the pair is large enough that kernel-amplified
// roundoff stays below the discretization error: iterative updates carry
// ~eps*peak absolute noise, which the stencil turns into 4*eps*peak/h^2 noise
// in L+g; below g ~ (16 eps peak / h^4)^{1/3} that noise drowns |L+g| ~ g^3
// once the conjugate exponent is < 2.
double windowed_sup(std::span<const double> v, std::span<const double> g,
                    std::span<const double> f, double h) {
    double gpeak = 0.0, fpeak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        gpeak = std::max(gpeak, std::fabs(g[i]));
        fpeak = std::max(fpeak, std::fabs(f[i]));
    }
    const double eps = 1.1e-16;
    const double peak = std::max(gpeak, fpeak);
    const double cut = std::max(1e-4 * peak, std::cbrt(16.0 * eps * peak / (h * h * h * h)));
    double sup = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::fabs(g[i]) >= cut || std::fabs(f[i]) >= cut) {
            sup = std::max(sup, std::fabs(v[i]));
        }
    }
    return sup;
}

class QuotientSolver {
public:
    QuotientSolver(const LineGrid& grid, const QuotientProblem& prob, const SolveOptions& opts)
        : grid_(grid), prob_(prob), opts_(opts), n_(grid.size()), h_(grid.spacing()) {}

    CoreResult run(std::vector<double> g0) {
        CoreResult res;
        normalize(g0);
        std::vector<double> g = std::move(g0);

        double alpha = 1.0;
        bool polish_phase = (prob_.kp == 2.0);  // exact kernel from the start
        long schedule_k = 0;
        long iters = 0;
        int plateau = 0;
        bool reached_criterion = false;

        constexpr int kPlateauSteps = 30;
        std::vector<double> t, w, lw, grad, d, gt, tt;

        auto advance_phase = [&]() -> bool {
            // returns true if a new phase starts
            if (!polish_phase && opts_.polish && prob_.kp != 2.0) {
                polish_phase = true;
                alpha = 1.0;
                plateau = 0;
                return true;
            }
            return false;
        };

        while (true) {
            const double eps = polish_phase
                                   ? 0.0
                                   : std::max(opts_.eps_floor,
                                              opts_.eps_start * std::pow(0.5, schedule_k));
            t = apply_lplus(grid_, prob_.A, prob_.Gamma, g);
            double J = objective(t, eps);
            gradient(g, t, eps, J, grad);
            const double stat = sup_abs(grad);
            if (opts_.record_history) res.history.push_back(J);

            if (stat <= opts_.tol * (1.0 + std::fabs(J))) {
                if (!polish_phase && eps > opts_.eps_floor) {
                    // Converged at a loose eps: drop straight to the floor.
                    schedule_k = floor_index();
                    continue;
                }
                if (advance_phase()) continue;
                reached_criterion = true;
                break;
            }
            // Numerical stationarity: no representable descent left (the sup
            // criterion has a kernel-noise floor for p' < 2).
            if (plateau >= kPlateauSteps) {
                if (advance_phase()) continue;
                reached_criterion = true;
                break;
            }
            if (iters >= iteration_cap(polish_phase)) {
                if (advance_phase()) continue;
                break;
            }

            direction(g, t, eps, grad, d);
            double slope = dot_h(grad, d);
            if (!(slope > 0.0) || !std::isfinite(slope)) {
                d = grad;  // metric failed; plain gradient still descends
                slope = dot_h(grad, grad);
            }

            bool accepted = false;
            int backtracks = 0;
            double Jt = J;
            for (; backtracks < 70; ++backtracks) {
                gt.assign(g.begin(), g.end());
                for (std::size_t i = 0; i < n_; ++i) gt[i] -= alpha * d[i];
                const double c = constraint(gt);
                if (c > 0.0 && std::isfinite(c)) {
                    const double scale = std::pow(c, -1.0 / prob_.cq);
                    for (double& x : gt) x *= scale;
                    tt = apply_lplus(grid_, prob_.A, prob_.Gamma, gt);
                    Jt = objective(tt, eps);
                    if (std::isfinite(Jt) && Jt <= J - 1e-4 * alpha * slope) {
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                if (advance_phase()) continue;
                reached_criterion = true;  // line search exhausted: plateau
                break;
            }
            g.swap(gt);
            ++iters;
            if (!polish_phase) ++schedule_k;
            if (backtracks == 0) alpha = std::min(alpha * 1.4, 1e6);
            plateau = (J - Jt <= 1e-15 * (1.0 + std::fabs(Jt))) ? plateau + 1 : 0;
        }

        if (opts_.residual_polish) iters += residual_polish(g);

        // Reporting is always with the exact kernel.
        t = apply_lplus(grid_, prob_.A, prob_.Gamma, g);
        const double m0 = objective(t, 0.0);
        gradient(g, t, 0.0, m0, grad);
        res.stationarity = sup_abs(grad);
        res.stationarity_core = windowed_sup(grad, g, t, h_);
        res.eps_final = polish_phase ? 0.0 : opts_.eps_floor;
        res.m = m0;
        res.mu = multiplier(g, t);
        res.iterations = iters;
        res.converged = reached_criterion;
        res.ghat = std::move(g);
        return res;
    }

    // Endgame: Gauss-Newton descent on the squared stationarity residual
    //   Phi(g) = h sum (L- w - J |g|^{cq-2} g)^2,  w = phi_kp(L+ g), J = J(g),
    // with renormalization after each step. The quotient itself cannot resolve
    // tail rows (their share of J is below one ulp); Phi is dominated by
    // exactly those rows.
    long residual_polish(std::vector<double>& g) const {
        long iters = 0;
        double alpha = 1.0;
        int plateau = 0;
        std::vector<double> t, w, lw, rho, grad, d, gt;
        std::vector<double> sigma(n_), dq(n_);

        auto eval_rho = [&](std::span<const double> gg, std::vector<double>& tt,
                            std::vector<double>& ww, std::vector<double>& rr) -> double {
            tt = apply_lplus(grid_, prob_.A, prob_.Gamma, gg);
            ww.resize(n_);
            for (std::size_t i = 0; i < n_; ++i) ww[i] = kernel_phi(tt[i], 0.0, prob_.kp);
            rr = apply_lminus(grid_, prob_.A, prob_.Gamma, ww);
            const double J = objective(tt, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                rr[i] -= J * odd_power(gg[i], prob_.cq);
            }
            return J;
        };
        auto phi_of = [&](std::span<const double> rr) {
            double s = 0.0;
            for (double x : rr) s += x * x;
            return s * h_;
        };

        double J = eval_rho(g, t, w, rho);
        double phi = phi_of(rho);

        while (iters < opts_.residual_polish_max_iter && plateau < 20) {
            const double tscale = std::max(sup_abs(t), 1e-300);
            const double eps_m = 1e-8 * tscale;
            for (std::size_t i = 0; i < n_; ++i) {
                sigma[i] = kernel_dphi(t[i], eps_m, prob_.kp);
                dq[i] = (prob_.cq - 1.0) *
                        std::pow(std::max(std::fabs(g[i]), 1e-300), prob_.cq - 2.0);
            }
            // exact gradient of Phi (with the rank-one J-variation term)
            lw = apply_lplus(grid_, prob_.A, prob_.Gamma, rho);
            for (std::size_t i = 0; i < n_; ++i) lw[i] *= sigma[i];
            grad = apply_lminus(grid_, prob_.A, prob_.Gamma, lw);
            double rho_dot_phiq = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                rho_dot_phiq += rho[i] * odd_power(g[i], prob_.cq);
            }
            rho_dot_phiq *= h_;
            const auto lmw = apply_lminus(grid_, prob_.A, prob_.Gamma, w);
            for (std::size_t i = 0; i < n_; ++i) {
                grad[i] = 2.0 * (grad[i] - J * dq[i] * rho[i] -
                                 prob_.kp * rho_dot_phiq * lmw[i]);
            }

            // banded GN metric (L- D_sigma L+ - J D_q)^2 + tau
            std::vector<double> jb;
            sandwich_band(grid_, prob_.A, prob_.Gamma, sigma, jb);
            for (std::size_t i = 0; i < n_; ++i) jb[i * 3] -= J * dq[i];
            auto jget = [&](std::ptrdiff_t a, std::ptrdiff_t b) -> double {
                if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(n_) ||
                    b >= static_cast<std::ptrdiff_t>(n_)) {
                    return 0.0;
                }
                const std::ptrdiff_t k = a > b ? a - b : b - a;
                if (k > 2) return 0.0;
                const std::ptrdiff_t row = std::max(a, b);
                return jb[static_cast<std::size_t>(row) * 3 + static_cast<std::size_t>(k)];
            };
            std::vector<double> gn(n_ * 5, 0.0);
            for (std::size_t i = 0; i < n_; ++i) {
                for (std::size_t k = 0; k <= std::min<std::size_t>(4, i); ++k) {
                    const std::ptrdiff_t a = static_cast<std::ptrdiff_t>(i);
                    const std::ptrdiff_t b = a - static_cast<std::ptrdiff_t>(k);
                    double s = 0.0;
                    for (std::ptrdiff_t mm = a - 2; mm <= a + 2; ++mm) {
                        s += jget(a, mm) * jget(mm, b);
                    }
                    gn[i * 5 + k] = s;
                }
            }
            double maxdiag = 0.0;
            for (std::size_t i = 0; i < n_; ++i) maxdiag = std::max(maxdiag, gn[i * 5]);
            const double tau = 1e-10 * maxdiag + 1e-300;
            for (std::size_t i = 0; i < n_; ++i) gn[i * 5] += tau;
            if (banded_cholesky(gn, n_, 4)) {
                d = grad;
                banded_solve(gn, n_, 4, d);
            } else {
                d = grad;
            }
            double slope = dot_h(grad, d);
            if (!(slope > 0.0) || !std::isfinite(slope)) {
                d = grad;
                slope = dot_h(grad, grad);
                if (slope == 0.0) break;
            }

            bool accepted = false;
            std::vector<double> t2, w2, rho2;
            double J2 = J, phi2 = phi;
            for (int bt = 0; bt < 60; ++bt) {
                gt.assign(g.begin(), g.end());
                for (std::size_t i = 0; i < n_; ++i) gt[i] -= alpha * d[i];
                const double c = constraint(gt);
                if (c > 0.0 && std::isfinite(c)) {
                    const double scale = std::pow(c, -1.0 / prob_.cq);
                    for (double& x : gt) x *= scale;
                    J2 = eval_rho(gt, t2, w2, rho2);
                    phi2 = phi_of(rho2);
                    if (std::isfinite(phi2) && phi2 <= phi - 1e-4 * alpha * slope) {
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            plateau = (phi - phi2 <= 1e-12 * phi2) ? plateau + 1 : 0;
            g.swap(gt);
            t.swap(t2);
            w.swap(w2);
            rho.swap(rho2);
            J = J2;
            phi = phi2;
            ++iters;
            alpha = std::min(alpha * 1.4, 1e6);
        }
        return iters;
    }

private:
    long floor_index() const {
        return static_cast<long>(
                   std::ceil(std::log2(opts_.eps_start / opts_.eps_floor))) +
               1;
    }

    long iteration_cap(bool polish_phase) const {
        return polish_phase ? opts_.max_iter + opts_.polish_max_iter : opts_.max_iter;
    }

    void normalize(std::vector<double>& g) const {
        const double c = constraint(g);
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ValidationError("initial profile must be nonzero with finite norm");
        }
        const double scale = std::pow(c, -1.0 / prob_.cq);
        for (double& x : g) x *= scale;
    }

    double constraint(std::span<const double> g) const {
        double s = 0.0;
        for (double x : g) s += std::pow(std::fabs(x), prob_.cq);
        return s * h_;
    }

    double objective(std::span<const double> t, double eps) const {
        double s = 0.0;
        for (double x : t) s += kernel_psi(x, eps, prob_.kp);
        return s * h_;
    }

    // grad R = kp [ L- w - J |g|^{cq-2} g ] in the h-weighted metric, valid on
    // the constraint surface (it is tangent there).
    void gradient(std::span<const double> g, std::span<const double> t, double eps,
                  double J, std::vector<double>& grad) const {
        std::vector<double> w(n_);
        for (std::size_t i = 0; i < n_; ++i) w[i] = kernel_phi(t[i], eps, prob_.kp);
        grad = apply_lminus(grid_, prob_.A, prob_.Gamma, w);
        for (std::size_t i = 0; i < n_; ++i) {
            grad[i] = prob_.kp * (grad[i] - J * odd_power(g[i], prob_.cq));
        }
    }

    double dot_h(std::span<const double> a, std::span<const double> b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += a[i] * b[i];
        return s * h_;
    }

    // Descent direction: (L+^T diag(psi'') L+ + tau I)^{-1} grad. The metric is
    // SPD for any weights > 0, so the step is a descent direction; backtracking
    // does the rest.
    void direction(std::span<const double> g, std::span<const double> t, double eps,
                   const std::vector<double>& grad, std::vector<double>& d) const {
        if (opts_.plain_gradient) {
            d = grad;
            return;
        }
        const double tscale = std::max(sup_abs(t), 1e-300);
        const double eps_m = std::max(eps, 1e-8 * tscale);
        std::vector<double> sigma(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            sigma[i] = kernel_dphi(t[i], eps_m, prob_.kp) * prob_.kp;
        }
        std::vector<double> band;
        sandwich_band(grid_, prob_.A, prob_.Gamma, sigma, band);
        double maxdiag = 0.0;
        for (std::size_t i = 0; i < n_; ++i) maxdiag = std::max(maxdiag, band[i * 3]);
        double tau = 1e-12 * maxdiag + 1e-300;
        for (int attempt = 0; attempt < 3; ++attempt) {
            std::vector<double> factor = band;
            for (std::size_t i = 0; i < n_; ++i) factor[i * 3] += tau;
            if (banded_cholesky(factor, n_, 2)) {
                d = grad;
                banded_solve(factor, n_, 2, d);
                return;
            }
            tau *= 1e4;
        }
        d = grad;
        (void)g;
    }

    // mu = <L-(|L+ g|^{kp-2} L+ g), g>_h / <|g|^{cq-2} g, g>_h (exact kernel).
    double multiplier(std::span<const double> g, std::span<const double> t) const {
        std::vector<double> w(n_);
        for (std::size_t i = 0; i < n_; ++i) w[i] = kernel_phi(t[i], 0.0, prob_.kp);
        const auto lw = apply_lminus(grid_, prob_.A, prob_.Gamma, w);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            num += lw[i] * g[i];
            den += std::pow(std::fabs(g[i]), prob_.cq);
        }
        return num / den;
    }

    const LineGrid& grid_;
    QuotientProblem prob_;
    SolveOptions opts_;
    std::size_t n_;
    double h_;
};

void validate_problem(const QuotientProblem& prob) {
    if (prob.Gamma == 0.0) {
        throw ValidationError(
            "Gamma = 0: degenerate regime, the quotient has no nontrivial minimizer "
            "(decaying pairs are trivial)");
    }
    if (prob.A * prob.A + prob.Gamma < 0.0) {
        throw ValidationError("A^2 + Gamma must be nonnegative");
    }
    if (!(prob.cq > prob.kp)) {
        throw ValidationError(
            "anticoercivity violated: constraint exponent must exceed the conjugate "
            "kernel exponent");
    }
}

std::vector<double> start_profile(const LineGrid& grid, int index, unsigned long seed) {
    const std::size_t n = grid.size();
    std::vector<double> g(n);
    if (index == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = grid.node(i);
            g[i] = std::exp(-0.5 * s * s);
        }
        return g;
    }
    std::mt19937_64 rng(seed + 7919ULL * static_cast<unsigned long>(index));
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::uniform_real_distribution<double> width(0.6, 1.5);
    std::uniform_real_distribution<double> mix(0.0, 0.8);
    const double c1 = center(rng), w1 = width(rng);
    const double c2 = center(rng), w2 = width(rng);
    const double a2 = mix(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid.node(i);
        g[i] = std::exp(-0.5 * (s - c1) * (s - c1) / (w1 * w1)) +
               a2 * std::exp(-0.5 * (s - c2) * (s - c2) / (w2 * w2));
    }
    return g;
}

CoreResult minimize_core(const QuotientProblem& prob, const LineGrid& grid,
                         const SolveOptions& opts) {
    validate_problem(prob);
    QuotientSolver solver(grid, prob, opts);
    CoreResult best;
    bool have = false;
    const int starts = std::max(1, opts.multistarts);
    for (int k = 0; k < starts; ++k) {
        CoreResult res = solver.run(start_profile(grid, k, opts.seed));
        res.start_index = k;
        if (!have || (res.converged && !best.converged) ||
            (res.converged == best.converged && res.m < best.m)) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

}  // namespace

std::vector<double> recover_f(const LineGrid& grid, const ReducedParams& red,
                              std::span<const double> g) {
    auto t = apply_lplus(grid, red.A, red.Gamma, g);
    for (double& x : t) x = odd_power(x, red.p_conj);
    return t;
}

TrajectoryPair rescale_to_solution(const LineGrid& grid, const ReducedParams& red,
                                   std::span<const double> ghat, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf),
                      "stationarity not reached: multiplier mu = %.17g is not positive", mu);
        throw NonconvergenceError(buf);
    }
    const double c = std::pow(mu, 1.0 / (red.q - red.p_conj));
    TrajectoryPair pair{grid, std::vector<double>(ghat.begin(), ghat.end()), {}, red};
    for (double& x : pair.g) x *= c;
    pair.f = recover_f(grid, red, pair.g);
    return pair;
}

VariationalResult minimize_quotient(const ReducedParams& red, const LineGrid& grid,
                                    const SolveOptions& opts) {
    QuotientProblem prob{red.A, red.Gamma, red.p_conj, red.q};
    CoreResult core = minimize_core(prob, grid, opts);

    VariationalResult vr;
    vr.m = core.m;
    vr.mu = core.mu;
    vr.iterations = core.iterations;
    vr.converged = core.converged;
    vr.stationarity = core.stationarity;
    vr.stationarity_core = core.stationarity_core;
    vr.eps_final = core.eps_final;
    vr.start_index = core.start_index;
    vr.objective_history = std::move(core.history);

    // Tie-break: peak positive (sign flips are solutions too).
    std::size_t imax = 0;
    for (std::size_t i = 1; i < core.ghat.size(); ++i) {
        if (std::fabs(core.ghat[i]) > std::fabs(core.ghat[imax])) imax = i;
    }
    if (core.ghat[imax] < 0.0) {
        for (double& x : core.ghat) x = -x;
    }
    vr.unit_minimizer = core.ghat;

    vr.pair = rescale_to_solution(grid, red, core.ghat, core.mu);
    const SystemResidual sr = system_residual(vr.pair);
    vr.residual_sup1 = sr.sup1;
    vr.residual_sup2 = sr.sup2;
    vr.residual_core1 = windowed_sup(sr.r1, vr.pair.g, vr.pair.f, grid.spacing());
    vr.residual_core2 = windowed_sup(sr.r2, vr.pair.g, vr.pair.f, grid.spacing());
    return vr;
}

DualityReport duality_check(const SystemParams& params, const LineGrid& grid,
                            const SolveOptions& opts) {
    const ReducedParams red = derive_reduced(params);
    QuotientProblem primal{red.A, red.Gamma, red.p_conj, red.q};
    QuotientProblem dual{-red.A, red.Gamma, red.q_conj, red.p};
    const CoreResult rp = minimize_core(primal, grid, opts);
    const CoreResult rd = minimize_core(dual, grid, opts);

    DualityReport rep;
    rep.m = rp.m;
    rep.m_tilde = rd.m;
    rep.converged = rp.converged && rd.converged;
    const double lhs = std::pow(rd.m, (red.q - red.p_conj) / red.q);
    const double rhs = std::pow(rp.m, (red.p - red.q_conj) / red.p);
    rep.defect = std::fabs(lhs - rhs) / rhs;
    return rep;
}

namespace {

// Least-squares residual descent over the nonnegative cone; Gauss-Newton metric.
ProbeReport run_probe(const ReducedParams& red, const LineGrid& grid,
                      std::vector<double> g, const SolveOptions& opts) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const double kp = red.p_conj;
    const double cq = red.q;

    for (double& x : g) x = std::max(x, 0.0);

    auto clamp_f = [&](std::span<const double> t, double eps, std::vector<double>& f) {
        f.resize(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = std::max(0.0, kernel_phi(t[i], eps, kp));
    };
    auto residual = [&](std::span<const double> gg, double eps, std::vector<double>& t,
                        std::vector<double>& f, std::vector<double>& rho) {
        t = apply_lplus(grid, red.A, red.Gamma, gg);
        clamp_f(t, eps, f);
        rho = apply_lminus(grid, red.A, red.Gamma, f);
        for (std::size_t i = 0; i < n; ++i) rho[i] -= odd_power(gg[i], cq);
    };
    auto phi_of = [&](std::span<const double> rho) {
        double s = 0.0;
        for (double x : rho) s += x * x;
        return s * h;
    };

    ProbeReport rep;
    std::vector<double> t, f, rho, grad, d, gt, t2, f2, rho2;
    residual(g, 0.0, t, f, rho);
    rep.best_residual_sup = sup_abs(rho);
    rep.sup_history.push_back(sup_abs(g));

    if (sup_abs(g) == 0.0) {  // fixed point of the projected descent
        rep.verdict = ProbeVerdict::Collapse;
        rep.final_residual_sup = rep.best_residual_sup;
        return rep;
    }

    double alpha = 1.0;
    long iters = 0;
    const long cap = std::max(2000L, opts.max_iter / 4);
    while (iters < cap) {
        const double eps =
            std::max(opts.eps_floor, opts.eps_start * std::pow(0.5, iters));
        residual(g, eps, t, f, rho);
        const double phi = phi_of(rho);

        // grad = 2 [ L- D_{f'} L+ rho - (cq-1)|g|^{cq-2} rho ]
        std::vector<double> sigma(n);
        for (std::size_t i = 0; i < n; ++i) {
            sigma[i] = f[i] > 0.0 ? kernel_dphi(t[i], eps, kp) : 0.0;
        }
        std::vector<double> lrho = apply_lplus(grid, red.A, red.Gamma, rho);
        for (std::size_t i = 0; i < n; ++i) lrho[i] *= sigma[i];
        grad = apply_lminus(grid, red.A, red.Gamma, lrho);
        std::vector<double> dq(n);
        for (std::size_t i = 0; i < n; ++i) {
            dq[i] = (cq - 1.0) * std::pow(std::max(std::fabs(g[i]), 1e-30), cq - 2.0);
            grad[i] = 2.0 * (grad[i] - dq[i] * rho[i]);
        }
        if (sup_abs(grad) == 0.0) break;

        // Gauss-Newton band: (L- D L+ - D_q)^2 + tau, bandwidth 4.
        std::vector<double> jb;
        sandwich_band(grid, red.A, red.Gamma, sigma, jb);
        for (std::size_t i = 0; i < n; ++i) jb[i * 3] -= dq[i];
        auto jget = [&](std::ptrdiff_t a, std::ptrdiff_t b) -> double {
            if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(n) ||
                b >= static_cast<std::ptrdiff_t>(n)) {
                return 0.0;
            }
            const std::ptrdiff_t k = a > b ? a - b : b - a;
            if (k > 2) return 0.0;
            const std::ptrdiff_t row = std::max(a, b);
            return jb[static_cast<std::size_t>(row) * 3 + static_cast<std::size_t>(k)];
        };
        std::vector<double> gn(n * 5, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k <= std::min<std::size_t>(4, i); ++k) {
                const std::ptrdiff_t a = static_cast<std::ptrdiff_t>(i);
                const std::ptrdiff_t b = a - static_cast<std::ptrdiff_t>(k);
                double s = 0.0;
                for (std::ptrdiff_t m = a - 2; m <= a + 2; ++m) {
                    s += jget(a, m) * jget(m, b);
                }
                gn[i * 5 + k] = s;
            }
        }
        double maxdiag = 0.0;
        for (std::size_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, gn[i * 5]);
        const double tau = 1e-10 * maxdiag + 1e-300;
        for (std::size_t i = 0; i < n; ++i) gn[i * 5] += tau;
        if (banded_cholesky(gn, n, 4)) {
            d = grad;
            banded_solve(gn, n, 4, d);
        } else {
            d = grad;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += grad[i] * d[i];
        slope *= h;
        if (!(slope > 0.0)) {
            d = grad;
            slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += grad[i] * grad[i];
            slope *= h;
        }

        bool accepted = false;
        for (int bt = 0; bt < 70; ++bt) {
            gt.assign(g.begin(), g.end());
            for (std::size_t i = 0; i < n; ++i) gt[i] = std::max(0.0, gt[i] - alpha * d[i]);
            residual(gt, eps, t2, f2, rho2);
            const double phit = phi_of(rho2);
            if (std::isfinite(phit) && phit <= phi - 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        g.swap(gt);
        ++iters;
        alpha = std::min(alpha * 1.4, 1e6);
        rep.sup_history.push_back(sup_abs(g));
        rep.best_residual_sup = std::min(rep.best_residual_sup, interior_sup(grid, rho2));
        if (sup_abs(g) < opts.trivial_tol) break;
    }

    residual(g, 0.0, t, f, rho);
    rep.iterations = iters;
    rep.final_sup_g = sup_abs(g);
    rep.final_sup_f = sup_abs(f);
    rep.final_residual_sup = interior_sup(grid, rho);
    rep.best_residual_sup = std::min(rep.best_residual_sup, rep.final_residual_sup);
    rep.verdict = rep.final_sup_g < opts.trivial_tol ? ProbeVerdict::Collapse
                                                     : ProbeVerdict::ResidualFloor;
    return rep;
}

}  // namespace

ProbeReport nonneg_probe(const ReducedParams& red, const LineGrid& grid,
                         std::span<const double> g0, const SolveOptions& opts) {
    if (red.Gamma > 0.0) {
        throw ValidationError(
            "nonneg probe requires Gamma <= 0 (sign-definite solutions exist for "
            "Gamma > 0)");
    }
    if (g0.size() != grid.size()) {
        throw ValidationError("start profile size does not match the grid");
    }
    return run_probe(red, grid, std::vector<double>(g0.begin(), g0.end()), opts);
}

ProbeReport nonneg_probe(const ReducedParams& red, const LineGrid& grid,
                         const SolveOptions& opts) {
    std::vector<double> g0(grid.size());
    for (std::size_t i = 0; i < g0.size(); ++i) {
        const double s = grid.node(i);
        g0[i] = std::exp(-0.5 * s * s);
    }
    return nonneg_probe(red, grid, g0, opts);
}

}  // namespace hle
