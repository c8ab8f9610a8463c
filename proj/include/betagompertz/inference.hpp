#pragma once

// Maximum-likelihood machinery: analytic observed information for the full
// family, finite-difference information for the nested ones, a BFGS
// optimizer in log-parameter space with a deterministic multistart grid,
// standard errors, and the goodness-of-fit block (K-S, AIC family, LRT).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "submodels.hpp"

namespace bg {

// Row-major dense square matrix just big enough for 4x4 information work.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {

// Cholesky factorization; returns false when the matrix is not positive
// definite. On success `lower` holds L with A = L L^T.
inline bool cholesky(const Matrix& A, Matrix& lower) {
    int n = A.n;
    lower = Matrix(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            if (i == j) {
                if (!(s > 0.0)) return false;
                lower(i, i) = std::sqrt(s);
            } else {
                lower(i, j) = s / lower(j, j);
            }
        }
    }
    return true;
}

// Inverse through the Cholesky factor; pd reports definiteness.
inline bool invert_spd(const Matrix& A, Matrix& inv) {
    Matrix L;
    if (!cholesky(A, L)) return false;
    int n = A.n;
    inv = Matrix(n);
    // solve L L^T X = I column by column
    for (int c = 0; c < n; ++c) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = (i == c) ? 1.0 : 0.0;
            for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
            y[i] = s / L(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int k = i + 1; k < n; ++k) s -= L(k, i) * inv(k, c);
            inv(i, c) = s / L(i, i);
        }
    }
    return true;
}

} // namespace detail

// Observed information J = -Hessian of the log-likelihood at q, in the
// family's own parameter order. The full family gets closed-form second
// derivatives; the nested ones difference their analytic scores centrally.
inline Matrix observed_information(Family f, std::span<const double> q,
                                   std::span<const double> x) {
    const int dim = family_dim(f);
    if (f == Family::BG) {
        double th = q[0], ga = q[1], al = q[2], be = q[3];
        const double n = static_cast<double>(x.size());
        double s_rw2 = 0.0;        // r(1+r) w^2, w = z/theta
        double s_dth = 0.0;        // d/theta
        double s_rdw = 0.0;        // r(1+r) d w
        double s_rd_th = 0.0;      // r d/theta
        double s_w = 0.0, s_rw = 0.0, s_e = 0.0, s_rd2 = 0.0, s_re = 0.0;
        double s_rd = 0.0, s_d = 0.0;
        for (double xi : x) {
            double z = detail::gompertz_cumhaz(xi, th, ga);
            double egx = std::exp(ga * xi);
            double w = z / th;
            double d = th * (ga * xi * egx - (egx - 1.0)) / (ga * ga);
            double e = th * (xi * xi * egx / ga - 2.0 * xi * egx / (ga * ga)
                             + 2.0 * (egx - 1.0) / (ga * ga * ga));
            double r = detail::expm1_ratio(z);
            double rp = r * (1.0 + r);  // -dr/dz
            s_rw2 += rp * w * w;
            s_dth += d / th;
            s_rdw += rp * d * w;
            s_rd_th += r * d / th;
            s_w += w;
            s_rw += r * w;
            s_e += e;
            s_rd2 += rp * d * d;
            s_re += r * e;
            s_rd += r * d;
            s_d += d;
        }
        double tg_a = trigamma(al), tg_b = trigamma(be), tg_ab = trigamma(al + be);
        Matrix J(4);
        // l_thth
        J(0, 0) = -(-n / (th * th) - (al - 1.0) * s_rw2);
        // l_thga
        double l_thga = -be * s_dth + (al - 1.0) * (-s_rdw + s_rd_th);
        J(0, 1) = J(1, 0) = -l_thga;
        // l_thal
        J(0, 2) = J(2, 0) = -s_rw;
        // l_thbe
        J(0, 3) = J(3, 0) = s_w;
        // l_gaga
        double l_gaga = -be * s_e + (al - 1.0) * (-s_rd2 + s_re);
        J(1, 1) = -l_gaga;
        // l_gaal
        J(1, 2) = J(2, 1) = -s_rd;
        // l_gabe
        J(1, 3) = J(3, 1) = s_d;
        // l_alal / l_albe / l_bebe
        J(2, 2) = n * (tg_a - tg_ab);
        J(2, 3) = J(3, 2) = -n * tg_ab;
        J(3, 3) = n * (tg_b - tg_ab);
        return J;
    }

    // central differences of the analytic score; the step is relative so a
    // parameter near zero is never pushed across it
    Matrix J(dim);
    std::vector<double> qp(q.begin(), q.end());
    for (int j = 0; j < dim; ++j) {
        double h = 1e-6 * std::fabs(q[j]);
        double save = qp[j];
        qp[j] = save + h;
        auto gp = family_score(f, qp, x);
        qp[j] = save - h;
        auto gm = family_score(f, qp, x);
        qp[j] = save;
        for (int i = 0; i < dim; ++i)
            J(i, j) = -(gp[i] - gm[i]) / (2.0 * h);
    }
    // symmetrize the differencing noise away
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            double v = 0.5 * (J(i, j) + J(j, i));
            J(i, j) = J(j, i) = v;
        }
    return J;
}

struct FitOptions {
    int max_iter = 500;
    double grad_tol = 1e-8;     // on the log-parameter gradient, sup norm
    double tie_tol = 1e-9;      // loglik ties resolved to the first-found start
};

struct FitResult {
    Family family = Family::BG;
    std::vector<double> estimate;    // family parameter order
    std::vector<double> std_error;   // NaN when information is not invertible
    double loglik = 0.0;
    bool converged = false;
    bool info_pd = false;
    int iterations = 0;
    int starts_tried = 0;
    std::string message;
};

namespace detail {

// BFGS minimizer of `fn` (value + gradient) over R^dim, backtracking
// Armijo line search with curvature-guarded Hessian updates.
struct BfgsOutcome {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
    int iterations = 0;
};

inline BfgsOutcome bfgs(const std::function<double(std::span<const double>, std::vector<double>&)>& fn,
                        std::vector<double> x0, int max_iter, double grad_tol) {
    const int dim = static_cast<int>(x0.size());
    std::vector<double> g(dim), gnew(dim), p(dim), xnew(dim), s(dim), y(dim);
    Matrix H(dim);  // inverse-Hessian approximation
    for (int i = 0; i < dim; ++i) H(i, i) = 1.0;
    double f = fn(x0, g);
    BfgsOutcome out;
    out.x = x0;
    for (int it = 0; it < max_iter; ++it) {
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::fabs(v));
        if (gmax <= grad_tol) {
            out.converged = true;
            out.iterations = it;
            out.f = f;
            return out;
        }
        // p = -H g
        for (int i = 0; i < dim; ++i) {
            double v = 0.0;
            for (int j = 0; j < dim; ++j) v += H(i, j) * g[j];
            p[i] = -v;
        }
        double slope = std::inner_product(p.begin(), p.end(), g.begin(), 0.0);
        if (!(slope < 0.0)) {
            // reset to steepest descent when the approximation sours
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) H(i, j) = (i == j) ? 1.0 : 0.0;
            for (int i = 0; i < dim; ++i) p[i] = -g[i];
            slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
        }
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (int i = 0; i < dim; ++i) xnew[i] = out.x[i] + step * p[i];
            double fnew = fn(xnew, gnew);
            if (std::isfinite(fnew) && fnew <= f + 1e-4 * step * slope) {
                for (int i = 0; i < dim; ++i) {
                    s[i] = xnew[i] - out.x[i];
                    y[i] = gnew[i] - g[i];
                }
                out.x = xnew;
                f = fnew;
                g = gnew;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            out.iterations = it;
            out.f = f;
            return out;  // line search exhausted, converged flag stays false
        }
        double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        if (sy > 1e-12) {
            // BFGS inverse update
            std::vector<double> Hy(dim, 0.0);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) Hy[i] += H(i, j) * y[j];
            double yHy = std::inner_product(y.begin(), y.end(), Hy.begin(), 0.0);
            double c1 = (sy + yHy) / (sy * sy);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    H(i, j) += c1 * s[i] * s[j] - (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
        }
        out.iterations = it + 1;
    }
    out.f = f;
    return out;
}

// deterministic multistart grid in the family's parameter order
inline std::vector<std::vector<double>> fit_starts(Family f, std::span<const double> x) {
    double mean = 0.0;
    for (double xi : x) mean += xi;
    mean /= static_cast<double>(x.size());
    double base = 1.0 / mean;
    const double ms[3] = {0.5, 1.0, 2.0};
    const double ss[3] = {0.3, 1.0, 3.0};
    std::vector<std::vector<double>> starts;
    switch (f) {
        case Family::E:
            for (double m : ms) starts.push_back({m * base});
            break;
        case Family::GE:
            for (double m : ms)
                for (double a : ss) starts.push_back({m * base, a});
            break;
        case Family::BE:
            for (double m : ms)
                for (double a : ss)
                    for (double b : ss) starts.push_back({m * base, a, b});
            break;
        case Family::G:
            for (double m : ms) starts.push_back({m * base, m * base});
            break;
        case Family::GG:
            for (double m : ms)
                for (double a : ss) starts.push_back({m * base, m * base, a});
            break;
        case Family::BG:
            for (double m : ms)
                for (double a : ss)
                    for (double b : ss) starts.push_back({m * base, m * base, a, b});
            break;
    }
    return starts;
}

} // namespace detail

// Maximum-likelihood fit by BFGS on log-parameters (which removes the
// positivity constraints) over a deterministic multistart grid; extra
// warm starts can be appended by the caller. Ties in the final loglik
// within tie_tol go to the first start tried.
inline FitResult fit_mle(Family f, std::span<const double> x, const FitOptions& opt = {},
                         const std::vector<std::vector<double>>& extra_starts = {}) {
    if (x.size() < 5) detail::domain_error("fit_mle: need at least 5 observations");
    bool constant = true;
    for (double v : x) {
        if (!(std::isfinite(v) && v > 0.0)) detail::domain_error("fit_mle: data must be finite and positive");
        if (v != x[0]) constant = false;
    }
    if (constant) detail::domain_error("fit_mle: degenerate sample, all values identical");
    const int dim = family_dim(f);
    FitResult best;
    best.family = f;
    best.loglik = -std::numeric_limits<double>::infinity();

    // negative loglik and its gradient in log-parameter space
    auto fn = [&](std::span<const double> lq, std::vector<double>& grad) -> double {
        std::vector<double> q(dim);
        for (int i = 0; i < dim; ++i) {
            if (std::fabs(lq[i]) > 600.0) return std::numeric_limits<double>::infinity();
            q[i] = std::exp(lq[i]);
        }
        double ll = family_loglik(f, q, x);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        auto sc = family_score(f, q, x);
        grad.resize(dim);
        for (int i = 0; i < dim; ++i) grad[i] = -sc[i] * q[i];
        return -ll;
    };

    auto starts = detail::fit_starts(f, x);
    for (const auto& es : extra_starts) starts.push_back(es);

    for (const auto& s0 : starts) {
        std::vector<double> lq0(dim);
        bool ok = true;
        for (int i = 0; i < dim; ++i) {
            if (!(s0[i] > 0.0)) { ok = false; break; }
            lq0[i] = std::log(s0[i]);
        }
        if (!ok) continue;
        auto r = detail::bfgs(fn, lq0, opt.max_iter, opt.grad_tol);
        ++best.starts_tried;
        double ll = -r.f;
        bool better = ll > best.loglik + opt.tie_tol;
        bool first_converged_tie = r.converged && !best.converged &&
                                   ll > best.loglik - opt.tie_tol;
        if (better || first_converged_tie) {
            best.estimate.resize(dim);
            for (int i = 0; i < dim; ++i) best.estimate[i] = std::exp(r.x[i]);
            best.loglik = ll;
            best.converged = r.converged;
            best.iterations = r.iterations;
        }
    }

    if (best.estimate.empty()) {
        best.message = "all starts failed";
        return best;
    }

    Matrix J = observed_information(f, best.estimate, x);
    Matrix C;
    best.info_pd = detail::invert_spd(J, C);
    best.std_error.assign(dim, std::numeric_limits<double>::quiet_NaN());
    if (best.info_pd)
        for (int i = 0; i < dim; ++i)
            best.std_error[i] = std::sqrt(C(i, i));
    best.message = best.converged ? "converged" : "iteration or line-search limit";
    return best;
}

// --- goodness of fit -------------------------------------------------------

struct GofReport {
    double ks_stat = 0.0;
    double ks_pvalue = 0.0;
    double aic = 0.0;
    double aicc = 0.0;
    double bic = 0.0;
};

// Kolmogorov-Smirnov D against a fitted cdf; ties cost one cdf evaluation
// per distinct value. p-value from the asymptotic Kolmogorov tail.
inline GofReport goodness_of_fit(Family f, std::span<const double> q,
                                 std::span<const double> x, double loglik) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const auto n = static_cast<double>(s.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        double F = family_cdf(f, q, s[i]);
        double lo = static_cast<double>(i) / n;      // ecdf just below the jump
        double hi = static_cast<double>(j) / n;      // ecdf at the jump
        d = std::max({d, std::fabs(F - lo), std::fabs(hi - F)});
        i = j;
    }
    GofReport g;
    g.ks_stat = d;
    g.ks_pvalue = kolmogorov_sf(std::sqrt(n) * d);
    double k = static_cast<double>(family_dim(f));
    g.aic = -2.0 * loglik + 2.0 * k;
    g.aicc = g.aic + 2.0 * k * (k + 1.0) / (n - k - 1.0);
    g.bic = -2.0 * loglik + k * std::log(n);
    return g;
}

struct LrtResult {
    double statistic;   // 2 (l_full - l_null)
    int df;
    double pvalue;      // chi-square upper tail
};

inline LrtResult likelihood_ratio_test(double loglik_null, int dim_null,
                                       double loglik_full, int dim_full) {
    LrtResult r;
    r.statistic = 2.0 * (loglik_full - loglik_null);
    if (r.statistic < 0.0) r.statistic = 0.0;
    r.df = dim_full - dim_null;
    r.pvalue = reg_inc_gamma_upper(0.5 * r.df, 0.5 * r.statistic);
    return r;
}

// Convenience: fits all six families with the warm-start chain
// G -> GG -> BG (each refit seeds the next wider family), so the fitted
// log-likelihoods are monotone along every nesting path.
inline std::vector<FitResult> fit_all_families(std::span<const double> x,
                                               const FitOptions& opt = {}) {
    std::vector<FitResult> out;
    FitResult fe = fit_mle(Family::E, x, opt);
    FitResult fg = fit_mle(Family::G, x, opt, {{fe.estimate[0], 1e-4}});
    FitResult fge = fit_mle(Family::GE, x, opt, {{fe.estimate[0], 1.0}});
    FitResult fbe = fit_mle(Family::BE, x, opt, {{fge.estimate[0], fge.estimate[1], 1.0}});
    FitResult fgg = fit_mle(Family::GG, x, opt,
                            {{fg.estimate[0], fg.estimate[1], 1.0}});
    FitResult fbg = fit_mle(Family::BG, x, opt,
                            {{fgg.estimate[0], fgg.estimate[1], fgg.estimate[2], 1.0},
                             {fbe.estimate[0], 1e-4, fbe.estimate[1], fbe.estimate[2]}});
    out.push_back(std::move(fe));
    out.push_back(std::move(fge));
    out.push_back(std::move(fbe));
    out.push_back(std::move(fg));
    out.push_back(std::move(fgg));
    out.push_back(std::move(fbg));
    return out;
}

} // namespace bg
