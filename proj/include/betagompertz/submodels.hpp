#pragma once

// The five nested special cases alongside the full four-parameter family,
// with a uniform free-parameter layout so the fitting code can treat all
// six generically: log-density, cdf, quantile, log-likelihood and analytic
// score per family.
//
//   E   exponential            (theta)                 gamma -> 0, alpha = beta = 1
//   GE  generalized exponential (theta, alpha)         gamma -> 0, beta = 1
//   BE  beta exponential        (theta, alpha, beta)   gamma -> 0
//   G   Gompertz                (theta, gamma)         alpha = beta = 1
//   GG  generalized Gompertz    (theta, gamma, alpha)  beta = 1
//   BG  Beta-Gompertz           (theta, gamma, alpha, beta)

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distribution.hpp"

namespace bg {

enum class Family { E, GE, BE, G, GG, BG };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::E:  return "E";
        case Family::GE: return "GE";
        case Family::BE: return "BE";
        case Family::G:  return "G";
        case Family::GG: return "GG";
        case Family::BG: return "BG";
    }
    return "?";
}

inline bool family_from_name(const std::string& s, Family& out) {
    if (s == "E")  { out = Family::E;  return true; }
    if (s == "GE") { out = Family::GE; return true; }
    if (s == "BE") { out = Family::BE; return true; }
    if (s == "G")  { out = Family::G;  return true; }
    if (s == "GG") { out = Family::GG; return true; }
    if (s == "BG") { out = Family::BG; return true; }
    return false;
}

inline int family_dim(Family f) {
    switch (f) {
        case Family::E:  return 1;
        case Family::GE: return 2;
        case Family::BE: return 3;
        case Family::G:  return 2;
        case Family::GG: return 3;
        case Family::BG: return 4;
    }
    return 0;
}

// Free-parameter order per family. theta always first; gamma present only
// in the Gompertz-based families.
inline std::vector<std::string> family_param_names(Family f) {
    switch (f) {
        case Family::E:  return {"theta"};
        case Family::GE: return {"theta", "alpha"};
        case Family::BE: return {"theta", "alpha", "beta"};
        case Family::G:  return {"theta", "gamma"};
        case Family::GG: return {"theta", "gamma", "alpha"};
        case Family::BG: return {"theta", "gamma", "alpha", "beta"};
    }
    return {};
}

// Exact embeddings. The exponential-type families are gamma -> 0 limits,
// represented here by gamma = 0 in the returned quadruple; BG evaluators
// must not be called with them, their own code paths below apply.
inline BGParams family_embed(Family f, std::span<const double> q) {
    switch (f) {
        case Family::E:  return {q[0], 0.0, 1.0, 1.0};
        case Family::GE: return {q[0], 0.0, q[1], 1.0};
        case Family::BE: return {q[0], 0.0, q[1], q[2]};
        case Family::G:  return {q[0], q[1], 1.0, 1.0};
        case Family::GG: return {q[0], q[1], q[2], 1.0};
        case Family::BG: return {q[0], q[1], q[2], q[3]};
    }
    return {0, 0, 0, 0};
}

namespace detail {

// r(z) = e^{-z} / (1 - e^{-z}), the log1mexp derivative, stable for all z > 0
inline double expm1_ratio(double z) {
    return std::exp(-z - log1mexp(z));
}

} // namespace detail

inline double family_logpdf(Family f, std::span<const double> q, double x) {
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    switch (f) {
        case Family::E:
            return std::log(q[0]) - q[0] * x;
        case Family::GE: {
            double u = q[0] * x;
            if (u <= 0.0)
                return q[1] < 1.0 ? std::numeric_limits<double>::infinity()
                     : (q[1] == 1.0 ? std::log(q[0]) : -std::numeric_limits<double>::infinity());
            return std::log(q[1] * q[0]) - u + (q[1] - 1.0) * log1mexp(u);
        }
        case Family::BE: {
            double u = q[0] * x;
            if (u <= 0.0)
                return q[1] < 1.0 ? std::numeric_limits<double>::infinity()
                     : (q[1] == 1.0 ? std::log(q[0] * q[2]) : -std::numeric_limits<double>::infinity());
            return std::log(q[0]) - q[2] * u + (q[1] - 1.0) * log1mexp(u) - log_beta(q[1], q[2]);
        }
        case Family::G:
            return gompertz_logpdf(x, q[0], q[1]);
        case Family::GG: {
            double z = detail::gompertz_cumhaz(x, q[0], q[1]);
            if (z <= 0.0)
                return q[2] < 1.0 ? std::numeric_limits<double>::infinity()
                     : (q[2] == 1.0 ? std::log(q[0]) : -std::numeric_limits<double>::infinity());
            return std::log(q[2] * q[0]) + q[1] * x - z + (q[2] - 1.0) * log1mexp(z);
        }
        case Family::BG:
            return bg_logpdf(x, family_embed(f, q));
    }
    return -std::numeric_limits<double>::infinity();
}

inline double family_cdf(Family f, std::span<const double> q, double x) {
    if (x <= 0.0) return 0.0;
    switch (f) {
        case Family::E:
            return -std::expm1(-q[0] * x);
        case Family::GE:
            return std::exp(q[1] * log1mexp(q[0] * x));
        case Family::BE:
            return reg_inc_beta(q[1], q[2], -std::expm1(-q[0] * x));
        case Family::G:
            return gompertz_cdf(x, q[0], q[1]);
        case Family::GG: {
            double z = detail::gompertz_cumhaz(x, q[0], q[1]);
            return std::exp(q[2] * log1mexp(z));
        }
        case Family::BG:
            return bg_cdf(x, family_embed(f, q));
    }
    return 0.0;
}

inline double family_quantile(Family f, std::span<const double> q, double u) {
    if (u < 0.0 || u > 1.0) detail::domain_error("family_quantile: u must lie in [0,1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    switch (f) {
        case Family::E:
            return -std::log1p(-u) / q[0];
        case Family::GE: {
            // inner = ln(1 - u^{1/alpha})
            double lv = std::log(u) / q[1];
            double inner = lv > -0.6931471805599453
                         ? std::log(-std::expm1(lv)) : std::log1p(-std::exp(lv));
            return -inner / q[0];
        }
        case Family::BE: {
            double v = inv_reg_inc_beta(q[1], q[2], u);
            double inner;
            if (v <= 0.9) inner = std::log1p(-v);
            else inner = std::log(inv_reg_inc_beta(q[2], q[1], 1.0 - u));
            return -inner / q[0];
        }
        case Family::G: {
            double inner = std::log1p(-u);
            return std::log1p(-(q[1] / q[0]) * inner) / q[1];
        }
        case Family::GG: {
            double lv = std::log(u) / q[2];
            double inner = lv > -0.6931471805599453
                         ? std::log(-std::expm1(lv)) : std::log1p(-std::exp(lv));
            return std::log1p(-(q[1] / q[0]) * inner) / q[1];
        }
        case Family::BG:
            return bg_quantile(u, family_embed(f, q));
    }
    return 0.0;
}

inline double family_loglik(Family f, std::span<const double> q, std::span<const double> x) {
    double s = 0.0;
    for (double xi : x) s += family_logpdf(f, q, xi);
    return s;
}

// Analytic score dl/dq for each family, in the family's own free-parameter
// order. For the Gompertz-based families the chain rule runs through
//   z   = (theta/gamma)(e^{gamma x} - 1),
//   dz/dtheta = z / theta,
//   dz/dgamma = theta (gamma x e^{gamma x} - (e^{gamma x} - 1)) / gamma^2.
inline std::vector<double> family_score(Family f, std::span<const double> q,
                                        std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    switch (f) {
        case Family::E: {
            double sx = 0.0;
            for (double xi : x) sx += xi;
            return {n / q[0] - sx};
        }
        case Family::GE: {
            double th = q[0], al = q[1];
            double u_th = n / th, u_al = n / al;
            for (double xi : x) {
                double u = th * xi;
                double r = detail::expm1_ratio(u);
                u_th += -xi + (al - 1.0) * r * xi;
                u_al += log1mexp(u);
            }
            return {u_th, u_al};
        }
        case Family::BE: {
            double th = q[0], al = q[1], be = q[2];
            double psi_ab = digamma(al + be);
            double u_th = n / th;
            double u_al = n * (psi_ab - digamma(al));
            double u_be = n * (psi_ab - digamma(be));
            for (double xi : x) {
                double u = th * xi;
                double r = detail::expm1_ratio(u);
                u_th += -be * xi + (al - 1.0) * r * xi;
                u_al += log1mexp(u);
                u_be += -u;
            }
            return {u_th, u_al, u_be};
        }
        case Family::G: {
            double th = q[0], ga = q[1];
            double u_th = n / th, u_ga = 0.0;
            for (double xi : x) {
                double z = detail::gompertz_cumhaz(xi, th, ga);
                double egx = std::exp(ga * xi);
                double d = th * (ga * xi * egx - (egx - 1.0)) / (ga * ga);
                u_th += -z / th;
                u_ga += xi - d;
            }
            return {u_th, u_ga};
        }
        case Family::GG: {
            double th = q[0], ga = q[1], al = q[2];
            double u_th = n / th, u_ga = 0.0, u_al = n / al;
            for (double xi : x) {
                double z = detail::gompertz_cumhaz(xi, th, ga);
                double egx = std::exp(ga * xi);
                double d = th * (ga * xi * egx - (egx - 1.0)) / (ga * ga);
                double r = detail::expm1_ratio(z);
                u_th += (-1.0 + (al - 1.0) * r) * z / th;
                u_ga += xi + (-1.0 + (al - 1.0) * r) * d;
                u_al += log1mexp(z);
            }
            return {u_th, u_ga, u_al};
        }
        case Family::BG: {
            double th = q[0], ga = q[1], al = q[2], be = q[3];
            double psi_ab = digamma(al + be);
            double u_th = n / th, u_ga = 0.0;
            double u_al = n * (psi_ab - digamma(al));
            double u_be = n * (psi_ab - digamma(be));
            for (double xi : x) {
                double z = detail::gompertz_cumhaz(xi, th, ga);
                double egx = std::exp(ga * xi);
                double d = th * (ga * xi * egx - (egx - 1.0)) / (ga * ga);
                double r = detail::expm1_ratio(z);
                u_th += (-be + (al - 1.0) * r) * z / th;
                u_ga += xi + (-be + (al - 1.0) * r) * d;
                u_al += log1mexp(z);
                u_be += -z;
            }
            return {u_th, u_ga, u_al, u_be};
        }
    }
    return {};
}

} // namespace bg
