#pragma once

// The four-parameter Beta-Gompertz lifetime distribution: density, tail
// and hazard functions, quantiles and inverse-cdf sampling. The family
// arises by feeding the Gompertz cdf through a Beta(alpha, beta) ratio;
// alpha = beta = 1 recovers Gompertz itself.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "specfun.hpp"

namespace bg {

struct BGParams {
    double theta;  // Gompertz scale
    double gamma;  // Gompertz shape
    double alpha;  // beta-transform first exponent
    double beta;   // beta-transform second exponent

    bool valid() const {
        return theta > 0.0 && gamma > 0.0 && alpha > 0.0 && beta > 0.0 &&
               std::isfinite(theta) && std::isfinite(gamma) &&
               std::isfinite(alpha) && std::isfinite(beta);
    }
    void require_valid() const {
        if (!valid()) detail::domain_error("BGParams: all four parameters must be positive finite");
    }
};

namespace detail {

// cumulative Gompertz hazard z(x) = (theta/gamma)(e^{gamma x} - 1),
// with the gamma -> 0 limit theta x handled explicitly.
inline double gompertz_cumhaz(double x, double theta, double gamma) {
    if (gamma * x < 1e-8 && gamma * x > -1e-8)
        return theta * x * (1.0 + 0.5 * gamma * x);
    return theta * std::expm1(gamma * x) / gamma;
}

} // namespace detail

// Gompertz building blocks, exposed because the nested families reuse them.
inline double gompertz_cdf(double x, double theta, double gamma) {
    if (x <= 0.0) return 0.0;
    return -std::expm1(-detail::gompertz_cumhaz(x, theta, gamma));
}

inline double gompertz_logpdf(double x, double theta, double gamma) {
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(theta) + gamma * x - detail::gompertz_cumhaz(x, theta, gamma);
}

// ln f(x) for the BG density
//   f(x) = theta e^{gamma x} e^{-beta z} (1 - e^{-z})^{alpha-1} / B(alpha, beta),
//   z = (theta/gamma)(e^{gamma x} - 1).
inline double bg_logpdf(double x, const BGParams& p) {
    p.require_valid();
    if (x < 0.0) return -std::numeric_limits<double>::infinity();
    double z = detail::gompertz_cumhaz(x, p.theta, p.gamma);
    if (z <= 0.0) {
        // boundary x = 0: density limit is 0, theta*beta or +inf by alpha
        if (p.alpha > 1.0) return -std::numeric_limits<double>::infinity();
        if (p.alpha == 1.0) return std::log(p.theta * p.beta);
        return std::numeric_limits<double>::infinity();
    }
    return std::log(p.theta) + p.gamma * x - p.beta * z - log_beta(p.alpha, p.beta)
         + (p.alpha - 1.0) * log1mexp(z);
}

inline double bg_pdf(double x, const BGParams& p) {
    double l = bg_logpdf(x, p);
    if (l == std::numeric_limits<double>::infinity()) return l;
    return std::exp(l);
}

// F(x) = I_{G(x)}(alpha, beta) with G the Gompertz cdf. Past the first
// decade of tail decay the complement route takes over: e^{-z} keeps full
// relative precision where 1 - e^{-z} has rounded toward 1, and a heavy
// upper tail (beta < 1) still holds visible mass exactly there.
inline double bg_cdf(double x, const BGParams& p) {
    p.require_valid();
    if (x <= 0.0) return 0.0;
    double z = detail::gompertz_cumhaz(x, p.theta, p.gamma);
    double ez = std::exp(-z);
    if (ez > 0.1) return reg_inc_beta(p.alpha, p.beta, -std::expm1(-z));
    return 1.0 - reg_inc_beta(p.beta, p.alpha, ez);
}

// Survival through the symmetric ratio keeps accuracy deep in the tail,
// where 1 - G(x) = e^{-z} is the well-conditioned quantity.
inline double bg_sf(double x, const BGParams& p) {
    p.require_valid();
    if (x <= 0.0) return 1.0;
    double z = detail::gompertz_cumhaz(x, p.theta, p.gamma);
    return reg_inc_beta(p.beta, p.alpha, std::exp(-z));
}

inline double bg_hrf(double x, const BGParams& p) {
    double s = bg_sf(x, p);
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    double l = bg_logpdf(x, p);
    if (l == std::numeric_limits<double>::infinity()) return l;
    return std::exp(l - std::log(s));
}

// reversed hazard pdf/cdf, finite for x > 0
inline double bg_rhrf(double x, const BGParams& p) {
    double c = bg_cdf(x, p);
    if (c <= 0.0) return std::numeric_limits<double>::infinity();
    double l = bg_logpdf(x, p);
    return std::exp(l - std::log(c));
}

// Q(u) = (1/gamma) ln(1 - (gamma/theta) ln(1 - V)), V the Beta(alpha, beta)
// quantile of u. For V near 1 the complementary beta quantile supplies
// ln(1 - V) directly, which matters for heavy upper tails.
inline double bg_quantile(double u, const BGParams& p) {
    p.require_valid();
    if (u < 0.0 || u > 1.0) detail::domain_error("bg_quantile: u must lie in [0,1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    double inner;  // ln(1 - V) <= 0
    double v = inv_reg_inc_beta(p.alpha, p.beta, u);
    if (v <= 0.9) {
        inner = std::log1p(-v);
    } else {
        double w = inv_reg_inc_beta(p.beta, p.alpha, 1.0 - u);
        inner = std::log(w);
    }
    return std::log1p(-(p.gamma / p.theta) * inner) / p.gamma;
}

// Deterministic inverse-cdf sampler. mt19937_64 output is mapped into the
// open unit interval as (k >> 11 + 1/2) * 2^-53 so u = 0 and u = 1 never
// occur and streams are bit-reproducible across platforms.
class BGSampler {
public:
    BGSampler(const BGParams& p, std::uint64_t seed) : p_(p), eng_(seed) {
        p_.require_valid();
    }

    double operator()() {
        std::uint64_t k = eng_();
        double u = (static_cast<double>(k >> 11) + 0.5) * 0x1.0p-53;
        return bg_quantile(u, p_);
    }

    std::vector<double> draw(std::size_t n) {
        std::vector<double> out(n);
        for (auto& v : out) v = (*this)();
        return out;
    }

private:
    BGParams p_;
    std::mt19937_64 eng_;
};

namespace detail {

// splitmix64, used to derive independent per-task seeds from one master seed
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

} // namespace bg
