#pragma once

// Numerical integration used by the oracle layer and the entropy code:
// a tanh-sinh rule tolerant of integrable endpoint singularities and an
// adaptive Gauss-Kronrod (G7, K15) subdivision scheme for smooth parts.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "specfun.hpp"

namespace bg {

namespace detail {

// abscissae/weights of the 15-point Kronrod with embedded 7-point Gauss
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GKResult {
    double value;
    double error;
};

inline GKResult gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = gk_wk[7] * fc;
    double resg = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * gk_x[j];
        double f1 = f(c - x), f2 = f(c + x);
        resk += gk_wk[j] * (f1 + f2);
        if (j % 2 == 1) resg += gk_wg[j / 2] * (f1 + f2);
    }
    double err = std::fabs((resk - resg) * h);
    return {resk * h, err};
}

} // namespace detail

// Adaptive G7K15 on [a, b]. Splits the worst interval until the summed
// error estimate drops below abs_tol + rel_tol * |integral|.
inline double integrate_gk(const std::function<double(double)>& f, double a, double b,
                           const Accuracy& acc = {}, int max_splits = 2000) {
    struct Seg { double a, b, value, error; };
    std::vector<Seg> segs;
    auto r0 = detail::gk15(f, a, b);
    segs.push_back({a, b, r0.value, r0.error});
    for (int it = 0; it < max_splits; ++it) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (err <= acc.abs_tol + acc.rel_tol * std::fabs(total)) return total;
        Seg s = segs[worst];
        double m = 0.5 * (s.a + s.b);
        auto rl = detail::gk15(f, s.a, m);
        auto rr = detail::gk15(f, m, s.b);
        segs[worst] = {s.a, m, rl.value, rl.error};
        segs.push_back({m, s.b, rr.value, rr.error});
    }
    double total = 0.0;
    for (const auto& s : segs) total += s.value;
    return total;
}

// Tanh-sinh rule on (a, b). Node offsets from the nearest endpoint are
// formed in exp form and passed to the integrand as a second argument
// (x - a on the lower half, x - b on the upper, so its sign names the
// endpoint): an x^{p-1}-type integrable singularity at either end can be
// evaluated from the offset even where the abscissa itself has rounded
// onto the endpoint. Levels halve h until two sweeps agree.
inline double integrate_tanh_sinh(const std::function<double(double, double)>& f,
                                  double a, double b, const Accuracy& acc = {}) {
    const int max_level = 12;
    const double tmax = 6.1;
    double c = 0.5 * (b - a);

    // transformed integrand at parameter t: x = mid + c tanh(pi/2 sinh t)
    auto eval = [&](double t) -> double {
        double s = std::fabs(t);
        double u = 0.5 * detail::pi_v * std::sinh(s);
        double e = std::exp(-2.0 * u);
        double off = c * 2.0 * e / (1.0 + e);             // distance from the near endpoint
        double w = 0.5 * detail::pi_v * std::cosh(s) * 4.0 * e / ((1.0 + e) * (1.0 + e));
        double x = (t >= 0.0) ? b - off : a + off;
        double xc = (t >= 0.0) ? -off : off;
        double v = f(x, xc);
        if (!std::isfinite(v)) return 0.0;                // weight kills endpoint blowups
        return v * w;
    };

    double h = 1.0;
    double sum = eval(0.0);
    for (int k = 1; k <= static_cast<int>(tmax); ++k)
        sum += eval(static_cast<double>(k)) + eval(-static_cast<double>(k));
    double prev = c * h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        // only the new (odd-multiple) nodes at this level
        for (double t = h; t <= tmax; t += 2.0 * h) {
            add += eval(t) + eval(-t);
        }
        sum += add;
        double cur = c * h * sum;
        if (level >= 3 && std::fabs(cur - prev) <= acc.abs_tol + acc.rel_tol * std::fabs(cur))
            return cur;
        prev = cur;
    }
    return prev;
}

// Same rule for integrands indifferent to the endpoint offset. A node
// nearer to a nonzero endpoint than one ulp is unrepresentable through
// the abscissa alone, so a singularity there resolves to about sqrt(eps)
// accuracy; use the two-argument form when that matters.
inline double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                                  const Accuracy& acc = {}) {
    return integrate_tanh_sinh([&f](double x, double) { return f(x); }, a, b, acc);
}

} // namespace bg
