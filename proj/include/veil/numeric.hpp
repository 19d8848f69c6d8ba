#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "veil/errors.hpp"

namespace veil {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Standard normal pdf / cdf / quantile
// ---------------------------------------------------------------------------

inline double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16).
// Accurate to about 1e-16 over (0, 1); returns +/-inf at the endpoints.
inline double std_normal_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw ParameterError("std_normal_quantile: p must be in [0, 1]");
    }
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -x : x;
}

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

namespace detail {

struct SimpsonWork {
    const std::function<double(double)>* f;
    int max_depth;
};

inline double simpson_panel(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_recurse(const SimpsonWork& w, double a, double fa, double b, double fb,
                              double m, double fm, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*w.f)(lm);
    const double frm = (*w.f)(rm);
    const double left = simpson_panel(a, fa, m, fm, flm);
    const double right = simpson_panel(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || (b - a) < 1e-14 * (1.0 + std::abs(a))) {
        return left + right + delta / 15.0;
    }
    if (depth >= w.max_depth) {
        throw NumericError("adaptive quadrature did not converge");
    }
    return simpson_recurse(w, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
           simpson_recurse(w, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] to absolute tolerance eps.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double eps, int max_depth = 52) {
    if (!(a < b)) return 0.0;
    detail::SimpsonWork w{&f, max_depth};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_panel(a, fa, b, fb, fm);
    return detail::simpson_recurse(w, a, fa, b, fb, m, fm, whole, eps, 0);
}

// Same, but with the interval pre-split at the given interior breakpoints
// (density kinks, truncation edges). Breakpoints outside (a, b) are ignored.
inline double integrate_adaptive_split(const std::function<double(double)>& f, double a, double b,
                                       std::vector<double> breakpoints, double eps) {
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    double total = 0.0;
    double prev = a;
    for (double x : breakpoints) {
        if (x <= prev || x > b) continue;
        total += integrate_adaptive(f, prev, std::min(x, b), eps);
        prev = x;
    }
    if (prev < b) total += integrate_adaptive(f, prev, b, eps);
    return total;
}

}  // namespace veil
