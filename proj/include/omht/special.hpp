#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "omht/errors.hpp"

namespace omht {

namespace detail {

// Lower regularized incomplete gamma P(a, x) by power series, for x < a + 1.
inline double gamma_lower_series(double a, double x) {
    if (x == 0.0) return 0.0;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericalError("gamma_lower_series: no convergence (a=" + std::to_string(a) +
                         ", x=" + std::to_string(x) + ")");
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction
// (modified Lentz), for x >= a + 1.
inline double gamma_upper_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw NumericalError("gamma_upper_cf: no convergence (a=" + std::to_string(a) +
                         ", x=" + std::to_string(x) + ")");
}

}  // namespace detail

// Q(a, x) = Gamma(a, x)/Gamma(a), absolute accuracy ~1e-14.
inline double regularized_gamma_upper(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw std::invalid_argument("regularized_gamma_upper: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_lower_series(a, x);
    return detail::gamma_upper_cf(a, x);
}

inline double regularized_gamma_lower(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw std::invalid_argument("regularized_gamma_lower: need a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_lower_series(a, x);
    return 1.0 - detail::gamma_upper_cf(a, x);
}

inline double chi2_cdf(double x, int dof) {
    if (dof < 1) {
        throw std::invalid_argument("chi2_cdf: dof must be >= 1");
    }
    if (x < 0.0) return 0.0;
    return regularized_gamma_lower(0.5 * dof, 0.5 * x);
}

inline double chi2_pdf(double x, int dof) {
    if (dof < 1 || x < 0.0) return 0.0;
    const double a = 0.5 * dof;
    if (x == 0.0) return dof == 2 ? 0.5 : (dof == 1 ? INFINITY : 0.0);
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

// Inverse chi-squared CDF via bracketed Newton iteration; converges to
// |CDF(x) - p| at double precision, well inside the 1e-10 target.
inline double chi2_quantile(double p, int dof) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("chi2_quantile: p must be in (0, 1)");
    }
    if (dof < 1) {
        throw std::invalid_argument("chi2_quantile: dof must be >= 1");
    }
    double lo = 0.0;
    double hi = std::max(8.0, 2.0 * dof);
    while (chi2_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) {
            throw NumericalError("chi2_quantile: failed to bracket p=" + std::to_string(p));
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double err = chi2_cdf(x, dof) - p;
        if (err > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double deriv = chi2_pdf(x, dof);
        double next = x - err / deriv;
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);  // Newton left the bracket, bisect instead
        }
        const double step = std::abs(next - x);
        x = next;
        if (step < 1e-13 * std::max(1.0, x) && std::abs(err) < 1e-12) {
            return x;
        }
    }
    throw NumericalError("chi2_quantile: no convergence after 200 iterations (p=" +
                         std::to_string(p) + ", dof=" + std::to_string(dof) + ")");
}

}  // namespace omht
