// Student-t family: CDF, quantile, density, plus the Fernandez-Steel
// skew-t used for GARCH innovations. Degrees of freedom may be any
// positive real (non-integer included); the copula layer separately
// enforces the stricter n > 1 it needs.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pelcov/special.hpp"

namespace pelcov {

inline void check_df(double n, const char* who) {
    if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error(std::string(who) + ": degrees of freedom must be positive");
}

inline double t_logpdf(double x, double n) {
    check_df(n, "t_logpdf");
    if (!std::isfinite(x)) throw std::domain_error("t_logpdf: x must be finite");
    return std::lgamma(0.5 * (n + 1.0)) - std::lgamma(0.5 * n) - 0.5 * std::log(n * kPi) -
           0.5 * (n + 1.0) * std::log1p(x * x / n);
}

inline double t_pdf(double x, double n) { return std::exp(t_logpdf(x, n)); }

/// CDF of the Student-t with n > 0 degrees of freedom, via the regularized
/// incomplete beta relation. Exactly 0.5 at x = 0 and antisymmetric by
/// construction.
inline double t_cdf(double x, double n) {
    check_df(n, "t_cdf");
    if (!std::isfinite(x)) throw std::domain_error("t_cdf: x must be finite");
    if (x == 0.0) return 0.5;
    const double z = n / (n + x * x);
    const double tail = 0.5 * incomplete_beta(0.5 * n, 0.5, z);
    return x > 0.0 ? 1.0 - tail : tail;
}

namespace detail {

// Quantile for p in (0, 1/2): safeguarded Newton on t_cdf with a bracketing
// fallback. Seeded by the Cornish-Fisher expansion around the normal
// quantile, or a power-law tail inversion for small p.
inline double t_quantile_lower(double p, double n) {
    double x0;
    if (p > 0.05) {
        const double z = normal_quantile(p);
        const double z3 = z * z * z, z5 = z3 * z * z;
        x0 = z + (z3 + z) / (4.0 * n) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * n * n);
    } else {
        // tail: P(T < x) ~ K |x|^-n with K = n^(n/2 - 1) / B(n/2, 1/2)
        const double logK = (0.5 * n - 1.0) * std::log(n) - log_beta(0.5 * n, 0.5);
        x0 = -std::exp((logK - std::log(p)) / n);
        if (!(x0 < -1.0)) x0 = -1.0;
    }
    // establish a bracket [lo, hi] with cdf(lo) < p < cdf(hi)
    double lo = x0, hi = x0;
    while (t_cdf(lo, n) >= p) lo = lo * 2.0 - 1.0;
    hi = 0.0; // cdf(0) = 1/2 > p
    double x = std::min(std::max(x0, lo), hi);
    double f = t_cdf(x, n) - p;
    for (int it = 0; it < 100; ++it) {
        if (f > 0.0) hi = x; else lo = x;
        const double dp = t_pdf(x, n);
        double xn = x - f / dp;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double step = std::fabs(xn - x);
        x = xn;
        f = t_cdf(x, n) - p;
        if (f == 0.0 || step <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) return x;
    }
    // pure bisection fallback; t_cdf is strictly increasing, this cannot fail
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(lo); ++it) {
        const double m = 0.5 * (lo + hi);
        if (t_cdf(m, n) - p > 0.0) hi = m; else lo = m;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Quantile of the Student-t, antisymmetric about p = 1/2 by construction.
inline double t_quantile(double p, double n) {
    check_df(n, "t_quantile");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;
    return p < 0.5 ? detail::t_quantile_lower(p, n) : -detail::t_quantile_lower(1.0 - p, n);
}

// ---------------------------------------------------------------------------
// Unit-variance ("standardized") t, the innovation law of the GARCH filters.
// X = T * sqrt((m-2)/m) with T ~ t_m, so Var X = 1; requires m > 2.

inline void check_std_df(double m, const char* who) {
    if (!(m > 2.0)) throw std::domain_error(std::string(who) + ": requires m > 2 for unit variance");
}

inline double std_t_logpdf(double x, double m) {
    check_std_df(m, "std_t_logpdf");
    const double s = std::sqrt(m / (m - 2.0));
    return t_logpdf(x * s, m) + std::log(s);
}

inline double std_t_pdf(double x, double m) { return std::exp(std_t_logpdf(x, m)); }

inline double std_t_cdf(double x, double m) {
    check_std_df(m, "std_t_cdf");
    return t_cdf(x * std::sqrt(m / (m - 2.0)), m);
}

inline double std_t_quantile(double p, double m) {
    check_std_df(m, "std_t_quantile");
    return t_quantile(p, m) / std::sqrt(m / (m - 2.0));
}

// ---------------------------------------------------------------------------
// Fernandez-Steel skew-t. The base density is
//   g(x) = 2/(xi + 1/xi) * f_m(xi * x)   for x < 0,
//   g(x) = 2/(xi + 1/xi) * f_m(x / xi)   for x >= 0,
// which has mode 0 but nonzero mean for xi != 1. The standardized variant
// shifts and scales to zero mean, unit variance (requires m > 2).

struct SkewTParams {
    double m;  // degrees of freedom
    double xi; // skewness, xi = 1 recovers the symmetric t

    void validate(bool standardized = false) const {
        if (!(m > 0.0) || !std::isfinite(m)) throw std::domain_error("SkewTParams: m must be positive");
        if (!(xi > 0.0) || !std::isfinite(xi)) throw std::domain_error("SkewTParams: xi must be positive");
        if (standardized && !(m > 2.0))
            throw std::domain_error("SkewTParams: standardization requires m > 2");
    }
};

struct MeanSd {
    double mean;
    double sd;
};

/// Mean and standard deviation of the base (unstandardized) skew-t law.
inline MeanSd skew_t_mean_sd(const SkewTParams& p) {
    p.validate(true);
    const double m = p.m, xi = p.xi;
    const double abs_moment = 2.0 * std::sqrt(m) / (std::sqrt(kPi) * (m - 1.0)) *
                              std::exp(std::lgamma(0.5 * (m + 1.0)) - std::lgamma(0.5 * m));
    const double mean = abs_moment * (xi - 1.0 / xi);
    const double ex2 = (m / (m - 2.0)) * (xi * xi * xi + 1.0 / (xi * xi * xi)) / (xi + 1.0 / xi);
    return {mean, std::sqrt(ex2 - mean * mean)};
}

inline double skew_t_logpdf(double x, const SkewTParams& p, bool standardized = false) {
    p.validate(standardized);
    double shift = 0.0, scale = 1.0;
    if (standardized) {
        const MeanSd ms = skew_t_mean_sd(p);
        shift = ms.mean;
        scale = ms.sd;
    }
    const double z = shift + scale * x;
    const double lc = std::log(2.0 / (p.xi + 1.0 / p.xi));
    const double lf = z < 0.0 ? t_logpdf(p.xi * z, p.m) : t_logpdf(z / p.xi, p.m);
    return lc + lf + std::log(scale);
}

inline double skew_t_pdf(double x, const SkewTParams& p, bool standardized = false) {
    return std::exp(skew_t_logpdf(x, p, standardized));
}

inline double skew_t_cdf(double x, const SkewTParams& p, bool standardized = false) {
    p.validate(standardized);
    double z = x;
    if (standardized) {
        const MeanSd ms = skew_t_mean_sd(p);
        z = ms.mean + ms.sd * x;
    }
    const double xi2 = p.xi * p.xi;
    if (z < 0.0) return (2.0 / (1.0 + xi2)) * t_cdf(p.xi * z, p.m);
    return 1.0 / (1.0 + xi2) + (2.0 * xi2 / (1.0 + xi2)) * (t_cdf(z / p.xi, p.m) - 0.5);
}

inline double skew_t_quantile(double prob, const SkewTParams& p, bool standardized = false) {
    p.validate(standardized);
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("skew_t_quantile: p must be in (0,1)");
    const double xi2 = p.xi * p.xi;
    const double pc = 1.0 / (1.0 + xi2);
    double z;
    if (prob <= pc)
        z = t_quantile(prob * (1.0 + xi2) / 2.0, p.m) / p.xi;
    else
        z = p.xi * t_quantile(0.5 + (prob - pc) * (1.0 + xi2) / (2.0 * xi2), p.m);
    if (!standardized) return z;
    const MeanSd ms = skew_t_mean_sd(p);
    return (z - ms.mean) / ms.sd;
}

} // namespace pelcov
