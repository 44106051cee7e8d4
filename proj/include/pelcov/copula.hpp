// Bivariate Student-t copula analytics: the conditional CDF (h-function),
// copula CDF/density, the critical point of the h-function, its boundary
// limits, and tail dependence.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "pelcov/quadrature.hpp"
#include "pelcov/student_t.hpp"

namespace pelcov {

struct CopulaParams {
    double rho; // in (-1, 1)
    double n;   // degrees of freedom, > 1

    void validate() const {
        if (!(std::fabs(rho) < 1.0)) throw std::domain_error("CopulaParams: |rho| < 1 required");
        if (!(n > 1.0)) throw std::domain_error("CopulaParams: n > 1 required");
    }
};

namespace detail {

// h evaluated at x = t_n^{-1}(u). Working in quantile space avoids the
// roundtrip through u for candidates produced in quantile space.
inline double hfunc_x(double x, double v, const CopulaParams& p) {
    const double b = t_quantile(v, p.n);
    const double denom = std::sqrt((p.n + x * x) * (1.0 - p.rho * p.rho) / (p.n + 1.0));
    return t_cdf((b - p.rho * x) / denom, p.n + 1.0);
}

} // namespace detail

/// Conditional CDF h(u) = P(V <= v | U = u) for the t copula.
/// Defined on the open square; boundary values in u are the limits below.
inline double hfunc(double u, double v, const CopulaParams& p) {
    p.validate();
    if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0))
        throw std::domain_error("hfunc: u, v must be in (0,1); use limits() at the u boundary");
    return detail::hfunc_x(t_quantile(u, p.n), v, p);
}

/// C(u, v) as the integral of the h-function over the first argument.
inline double copula_cdf(double u, double v, const CopulaParams& p, double abs_tol = 1e-10) {
    p.validate();
    if (!(u >= 0.0 && u <= 1.0) || !(v >= 0.0 && v <= 1.0))
        throw std::domain_error("copula_cdf: u, v must be in [0,1]");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (v == 1.0) return u;
    if (u == 1.0) return v;
    return integrate([&](double s) { return detail::hfunc_x(t_quantile(s, p.n), v, p); }, 0.0, u,
                     abs_tol);
}

inline double copula_logpdf(double u, double v, const CopulaParams& p) {
    p.validate();
    if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0))
        throw std::domain_error("copula_pdf: u, v must be in (0,1)");
    const double x = t_quantile(u, p.n);
    const double y = t_quantile(v, p.n);
    const double r2 = 1.0 - p.rho * p.rho;
    const double quad = (x * x + y * y - 2.0 * p.rho * x * y) / (p.n * r2);
    const double log_joint = -std::log(2.0 * kPi * std::sqrt(r2)) - 0.5 * (p.n + 2.0) * std::log1p(quad);
    return log_joint - t_logpdf(x, p.n) - t_logpdf(y, p.n);
}

inline double copula_pdf(double u, double v, const CopulaParams& p) {
    return std::exp(copula_logpdf(u, v, p));
}

/// Critical point of the h-function: the maximum for v > 1/2, the minimum
/// for v < 1/2, and absent at v = 1/2 (h is then strictly decreasing).
inline std::optional<double> u_star(double v, const CopulaParams& p) {
    p.validate();
    if (!(v > 0.0 && v < 1.0)) throw std::domain_error("u_star: v must be in (0,1)");
    if (!(p.rho > 0.0)) throw std::domain_error("u_star: requires rho > 0");
    if (v == 0.5) return std::nullopt;
    return t_cdf(-p.rho * p.n / t_quantile(v, p.n), p.n);
}

struct HLimits {
    double L0; // lim_{u -> 0+} h(u)
    double L1; // lim_{u -> 1-} h(u) = 1 - L0
};

/// Boundary limits of the h-function; they do not depend on v.
inline HLimits limits(const CopulaParams& p) {
    p.validate();
    const double L0 = t_cdf(p.rho * std::sqrt(p.n + 1.0) / std::sqrt(1.0 - p.rho * p.rho), p.n + 1.0);
    return {L0, 1.0 - L0};
}

/// Lower (= upper) tail dependence of the t copula.
inline double tail_dependence(const CopulaParams& p) {
    p.validate();
    return 2.0 * t_cdf(-std::sqrt((p.n + 1.0) * (1.0 - p.rho) / (1.0 + p.rho)), p.n + 1.0);
}

/// Shape summary of u -> h(u) at a fixed v: critical point and limits.
struct ConditionalCurve {
    CopulaParams params;
    double v;
    std::optional<double> u_star;
    double L0;
    double L1;
};

inline ConditionalCurve conditional_curve(double v, const CopulaParams& p) {
    const HLimits lim = limits(p);
    return {p, v, u_star(v, p), lim.L0, lim.L1};
}

} // namespace pelcov
