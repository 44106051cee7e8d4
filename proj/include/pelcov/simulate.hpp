// Model simulators shared by the test suites and the fixture generator:
// standardized t / skew-t innovations, ARMA-GARCH recursions, and the
// time-varying t copula.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pelcov/dynamic_copula.hpp"
#include "pelcov/marginals.hpp"
#include "pelcov/rng.hpp"
#include "pelcov/student_t.hpp"

namespace pelcov {

inline double sample_t(double n, Rng& rng) {
    return rng.normal() / std::sqrt(rng.chi_square(n) / n);
}

/// Fernandez-Steel skew-t draw: |T| is flipped to the positive branch with
/// probability xi^2 / (1 + xi^2) and scaled accordingly.
inline double sample_skew_t(const SkewTParams& p, Rng& rng, bool standardized = false) {
    p.validate(standardized);
    const double t = std::fabs(sample_t(p.m, rng));
    const double take_pos = rng.uniform();
    const double z = take_pos < p.xi * p.xi / (1.0 + p.xi * p.xi) ? p.xi * t : -t / p.xi;
    if (!standardized) return z;
    const MeanSd ms = skew_t_mean_sd(p);
    return (z - ms.mean) / ms.sd;
}

inline std::vector<double> simulate_ar_garch_t(const ArGarchParams& p, std::size_t length, Rng& rng,
                                               std::size_t burnin = 300) {
    p.validate();
    std::vector<double> out;
    out.reserve(length);
    double sigma2 = p.omega / (1.0 - p.alpha - p.beta);
    double eps_prev = 0.0, x_prev = 0.0;
    const double scale = std::sqrt((p.m - 2.0) / p.m);
    for (std::size_t t = 0; t < burnin + length; ++t) {
        sigma2 = p.omega + p.alpha * eps_prev * eps_prev + p.beta * sigma2;
        const double a = sample_t(p.m, rng) * scale;
        const double eps = std::sqrt(sigma2) * a;
        const double x = p.phi1 * x_prev + eps;
        eps_prev = eps;
        x_prev = x;
        if (t >= burnin) out.push_back(x);
    }
    return out;
}

inline std::vector<double> simulate_ma_garch_skew(const MaGarchSkewParams& p, std::size_t length,
                                                  Rng& rng, std::size_t burnin = 300) {
    p.validate();
    std::vector<double> out;
    out.reserve(length);
    double sigma2 = p.omega / (1.0 - p.alpha - p.beta);
    double eta_prev = 0.0;
    for (std::size_t t = 0; t < burnin + length; ++t) {
        sigma2 = p.omega + p.alpha * eta_prev * eta_prev + p.beta * sigma2;
        const double b = sample_skew_t(p.skew, rng, true);
        const double eta = std::sqrt(sigma2) * b;
        const double y = p.theta1 * eta_prev + eta;
        eta_prev = eta;
        if (t >= burnin) out.push_back(y);
    }
    return out;
}

struct CopulaPathSample {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> rho; // realized dependence path
};

/// Sample from the time-varying t copula: at each date the pair is drawn
/// with the current rho_t, and the realized pseudo-observations feed the
/// evolution equation exactly as in rho_path().
inline CopulaPathSample simulate_dynamic_t_copula(const EvolutionParams& ev, std::size_t length,
                                                  Rng& rng, std::size_t burnin = 100) {
    ev.validate();
    CopulaPathSample out;
    out.u.reserve(length);
    out.v.reserve(length);
    out.rho.reserve(length);
    std::vector<double> lag_products; // t_n^{-1}(u) * t_n^{-1}(v), most recent last
    double rho_prev = ev.rho_init;
    for (std::size_t t = 0; t < burnin + length; ++t) {
        double force = 0.0;
        if (!lag_products.empty()) {
            const std::size_t m = std::min<std::size_t>(10, lag_products.size());
            for (std::size_t j = 0; j < m; ++j) force += lag_products[lag_products.size() - 1 - j];
            force /= static_cast<double>(m);
        }
        const double rho_t = clamp_rho(lambda1(ev.nu0 + ev.nu1 * rho_prev + ev.nu2 * force));
        const double z1 = rng.normal();
        const double z2 = rho_t * z1 + std::sqrt(1.0 - rho_t * rho_t) * rng.normal();
        const double w = std::sqrt(rng.chi_square(ev.n) / ev.n);
        const double t1 = z1 / w, t2 = z2 / w;
        lag_products.push_back(t1 * t2);
        if (lag_products.size() > 10) lag_products.erase(lag_products.begin());
        rho_prev = rho_t;
        if (t >= burnin) {
            out.u.push_back(t_cdf(t1, ev.n));
            out.v.push_back(t_cdf(t2, ev.n));
            out.rho.push_back(rho_t);
        }
    }
    return out;
}

struct JointSample {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> rho;
};

/// Full generative model: dynamic t copula on the innovations, AR-GARCH
/// margin for x, MA-GARCH skew-t margin for y.
inline JointSample simulate_joint(const ArGarchParams& px, const MaGarchSkewParams& py,
                                  const EvolutionParams& ev, std::size_t length, Rng& rng,
                                  std::size_t burnin = 300) {
    px.validate();
    py.validate();
    ev.validate();
    JointSample out;
    out.x.reserve(length);
    out.y.reserve(length);
    out.rho.reserve(length);
    std::vector<double> lag_products;
    double rho_prev = ev.rho_init;
    double s2x = px.omega / (1.0 - px.alpha - px.beta);
    double s2y = py.omega / (1.0 - py.alpha - py.beta);
    double eps_prev = 0.0, x_prev = 0.0, eta_prev = 0.0;
    for (std::size_t t = 0; t < burnin + length; ++t) {
        double force = 0.0;
        if (!lag_products.empty()) {
            const std::size_t m = std::min<std::size_t>(10, lag_products.size());
            for (std::size_t j = 0; j < m; ++j) force += lag_products[lag_products.size() - 1 - j];
            force /= static_cast<double>(m);
        }
        const double rho_t = clamp_rho(lambda1(ev.nu0 + ev.nu1 * rho_prev + ev.nu2 * force));
        const double z1 = rng.normal();
        const double z2 = rho_t * z1 + std::sqrt(1.0 - rho_t * rho_t) * rng.normal();
        const double w = std::sqrt(rng.chi_square(ev.n) / ev.n);
        const double t1 = z1 / w, t2 = z2 / w;
        lag_products.push_back(t1 * t2);
        if (lag_products.size() > 10) lag_products.erase(lag_products.begin());
        rho_prev = rho_t;
        const double u = t_cdf(t1, ev.n);
        const double v = t_cdf(t2, ev.n);

        s2x = px.omega + px.alpha * eps_prev * eps_prev + px.beta * s2x;
        const double a = std_t_quantile(u, px.m);
        const double eps = std::sqrt(s2x) * a;
        const double x = px.phi1 * x_prev + eps;
        eps_prev = eps;
        x_prev = x;

        s2y = py.omega + py.alpha * eta_prev * eta_prev + py.beta * s2y;
        const double b = skew_t_quantile(v, py.skew, true);
        const double eta = std::sqrt(s2y) * b;
        const double y = py.theta1 * eta_prev + eta;
        eta_prev = eta;

        if (t >= burnin) {
            out.x.push_back(x);
            out.y.push_back(y);
            out.rho.push_back(rho_t);
        }
    }
    return out;
}

} // namespace pelcov
