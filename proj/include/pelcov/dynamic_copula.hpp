// Static pseudo-MLE of the t copula and the time-varying dependence
// recursion: rho_t follows an ARMA(1,10)-type evolution squashed into
// (-1, 1), fitted by the second stage of the two-stage likelihood.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pelcov/copula.hpp"
#include "pelcov/marginals.hpp"
#include "pelcov/optim.hpp"
#include "pelcov/rng.hpp"

namespace pelcov {

/// Modified logistic map (1 - e^-x) / (1 + e^-x) = tanh(x/2); odd, strictly
/// increasing, range (-1, 1), saturates without overflow.
inline double lambda1(double x) {
    if (!std::isfinite(x)) throw std::domain_error("lambda1: x must be finite");
    return std::tanh(0.5 * x);
}

// Keeps a dependence value strictly inside (-1, 1) in double precision;
// lambda1 itself reaches +-1.0 exactly once |x| exceeds ~75.
inline double clamp_rho(double r) {
    constexpr double lim = 1.0 - 1e-10;
    return std::min(std::max(r, -lim), lim);
}

struct EvolutionParams {
    double nu0;
    double nu1;
    double nu2;
    double n;        // copula degrees of freedom, held fixed
    double rho_init; // pre-sample dependence level

    void validate() const {
        if (!(n > 1.0)) throw std::domain_error("EvolutionParams: n > 1 required");
        if (!(std::fabs(rho_init) < 1.0)) throw std::domain_error("EvolutionParams: |rho_init| < 1 required");
        if (!std::isfinite(nu0) || !std::isfinite(nu1) || !std::isfinite(nu2))
            throw std::domain_error("EvolutionParams: nu must be finite");
    }
};

struct RhoPath {
    std::vector<double> rho;
    std::vector<double> L0;
};

namespace detail {

// rho_t recursion over precomputed quantile products q_t = t_n^{-1}(u_t) t_n^{-1}(v_t).
// Lag policy: the forcing term averages the available lagged products
// (up to 10); with no history yet it is zero.
inline std::vector<double> rho_recursion(double nu0, double nu1, double nu2, double rho_init,
                                         const std::vector<double>& q) {
    const std::size_t T = q.size();
    std::vector<double> rho(T);
    double rho_prev = rho_init;
    for (std::size_t t = 0; t < T; ++t) {
        double force = 0.0;
        const std::size_t avail = std::min<std::size_t>(10, t);
        if (avail > 0) {
            for (std::size_t j = 1; j <= avail; ++j) force += q[t - j];
            force /= static_cast<double>(avail);
        }
        rho[t] = clamp_rho(lambda1(nu0 + nu1 * rho_prev + nu2 * force));
        rho_prev = rho[t];
    }
    return rho;
}

// log copula density evaluated in quantile space with precomputed marginal
// log-densities; avoids re-inverting the t CDF inside the optimizer loop
inline double copula_logpdf_q(double x, double y, double lfx, double lfy, double rho, double n) {
    const double r2 = 1.0 - rho * rho;
    const double quad = (x * x + y * y - 2.0 * rho * x * y) / (n * r2);
    return -std::log(2.0 * kPi * std::sqrt(r2)) - 0.5 * (n + 2.0) * std::log1p(quad) - lfx - lfy;
}

} // namespace detail

inline void check_pseudo_obs(const std::vector<double>& u, const std::vector<double>& v,
                             std::size_t min_len) {
    if (u.size() != v.size()) throw std::domain_error("pseudo-observations: length mismatch");
    if (u.size() < min_len)
        throw std::domain_error("pseudo-observations: need at least " + std::to_string(min_len) +
                                " pairs");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i] > 0.0 && u[i] < 1.0 && v[i] > 0.0 && v[i] < 1.0))
            throw std::domain_error("pseudo-observations: values must be strictly inside (0,1)");
}

/// Static copula log-likelihood on pseudo-observations.
inline double copula_loglik(const std::vector<double>& u, const std::vector<double>& v,
                            const CopulaParams& p) {
    check_pseudo_obs(u, v, 2);
    double ll = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) ll += copula_logpdf(u[t], v[t], p);
    return ll;
}

struct StaticCopulaFit {
    CopulaParams params{0.0, 10.0};
    double loglik = 0.0;
};

/// Pseudo-MLE of (rho, n) for the time-invariant t copula.
inline StaticCopulaFit static_fit(const std::vector<double>& u, const std::vector<double>& v,
                                  const FitOptions& opts = {}) {
    check_pseudo_obs(u, v, 50);
    const std::size_t T = u.size();
    auto from_z = [](const std::vector<double>& z) {
        return CopulaParams{std::tanh(z[0]), 1.0 + std::exp(z[1])};
    };
    auto nll = [&](const std::vector<double>& z) -> double {
        const CopulaParams p = from_z(z);
        if (std::fabs(p.rho) > 0.9999 || p.n > 500.0) return 1e30;
        double ll = 0.0;
        std::vector<double> qx(T), qy(T);
        try {
            for (std::size_t t = 0; t < T; ++t) {
                qx[t] = t_quantile(u[t], p.n);
                qy[t] = t_quantile(v[t], p.n);
                ll += detail::copula_logpdf_q(qx[t], qy[t], t_logpdf(qx[t], p.n),
                                              t_logpdf(qy[t], p.n), p.rho, p.n);
            }
        } catch (const std::exception&) {
            return 1e30;
        }
        return -ll;
    };

    const double tau = kendall_tau(u, v);
    const double rho0 = std::clamp(std::sin(0.5 * kPi * tau), -0.99, 0.99);
    MinimizeResult best;
    best.fval = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    for (const double n0 : {4.0, 8.0, 16.0, 30.0}) {
        MinimizeResult r = minimize_bfgs(nll, {std::atanh(rho0), std::log(n0 - 1.0)});
        any_converged = any_converged || r.converged;
        if (r.fval < best.fval) best = r;
    }
    if (!any_converged) throw std::runtime_error("static_fit: optimizer failed to converge");
    StaticCopulaFit fit;
    fit.params = from_z(best.x);
    fit.loglik = -best.fval;
    if (std::fabs(fit.params.rho) > 0.999 || fit.params.n < 1.05 || fit.params.n > 300.0)
        throw std::runtime_error("static_fit: boundary convergence (rho = " +
                                 std::to_string(fit.params.rho) + ", n = " +
                                 std::to_string(fit.params.n) + ")");
    return fit;
}

/// Evaluate the dependence path and the per-date second-root gate L0_t.
inline RhoPath rho_path(const EvolutionParams& ev, const std::vector<double>& u,
                        const std::vector<double>& v) {
    ev.validate();
    check_pseudo_obs(u, v, 1);
    const std::size_t T = u.size();
    std::vector<double> q(T);
    for (std::size_t t = 0; t < T; ++t)
        q[t] = t_quantile(u[t], ev.n) * t_quantile(v[t], ev.n);
    RhoPath path;
    path.rho = detail::rho_recursion(ev.nu0, ev.nu1, ev.nu2, ev.rho_init, q);
    path.L0.resize(T);
    for (std::size_t t = 0; t < T; ++t) path.L0[t] = limits({path.rho[t], ev.n}).L0;
    return path;
}

/// Dynamic-stage log-likelihood for a given nu.
inline double dynamic_loglik(const EvolutionParams& ev, const std::vector<double>& u,
                             const std::vector<double>& v) {
    ev.validate();
    check_pseudo_obs(u, v, 1);
    const std::size_t T = u.size();
    std::vector<double> qx(T), qy(T), lfx(T), lfy(T), q(T);
    for (std::size_t t = 0; t < T; ++t) {
        qx[t] = t_quantile(u[t], ev.n);
        qy[t] = t_quantile(v[t], ev.n);
        lfx[t] = t_logpdf(qx[t], ev.n);
        lfy[t] = t_logpdf(qy[t], ev.n);
        q[t] = qx[t] * qy[t];
    }
    const std::vector<double> rho = detail::rho_recursion(ev.nu0, ev.nu1, ev.nu2, ev.rho_init, q);
    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t)
        ll += detail::copula_logpdf_q(qx[t], qy[t], lfx[t], lfy[t], rho[t], ev.n);
    return ll;
}

struct DynamicFit {
    EvolutionParams params;
    double loglik = 0.0;
    std::array<double, 3> std_errors{0.0, 0.0, 0.0};
};

/// Second-stage MLE of (nu0, nu1, nu2) with n held fixed and rho_0 given.
inline DynamicFit fit_dynamic(const std::vector<double>& u, const std::vector<double>& v, double n,
                              double rho_init, const FitOptions& opts = {}) {
    check_pseudo_obs(u, v, 50);
    const std::size_t T = u.size();
    std::vector<double> qx(T), qy(T), lfx(T), lfy(T), q(T);
    for (std::size_t t = 0; t < T; ++t) {
        qx[t] = t_quantile(u[t], n);
        qy[t] = t_quantile(v[t], n);
        lfx[t] = t_logpdf(qx[t], n);
        lfy[t] = t_logpdf(qy[t], n);
        q[t] = qx[t] * qy[t];
    }
    auto nll = [&](const std::vector<double>& z) -> double {
        if (!std::isfinite(z[0]) || !std::isfinite(z[1]) || !std::isfinite(z[2])) return 1e30;
        const std::vector<double> rho = detail::rho_recursion(z[0], z[1], z[2], rho_init, q);
        double ll = 0.0;
        for (std::size_t t = 0; t < T; ++t)
            ll += detail::copula_logpdf_q(qx[t], qy[t], lfx[t], lfy[t], rho[t], n);
        return -ll;
    };

    const double anchor = 2.0 * std::atanh(std::clamp(rho_init, -0.999, 0.999));
    const double qbar = mean_of(q);
    MinimizeResult best;
    best.fval = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    Rng rng(opts.seed);
    std::vector<std::vector<double>> starts;
    for (const double b : {0.05, 0.5, 0.9})
        for (const double c : {0.0, 0.1})
            starts.push_back({anchor - b * rho_init - c * qbar, b, c});
    while (static_cast<int>(starts.size()) < std::max(1, opts.multistarts))
        starts.push_back({anchor * (1.0 + 0.2 * rng.normal()), 0.5 + 0.2 * rng.normal(),
                          0.1 * rng.normal()});
    for (const auto& z0 : starts) {
        MinimizeResult r = minimize_bfgs(nll, z0);
        any_converged = any_converged || r.converged;
        if (r.fval < best.fval) best = r;
    }
    if (!any_converged)
        throw std::runtime_error("fit_dynamic: no start converged; best loglik " +
                                 std::to_string(-best.fval));
    DynamicFit fit;
    fit.params = EvolutionParams{best.x[0], best.x[1], best.x[2], n, rho_init};
    fit.loglik = -best.fval;
    try {
        const auto hess = numerical_hessian(nll, best.x, 1e-4);
        for (std::size_t j = 0; j < 3; ++j) {
            std::vector<double> e(3, 0.0);
            e[j] = 1.0;
            const auto col = solve_symmetric(hess, e);
            fit.std_errors[j] = col[j] > 0.0 ? std::sqrt(col[j]) : std::numeric_limits<double>::quiet_NaN();
        }
    } catch (const std::exception&) {
        fit.std_errors = {std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN()};
    }
    return fit;
}

} // namespace pelcov
