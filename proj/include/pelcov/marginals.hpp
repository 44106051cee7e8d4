// Marginal conditional models for the two return series: AR(1)+GARCH(1,1)
// with standardized t innovations, and MA(1)+GARCH(1,1) with standardized
// skew-t innovations. Exact conditional maximum likelihood with a
// deterministic multistart protocol, probability integral transforms, and
// the residual diagnostics reported alongside the fits.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pelcov/optim.hpp"
#include "pelcov/rng.hpp"
#include "pelcov/special.hpp"
#include "pelcov/student_t.hpp"

namespace pelcov {

// --------------------------------------------------------------------------
// Small sample statistics used across the pipeline.

inline double mean_of(const std::vector<double>& x) {
    if (x.empty()) throw std::domain_error("mean_of: empty series");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance_of(const std::vector<double>& x) {
    if (x.size() < 2) throw std::domain_error("variance_of: need at least 2 points");
    const double m = mean_of(x);
    double s = 0.0;
    for (double xi : x) s += (xi - m) * (xi - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::domain_error("pearson_correlation: series must have equal length >= 2");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

// merge sort inversion count, for Kendall's tau in O(N log N)
inline std::size_t count_inversions(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                                    std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::size_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[i] <= v[j]) buf[k++] = v[i++];
        else {
            inv += mid - i;
            buf[k++] = v[j++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    return inv;
}

} // namespace detail

inline double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (y.size() != n || n < 2) throw std::domain_error("kendall_tau: series must have equal length >= 2");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });
    std::vector<double> v(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[idx[i]];
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double inv = static_cast<double>(detail::count_inversions(v, buf, 0, n));
    return (pairs - 2.0 * inv) / pairs;
}

// --------------------------------------------------------------------------
// Return series and descriptive statistics.

struct ReturnSeries {
    std::vector<std::string> dates; // ISO yyyy-mm-dd, strictly increasing
    std::vector<double> values;     // negative log returns

    void validate() const {
        if (dates.size() != values.size()) throw std::domain_error("ReturnSeries: dates/values mismatch");
        for (std::size_t i = 1; i < dates.size(); ++i)
            if (!(dates[i - 1] < dates[i]))
                throw std::domain_error("ReturnSeries: dates must be strictly increasing at row " +
                                        std::to_string(i));
        for (double v : values)
            if (!std::isfinite(v)) throw std::domain_error("ReturnSeries: non-finite value");
    }
};

struct PriceSeries {
    std::vector<std::string> dates;
    std::vector<double> values;
};

/// r_t = log(p_{t-1} / p_t), dated at t.
inline ReturnSeries neg_log_returns(const PriceSeries& prices) {
    if (prices.values.size() < 2) throw std::domain_error("neg_log_returns: need at least 2 prices");
    ReturnSeries out;
    out.dates.reserve(prices.values.size() - 1);
    out.values.reserve(prices.values.size() - 1);
    for (std::size_t t = 1; t < prices.values.size(); ++t) {
        if (!(prices.values[t - 1] > 0.0) || !(prices.values[t] > 0.0))
            throw std::domain_error("neg_log_returns: nonpositive price at row " + std::to_string(t));
        out.dates.push_back(prices.dates.empty() ? std::to_string(t) : prices.dates[t]);
        out.values.push_back(std::log(prices.values[t - 1] / prices.values[t]));
    }
    out.validate();
    return out;
}

struct DescriptiveStats {
    double mean;
    double std_dev; // sample (n-1) convention
    double min;
    double max;
    double skewness;        // m3 / m2^{3/2}
    double excess_kurtosis; // m4 / m2^2 - 3
};

inline DescriptiveStats descriptive_stats(const std::vector<double>& x) {
    if (x.size() < 4) throw std::domain_error("descriptive_stats: need at least 4 observations");
    const double n = static_cast<double>(x.size());
    const double m = mean_of(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double xi : x) {
        const double d = xi - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw std::domain_error("descriptive_stats: degenerate (constant) series");
    DescriptiveStats s;
    s.mean = m;
    s.std_dev = std::sqrt(m2 * n / (n - 1.0));
    s.min = *std::min_element(x.begin(), x.end());
    s.max = *std::max_element(x.begin(), x.end());
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return s;
}

// --------------------------------------------------------------------------
// Model parameter sets and the deterministic filters.

struct ArGarchParams {
    double phi1;
    double omega;
    double alpha;
    double beta;
    double m; // innovation degrees of freedom (> 2, unit-variance scaling)

    void validate() const {
        if (!(std::fabs(phi1) < 1.0)) throw std::domain_error("ArGarchParams: |phi1| < 1 required");
        if (!(omega > 0.0)) throw std::domain_error("ArGarchParams: omega > 0 required");
        if (!(alpha >= 0.0 && beta >= 0.0)) throw std::domain_error("ArGarchParams: alpha, beta >= 0");
        if (!(alpha + beta < 1.0)) throw std::domain_error("ArGarchParams: alpha + beta < 1 required");
        if (!(m > 2.0)) throw std::domain_error("ArGarchParams: m > 2 required");
    }
};

struct MaGarchSkewParams {
    double theta1;
    double omega;
    double alpha;
    double beta;
    SkewTParams skew;

    void validate() const {
        if (!(std::fabs(theta1) < 1.0)) throw std::domain_error("MaGarchSkewParams: |theta1| < 1 required");
        if (!(omega > 0.0)) throw std::domain_error("MaGarchSkewParams: omega > 0 required");
        if (!(alpha >= 0.0 && beta >= 0.0)) throw std::domain_error("MaGarchSkewParams: alpha, beta >= 0");
        if (!(alpha + beta < 1.0)) throw std::domain_error("MaGarchSkewParams: alpha + beta < 1 required");
        skew.validate(true);
    }
};

struct FilteredState {
    std::vector<double> cond_mean;
    std::vector<double> cond_sigma;
    std::vector<double> std_residuals;
    double loglik = 0.0;
    double aic = 0.0;
    std::vector<double> std_errors; // filled by the fitters
};

// Pre-sample convention: sigma^2_0 = sample variance, eps_0 = eta_0 = 0,
// and a zero pre-sample level for the AR mean recursion.
inline FilteredState filter_ar_garch(const ArGarchParams& p, const std::vector<double>& x) {
    p.validate();
    const std::size_t T = x.size();
    if (T < 2) throw std::domain_error("filter_ar_garch: series too short");
    FilteredState st;
    st.cond_mean.resize(T);
    st.cond_sigma.resize(T);
    st.std_residuals.resize(T);
    double sigma2 = variance_of(x);
    double eps_prev = 0.0;
    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        sigma2 = p.omega + p.alpha * eps_prev * eps_prev + p.beta * sigma2;
        const double mu = p.phi1 * (t == 0 ? 0.0 : x[t - 1]);
        const double sigma = std::sqrt(sigma2);
        const double eps = x[t] - mu;
        const double z = eps / sigma;
        st.cond_mean[t] = mu;
        st.cond_sigma[t] = sigma;
        st.std_residuals[t] = z;
        ll += std_t_logpdf(z, p.m) - std::log(sigma);
        eps_prev = eps;
    }
    st.loglik = ll;
    st.aic = 2.0 * 5.0 - 2.0 * ll;
    return st;
}

inline FilteredState filter_ma_garch_skew(const MaGarchSkewParams& p, const std::vector<double>& y) {
    p.validate();
    const std::size_t T = y.size();
    if (T < 2) throw std::domain_error("filter_ma_garch_skew: series too short");
    FilteredState st;
    st.cond_mean.resize(T);
    st.cond_sigma.resize(T);
    st.std_residuals.resize(T);
    double sigma2 = variance_of(y);
    double eta_prev = 0.0;
    double ll = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        sigma2 = p.omega + p.alpha * eta_prev * eta_prev + p.beta * sigma2;
        const double mu = p.theta1 * eta_prev;
        const double sigma = std::sqrt(sigma2);
        const double eta = y[t] - mu;
        const double z = eta / sigma;
        st.cond_mean[t] = mu;
        st.cond_sigma[t] = sigma;
        st.std_residuals[t] = z;
        ll += skew_t_logpdf(z, p.skew, true) - std::log(sigma);
        eta_prev = eta;
    }
    st.loglik = ll;
    st.aic = 2.0 * 6.0 - 2.0 * ll;
    return st;
}

// --------------------------------------------------------------------------
// Maximum likelihood fitting.

struct FitOptions {
    std::optional<double> fix_df; // hold the innovation df fixed
    int multistarts = 8;
    std::uint64_t seed = 712094u; // start-jitter stream; fixed for reproducibility
};

struct ArGarchFit {
    ArGarchParams params;
    FilteredState state;
};

struct MaGarchSkewFit {
    MaGarchSkewParams params;
    FilteredState state;
};

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// (alpha, beta) <-> (s = alpha + beta in (0,1), a = alpha / s in (0,1))
struct GarchBox {
    static void to_params(double zs, double za, double& alpha, double& beta) {
        const double s = logistic(zs);
        const double a = logistic(za);
        alpha = s * a;
        beta = s * (1.0 - a);
    }
    static void from_params(double alpha, double beta, double& zs, double& za) {
        const double s = std::min(std::max(alpha + beta, 1e-6), 1.0 - 1e-6);
        const double a = std::min(std::max(alpha / s, 1e-6), 1.0 - 1e-6);
        zs = logit(s);
        za = logit(a);
    }
};

template <typename ParamsFromZ, typename Filter>
MinimizeResult fit_with_multistart(const std::vector<double>& base_z, const ParamsFromZ& from_z,
                                   const Filter& filt, const FitOptions& opts, double jitter) {
    auto nll = [&](const std::vector<double>& z) -> double {
        try {
            return -filt(from_z(z)).loglik;
        } catch (const std::exception&) {
            return 1e30;
        }
    };
    Rng rng(opts.seed);
    MinimizeResult best;
    best.fval = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    for (int s = 0; s < std::max(1, opts.multistarts); ++s) {
        std::vector<double> z0 = base_z;
        if (s > 0)
            for (double& zi : z0) zi += jitter * rng.normal();
        MinimizeResult r = minimize_bfgs(nll, z0);
        any_converged = any_converged || r.converged;
        if (r.fval < best.fval) best = r;
    }
    if (!any_converged) {
        throw std::runtime_error("fit: no multistart converged; best objective " +
                                 std::to_string(best.fval) + " after " +
                                 std::to_string(best.iterations) + " iterations");
    }
    return best;
}

// delta-method standard errors: cov_theta = J H^{-1} J^T with H the Hessian
// of the negative log-likelihood in transformed space
inline std::vector<double> delta_method_se(const ObjectiveFn& nll_z,
                                           const std::function<std::vector<double>(const std::vector<double>&)>& theta_of_z,
                                           const std::vector<double>& zhat) {
    const std::size_t dz = zhat.size();
    const std::vector<double> theta0 = theta_of_z(zhat);
    const std::size_t dt = theta0.size();
    const auto hess = numerical_hessian(nll_z, zhat, 1e-4);
    // columns of H^{-1}
    std::vector<std::vector<double>> hinv_cols(dz);
    for (std::size_t j = 0; j < dz; ++j) {
        std::vector<double> e(dz, 0.0);
        e[j] = 1.0;
        hinv_cols[j] = solve_symmetric(hess, e);
    }
    // Jacobian d theta / d z
    std::vector<std::vector<double>> jac(dt, std::vector<double>(dz));
    std::vector<double> zp = zhat;
    for (std::size_t j = 0; j < dz; ++j) {
        const double h = 1e-6 * std::max(1.0, std::fabs(zhat[j]));
        zp[j] = zhat[j] + h;
        const auto tp = theta_of_z(zp);
        zp[j] = zhat[j] - h;
        const auto tm = theta_of_z(zp);
        zp[j] = zhat[j];
        for (std::size_t i = 0; i < dt; ++i) jac[i][j] = (tp[i] - tm[i]) / (2.0 * h);
    }
    std::vector<double> se(dt, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < dt; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < dz; ++j)
            for (std::size_t k = 0; k < dz; ++k) v += jac[i][j] * hinv_cols[k][j] * jac[i][k];
        if (v > 0.0 && std::isfinite(v)) se[i] = std::sqrt(v);
    }
    return se;
}

} // namespace detail

inline ArGarchFit fit_ar_garch(const ReturnSeries& r, const FitOptions& opts = {}) {
    r.validate();
    const std::vector<double>& x = r.values;
    if (x.size() < 50) throw std::domain_error("fit_ar_garch: need at least 50 observations");
    const bool fix_m = opts.fix_df.has_value();
    if (fix_m && !(*opts.fix_df > 2.0)) throw std::domain_error("fit_ar_garch: fixed df must be > 2");

    auto from_z = [&](const std::vector<double>& z) {
        ArGarchParams p;
        p.phi1 = std::tanh(z[0]);
        p.omega = std::exp(z[1]);
        detail::GarchBox::to_params(z[2], z[3], p.alpha, p.beta);
        p.m = fix_m ? *opts.fix_df : 2.0 + std::exp(z[4]);
        return p;
    };
    auto filt = [&](const ArGarchParams& p) { return filter_ar_garch(p, x); };

    // method-of-moments start
    double acf1 = 0.0;
    {
        const double mu = mean_of(x);
        double num = 0.0, den = 0.0;
        for (std::size_t t = 1; t < x.size(); ++t) num += (x[t] - mu) * (x[t - 1] - mu);
        for (double xi : x) den += (xi - mu) * (xi - mu);
        acf1 = den > 0.0 ? num / den : 0.0;
    }
    const double phi0 = std::clamp(acf1, -0.9, 0.9);
    const double v0 = variance_of(x);
    std::vector<double> z0 = {std::atanh(phi0), std::log(v0 * 0.1), 0.0, 0.0, 0.0};
    detail::GarchBox::from_params(0.10, 0.80, z0[2], z0[3]);
    z0[4] = std::log(8.0 - 2.0);
    if (fix_m) z0.resize(4);

    const MinimizeResult best = detail::fit_with_multistart(z0, from_z, filt, opts, 0.5);
    ArGarchFit fit;
    fit.params = from_z(best.x);
    fit.state = filter_ar_garch(fit.params, x);
    if (fix_m) fit.state.aic = 2.0 * 4.0 - 2.0 * fit.state.loglik;
    auto nll = [&](const std::vector<double>& z) -> double {
        try {
            return -filt(from_z(z)).loglik;
        } catch (const std::exception&) {
            return 1e30;
        }
    };
    auto theta_of_z = [&](const std::vector<double>& z) {
        const ArGarchParams p = from_z(z);
        std::vector<double> th = {p.phi1, p.omega, p.alpha, p.beta};
        if (!fix_m) th.push_back(p.m);
        return th;
    };
    fit.state.std_errors = detail::delta_method_se(nll, theta_of_z, best.x);
    return fit;
}

inline MaGarchSkewFit fit_ma_garch_skew(const ReturnSeries& r, const FitOptions& opts = {}) {
    r.validate();
    const std::vector<double>& y = r.values;
    if (y.size() < 50) throw std::domain_error("fit_ma_garch_skew: need at least 50 observations");
    const bool fix_m = opts.fix_df.has_value();
    if (fix_m && !(*opts.fix_df > 2.0)) throw std::domain_error("fit_ma_garch_skew: fixed df must be > 2");

    auto from_z = [&](const std::vector<double>& z) {
        MaGarchSkewParams p;
        p.theta1 = std::tanh(z[0]);
        p.omega = std::exp(z[1]);
        detail::GarchBox::to_params(z[2], z[3], p.alpha, p.beta);
        p.skew.m = fix_m ? *opts.fix_df : 2.0 + std::exp(z[4]);
        p.skew.xi = std::exp(z[fix_m ? 4 : 5]);
        return p;
    };
    auto filt = [&](const MaGarchSkewParams& p) { return filter_ma_garch_skew(p, y); };

    double acf1 = 0.0;
    {
        const double mu = mean_of(y);
        double num = 0.0, den = 0.0;
        for (std::size_t t = 1; t < y.size(); ++t) num += (y[t] - mu) * (y[t - 1] - mu);
        for (double yi : y) den += (yi - mu) * (yi - mu);
        acf1 = den > 0.0 ? num / den : 0.0;
    }
    const double v0 = variance_of(y);
    std::vector<double> z0(fix_m ? 5 : 6, 0.0);
    z0[0] = std::atanh(std::clamp(acf1, -0.9, 0.9));
    z0[1] = std::log(v0 * 0.1);
    detail::GarchBox::from_params(0.10, 0.80, z0[2], z0[3]);
    if (!fix_m) z0[4] = std::log(8.0 - 2.0);
    z0[fix_m ? 4 : 5] = 0.0; // xi = 1

    const MinimizeResult best = detail::fit_with_multistart(z0, from_z, filt, opts, 0.5);
    MaGarchSkewFit fit;
    fit.params = from_z(best.x);
    fit.state = filter_ma_garch_skew(fit.params, y);
    if (fix_m) fit.state.aic = 2.0 * 5.0 - 2.0 * fit.state.loglik;
    auto nll = [&](const std::vector<double>& z) -> double {
        try {
            return -filt(from_z(z)).loglik;
        } catch (const std::exception&) {
            return 1e30;
        }
    };
    auto theta_of_z = [&](const std::vector<double>& z) {
        const MaGarchSkewParams p = from_z(z);
        std::vector<double> th = {p.theta1, p.omega, p.alpha, p.beta};
        if (!fix_m) th.push_back(p.skew.m);
        th.push_back(p.skew.xi);
        return th;
    };
    fit.state.std_errors = detail::delta_method_se(nll, theta_of_z, best.x);
    return fit;
}

/// Probability integral transform of the standardized residuals through the
/// fitted innovation CDF; values are pinned strictly inside (0,1).
template <typename CdfFn>
inline std::vector<double> pit(const FilteredState& state, const CdfFn& innovation_cdf) {
    std::vector<double> u;
    u.reserve(state.std_residuals.size());
    for (double z : state.std_residuals) {
        double p = innovation_cdf(z);
        p = std::min(std::max(p, 1e-12), 1.0 - 1e-12);
        u.push_back(p);
    }
    return u;
}

// --------------------------------------------------------------------------
// Diagnostics.

/// Ljung-Box portmanteau p-value for the first `lags` autocorrelations.
inline double ljung_box(const std::vector<double>& x, int lags) {
    const std::size_t T = x.size();
    if (lags < 1 || T <= static_cast<std::size_t>(lags))
        throw std::domain_error("ljung_box: need length > lags >= 1");
    const double mu = mean_of(x);
    double den = 0.0;
    for (double xi : x) den += (xi - mu) * (xi - mu);
    double q = 0.0;
    for (int k = 1; k <= lags; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < T; ++t) num += (x[t] - mu) * (x[t - k] - mu);
        const double rk = num / den;
        q += rk * rk / static_cast<double>(T - k);
    }
    q *= static_cast<double>(T) * (static_cast<double>(T) + 2.0);
    return 1.0 - chi2_cdf(q, lags);
}

/// Jarque-Bera normality p-value.
inline double jarque_bera(const std::vector<double>& x) {
    if (x.size() < 8) throw std::domain_error("jarque_bera: need at least 8 observations");
    const DescriptiveStats s = descriptive_stats(x);
    const double T = static_cast<double>(x.size());
    const double jb = T / 6.0 * (s.skewness * s.skewness + 0.25 * s.excess_kurtosis * s.excess_kurtosis);
    return 1.0 - chi2_cdf(jb, 2.0);
}

/// One-sample Kolmogorov-Smirnov against Uniform(0,1), asymptotic p-value.
inline double ks_uniform_pvalue(std::vector<double> u) {
    const std::size_t n = u.size();
    if (n < 5) throw std::domain_error("ks_uniform_pvalue: need at least 5 observations");
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double fim = static_cast<double>(i) / static_cast<double>(n);
        d = std::max(d, std::max(std::fabs(fi - u[i]), std::fabs(u[i] - fim)));
    }
    const double sn = std::sqrt(static_cast<double>(n));
    return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

} // namespace pelcov
