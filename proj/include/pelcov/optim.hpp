// Dense quasi-Newton minimizer used by all likelihood fits. BFGS with
// central-difference gradients and Armijo backtracking; dimensions here
// are small (<= 14), so the O(d^2) update is irrelevant.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pelcov {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
    std::vector<double> x;
    double fval = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

struct MinimizeOptions {
    int max_iterations = 400;
    double grad_tol = 1e-7;   // scaled by max(1, |f|)
    double step_tol = 1e-12;
    double fd_step = 1e-6;    // relative central-difference step
};

inline std::vector<double> numerical_gradient(const ObjectiveFn& f, const std::vector<double>& x,
                                              double rel_step = 1e-6) {
    const std::size_t d = x.size();
    std::vector<double> g(d), xp = x;
    for (std::size_t i = 0; i < d; ++i) {
        const double h = rel_step * std::max(1.0, std::fabs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Central-difference Hessian (symmetric), step relative to |x_i|.
inline std::vector<std::vector<double>> numerical_hessian(const ObjectiveFn& f,
                                                          const std::vector<double>& x,
                                                          double rel_step = 1e-4) {
    const std::size_t d = x.size();
    std::vector<double> h(d);
    for (std::size_t i = 0; i < d; ++i) h[i] = rel_step * std::max(1.0, std::fabs(x[i]));
    std::vector<std::vector<double>> hess(d, std::vector<double>(d, 0.0));
    const double f0 = f(x);
    std::vector<double> xp = x;
    for (std::size_t i = 0; i < d; ++i) {
        xp[i] = x[i] + h[i];
        const double fp = f(xp);
        xp[i] = x[i] - h[i];
        const double fm = f(xp);
        xp[i] = x[i];
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            xp[i] = x[i] + h[i]; xp[j] = x[j] + h[j];
            const double fpp = f(xp);
            xp[j] = x[j] - h[j];
            const double fpm = f(xp);
            xp[i] = x[i] - h[i]; xp[j] = x[j] + h[j];
            const double fmp = f(xp);
            xp[j] = x[j] - h[j];
            const double fmm = f(xp);
            xp[i] = x[i]; xp[j] = x[j];
            hess[i][j] = hess[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
        }
    }
    return hess;
}

/// Solve A x = b for a small symmetric matrix by Gaussian elimination with
/// partial pivoting; adds a progressively larger ridge if A is singular.
inline std::vector<double> solve_symmetric(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t d = b.size();
    double ridge = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<std::vector<double>> m = a;
        std::vector<double> r = b;
        if (ridge > 0.0)
            for (std::size_t i = 0; i < d; ++i) m[i][i] += ridge;
        bool ok = true;
        for (std::size_t k = 0; k < d && ok; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < d; ++i)
                if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
            if (std::fabs(m[piv][k]) < 1e-300) { ok = false; break; }
            std::swap(m[piv], m[k]);
            std::swap(r[piv], r[k]);
            for (std::size_t i = k + 1; i < d; ++i) {
                const double fac = m[i][k] / m[k][k];
                for (std::size_t j = k; j < d; ++j) m[i][j] -= fac * m[k][j];
                r[i] -= fac * r[k];
            }
        }
        if (ok) {
            std::vector<double> x(d);
            for (std::size_t k = d; k-- > 0;) {
                double s = r[k];
                for (std::size_t j = k + 1; j < d; ++j) s -= m[k][j] * x[j];
                x[k] = s / m[k][k];
            }
            bool finite = true;
            for (double v : x) finite = finite && std::isfinite(v);
            if (finite) return x;
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < d; ++i) scale = std::max(scale, std::fabs(a[i][i]));
        ridge = ridge == 0.0 ? 1e-8 * std::max(1.0, scale) : ridge * 100.0;
    }
    throw std::runtime_error("solve_symmetric: matrix numerically singular");
}

inline MinimizeResult minimize_bfgs(const ObjectiveFn& f, std::vector<double> x0,
                                    const MinimizeOptions& opt = {}) {
    const std::size_t d = x0.size();
    MinimizeResult res;
    int evals = 0;
    auto feval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : 1e30;
    };
    std::vector<double> x = std::move(x0);
    double fx = feval(x);
    std::vector<double> g = numerical_gradient([&](const std::vector<double>& z) { return feval(z); }, x,
                                               opt.fd_step);
    // inverse Hessian approximation, started at the identity
    std::vector<std::vector<double>> hinv(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) hinv[i][i] = 1.0;

    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        double gmax = 0.0;
        for (double gi : g) gmax = std::max(gmax, std::fabs(gi));
        if (gmax <= opt.grad_tol * std::max(1.0, std::fabs(fx))) {
            res.converged = true;
            break;
        }
        std::vector<double> p(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) p[i] -= hinv[i][j] * g[j];
        double slope = 0.0;
        for (std::size_t i = 0; i < d; ++i) slope += p[i] * g[i];
        if (!(slope < 0.0)) {
            // reset to steepest descent if the model lost positive definiteness
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) hinv[i][j] = (i == j) ? 1.0 : 0.0;
                p[i] = -g[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < d; ++i) slope += p[i] * g[i];
            if (!(slope < 0.0)) break;
        }
        // Armijo backtracking
        double step = 1.0;
        std::vector<double> xn(d);
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (std::size_t i = 0; i < d; ++i) xn[i] = x[i] + step * p[i];
            fn = feval(xn);
            if (fn <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        double stepnorm = 0.0;
        for (std::size_t i = 0; i < d; ++i) stepnorm = std::max(stepnorm, std::fabs(step * p[i]));
        const std::vector<double> gn =
            numerical_gradient([&](const std::vector<double>& z) { return feval(z); }, xn, opt.fd_step);
        std::vector<double> s(d), y(d);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = gn[i] - g[i];
        }
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            sy += s[i] * y[i];
            ss += s[i] * s[i];
            yy += y[i] * y[i];
        }
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            // BFGS inverse update
            const double rho = 1.0 / sy;
            std::vector<double> hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) hy[i] += hinv[i][j] * y[j];
            double yhy = 0.0;
            for (std::size_t i = 0; i < d; ++i) yhy += y[i] * hy[i];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    hinv[i][j] += rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j] -
                                  rho * (s[i] * hy[j] + hy[i] * s[j]);
        }
        x = xn;
        fx = fn;
        g = gn;
        if (stepnorm < opt.step_tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.x = std::move(x);
    res.fval = fx;
    res.iterations = it;
    res.evaluations = evals;
    return res;
}

} // namespace pelcov
