// Probability-equivalent levels of CoVaR and VaR for the bivariate
// Student-t copula: the set A(v) of solutions of h(u) = v in closed form,
// existence/uniqueness classification, and the region where CoVaR sits
// below VaR.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pelcov/copula.hpp"

namespace pelcov {

struct PelcovQuery {
    double v;
    CopulaParams params;

    void validate() const {
        params.validate();
        if (!(v > 0.0 && v < 1.0)) throw std::domain_error("PelcovQuery: v must be in (0,1)");
        if (!(params.rho > 0.0))
            throw std::domain_error(
                "PelcovQuery: rho must be strictly positive (the existence and uniqueness "
                "results assume positive dependence)");
    }
};

struct PelcovSolution {
    std::vector<double> roots;                   // ascending; 1 or 2 elements
    double v_star = 0.0;                         // h(v_star) = 1/2
    std::optional<double> u_star;                // critical point of h, absent at v = 1/2
    double L0 = 0.0;                             // boundary limit gating the second root
    bool second_root_predicate = false;          // v > L0 (v > 1/2) resp. v < L1 (v < 1/2)
    std::pair<double, double> covar_below_var_region{0.0, 0.0};
};

/// The level v* = t_n(t_n^{-1}(v) / rho); h(v*) = 1/2.
inline double v_star(const PelcovQuery& q) {
    q.validate();
    if (q.v == 0.5) return 0.5;
    return t_cdf(t_quantile(q.v, q.params.n) / q.params.rho, q.params.n);
}

namespace detail {

// Bisection for h_x(x) = v on a bracket in quantile space where the sign
// change is guaranteed by the shape results for the h-function.
inline double bisect_root_x(double xlo, double xhi, double v, const CopulaParams& p) {
    double flo = hfunc_x(xlo, v, p) - v;
    for (int it = 0; it < 200; ++it) {
        const double xm = 0.5 * (xlo + xhi);
        const double fm = hfunc_x(xm, v, p) - v;
        if (fm == 0.0) return xm;
        if ((fm > 0.0) == (flo > 0.0)) {
            xlo = xm;
            flo = fm;
        } else {
            xhi = xm;
        }
        if (std::fabs(xhi - xlo) <= 1e-14 * std::max(1.0, std::fabs(xlo))) break;
    }
    return 0.5 * (xlo + xhi);
}

} // namespace detail

/// All candidate levels solving h(u) = v, via the closed-form quadratic in
/// t_n^{-1}(u). The squaring step behind the quadratic also yields the
/// mirror solutions of h(u) = 1 - v, so every candidate is verified by
/// substitution before being accepted. Falls back to bracketed bisection
/// when the quadratic degenerates.
inline PelcovSolution solve(const PelcovQuery& q) {
    q.validate();
    const double v = q.v;
    const CopulaParams& p = q.params;
    const double rho = p.rho, n = p.n;

    PelcovSolution sol;
    sol.L0 = limits(p).L0;
    sol.u_star = u_star(v, p);
    sol.v_star = v_star(q);
    sol.second_root_predicate = v > 0.5 ? (v > sol.L0) : (v < 0.5 ? (v < 1.0 - sol.L0) : false);

    if (v == 0.5) {
        sol.roots = {0.5};
        sol.covar_below_var_region = {0.0, 0.5};
        return sol;
    }

    const double b = t_quantile(v, n);
    const double c = t_quantile(v, n + 1.0);
    const double r2 = 1.0 - rho * rho;
    const double denom = rho * rho * (n + 1.0) - c * c * r2;
    const double scale = std::max(rho * rho * (n + 1.0), c * c * r2);

    const double accept_tol = 1e-8;
    std::vector<double> roots_x;
    bool need_fallback = std::fabs(denom) <= 1e-12 * scale;
    if (!need_fallback) {
        const double k = b * b * rho * rho * (n + 1.0) * (n + 1.0) -
                         denom * (b * b * (n + 1.0) - n * c * c * r2);
        if (k < 0.0) {
            need_fallback = true;
        } else {
            const double sk = std::sqrt(k);
            for (const double x : {(b * rho * (n + 1.0) + sk) / denom,
                                   (b * rho * (n + 1.0) - sk) / denom}) {
                if (!std::isfinite(x)) continue;
                const double hval = detail::hfunc_x(x, v, p);
                // substitutes into h; rejects the h(u) = 1 - v mirror branch
                if (std::fabs(hval - v) <= accept_tol &&
                    std::fabs(hval - v) < std::fabs(hval - (1.0 - v)))
                    roots_x.push_back(x);
            }
        }
    }

    const int expected = 1 + (sol.second_root_predicate ? 1 : 0);
    if (need_fallback || static_cast<int>(roots_x.size()) != expected) {
        roots_x.clear();
        // principal root: between x = 0 (u = 1/2) and x = b / rho (u = v*)
        roots_x.push_back(v > 0.5 ? detail::bisect_root_x(0.0, b / rho, v, p)
                                  : detail::bisect_root_x(b / rho, 0.0, v, p));
        if (sol.second_root_predicate) {
            const double x_crit = -rho * n / b; // quantile of u*
            if (v > 0.5) {
                double xlo = x_crit - 1.0;
                while (detail::hfunc_x(xlo, v, p) >= v && xlo > -1e150) xlo = xlo * 2.0 - 1.0;
                roots_x.push_back(detail::bisect_root_x(xlo, x_crit, v, p));
            } else {
                double xhi = x_crit + 1.0;
                while (detail::hfunc_x(xhi, v, p) <= v && xhi < 1e150) xhi = xhi * 2.0 + 1.0;
                roots_x.push_back(detail::bisect_root_x(x_crit, xhi, v, p));
            }
        }
    }

    for (const double x : roots_x) {
        const double u = t_cdf(x, n);
        if (u > 0.0 && u < 1.0) sol.roots.push_back(u);
    }
    std::sort(sol.roots.begin(), sol.roots.end());
    sol.roots.erase(std::unique(sol.roots.begin(), sol.roots.end(),
                                [](double a, double bb) { return std::fabs(a - bb) < 1e-12; }),
                    sol.roots.end());

    if (v > 0.5) {
        const double upper = sol.roots.back();
        const double a = sol.roots.size() == 2 ? sol.roots.front() : 0.0;
        sol.covar_below_var_region = {a, upper};
    } else {
        const double lower = sol.roots.front();
        const double bnd = sol.roots.size() == 2 ? sol.roots.back() : 1.0;
        sol.covar_below_var_region = {lower, bnd};
    }
    return sol;
}

/// Copula-scale level w with dC/du (u, w) = v: the conditional level whose
/// Y-quantile is CoVaR_{v,u}. Bisection; h is strictly increasing in its
/// second argument for fixed u.
inline double covar_level(double u, double v, const CopulaParams& p) {
    p.validate();
    if (!(u > 0.0 && u < 1.0) || !(v > 0.0 && v < 1.0))
        throw std::domain_error("covar_level: u, v must be in (0,1)");
    const double x = t_quantile(u, p.n);
    double lo = 1e-15, hi = 1.0 - 1e-15;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double hval = detail::hfunc_x(x, mid, p);
        if (std::fabs(hval - v) <= 1e-13) return mid;
        if (hval < v) lo = mid; else hi = mid;
        if (hi - lo <= 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

enum class Classification { covar_above, equal, covar_below };

/// Order of CoVaR_{v,u}[Y|X] against VaR_v[Y] at level u: CoVaR is above
/// VaR exactly when h(u, v) < v.
inline Classification classify(double u, const PelcovQuery& q, double tol = 1e-8) {
    q.validate();
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("classify: u must be in (0,1)");
    const double hval = hfunc(u, q.v, q.params);
    if (std::fabs(hval - q.v) <= tol) return Classification::equal;
    return hval < q.v ? Classification::covar_above : Classification::covar_below;
}

} // namespace pelcov
