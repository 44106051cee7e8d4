// Independent validation layer: t-copula sampling, windowed empirical
// conditional CDFs, and brute-force grid root scans. Nothing here reuses
// the closed-form solver it is meant to check.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pelcov/copula.hpp"
#include "pelcov/rng.hpp"

namespace pelcov {

struct SampleBatch {
    std::vector<std::pair<double, double>> pairs;
    std::uint64_t seed = 0;
    CopulaParams params{0.0, 2.0};
};

/// Draw (U, V) pairs from the t copula: a correlated Gaussian pair divided
/// by sqrt(chi2_n / n), each coordinate then mapped through the t CDF.
inline SampleBatch sample_t_copula(const CopulaParams& p, std::size_t size, std::uint64_t seed) {
    p.validate();
    if (size < 1) throw std::domain_error("sample_t_copula: size must be >= 1");
    SampleBatch batch;
    batch.seed = seed;
    batch.params = p;
    batch.pairs.reserve(size);
    Rng rng(seed);
    const double cross = std::sqrt(1.0 - p.rho * p.rho);
    for (std::size_t i = 0; i < size; ++i) {
        const double z1 = rng.normal();
        const double z2 = p.rho * z1 + cross * rng.normal();
        const double w = std::sqrt(rng.chi_square(p.n) / p.n);
        batch.pairs.emplace_back(t_cdf(z1 / w, p.n), t_cdf(z2 / w, p.n));
    }
    return batch;
}

struct HEstimate {
    double value;
    double std_error;
    std::size_t count;
};

/// Windowed estimate of P(V <= v | U = u): the fraction of V <= v among
/// pairs with |U - u| <= window, with its binomial standard error.
inline HEstimate empirical_h(const SampleBatch& batch, double u, double v, double window = 0.005) {
    if (!(window > 0.0)) throw std::domain_error("empirical_h: window must be positive");
    std::size_t count = 0, hits = 0;
    for (const auto& [us, vs] : batch.pairs) {
        if (std::fabs(us - u) <= window) {
            ++count;
            if (vs <= v) ++hits;
        }
    }
    if (count < 200)
        throw std::runtime_error("empirical_h: fewer than 200 points in the conditioning window");
    const double phat = static_cast<double>(hits) / static_cast<double>(count);
    return {phat, std::sqrt(phat * (1.0 - phat) / static_cast<double>(count)), count};
}

/// Brute-force roots of h(u) = v by sign-change scan over an equispaced
/// grid, refined by bisection. The boundary limits L0/L1 stand in for the
/// (open-interval) endpoint values, so roots between the first grid point
/// and the boundary are still bracketed. Precomputing the quantile grid
/// once per (n, grid_size) makes repeated scans over v and rho cheap.
class GridRootScanner {
  public:
    GridRootScanner(double n, std::size_t grid_size) : n_(n), grid_(grid_size) {
        if (grid_size < 10000) throw std::domain_error("GridRootScanner: grid_size must be >= 10^4");
        quantiles_.resize(grid_size - 1);
        for (std::size_t k = 1; k < grid_size; ++k)
            quantiles_[k - 1] = t_quantile(static_cast<double>(k) / static_cast<double>(grid_size), n);
    }

    std::vector<double> roots(double v, double rho, double refine_tol = 1e-10) const {
        const CopulaParams p{rho, n_};
        p.validate();
        const double step = 1.0 / static_cast<double>(grid_);
        const HLimits lim = limits(p);
        std::vector<double> found;
        double prev_u = 0.0;
        double prev_f = lim.L0 - v; // boundary limit as the u -> 0 value
        for (std::size_t k = 1; k <= grid_; ++k) {
            const double u = k == grid_ ? 1.0 : static_cast<double>(k) * step;
            const double f = k == grid_ ? lim.L1 - v : detail::hfunc_x(quantiles_[k - 1], v, p) - v;
            if (f == 0.0 && k < grid_) {
                found.push_back(u);
            } else if (prev_f * f < 0.0) {
                double lo = prev_u, hi = u;
                while (hi - lo > refine_tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = hfunc(mid, v, p) - v;
                    if ((fm > 0.0) == (prev_f > 0.0)) lo = mid; else hi = mid;
                }
                found.push_back(0.5 * (lo + hi));
            }
            prev_u = u;
            prev_f = f;
        }
        return found;
    }

  private:
    double n_;
    std::size_t grid_;
    std::vector<double> quantiles_;
};

inline std::vector<double> grid_roots(double v, const CopulaParams& p, std::size_t grid_size) {
    return GridRootScanner(p.n, grid_size).roots(v, p.rho);
}

} // namespace pelcov
