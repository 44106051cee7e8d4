#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pelcov/quadrature.hpp"
#include "pelcov/simulate.hpp"
#include "pelcov/student_t.hpp"

using namespace pelcov;

TEST_CASE("t_cdf basics") {
    for (double n : {1.0, 1.5, 2.0, 9.7595, 30.0}) CHECK(t_cdf(0.0, n) == 0.5);
    // Cauchy closed form: F(x) = 1/2 + atan(x)/pi
    CHECK(t_cdf(1.0, 1.0) == Catch::Approx(0.75).margin(1e-14));
    CHECK(t_cdf(-2.3, 1.0) == Catch::Approx(0.5 + std::atan(-2.3) / kPi).margin(1e-14));
    // antisymmetry
    for (double x : {0.3, 1.7, 4.1})
        for (double n : {1.5, 5.0, 30.0})
            CHECK(t_cdf(-x, n) == Catch::Approx(1.0 - t_cdf(x, n)).margin(1e-15));
    CHECK_THROWS_AS(t_cdf(std::numeric_limits<double>::infinity(), 3.0), std::domain_error);
    CHECK_THROWS_AS(t_cdf(0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(t_cdf(0.3, -2.0), std::domain_error);
}

TEST_CASE("t_cdf against quadrature oracle") {
    // independent oracle: adaptive quadrature of the density over (-inf, 2],
    // with the analytic lower tail below -60 negligible at n = 10
    const double byquad = integrate([](double s) { return t_pdf(s, 10.0); }, -60.0, 2.0, 1e-12);
    CHECK(t_cdf(2.0, 10.0) == Catch::Approx(byquad).margin(1e-10));
    CHECK(t_cdf(2.0, 10.0) == Catch::Approx(0.963305982614629817).margin(1e-12));
}

TEST_CASE("t_quantile basics and oracle") {
    for (double n : {1.0, 2.5, 9.7595}) CHECK(t_quantile(0.5, n) == 0.0);
    CHECK(t_quantile(0.75, 1.0) == Catch::Approx(1.0).margin(1e-12)); // tan(pi/4)
    CHECK_THROWS_AS(t_quantile(0.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(t_quantile(1.0, 3.0), std::domain_error);

    // bracketed bisection oracle at (0.99, n = 9.7595)
    const double n = 9.7595, p = 0.99;
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        if (t_cdf(m, n) < p) lo = m; else hi = m;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(t_quantile(p, n) == Catch::Approx(oracle).margin(1e-10));
    CHECK(t_quantile(p, n) == Catch::Approx(2.77638386064422721).margin(1e-10));

    // antisymmetry about p = 1/2: exact when 1 - p is exactly representable,
    // otherwise limited only by the conditioning of 1 - (1 - p)
    for (double pp : {0.25, 0.375, 0.0625})
        CHECK(t_quantile(pp, 4.2) == -t_quantile(1.0 - pp, 4.2));
    for (double pp : {0.01, 0.2, 0.45})
        CHECK(t_quantile(pp, 4.2) == Catch::Approx(-t_quantile(1.0 - pp, 4.2)).margin(1e-12));
}

TEST_CASE("quantile roundtrip grid") {
    for (double n : {1.5, 2.0, 5.0, 9.7595, 30.0}) {
        for (double p = 0.001; p < 0.9995; p += 0.0147) {
            const double q = t_quantile(p, n);
            CHECK(t_cdf(q, n) == Catch::Approx(p).margin(1e-10));
        }
        // deep tails
        for (double p : {1e-9, 1e-6, 1e-4, 1.0 - 1e-6}) {
            const double q = t_quantile(p, n);
            CHECK(t_cdf(q, n) == Catch::Approx(p).epsilon(1e-9).margin(1e-13));
        }
    }
}

TEST_CASE("quantile ordering across degrees of freedom") {
    // for v < 1/2 the quantile increases with the df; for v >= 1/2 it decreases
    for (double n : {1.5, 2.0, 5.0, 9.7595, 20.0}) {
        for (double v : {0.01, 0.1, 0.3, 0.49})
            CHECK(t_quantile(v, n) <= t_quantile(v, n + 1.0));
        for (double v : {0.5, 0.51, 0.7, 0.9, 0.99})
            CHECK(t_quantile(v, n + 1.0) <= t_quantile(v, n));
    }
    // |t_quantile(0.99, n)| strictly decreasing in n toward the Gaussian
    double prev = t_quantile(0.99, 1.5);
    for (double n : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
        const double q = t_quantile(0.99, n);
        CHECK(q < prev);
        prev = q;
    }
    CHECK(prev > normal_quantile(0.99));
}

TEST_CASE("t_pdf") {
    CHECK(t_pdf(0.0, 1.0) == Catch::Approx(0.318309886183790672).margin(1e-15));
    CHECK(t_pdf(1.7, 5.0) == Catch::Approx(t_pdf(-1.7, 5.0)).margin(1e-16));
    const double mass = integrate([](double x) { return t_pdf(x, 4.0); }, -50.0, 50.0, 1e-10);
    CHECK(mass == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("skew-t density") {
    // xi = 1 recovers the symmetric t
    for (double x : {-1.0, 0.0, 2.0})
        CHECK(skew_t_pdf(x, {10.0, 1.0}) == Catch::Approx(t_pdf(x, 10.0)).margin(1e-14));
    // mirror identity g(-x; xi) = g(x; 1/xi)
    CHECK(skew_t_pdf(-0.8, {7.0, 1.3}) == Catch::Approx(skew_t_pdf(0.8, {7.0, 1.0 / 1.3})).margin(1e-14));
    // unit mass
    const SkewTParams p{10.0, 1.298};
    const double mass = integrate([&](double x) { return skew_t_pdf(x, p); }, -60.0, 60.0, 1e-10);
    CHECK(mass == Catch::Approx(1.0).margin(1e-8));
    // standardized variant: unit mass, zero mean, unit variance by quadrature
    const double mass_s =
        integrate([&](double x) { return skew_t_pdf(x, p, true); }, -60.0, 60.0, 1e-10);
    CHECK(mass_s == Catch::Approx(1.0).margin(1e-8));
    const double mean_s =
        integrate([&](double x) { return x * skew_t_pdf(x, p, true); }, -60.0, 60.0, 1e-10);
    CHECK(mean_s == Catch::Approx(0.0).margin(1e-8));
    const double var_s =
        integrate([&](double x) { return x * x * skew_t_pdf(x, p, true); }, -60.0, 60.0, 1e-10);
    CHECK(var_s == Catch::Approx(1.0).margin(1e-7));
    CHECK(skew_t_pdf(0.4, p) >= 0.0);
    CHECK_THROWS_AS(skew_t_pdf(0.0, {10.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(skew_t_pdf(0.0, {2.0, 1.3}, true), std::domain_error);
}

TEST_CASE("skew-t cdf/quantile") {
    CHECK(skew_t_quantile(0.5, {6.0, 1.0}) == Catch::Approx(0.0).margin(1e-14));
    const SkewTParams p{10.0, 1.298};
    const double q95 = skew_t_quantile(0.95, p);
    CHECK(skew_t_cdf(q95, p) == Catch::Approx(0.95).margin(1e-10));
    for (double prob : {0.001, 0.2, 0.372, 0.8, 0.999}) {
        CHECK(skew_t_cdf(skew_t_quantile(prob, p), p) == Catch::Approx(prob).margin(1e-10));
        CHECK(skew_t_cdf(skew_t_quantile(prob, p, true), p, true) ==
              Catch::Approx(prob).margin(1e-10));
    }
    // cdf against quadrature of the density
    const double byquad = integrate([&](double x) { return skew_t_pdf(x, p); }, -60.0, 0.7, 1e-11);
    CHECK(skew_t_cdf(0.7, p) == Catch::Approx(byquad).margin(1e-9));
}

TEST_CASE("standardized skew-t Monte Carlo moments") {
    const SkewTParams p{10.0, 1.298};
    Rng rng(987654);
    const std::size_t N = 1000000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double z = sample_skew_t(p, rng, true);
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    const double mean = s1 / N;
    const double var = s2 / N - mean * mean;
    const double se_mean = std::sqrt(var / N);
    const double se_var = std::sqrt((s4 / N - var * var) / N);
    CHECK(std::fabs(mean) <= 3.0 * se_mean);
    CHECK(std::fabs(var - 1.0) <= 3.0 * se_var);
}

TEST_CASE("standardized t helpers") {
    const double m = 9.3;
    CHECK(std_t_cdf(0.0, m) == 0.5);
    for (double prob : {0.01, 0.5, 0.9})
        CHECK(std_t_cdf(std_t_quantile(prob, m), m) == Catch::Approx(prob).margin(1e-12));
    const double var = integrate([&](double x) { return x * x * std_t_pdf(x, m); }, -80.0, 80.0, 1e-10);
    CHECK(var == Catch::Approx(1.0).margin(1e-6));
    CHECK_THROWS_AS(std_t_cdf(0.1, 2.0), std::domain_error);
}
