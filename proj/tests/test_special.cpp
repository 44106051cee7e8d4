#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pelcov/quadrature.hpp"
#include "pelcov/rng.hpp"
#include "pelcov/special.hpp"

using namespace pelcov;

TEST_CASE("incomplete beta basics") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1,1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.37) == Catch::Approx(0.37).margin(1e-14));
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    const double a = 3.7, b = 0.9, x = 0.42;
    CHECK(incomplete_beta(a, b, x) ==
          Catch::Approx(1.0 - incomplete_beta(b, a, 1.0 - x)).margin(1e-14));
    CHECK_THROWS_AS(incomplete_beta(-1.0, 2.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(incomplete_beta(1.0, 2.0, 1.5), std::domain_error);
}

TEST_CASE("incomplete gamma and chi-square") {
    // P(1, x) = 1 - exp(-x)
    for (double x : {0.1, 1.0, 5.0})
        CHECK(incomplete_gamma_p(1.0, x) == Catch::Approx(1.0 - std::exp(-x)).margin(1e-14));
    // chi2 with 2 dof is Exp(1/2)
    CHECK(chi2_cdf(3.0, 2.0) == Catch::Approx(1.0 - std::exp(-1.5)).margin(1e-13));
    // quadrature cross-check of the chi2_5 CDF at 4.2
    const double dof = 5.0;
    const double pdf_norm = std::pow(2.0, 0.5 * dof) * std::tgamma(0.5 * dof);
    const double byquad = integrate(
        [&](double t) { return std::pow(t, 0.5 * dof - 1.0) * std::exp(-0.5 * t) / pdf_norm; }, 0.0,
        4.2, 1e-12);
    CHECK(chi2_cdf(4.2, dof) == Catch::Approx(byquad).margin(1e-10));
}

TEST_CASE("normal cdf/quantile roundtrip") {
    for (double p : {1e-8, 1e-4, 0.01, 0.3, 0.5, 0.9, 0.999, 1.0 - 1e-7}) {
        CHECK(normal_cdf(normal_quantile(p)) == Catch::Approx(p).margin(1e-13));
    }
    CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi, 1e-12) ==
          Catch::Approx(2.0).margin(1e-11));
    // sharply peaked integrand
    CHECK(integrate([](double x) { return std::exp(-200.0 * (x - 0.3) * (x - 0.3)); }, 0.0, 1.0,
                    1e-12) == Catch::Approx(std::sqrt(kPi / 200.0)).margin(1e-10));
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0) == Catch::Approx(-0.5).margin(1e-12));
}

TEST_CASE("rng determinism and moments") {
    Rng a(1234567), b(1234567);
    for (int i = 0; i < 100; ++i) CHECK(a.raw() == b.raw());

    Rng rng(42);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(sum / n == Catch::Approx(0.0).margin(3.0 / std::sqrt(static_cast<double>(n))));
    CHECK(sum2 / n == Catch::Approx(1.0).margin(3.0 * std::sqrt(2.0 / static_cast<double>(n))));

    // gamma(k) has mean k and variance k
    const double k = 3.7;
    sum = sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gamma(k);
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    CHECK(mean == Catch::Approx(k).margin(4.0 * std::sqrt(k / n)));
    CHECK(sum2 / n - mean * mean == Catch::Approx(k).epsilon(0.05));
}
