#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pelcov/oracle.hpp"
#include "pelcov/pelcov.hpp"

using namespace pelcov;

TEST_CASE("v_star") {
    CHECK(v_star({0.5, {0.3, 4.0}}) == 0.5);
    // ordering forced by the shape results
    const double vs = v_star({0.95, {0.5, 9.7595}});
    CHECK(vs > 0.95);
    CHECK(vs < 1.0);
    const double vs_low = v_star({0.2, {0.5, 9.7595}});
    CHECK(vs_low < 0.2);
    // h(v_star) = 1/2
    CHECK(hfunc(v_star({0.9, {0.4, 2.0}}), 0.9, {0.4, 2.0}) == Catch::Approx(0.5).margin(1e-10));
    CHECK_THROWS_AS(v_star({0.9, {-0.4, 2.0}}), std::domain_error);
    CHECK_THROWS_AS(v_star({0.9, {0.0, 2.0}}), std::domain_error);
}

TEST_CASE("solve at v = 1/2") {
    for (double rho : {0.1, 0.5, 0.9})
        for (double n : {1.5, 2.0, 9.7595, 30.0}) {
            const PelcovSolution sol = solve({0.5, {rho, n}});
            REQUIRE(sol.roots.size() == 1);
            CHECK(sol.roots[0] == 0.5);
            CHECK(std::fabs(hfunc(0.5, 0.5, {rho, n}) - 0.5) <= 1e-12);
            CHECK_FALSE(sol.u_star.has_value());
            CHECK(sol.v_star == 0.5);
            CHECK_FALSE(sol.second_root_predicate);
        }
}

TEST_CASE("single root at high dependence") {
    const PelcovQuery q{0.99, {0.7, 9.7595}};
    const PelcovSolution sol = solve(q);
    CHECK(sol.L0 > 0.99); // high rho: the second root cannot exist
    REQUIRE(sol.roots.size() == 1);
    CHECK(sol.roots[0] > 0.5);
    CHECK(sol.roots[0] < sol.v_star);
    CHECK(std::fabs(hfunc(sol.roots[0], q.v, q.params) - q.v) <= 1e-8);
    // brute-force confirmation on a large grid
    const auto oracle = grid_roots(q.v, q.params, 1000000);
    REQUIRE(oracle.size() == 1);
    CHECK(std::fabs(oracle[0] - sol.roots[0]) <= 1e-5);
}

TEST_CASE("second root appears exactly when v exceeds L0") {
    const PelcovQuery q{0.99, {0.2, 3.0}};
    const PelcovSolution sol = solve(q);
    const double L0 = limits(q.params).L0;
    CHECK(sol.second_root_predicate == (q.v > L0));
    CHECK(sol.roots.size() == 1u + (q.v > L0 ? 1u : 0u));
    for (const double r : sol.roots)
        CHECK(std::fabs(hfunc(r, q.v, q.params) - q.v) <= 1e-8);
    if (sol.roots.size() == 2) {
        CHECK(sol.roots[0] < sol.u_star.value());
        CHECK(sol.roots[1] > 0.5);
    }
}

TEST_CASE("lower-half regime mirrors the upper one") {
    const PelcovQuery q{0.25, {0.4, 2.0}};
    const PelcovSolution sol = solve(q);
    const double L1 = 1.0 - limits(q.params).L0;
    CHECK(sol.second_root_predicate == (q.v < L1));
    REQUIRE(!sol.roots.empty());
    // principal root in (v*, 1/2)
    CHECK(sol.roots[0] > sol.v_star);
    CHECK(sol.roots[0] < 0.5);
    if (sol.roots.size() == 2) CHECK(sol.roots[1] > sol.u_star.value());
    for (const double r : sol.roots)
        CHECK(std::fabs(hfunc(r, q.v, q.params) - q.v) <= 1e-8);
}

TEST_CASE("closed form agrees with grid oracle on a small sweep") {
    for (double v : {0.05, 0.25, 0.95, 0.99})
        for (double rho : {0.1, 0.5, 0.9}) {
            const CopulaParams p{rho, 2.0};
            const PelcovSolution sol = solve({v, p});
            const auto oracle = grid_roots(v, p, 50000);
            REQUIRE(sol.roots.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i)
                CHECK(std::fabs(sol.roots[i] - oracle[i]) <= 1e-5);
        }
}

TEST_CASE("reflection symmetry of the solution set") {
    for (double v : {0.2, 0.35, 0.9})
        for (double rho : {0.3, 0.6}) {
            const CopulaParams p{rho, 3.5};
            const PelcovSolution a = solve({v, p});
            const PelcovSolution b = solve({1.0 - v, p});
            REQUIRE(a.roots.size() == b.roots.size());
            for (std::size_t i = 0; i < a.roots.size(); ++i) {
                const double mirrored = 1.0 - b.roots[b.roots.size() - 1 - i];
                CHECK(a.roots[i] == Catch::Approx(mirrored).margin(1e-8));
            }
        }
}

TEST_CASE("covar_level fixed point and direction") {
    // fixed point: at a solved root, the equivalence level maps back to v
    const PelcovQuery q{0.95, {0.5, 5.0}};
    for (const double r : solve(q).roots)
        CHECK(covar_level(r, q.v, q.params) == Catch::Approx(q.v).margin(1e-8));
    // symmetry point
    CHECK(covar_level(0.5, 0.5, q.params) == Catch::Approx(0.5).margin(1e-10));
    // h(0.9, 0.95) < 0.95 there, so CoVaR sits above VaR: w > v
    CHECK(hfunc(0.9, 0.95, q.params) < 0.95);
    CHECK(covar_level(0.9, 0.95, q.params) > 0.95);
}

TEST_CASE("classification against the region") {
    const PelcovQuery q{0.95, {0.5, 5.0}};
    const PelcovSolution sol = solve(q);
    const double root = sol.roots.back();
    CHECK(classify(root, q) == Classification::equal);
    CHECK(classify(0.999, q) == Classification::covar_above);
    // inside the reported region CoVaR sits strictly below VaR
    const double mid = 0.5 * (sol.covar_below_var_region.first + sol.covar_below_var_region.second);
    CHECK(classify(mid, q) == Classification::covar_below);
    CHECK(hfunc(0.999, 0.95, q.params) < 0.95);
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(solve({0.9, {-0.5, 5.0}}), std::domain_error);
    CHECK_THROWS_AS(solve({0.9, {0.0, 5.0}}), std::domain_error);
    CHECK_THROWS_AS(solve({0.0, {0.5, 5.0}}), std::domain_error);
    CHECK_THROWS_AS(solve({0.9, {0.5, 1.0}}), std::domain_error);
}
