#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logcrystal/core.hpp"
#include "logcrystal/errors.hpp"
#include "logcrystal/meanfield.hpp"

using namespace logcrystal;

TEST_CASE("phase grid nodes") {
    PhaseGrid g{200, 201};
    CHECK(g.q(0) == -std::numbers::pi);
    CHECK(g.q(100) == 0.0);
    CHECK(g.p(0) == -0.5);
    CHECK(g.p(200) == 0.5);
    CHECK(g.p(100) == 0.0);
    CHECK(g.q_step() == doctest::Approx(2.0 * std::numbers::pi / 200.0));
    CHECK(g.p_step() == doctest::Approx(1.0 / 200.0));
}

TEST_CASE("classical energy") {
    CHECK(classical_energy(0.25, {0.0, 0.0}) == doctest::Approx(-0.75));
    CHECK(classical_energy(0.75, {0.0, 0.5}) == 0.0);
    CHECK(classical_energy(0.75, {std::numbers::pi, 0.0}) == doctest::Approx(1.75));
    CHECK_THROWS_AS(classical_energy(0.75, {0.0, 0.51}), DomainError);
    CHECK(classical_minimum(0.75) == doctest::Approx(-1.0 / 3.0));
    CHECK(classical_minimum(0.25) == doctest::Approx(-0.75));
    CHECK(classical_minimum(0.5) == doctest::Approx(-0.5));
}

TEST_CASE("minimum locus is degenerate") {
    auto locus = minimum_locus(0.75, 101);
    REQUIRE(locus.size() == 101);
    double pmax = 0.5 * std::sqrt(1.0 - 1.0 / (4.0 * 0.75 * 0.75));
    for (const PhasePoint& pt : locus) {
        CHECK(classical_energy(0.75, pt) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
        CHECK(std::abs(pt.p) <= pmax + 1e-15);
        CHECK(std::sqrt(1.0 - 4.0 * pt.p * pt.p) * std::cos(pt.q) == doctest::Approx(1.0 / 1.5));
    }
    CHECK(locus[0].q >= 0.0);
    CHECK(locus[100].q <= 0.0);
    auto origin = minimum_locus(0.25, 10);
    REQUIRE(origin.size() == 1);
    CHECK(origin[0].q == 0.0);
    CHECK(origin[0].p == 0.0);
}

TEST_CASE("landscape grid") {
    LandscapeGrid low = landscape_grid(0.25, 200, 201);
    auto it = std::min_element(low.values.begin(), low.values.end());
    std::size_t best = static_cast<std::size_t>(it - low.values.begin());
    CHECK(low.grid.q(best / 201) == 0.0);
    CHECK(low.grid.p(best % 201) == 0.0);
    CHECK(*it == doctest::Approx(-0.75));

    LandscapeGrid high = landscape_grid(0.75, 200, 200, 3);
    double lowest = *std::min_element(high.values.begin(), high.values.end());
    double step = std::max(high.grid.q_step(), high.grid.p_step());
    CHECK(lowest >= -1.0 / 3.0 - 1e-15);
    CHECK(lowest - (-1.0 / 3.0) <= step * step);
    CHECK(high.at(3, 7) == classical_energy(0.75, {high.grid.q(3), high.grid.p(7)}));
    CHECK(landscape_grid(0.75, 200, 200, 1).values == high.values);
    CHECK_THROWS_AS(landscape_grid(0.75, 8, 200), ValidationError);
}

TEST_CASE("quantum ground energy approaches the mean-field minimum") {
    for (std::int64_t n : {100, 1000, 10000}) {
        ModelParams p(n, 0.75);
        double e0 = energy_level(p, ground_index(p));
        CHECK(std::abs(2.0 * e0 / static_cast<double>(n) - classical_minimum(0.75)) <= 5.0 / static_cast<double>(n));
    }
}

TEST_CASE("classical energy values and symmetries") {
    for (double gamma : {0.0, 0.3, 0.75, 2.0}) {
        CHECK(classical_energy(gamma, {0.0, 0.0}) == doctest::Approx(gamma - 1.0));
        CHECK(classical_energy(gamma, {1.2, 0.5}) == 0.0);
        CHECK(classical_energy(gamma, {-2.0, -0.5}) == 0.0);
    }
    CHECK(classical_energy(0.75, {0.8411, 0.0}) == doctest::Approx(-1.0 / 3.0).epsilon(1e-4));
    for (double q : {0.1, 0.9, 2.5}) {
        for (double p : {0.05, 0.2, 0.45}) {
            double e = classical_energy(0.75, {q, p});
            CHECK(classical_energy(0.75, {-q, p}) == e);
            CHECK(classical_energy(0.75, {q, -p}) == e);
            CHECK(classical_energy(0.75, {-q, -p}) == e);
        }
    }
    auto locus = minimum_locus(0.75, 3);
    bool has_branch = false;
    for (const PhasePoint& pt : locus)
        if (std::abs(pt.p) < 1e-15 && std::abs(std::abs(pt.q) - std::acos(2.0 / 3.0)) < 1e-12) has_branch = true;
    CHECK(has_branch);
}

TEST_CASE("landscape maximum sits on the Q boundary") {
    LandscapeGrid g = landscape_grid(0.75, 200, 201);
    auto it = std::max_element(g.values.begin(), g.values.end());
    std::size_t best = static_cast<std::size_t>(it - g.values.begin());
    CHECK(*it == doctest::Approx(1.75));
    CHECK(std::abs(g.grid.q(best / 201)) == doctest::Approx(std::numbers::pi));
    CHECK(g.grid.p(best % 201) == 0.0);
}
