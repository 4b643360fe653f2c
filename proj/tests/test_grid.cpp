#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "conekernel/sigma_grid.hpp"

using namespace conekernel;
using std::numbers::pi;

TEST_CASE("planar sector grid construction") {
    const Cone sector = Cone::circular({1.0, 0.0}, pi / 4.0);
    const SigmaGrid grid = build_sigma_grid(sector, 9);
    REQUIRE(grid.size() == 9);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& x = grid.points[i];
        REQUIRE(std::abs(norm2(x) - 1.0) < 1e-12);
        REQUIRE(cone_contains(sector, x));
        const double angle = std::atan2(x[1], x[0]);
        REQUIRE(angle > -pi / 4.0);
        REQUIRE(angle < pi / 4.0);
        REQUIRE(grid.weights[i] > 0.0);
    }
}

TEST_CASE("sector grid integrates arc length to one percent") {
    const double alpha = pi / 4.0;
    const Cone sector = Cone::circular({1.0, 0.0}, alpha);
    const SigmaGrid grid = build_sigma_grid(sector, 100);
    double total = 0.0;
    for (double w : grid.weights) total += w;
    REQUIRE(std::abs(total - 2.0 * alpha) <= 0.01 * 2.0 * alpha);
}

TEST_CASE("polyhedral planar wedge grid") {
    const Cone wedge = Cone::polyhedral({{1.0, 1.0}, {-1.0, 1.0}});
    const SigmaGrid grid = build_sigma_grid(wedge, 50);
    REQUIRE(grid.size() == 50);
    for (const auto& x : grid.points) REQUIRE(cone_contains(wedge, x));
}

TEST_CASE("non-pointed cones are rejected") {
    REQUIRE_THROWS_AS(build_sigma_grid(Cone::circular({1.0, 0.0}, pi / 2.0), 10),
                      std::invalid_argument);
    const Cone halfspace = Cone::polyhedral({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}});
    REQUIRE_THROWS_AS(build_sigma_grid(halfspace, 10), std::invalid_argument);
}

TEST_CASE("circular cap grid in three dimensions") {
    const double alpha = 0.7;
    const Cone cap = Cone::circular({0.0, 0.0, 1.0}, alpha);
    const SigmaGrid grid = build_sigma_grid(cap, 40);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(std::abs(norm2(grid.points[i]) - 1.0) < 1e-12);
        REQUIRE(cone_contains(cap, grid.points[i]));
        total += grid.weights[i];
    }
    // Spherical cap area 2 pi (1 - cos alpha).
    const double exact = 2.0 * pi * (1.0 - std::cos(alpha));
    REQUIRE(std::abs(total - exact) <= 0.02 * exact);
}

TEST_CASE("rejection grid for a solid polyhedral cone") {
    const Cone octant = Cone::polyhedral({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    const SigmaGrid grid = build_sigma_grid(octant, 12);
    REQUIRE(grid.size() == 144);
    for (const auto& x : grid.points) {
        REQUIRE(std::abs(norm2(x) - 1.0) < 1e-12);
        REQUIRE(cone_contains(octant, x));
    }
    // Equal weights summing to roughly an octant of the sphere.
    const double total = grid.weights.front() * grid.size();
    REQUIRE(std::abs(total - 4.0 * pi / 8.0) < 0.35);
}
