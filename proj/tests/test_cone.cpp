#include <catch2/catch_amalgamated.hpp>
#include <numbers>
#include <random>

#include "conekernel/cone.hpp"
#include "test_helpers.hpp"

using namespace conekernel;
using std::numbers::pi;

namespace {

Cone upper_wedge() { return Cone::polyhedral({{1.0, 1.0}, {-1.0, 1.0}}); }  // x2 > |x1|

Cone wedge_r(double r) { return Cone::polyhedral({{1.0, r}, {-1.0, r}}); }  // x2 > r |x1|

Cone half_space(int n) {
    // closure is R^{n-1} x R_{>=0}
    std::vector<Vec> gens;
    for (int i = 0; i + 1 < n; ++i) {
        Vec plus(n, 0.0), minus(n, 0.0);
        plus[i] = 1.0;
        minus[i] = -1.0;
        gens.push_back(plus);
        gens.push_back(minus);
    }
    Vec up(n, 0.0);
    up[n - 1] = 1.0;
    gens.push_back(up);
    return Cone::polyhedral(std::move(gens));
}

Cone lorentz4() { return Cone::circular({0.0, 0.0, 0.0, 1.0}, pi / 4.0); }  // x4 > |x'|

CVec as_cvec(const Vec& v) { return CVec(v.begin(), v.end()); }

}  // namespace

TEST_CASE("pointedness verdicts") {
    REQUIRE_FALSE(is_pointed(half_space(2)));
    REQUIRE_FALSE(is_pointed(half_space(3)));
    REQUIRE(is_pointed(upper_wedge()));
    REQUIRE(is_pointed(lorentz4()));
    REQUIRE_FALSE(is_pointed(Cone::circular({1.0, 0.0}, pi / 2.0)));  // boundary case
    REQUIRE(is_pointed(Cone::polyhedral({{1.0, 0.0}})));              // single ray
}

TEST_CASE("support function over hull points") {
    const CompactHull k({{1.0, 1.0}, {2.0, 1.0}});
    REQUIRE(support_function(k, Vec{-1.0, 0.0}) == Catch::Approx(-1.0));
    const CompactHull single({{3.0, -2.0}});
    REQUIRE(support_function(single, Vec{0.5, 1.0}) == Catch::Approx(-0.5));
    const CompactHull simplex({{1.0, 0.0}, {0.0, 1.0}});
    REQUIRE(support_function(simplex, Vec{1.0, 1.0}) == Catch::Approx(1.0));
}

TEST_CASE("U_K membership") {
    const CompactHull k({{1.0, 1.0}, {2.0, 1.0}});
    REQUIRE(in_UK(k, CVec{cplx(0.0, 0.3), cplx(-1.0, -0.7)}));
    const CompactHull with_zero({{0.0, 0.0}, {1.0, 0.0}});
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i)
        REQUIRE_FALSE(in_UK(with_zero, testing::random_cpoint(rng, 2, 3.0)));
    const CompactHull point({{1.0, 0.0}});
    REQUIRE_FALSE(in_UK(point, CVec{cplx(0.0, 0.0), cplx(5.0, 0.0)}));  // H = 0, strictness fails
}

TEST_CASE("strict dual cone verdicts from the worked examples") {
    SECTION("upper wedge") {
        REQUIRE(in_strict_dual(upper_wedge(), Vec{0.0, -1.0}));
        REQUIRE_FALSE(in_strict_dual(upper_wedge(), Vec{1.0, 1.0}));
    }
    SECTION("4d circular cone") {
        REQUIRE(in_strict_dual(lorentz4(), Vec{0.0, 0.0, 0.0, -1.0}));
        REQUIRE_FALSE(in_strict_dual(lorentz4(), Vec{0.0, 0.0, 1.0, -1.0}));
    }
    SECTION("shrunken wedge r = 2") {
        REQUIRE(in_strict_dual(wedge_r(2.0), Vec{-1.0, -1.0}));
        REQUIRE_FALSE(in_strict_dual(wedge_r(1.0), Vec{-1.0, -1.0}));  // boundary at r = 1
        REQUIRE_FALSE(in_strict_dual(wedge_r(0.5), Vec{-1.0, -1.0}));
    }
    SECTION("eta = 0 is never strictly dual") {
        REQUIRE_FALSE(in_strict_dual(upper_wedge(), Vec{0.0, 0.0}));
        REQUIRE_FALSE(in_strict_dual(lorentz4(), Vec{0.0, 0.0, 0.0, 0.0}));
    }
}

TEST_CASE("U_Omega membership on characteristic parameters") {
    SECTION("diagonal parameters never visible over the wedge") {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 20; ++i) {
            const cplx u = testing::random_unit_box(rng) * 3.0;
            REQUIRE_FALSE(in_UOmega(upper_wedge(), CVec{u, u}));
        }
    }
    SECTION("-(1,1) becomes visible after shrinking to r = 2") {
        const CVec z{-1.0, -1.0};
        REQUIRE(in_UOmega(wedge_r(2.0), z));
        REQUIRE_FALSE(in_UOmega(wedge_r(1.0), z));
    }
    SECTION("4d boundary slice stays outside U_Omega") {
        std::mt19937_64 rng(9);
        for (int i = 0; i < 10; ++i) {
            std::uniform_real_distribution<double> neg(-2.0, 0.0);
            const cplx v(neg(rng), testing::random_unit_box(rng).imag());
            REQUIRE_FALSE(in_UOmega(lorentz4(), CVec{0.0, 0.0, v, v}));
        }
    }
}

TEST_CASE("D_Omega on the planar sector family") {
    const CVec z{cplx(-1.0, 0.0), cplx(0.0, -1.0)};  // -(1, i)
    for (double alpha : {pi / 3.0, 3.0 * pi / 4.0}) {
        const Cone sector = Cone::circular({1.0, 0.0}, alpha);
        CAPTURE(alpha);
        REQUIRE(in_DOmega(sector, z));
    }
    REQUIRE(in_UOmega(Cone::circular({1.0, 0.0}, pi / 3.0), z));
    REQUIRE_FALSE(in_UOmega(Cone::circular({1.0, 0.0}, 3.0 * pi / 4.0), z));

    // Real-negative parameter along the axis direction leaves D once the
    // sector opens past a half-plane.
    const CVec zreal{cplx(-1.0, 0.0), cplx(0.0, 0.0)};
    REQUIRE_FALSE(in_DOmega(Cone::circular({1.0, 0.0}, 3.0 * pi / 4.0), zreal));
    REQUIRE(in_DOmega(Cone::circular({1.0, 0.0}, pi / 4.0), zreal));
}

TEST_CASE("strict dual is scale invariant") {
    std::mt19937_64 rng(123);
    const Cone cones[] = {upper_wedge(), lorentz4(), wedge_r(0.7)};
    for (const auto& cone : cones) {
        const int n = cone.dimension();
        for (int i = 0; i < 30; ++i) {
            const Vec eta = testing::random_rpoint(rng, n, 2.0);
            std::uniform_real_distribution<double> ts(0.05, 20.0);
            const double t = ts(rng);
            Vec teta = eta;
            for (auto& v : teta) v *= t;
            REQUIRE(in_strict_dual(cone, eta) == in_strict_dual(cone, teta));
        }
    }
}

TEST_CASE("polyhedral U_Omega equals U of the normalized-generator hull") {
    std::mt19937_64 rng(31337);
    const Cone cones[] = {upper_wedge(), wedge_r(2.0),
                          Cone::polyhedral({{1.0, 0.2, 0.1}, {0.1, 1.0, 0.0}, {0.0, 0.3, 1.0}})};
    for (const auto& cone : cones) {
        const CompactHull cross_section(cone.unit_generators());
        for (int i = 0; i < 50; ++i) {
            const CVec z = testing::random_cpoint(rng, cone.dimension(), 2.0);
            REQUIRE(in_UOmega(cone, z) == in_UK(cross_section, z));
        }
    }
}

TEST_CASE("circular strict dual agrees with boundary-ray sampling") {
    const Cone cone = Cone::circular({0.0, 0.0, 1.0}, 0.6);
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> gauss;
    const int num_rays = 100000;
    std::vector<Vec> rays;
    rays.reserve(num_rays);
    for (int i = 0; i < num_rays; ++i) {
        // Uniform direction on the boundary circle angle = 0.6 plus the axis.
        std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
        const double phi = ang(rng);
        rays.push_back({std::sin(0.6) * std::cos(phi), std::sin(0.6) * std::sin(phi), std::cos(0.6)});
    }
    for (int trial = 0; trial < 40; ++trial) {
        Vec eta{gauss(rng), gauss(rng), gauss(rng)};
        const double margin = strict_dual_margin(cone, eta);
        if (std::abs(margin) < 1e-3) continue;  // skip the tolerance band
        bool brute = true;
        for (const auto& x : rays)
            if (dot(x, eta) >= 0.0) {
                brute = false;
                break;
            }
        // The closed cap maximum sits either on the boundary rays or at the axis.
        brute = brute && dot(cone.axis, eta) < 0.0;
        REQUIRE(in_strict_dual(cone, eta) == brute);
    }
}

TEST_CASE("U_Omega is contained in D_Omega") {
    std::mt19937_64 rng(99);
    const Cone cones[] = {upper_wedge(), wedge_r(2.0), Cone::circular({1.0, 0.0}, pi / 5.0),
                          Cone::polyhedral({{1.0, 0.0, 0.2}, {0.0, 1.0, 0.2}, {-1.0, 1.0, 1.0}})};
    for (const auto& cone : cones) {
        int hits = 0;
        for (int i = 0; i < 200 && hits < 25; ++i) {
            const CVec z = testing::random_cpoint(rng, cone.dimension(), 2.0);
            if (!in_UOmega(cone, z)) continue;
            ++hits;
            REQUIRE(in_DOmega(cone, z));
        }
        REQUIRE(hits > 0);
    }
}

TEST_CASE("PW weight values") {
    const PWWeight trivial(CompactHull({{0.0, 0.0}}), 0);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i)
        REQUIRE(pw_weight(trivial, testing::random_cpoint(rng, 2, 4.0)) == Catch::Approx(1.0));

    const PWWeight w0(CompactHull({{1.0, 0.0}}), 0);
    REQUIRE(pw_weight(w0, CVec{cplx(1.0, 0.0), cplx(0.0, 0.0)}) == Catch::Approx(std::exp(-1.0)));

    const PWWeight w2(CompactHull({{1.0, 0.0}}), 2);
    REQUIRE(pw_weight(w2, CVec{cplx(3.0, 0.0), cplx(0.0, 0.0)}) ==
            Catch::Approx(std::exp(-3.0) / 16.0).epsilon(1e-12));
}
