#include <catch2/catch_amalgamated.hpp>

#include "conekernel/polynomial.hpp"
#include "test_helpers.hpp"

using namespace conekernel;
using testing::random_cpoint;
using testing::random_poly;

namespace {

Polynomial z1_minus_z2() {
    Polynomial p(2);
    p.add_term(MultiIndex({1, 0}), 1.0);
    p.add_term(MultiIndex({0, 1}), -1.0);
    return p;
}

}  // namespace

TEST_CASE("polynomial evaluation") {
    SECTION("root of z1 - z2 on the diagonal") {
        const CVec z{1.0, 1.0};
        REQUIRE(std::abs(z1_minus_z2().eval(z)) == 0.0);
    }
    SECTION("z2 - i z1 vanishes on (u, iu)") {
        Polynomial p(2);
        p.add_term(MultiIndex({0, 1}), 1.0);
        p.add_term(MultiIndex({1, 0}), cplx(0.0, -1.0));
        const CVec z{cplx(1.0, 0.0), cplx(0.0, 1.0)};
        REQUIRE(std::abs(p.eval(z)) < 1e-15);
    }
    SECTION("(2+i) z1^2 z2 at (1,2)") {
        const Polynomial p = Polynomial::monomial(2, MultiIndex({2, 1}), cplx(2.0, 1.0));
        const CVec z{1.0, 2.0};
        REQUIRE(std::abs(p.eval(z) - cplx(4.0, 2.0)) < 1e-15);
    }
    SECTION("dimension mismatch rejected") {
        const CVec z{1.0};
        REQUIRE_THROWS_AS(z1_minus_z2().eval(z), std::invalid_argument);
    }
}

TEST_CASE("polynomial differentiation") {
    SECTION("d/dz1 z1^2 = 2 z1") {
        const Polynomial p = Polynomial::monomial(2, MultiIndex({2, 0}), 1.0);
        const Polynomial d = p.diff(0);
        REQUIRE(d.terms().size() == 1);
        REQUIRE(std::abs(d.terms().begin()->second - 2.0) == 0.0);
        REQUIRE(d.terms().begin()->first == MultiIndex({1, 0}));
    }
    SECTION("constant differentiates to zero") {
        REQUIRE(Polynomial::constant(2, 3.0).diff(0).is_zero());
    }
    SECTION("d/dz2 z1 z2^2 = 2 z1 z2") {
        const Polynomial p = Polynomial::monomial(2, MultiIndex({1, 2}), 1.0);
        const Polynomial d = p.diff(1);
        REQUIRE(d.terms().size() == 1);
        REQUIRE(d.terms().begin()->first == MultiIndex({1, 1}));
        REQUIRE(std::abs(d.terms().begin()->second - 2.0) == 0.0);
    }
}

TEST_CASE("homogeneous degree detection") {
    REQUIRE(z1_minus_z2().homogeneous_degree() == 1);
    Polynomial mixed(2);
    mixed.add_term(MultiIndex({1, 0}), 1.0);
    mixed.add_term(MultiIndex({0, 2}), 1.0);
    REQUIRE_FALSE(mixed.homogeneous_degree().has_value());
    REQUIRE(Polynomial::monomial(2, MultiIndex({2, 1}), 1.0).homogeneous_degree() == 3);
    REQUIRE_FALSE(Polynomial::zero(2).homogeneous_degree().has_value());
}

TEST_CASE("matrix homogeneity") {
    SECTION("first-order 4d system") {
        PolyMatrix P(2, 1, 4);
        P.at(0, 0).add_term(MultiIndex({0, 1, 0, 0}), 1.0);
        P.at(0, 0).add_term(MultiIndex({1, 0, 0, 0}), cplx(0.0, -1.0));
        P.at(1, 0).add_term(MultiIndex({0, 0, 0, 1}), 1.0);
        P.at(1, 0).add_term(MultiIndex({0, 0, 1, 0}), -1.0);
        REQUIRE(P.homogeneity() == 1);
    }
    SECTION("laplacian-style entry next to a zero entry") {
        PolyMatrix P(1, 2, 2);
        P.at(0, 0).add_term(MultiIndex({2, 0}), 1.0);
        P.at(0, 0).add_term(MultiIndex({0, 2}), 1.0);
        REQUIRE(P.homogeneity() == 2);
    }
    SECTION("mixed degrees have no common homogeneity") {
        PolyMatrix P(1, 2, 2);
        P.at(0, 0).add_term(MultiIndex({1, 0}), 1.0);
        P.at(0, 1).add_term(MultiIndex({0, 2}), 1.0);
        REQUIRE_FALSE(P.homogeneity().has_value());
    }
}

TEST_CASE("derivative matches central finite differences") {
    std::mt19937_64 rng(20240811);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 3);
        const Polynomial p = random_poly(rng, n, 4, 6);
        const CVec z = random_cpoint(rng, n);
        const int axis = static_cast<int>(rng() % n);
        const double h = 1e-6;
        CVec zp = z, zm = z;
        zp[axis] += h;
        zm[axis] -= h;
        const cplx fd = (p.eval(zp) - p.eval(zm)) / (2.0 * h);
        const cplx exact = p.diff(axis).eval(z);
        REQUIRE(std::abs(fd - exact) <= 1e-6 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("homogeneous scaling law") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const int d = 1 + static_cast<int>(rng() % 4);
        // Build an exactly homogeneous polynomial of degree d.
        Polynomial p(n);
        for (int t = 0; t < 4; ++t) {
            std::vector<int> e(n, 0);
            for (int b = 0; b < d; ++b) e[rng() % n] += 1;
            p.add_term(MultiIndex(std::move(e)), testing::random_unit_box(rng));
        }
        REQUIRE(p.homogeneous_degree() == d);
        const CVec z = random_cpoint(rng, n);
        std::uniform_real_distribution<double> ts(0.2, 3.0);
        const double t = ts(rng);
        CVec tz = z;
        for (auto& v : tz) v *= t;
        const cplx lhs = p.eval(tz);
        const cplx rhs = std::pow(t, d) * p.eval(z);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("arithmetic round trip prunes to identical terms") {
    std::mt19937_64 rng(5150);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const Polynomial p = random_poly(rng, n, 5, 7);
        const Polynomial q = random_poly(rng, n, 5, 7);
        const Polynomial back = (p + q) - q;
        REQUIRE(back.same_terms(p, 1e-13));
    }
}
