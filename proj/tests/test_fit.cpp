#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "conekernel/fit.hpp"

using namespace conekernel;
using std::numbers::pi;

namespace {

ConicalFunction bare_kernel(cplx lambda, CVec z) {
    return expand_kernel(NoetherianOp::identity(static_cast<int>(z.size())), LambdaParam(lambda),
                         z);
}

// Weighted inner product of sampled functions over a grid (L = 1).
cplx grid_inner(const std::vector<CVec>& a, const std::vector<CVec>& b, const SigmaGrid& grid) {
    cplx s = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p)
        s += grid.weights[p] * a[p][0] * std::conj(b[p][0]);
    return s;
}

double grid_norm(const std::vector<CVec>& a, const SigmaGrid& grid) {
    return std::sqrt(std::abs(grid_inner(a, a, grid)));
}

// Residual of projecting `target` onto span(dictionary samples), computed by
// modified Gram-Schmidt; independent of the QR solve path.
double mgs_projection_residual(const std::vector<std::vector<CVec>>& dict_samples,
                               const std::vector<CVec>& target, const SigmaGrid& grid) {
    std::vector<std::vector<CVec>> basis;
    for (auto column : dict_samples) {
        for (const auto& q : basis) {
            const cplx c = grid_inner(column, q, grid);
            for (std::size_t p = 0; p < grid.size(); ++p) column[p][0] -= c * q[p][0];
        }
        const double len = grid_norm(column, grid);
        if (len < 1e-10) continue;  // dependent column
        for (auto& v : column) v[0] /= len;
        basis.push_back(std::move(column));
    }
    std::vector<CVec> residual = target;
    for (const auto& q : basis) {
        const cplx c = grid_inner(residual, q, grid);
        for (std::size_t p = 0; p < grid.size(); ++p) residual[p][0] -= c * q[p][0];
    }
    return grid_norm(residual, grid) / grid_norm(target, grid);
}

}  // namespace

TEST_CASE("sector Laplacian positive control") {
    const double alpha = pi / 3.0;
    const cplx lambda(0.5, 0.0);
    const Cone sector = Cone::circular({1.0, 0.0}, alpha);
    const SigmaGrid grid = build_sigma_grid(sector, 200);

    const std::vector<ConicalFunction> dictionary{
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, -1.0)}),   // (x1 + i x2)^l
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, 1.0)})};   // (x1 - i x2)^l

    std::vector<CVec> target;
    for (const auto& x : grid.points) {
        const double phi = std::atan2(x[1], x[0]);
        target.push_back({cplx(std::cos(0.5 * phi), 0.0)});
    }

    const FitReport report = least_squares_fit(dictionary, target, grid);
    REQUIRE(report.relative_residual <= 1e-10);
    REQUIRE_FALSE(report.rank_deficient);
    REQUIRE(std::abs(report.coefficients[0] - 0.5) <= 1e-8);
    REQUIRE(std::abs(report.coefficients[1] - 0.5) <= 1e-8);

    SECTION("the fitted combination is still a solution") {
        PolyMatrix laplacian(1, 1, 2);
        laplacian.at(0, 0).add_term(MultiIndex({2, 0}), 1.0);
        laplacian.at(0, 0).add_term(MultiIndex({0, 2}), 1.0);
        for (const auto& f : dictionary) {
            for (const auto& r : apply_P(laplacian, f)) REQUIRE(is_zero(r));
            REQUIRE(euler_residual(LambdaParam(lambda), f) == 0.0);
        }
        // Numeric cross-check of the weighted sum via second differences.
        auto fitted = [&](const Vec& x) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < dictionary.size(); ++k)
                s += report.coefficients[k] * eval_conical(dictionary[k], x)[0];
            return s;
        };
        const Vec x{1.1, 0.4};
        const double h = 1e-4;
        cplx lap = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            Vec xp = x, xm = x;
            xp[axis] += h;
            xm[axis] -= h;
            lap += (fitted(xp) - 2.0 * fitted(x) + fitted(xm)) / (h * h);
        }
        REQUIRE(std::abs(lap) <= 1e-5);
    }
}

TEST_CASE("fitting a dictionary element recovers the unit coefficient") {
    const cplx lambda(0.7, 0.4);
    const Cone sector = Cone::circular({1.0, 0.0}, pi / 4.0);
    const SigmaGrid grid = build_sigma_grid(sector, 60);
    const std::vector<ConicalFunction> dictionary{
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, -1.0)}),
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, 1.0)})};
    const auto target = sample_on_grid(dictionary[0], grid);
    const FitReport report = least_squares_fit(dictionary, target, grid);
    REQUIRE(report.relative_residual <= 1e-12);
    REQUIRE(std::abs(report.coefficients[0] - 1.0) <= 1e-10);
    REQUIRE(std::abs(report.coefficients[1]) <= 1e-10);
}

TEST_CASE("boundary-slice dictionary cannot reach the tangential mode") {
    const cplx lambda(0.4, 0.0);
    const Cone cone = Cone::circular({0.0, 0.0, 0.0, 1.0}, pi / 4.0);
    const SigmaGrid grid = build_sigma_grid(cone, 12);

    // Kernels from the boundary slice (0, 0, v, v), Re v < 0: all multiples
    // of (x3 + x4)^lambda.
    std::vector<ConicalFunction> dictionary;
    std::vector<std::vector<CVec>> dict_samples;
    for (int j = 0; j < 12; ++j) {
        const cplx v(-1.0 - 0.2 * j, 0.1 * (j % 3));
        dictionary.push_back(bare_kernel(lambda, {cplx(0.0, 0.0), cplx(0.0, 0.0), v, v}));
        dict_samples.push_back(sample_on_grid(dictionary.back(), grid));
    }

    // Target: the first tangential mode (x1 + i x2)(x3 + x4)^(lambda - 1).
    ConicalFunction target_fn(lambda, {cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(-1.0, 0.0), cplx(-1.0, 0.0)}, 1);
    target_fn.add_term(0, {cplx(1.0, 0.0), MultiIndex({1, 0, 0, 0}), 1});
    target_fn.add_term(0, {cplx(0.0, 1.0), MultiIndex({0, 1, 0, 0}), 1});
    const auto target = sample_on_grid(target_fn, grid);

    // Independent orthogonal-projection oracle fixes the expected residual.
    const double oracle = mgs_projection_residual(dict_samples, target, grid);
    REQUIRE(oracle >= 0.5);

    const FitReport report = least_squares_fit(dictionary, target, grid);
    REQUIRE(report.rank_deficient);  // the slice kernels are collinear
    REQUIRE(report.relative_residual >= 0.5);
    REQUIRE(std::abs(report.relative_residual - oracle) <= 1e-6);
}

TEST_CASE("residual is monotone under dictionary growth") {
    const cplx lambda(0.5, 0.0);
    const Cone sector = Cone::circular({1.0, 0.0}, pi / 3.0);
    const SigmaGrid grid = build_sigma_grid(sector, 80);
    std::vector<ConicalFunction> dictionary{
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, -1.0)})};
    std::vector<CVec> target;
    for (const auto& x : grid.points) {
        const double phi = std::atan2(x[1], x[0]);
        target.push_back({cplx(std::cos(0.5 * phi), 0.2 * std::sin(1.5 * phi))});
    }
    double prev = least_squares_fit(dictionary, target, grid).relative_residual;
    dictionary.push_back(bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, 1.0)}));
    const double with_two = least_squares_fit(dictionary, target, grid).relative_residual;
    REQUIRE(with_two <= prev + 1e-12);
    dictionary.push_back(bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(-0.4, 0.6)}));
    const double with_three = least_squares_fit(dictionary, target, grid).relative_residual;
    REQUIRE(with_three <= with_two + 1e-12);
}

TEST_CASE("fit input validation") {
    const cplx lambda(0.5, 0.0);
    const Cone sector = Cone::circular({1.0, 0.0}, pi / 4.0);
    const SigmaGrid grid = build_sigma_grid(sector, 10);
    const std::vector<ConicalFunction> dictionary{
        bare_kernel(lambda, {cplx(-1.0, 0.0), cplx(0.0, -1.0)})};
    REQUIRE_THROWS_AS(least_squares_fit({}, {}, grid), std::invalid_argument);
    REQUIRE_THROWS_AS(least_squares_fit(dictionary, std::vector<CVec>(3, CVec{0.0}), grid),
                      std::invalid_argument);
    std::vector<ConicalFunction> mixed = dictionary;
    mixed.push_back(bare_kernel(cplx(0.9, 0.0), {cplx(-1.0, 0.0), cplx(0.0, 1.0)}));
    REQUIRE_THROWS_AS(least_squares_fit(mixed, std::vector<CVec>(grid.size(), CVec{0.0}), grid),
                      std::invalid_argument);
}
