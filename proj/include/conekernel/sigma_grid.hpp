#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "cone.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "types.hpp"

namespace conekernel {

// Quadrature grid on the spherical cross-section Sigma = Omega n S^{n-1}. A
// lambda-homogeneous function is determined by its values here, which is what
// makes Sigma the natural fitting domain.
struct SigmaGrid {
    std::vector<Vec> points;      // unit norm, inside the open cone
    std::vector<double> weights;  // positive

    std::size_t size() const { return points.size(); }
};

// Builds a Sigma grid for a pointed cone:
//  - n = 2: uniform angles strictly inside the sector, trapezoid weights;
//  - n >= 3 circular: product grid (polar angle x azimuthal sphere grid);
//  - n >= 3 polyhedral: rejection-sampled directions with equal weights.
inline SigmaGrid build_sigma_grid(const Cone& cone, int resolution) {
    if (!is_pointed(cone))
        throw std::invalid_argument("build_sigma_grid: cone must be pointed (OPC geometry)");
    if (resolution < 2) throw std::invalid_argument("build_sigma_grid: resolution must be >= 2");
    const int n = cone.dimension();
    SigmaGrid grid;

    if (n == 2) {
        const auto sector = detail::sector_interval(cone);
        const double margin = 1e-3;
        const double lo = sector.lo + margin, hi = sector.hi - margin;
        if (!(hi > lo)) throw std::invalid_argument("build_sigma_grid: sector too narrow");
        const double h = (hi - lo) / (resolution - 1);
        for (int i = 0; i < resolution; ++i) {
            const double t = lo + i * h;
            grid.points.push_back({std::cos(t), std::sin(t)});
            grid.weights.push_back((i == 0 || i == resolution - 1) ? 0.5 * h : h);
        }
        return grid;
    }

    if (cone.kind == Cone::Kind::kCircular) {
        const double margin = 1e-3;
        const double alpha = cone.half_angle - margin;
        const auto frame = detail::orthogonal_complement(cone.axis);
        std::vector<Vec> dirs;
        std::vector<double> dir_wts;
        detail::sphere_grid(n - 1, 2 * resolution, dirs, dir_wts);
        const double h = alpha / resolution;
        for (int i = 0; i < resolution; ++i) {
            const double psi = (i + 0.5) * h;
            const double s = std::sin(psi), c = std::cos(psi);
            for (std::size_t j = 0; j < dirs.size(); ++j) {
                Vec x(n);
                for (int d = 0; d < n; ++d) {
                    x[d] = c * cone.axis[d];
                    for (std::size_t f = 0; f < frame.size(); ++f)
                        x[d] += s * dirs[j][f] * frame[f][d];
                }
                grid.points.push_back(std::move(x));
                grid.weights.push_back(h * std::pow(s, n - 2) * dir_wts[j]);
            }
        }
        return grid;
    }

    // Polyhedral, n >= 3: rejection sampling with a fixed seed so grids are
    // reproducible run to run.
    std::mt19937_64 rng(0xC0FFEEull ^ static_cast<unsigned long long>(resolution));
    std::normal_distribution<double> gauss;
    const int target = resolution * resolution;
    long attempts = 0;
    const long max_attempts = 20000L * target;
    while (static_cast<int>(grid.points.size()) < target && attempts < max_attempts) {
        ++attempts;
        Vec x(n);
        for (double& v : x) v = gauss(rng);
        const double len = norm2(x);
        if (len == 0.0) continue;
        for (double& v : x) v /= len;
        if (cone_contains(cone, x)) grid.points.push_back(std::move(x));
    }
    if (static_cast<int>(grid.points.size()) < target)
        throw NumericalError("build_sigma_grid: rejection sampling starved (degenerate cone?)",
                             static_cast<double>(grid.points.size()));
    // Equal weights scaled to the Monte Carlo estimate of |Sigma|.
    const double sphere_area = 2.0 * std::pow(std::numbers::pi, n / 2.0) /
                               gamma(cplx(n / 2.0, 0.0)).real();
    const double area_est = sphere_area * static_cast<double>(target) / static_cast<double>(attempts);
    grid.weights.assign(grid.points.size(), area_est / static_cast<double>(target));
    return grid;
}

}  // namespace conekernel
