#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "linprog.hpp"
#include "types.hpp"

namespace conekernel {

// Open convex cone, represented by generators (the open cone is the interior
// of their closed conical hull) or as a circular cone about an axis. Circular
// cones with half_angle >= pi/2 are legal inputs (sectors past a half-space)
// but are non-convex and non-pointed; only the membership-style queries are
// meaningful for them.
struct Cone {
    enum class Kind { kPolyhedral, kCircular };

    Kind kind;
    std::vector<Vec> generators;  // polyhedral
    Vec axis;                     // circular, unit norm
    double half_angle = 0.0;      // circular, in (0, pi)

    static Cone polyhedral(std::vector<Vec> gens) {
        if (gens.empty()) throw std::invalid_argument("Cone: no generators");
        const std::size_t n = gens.front().size();
        for (const auto& g : gens) {
            if (g.size() != n) throw std::invalid_argument("Cone: generator dimension mismatch");
            if (norm2(g) == 0.0) throw std::invalid_argument("Cone: zero generator");
        }
        Cone c;
        c.kind = Kind::kPolyhedral;
        c.generators = std::move(gens);
        return c;
    }

    static Cone circular(Vec axis, double half_angle) {
        const double len = norm2(axis);
        if (std::abs(len - 1.0) > 1e-9)
            throw std::invalid_argument("Cone: circular axis must have unit norm");
        if (!(half_angle > 0.0 && half_angle < std::numbers::pi))
            throw std::invalid_argument("Cone: half_angle must lie in (0, pi)");
        Cone c;
        c.kind = Kind::kCircular;
        c.axis = std::move(axis);
        c.half_angle = half_angle;
        return c;
    }

    int dimension() const {
        return static_cast<int>(kind == Kind::kPolyhedral ? generators.front().size()
                                                          : axis.size());
    }

    std::vector<Vec> unit_generators() const {
        std::vector<Vec> u = generators;
        for (auto& g : u) {
            const double len = norm2(g);
            for (double& v : g) v /= len;
        }
        return u;
    }
};

// Finite point set whose convex hull is the represented compact set K.
struct CompactHull {
    std::vector<Vec> points;

    explicit CompactHull(std::vector<Vec> pts) : points(std::move(pts)) {
        if (points.empty()) throw std::invalid_argument("CompactHull: empty point list");
        const std::size_t n = points.front().size();
        for (const auto& p : points)
            if (p.size() != n) throw std::invalid_argument("CompactHull: dimension mismatch");
    }

    int dimension() const { return static_cast<int>(points.front().size()); }

    bool contains(std::span<const double> x) const {
        return in_convex_hull(points, x);
    }
};

// H_K(w) = sup_{x in K} <x, w>, attained at a hull vertex.
inline double support_function(const CompactHull& hull, std::span<const double> w) {
    if (static_cast<int>(w.size()) != hull.dimension())
        throw std::invalid_argument("support_function: dimension mismatch");
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& p : hull.points) h = std::max(h, dot(p, w));
    return h;
}

// U_K = { z : H_K(Re z) < 0 }.
inline bool in_UK(const CompactHull& hull, std::span<const cplx> z) {
    return support_function(hull, real_part(z)) < 0.0;
}

inline bool is_pointed(const Cone& cone) {
    if (cone.kind == Cone::Kind::kCircular)
        return cone.half_angle < std::numbers::pi / 2.0;
    // Pointed iff no nontrivial nonnegative combination of the generators
    // vanishes: feasibility of { xi >= 0, G xi = 0, sum xi = 1 } decides it.
    const auto& gens = cone.generators;
    const int n = static_cast<int>(gens.front().size());
    const int k = static_cast<int>(gens.size());
    SimplexSolver lp(k);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(k);
        for (int j = 0; j < k; ++j) row[j] = gens[j][i] / norm2(gens[j]);
        lp.add_eq(std::move(row), 0.0);
    }
    lp.add_eq(std::vector<double>(k, 1.0), 1.0);
    return !lp.feasible();
}

// Signed margin of eta against the strict negative dual cone, computed on
// normalized data; positive inside, zero on the boundary. For circular cones
// past the pointed regime the dual is empty and a sentinel margin is returned.
inline double strict_dual_margin(const Cone& cone, std::span<const double> eta) {
    const double len = norm2(eta);
    if (len == 0.0) return 0.0;
    if (cone.kind == Cone::Kind::kPolyhedral) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& g : cone.generators) worst = std::min(worst, -dot(g, eta) / (norm2(g) * len));
        return worst;
    }
    if (cone.half_angle >= std::numbers::pi / 2.0) return -1.0 - cone.half_angle;
    return -dot(cone.axis, eta) / len - std::sin(cone.half_angle);
}

// eta in the strict negative dual: <x, eta> < 0 for every nonzero x in the
// closed cone. For generators it suffices to test the generators themselves;
// for a circular cone the test is angle(axis, eta) > half_angle + pi/2,
// which is empty once half_angle >= pi/2. Strictness carries a 1e-12 band on
// the normalized margin so that exact boundary points (where rounding leaves
// +-1 ulp noise, e.g. 1/sqrt(2) against sin(pi/4)) resolve to "outside".
inline bool in_strict_dual(const Cone& cone, std::span<const double> eta) {
    return strict_dual_margin(cone, eta) > 1e-12;
}

// U_Omega = { z : Re z in Omega^v }.
inline bool in_UOmega(const Cone& cone, std::span<const cplx> z) {
    return in_strict_dual(cone, real_part(z));
}

namespace detail {

inline int matrix_rank(const std::vector<Vec>& rows_in) {
    std::vector<Vec> rows = rows_in;
    const int m = static_cast<int>(rows.size());
    const int n = m == 0 ? 0 : static_cast<int>(rows.front().size());
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        double best = 1e-12;
        for (int r = rank; r < m; ++r)
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                piv = r;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = rank + 1; r < m; ++r) {
            const double f = rows[r][col] / rows[rank][col];
            for (int c = col; c < n; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

// Angular interval (relative to atan2) of a two-dimensional cone.
struct SectorInterval {
    double lo, hi;
};

inline SectorInterval sector_interval(const Cone& cone) {
    if (cone.dimension() != 2)
        throw std::invalid_argument("sector_interval: only defined for n = 2");
    if (cone.kind == Cone::Kind::kCircular) {
        const double c = std::atan2(cone.axis[1], cone.axis[0]);
        return {c - cone.half_angle, c + cone.half_angle};
    }
    // Reference direction = mean of unit generators; pointedness keeps the
    // angular spread below pi so relative angles are unambiguous.
    const auto gens = cone.unit_generators();
    Vec ref(2, 0.0);
    for (const auto& g : gens) {
        ref[0] += g[0];
        ref[1] += g[1];
    }
    if (norm2(ref) < 1e-12)
        throw std::invalid_argument("sector_interval: cone spans a half-plane or more");
    const double theta_ref = std::atan2(ref[1], ref[0]);
    double lo = 0.0, hi = 0.0;
    for (const auto& g : gens) {
        double d = std::atan2(g[1], g[0]) - theta_ref;
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {theta_ref + lo, theta_ref + hi};
}

// Orthonormal basis of the orthogonal complement of a unit vector.
inline std::vector<Vec> orthogonal_complement(const Vec& axis) {
    const int n = static_cast<int>(axis.size());
    std::vector<Vec> basis;
    basis.push_back(axis);
    for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        for (const auto& b : basis) {
            const double c = dot(e, b);
            for (int j = 0; j < n; ++j) e[j] -= c * b[j];
        }
        const double len = norm2(e);
        if (len > 1e-8) {
            for (double& v : e) v /= len;
            basis.push_back(std::move(e));
        }
    }
    return {basis.begin() + 1, basis.end()};
}

// Unit-direction grids of S^{d-1} used for cap sampling; recursive product
// construction with surface-measure weights.
inline void sphere_grid(int d, int resolution, std::vector<Vec>& dirs, std::vector<double>& wts) {
    if (d == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
        wts.push_back(1.0);
        wts.push_back(1.0);
        return;
    }
    if (d == 2) {
        const int m = std::max(4, resolution);
        const double h = 2.0 * std::numbers::pi / m;
        for (int i = 0; i < m; ++i) {
            const double t = -std::numbers::pi + (i + 0.5) * h;
            dirs.push_back({std::cos(t), std::sin(t)});
            wts.push_back(h);
        }
        return;
    }
    std::vector<Vec> sub;
    std::vector<double> subw;
    sphere_grid(d - 1, resolution, sub, subw);
    const int m = std::max(4, resolution / 2);
    const double h = std::numbers::pi / m;
    for (int i = 0; i < m; ++i) {
        const double psi = (i + 0.5) * h;
        const double s = std::sin(psi);
        for (std::size_t j = 0; j < sub.size(); ++j) {
            Vec x(d);
            x[0] = std::cos(psi);
            for (int k = 1; k < d; ++k) x[k] = s * sub[j][k - 1];
            dirs.push_back(std::move(x));
            wts.push_back(h * std::pow(s, d - 2) * subw[j]);
        }
    }
}

}  // namespace detail

// Open-cone membership. Polyhedral cones use the relative-interior margin of
// the generator representation; degenerate (non-full-dimensional) cones have
// empty interior and contain nothing.
inline bool cone_contains(const Cone& cone, std::span<const double> x) {
    const double len = norm2(x);
    if (len == 0.0) return false;
    Vec xu(x.begin(), x.end());
    for (double& v : xu) v /= len;
    if (cone.kind == Cone::Kind::kCircular)
        return dot(cone.axis, xu) > std::cos(cone.half_angle);
    if (detail::matrix_rank(cone.generators) < cone.dimension()) return false;
    auto margin = cone_interior_margin(cone.unit_generators(), xu);
    return margin.has_value() && *margin > 1e-9;
}

// Membership in D_Omega = { z : -<x,z> avoids (-inf, 0] for all x in Omega }.
// Exact (up to LP tolerance) for polyhedral cones; angular grid search with
// the given resolution for circular cones.
inline bool in_DOmega(const Cone& cone, std::span<const cplx> z, double resolution = 1e-4) {
    const Vec a = imag_part(z);  // violation needs <x,a> = 0
    const Vec b = real_part(z);  //              and <x,b> >= 0
    const int n = cone.dimension();
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("in_DOmega: dimension mismatch");

    if (cone.kind == Cone::Kind::kPolyhedral) {
        if (detail::matrix_rank(cone.generators) < n)
            throw std::invalid_argument("in_DOmega: polyhedral cone must be full-dimensional");
        // x in int(cone) iff x = G mu with mu >= 1 after rescaling, so the
        // violation test is feasibility of { mu >= 1 : <G mu, a> = 0, <G mu, b> >= 0 }.
        const auto gens = cone.unit_generators();
        const int k = static_cast<int>(gens.size());
        std::vector<double> ga(k), gb(k);
        double sa = 0.0, sb = 0.0;
        for (int j = 0; j < k; ++j) {
            ga[j] = dot(gens[j], a);
            gb[j] = dot(gens[j], b);
            sa += ga[j];
            sb += gb[j];
        }
        SimplexSolver lp(k);  // mu = 1 + xi, xi >= 0
        lp.add_eq(ga, -sa);
        lp.add_ge(gb, -sb);
        return !lp.feasible();
    }

    // Circular: scan unit directions strictly inside the cap.
    const double alpha = cone.half_angle;
    const double la = norm2(a), lb = norm2(b);
    auto violates = [&](const Vec& x) {
        return std::abs(dot(x, a)) <= la * resolution && dot(x, b) >= -lb * resolution;
    };
    if (n == 2) {
        const auto sector = detail::sector_interval(cone);
        const int m = std::max(8, static_cast<int>(std::ceil((sector.hi - sector.lo) / resolution)));
        const double h = (sector.hi - sector.lo) / m;
        for (int i = 0; i < m; ++i) {
            const double t = sector.lo + (i + 0.5) * h;
            if (violates({std::cos(t), std::sin(t)})) return false;
        }
        return true;
    }
    // n >= 3: product grid over the cap, coarser than the planar default.
    const double res = std::max(resolution, n == 3 ? 2e-3 : 2e-2);
    const auto frame = detail::orthogonal_complement(cone.axis);
    std::vector<Vec> dirs;
    std::vector<double> wts;
    detail::sphere_grid(n - 1, static_cast<int>(std::ceil(2.0 * std::numbers::pi / res)), dirs, wts);
    const int mpsi = std::max(4, static_cast<int>(std::ceil(alpha / res)));
    const double hpsi = alpha / mpsi;
    for (int i = 0; i < mpsi; ++i) {
        const double psi = (i + 0.5) * hpsi;
        for (const auto& d : dirs) {
            Vec x(n);
            for (int j = 0; j < n; ++j) {
                x[j] = std::cos(psi) * cone.axis[j];
                for (std::size_t f = 0; f < frame.size(); ++f) x[j] += std::sin(psi) * d[f] * frame[f][j];
            }
            if (violates(x)) return false;
        }
    }
    return true;
}

// Paley-Wiener weight w_{K,N}(z) = (1+|z|)^{-N} exp(-H_K(Re z)).
struct PWWeight {
    CompactHull hull;
    int order;

    PWWeight(CompactHull k, int n) : hull(std::move(k)), order(n) {
        if (n < 0) throw std::invalid_argument("PWWeight: order must be nonnegative");
    }
};

inline double pw_weight(const PWWeight& w, std::span<const cplx> z) {
    // Log-space to keep large support-function values from overflowing early.
    const double log_val = -static_cast<double>(w.order) * std::log1p(cnorm2(z)) -
                           support_function(w.hull, real_part(z));
    return std::exp(log_val);
}

}  // namespace conekernel
