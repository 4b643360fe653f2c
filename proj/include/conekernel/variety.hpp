#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "cone.hpp"
#include "polynomial.hpp"
#include "types.hpp"

namespace conekernel {

// Parametrized characteristic variety: w in C^d maps to z(w) in C^n through
// n coordinate polynomials. Optional defining polynomials (in z) let the
// sampler assert that the image really sits on the variety.
struct VarietyParam {
    int domain_dim;
    std::vector<Polynomial> map;       // n polynomials in d variables
    std::vector<Polynomial> defining;  // polynomials in n variables, may be empty

    VarietyParam(int d, std::vector<Polynomial> m, std::vector<Polynomial> def = {})
        : domain_dim(d), map(std::move(m)), defining(std::move(def)) {
        if (d < 1) throw std::invalid_argument("VarietyParam: domain dimension must be >= 1");
        if (map.empty()) throw std::invalid_argument("VarietyParam: empty coordinate map");
        for (const auto& p : map)
            if (p.dimension() != d)
                throw std::invalid_argument("VarietyParam: map polynomial dimension mismatch");
        const int n = ambient_dim();
        for (const auto& p : defining)
            if (p.dimension() != n)
                throw std::invalid_argument("VarietyParam: defining polynomial dimension mismatch");
    }

    int ambient_dim() const { return static_cast<int>(map.size()); }

    CVec eval(std::span<const cplx> w) const {
        CVec z(map.size());
        for (std::size_t i = 0; i < map.size(); ++i) z[i] = map[i].eval(w);
        return z;
    }

    // Residual of the defining equations at z; scaled by the point magnitude
    // so the check is meaningful across grid scales.
    double defining_residual(std::span<const cplx> z) const {
        double worst = 0.0;
        for (const auto& p : defining) {
            const double scale = 1.0 + std::pow(cnorm2(z), p.total_degree());
            worst = std::max(worst, std::abs(p.eval(z)) / scale);
        }
        return worst;
    }
};

struct VisibilityCounts {
    std::vector<CVec> visible;            // z(w) with Re z strictly dual
    std::vector<CVec> boundary_proximal;  // |normalized margin| < 1e-6
    int total = 0;
};

// Evaluates the variety map over a parameter grid and classifies the image
// against U_Omega; boundary-proximal points are reported separately since
// they signal the borderline visibility phenomenon.
inline VisibilityCounts sample_visible(const VarietyParam& variety, const Cone& cone,
                                       const std::vector<CVec>& grid,
                                       double defining_tol = 1e-10) {
    VisibilityCounts out;
    for (const auto& w : grid) {
        if (static_cast<int>(w.size()) != variety.domain_dim)
            throw std::invalid_argument("sample_visible: parameter dimension mismatch");
        const CVec z = variety.eval(w);
        const double defect = variety.defining_residual(z);
        if (defect > defining_tol) {
            std::ostringstream os;
            os << "sample_visible: defining polynomial violated (residual " << defect << ") at w = (";
            for (std::size_t i = 0; i < w.size(); ++i)
                os << (i ? ", " : "") << w[i].real() << (w[i].imag() < 0 ? "-" : "+")
                   << std::abs(w[i].imag()) << "i";
            os << ")";
            throw std::invalid_argument(os.str());
        }
        ++out.total;
        const double margin = strict_dual_margin(cone, real_part(z));
        if (margin > 1e-12) out.visible.push_back(z);
        if (std::abs(margin) < 1e-6) out.boundary_proximal.push_back(z);
    }
    return out;
}

struct HullVisibilityReport {
    double fraction;      // U_Ktilde samples connected to a U_Omega sample
    int uk_count;         // samples landing in U_Ktilde
    int connected_count;  // of those, how many touch the visible part
    bool assumption_risk; // nonempty U_Ktilde cluster without visible contact
};

struct VisibilityDiagnostic {
    std::vector<HullVisibilityReport> per_hull;
    static constexpr const char* kLabel = "HEURISTIC";  // sampling cannot certify the assumption
};

namespace detail {

inline double param_distance(const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// Connected components of the epsilon-graph on parameter points.
inline std::vector<int> epsilon_components(const std::vector<CVec>& pts, double eps) {
    const int m = static_cast<int>(pts.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (param_distance(pts[i], pts[j]) <= eps) parent[find(i)] = find(j);
    std::vector<int> root(m);
    for (int i = 0; i < m; ++i) root[i] = find(i);
    return root;
}

inline double median_nearest_neighbor(const std::vector<CVec>& pts) {
    const int m = static_cast<int>(pts.size());
    std::vector<double> nn(m, std::numeric_limits<double>::infinity());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) nn[i] = std::min(nn[i], param_distance(pts[i], pts[j]));
    std::nth_element(nn.begin(), nn.begin() + m / 2, nn.end());
    return nn[m / 2];
}

}  // namespace detail

// Sampling probe of the visibility assumption: for each hull K~ in an
// increasing family, connect the parameter samples whose image lies in U_K~
// by an epsilon-graph (epsilon = 2 x grid spacing) and report the fraction of
// them whose cluster reaches the visible part V n U_Omega. A fraction below
// one flags assumption risk; sampling evidence only, never a certificate.
inline VisibilityDiagnostic visibility_diagnostic(const VarietyParam& variety, const Cone& cone,
                                                  const std::vector<CompactHull>& hulls,
                                                  const std::vector<CVec>& param_grid) {
    if (hulls.empty()) throw std::invalid_argument("visibility_diagnostic: no hulls");
    for (std::size_t h = 0; h + 1 < hulls.size(); ++h)
        for (const auto& p : hulls[h].points)
            if (!hulls[h + 1].contains(p))
                throw std::invalid_argument("visibility_diagnostic: hull sequence must be increasing");
    for (const auto& hull : hulls)
        for (const auto& p : hull.points)
            if (!cone_contains(cone, p))
                throw std::invalid_argument("visibility_diagnostic: hull point outside the cone");
    if (param_grid.size() < 2)
        throw std::invalid_argument("visibility_diagnostic: need at least two parameter samples");

    const double eps = 2.0 * detail::median_nearest_neighbor(param_grid);
    const std::vector<int> component = detail::epsilon_components(param_grid, eps);

    VisibilityDiagnostic diag;
    for (const auto& hull : hulls) {
        std::vector<char> in_uk(param_grid.size(), 0), in_uo(param_grid.size(), 0);
        for (std::size_t i = 0; i < param_grid.size(); ++i) {
            const CVec z = variety.eval(param_grid[i]);
            in_uk[i] = in_UK(hull, z) ? 1 : 0;
            in_uo[i] = in_UOmega(cone, z) ? 1 : 0;
        }
        // A cluster counts as "touching" if it contains a visible sample;
        // restrict the graph to U_K~ samples (U_Omega is a subset of U_K~).
        std::map<int, bool> cluster_touches;
        for (std::size_t i = 0; i < param_grid.size(); ++i)
            if (in_uk[i] && in_uo[i]) cluster_touches[component[i]] = true;
        HullVisibilityReport report{1.0, 0, 0, false};
        for (std::size_t i = 0; i < param_grid.size(); ++i) {
            if (!in_uk[i]) continue;
            ++report.uk_count;
            auto it = cluster_touches.find(component[i]);
            if (it != cluster_touches.end() && it->second) ++report.connected_count;
        }
        report.fraction = report.uk_count == 0
                              ? 1.0  // vacuous
                              : static_cast<double>(report.connected_count) / report.uk_count;
        report.assumption_risk = report.uk_count > 0 && report.fraction < 1.0;
        diag.per_hull.push_back(report);
    }
    return diag;
}

}  // namespace conekernel
