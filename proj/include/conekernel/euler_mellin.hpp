#pragma once

#include <cmath>

#include "cone.hpp"
#include "errors.hpp"
#include "gamma.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace conekernel {

// Taylor-subtraction order q for the regularized Mellin formula; must satisfy
// q > Re lambda - 1 at the point of use.
struct RegularizationOrder {
    int q;
    explicit RegularizationOrder(int q_) : q(q_) {
        if (q_ < 0) throw std::invalid_argument("RegularizationOrder: q must be >= 0");
    }
};

// Spectral parameter lambda. Construction is unrestricted (the Euler operator
// itself is defined for every lambda); operations that invert it or feed the
// Mellin formula must call require_regular() to enforce lambda outside N_0.
struct LambdaParam {
    cplx value;

    explicit LambdaParam(cplx v) : value(v) {}

    double distance_to_naturals() const {
        const double k = std::max(0.0, std::round(value.real()));
        return std::hypot(value.real() - k, value.imag());
    }

    bool near_natural(double tol = 1e-8) const { return distance_to_naturals() < tol; }

    void require_regular() const {
        if (near_natural())
            throw std::domain_error(
                "lambda must stay away from the nonnegative integers (within 1e-8 of N_0)");
    }
};

// Smallest safe default regularization order: max(0, ceil(Re lambda) + 1).
inline RegularizationOrder default_reg_order(cplx lambda) {
    const int q = static_cast<int>(std::ceil(lambda.real())) + 1;
    return RegularizationOrder(std::max(0, q));
}

// Finite point-mass measure nu = sum c_j delta_{x_j}; its Fourier-Laplace
// transform sum c_j e^{<x_j, z>} is the Paley-Wiener input to the Mellin
// operator.
struct AtomicMeasure {
    std::vector<Vec> points;
    CVec weights;

    AtomicMeasure(std::vector<Vec> pts, CVec wts)
        : points(std::move(pts)), weights(std::move(wts)) {
        if (points.empty() || points.size() != weights.size())
            throw std::invalid_argument("AtomicMeasure: points/weights must be nonempty and matched");
        const std::size_t n = points.front().size();
        for (const auto& p : points)
            if (p.size() != n) throw std::invalid_argument("AtomicMeasure: dimension mismatch");
    }

    int dimension() const { return static_cast<int>(points.front().size()); }

    void require_supported_in(const CompactHull& hull) const {
        for (const auto& p : points)
            if (!hull.contains(p))
                throw std::domain_error("AtomicMeasure: atom outside the declared hull");
    }

    cplx fourier_laplace(std::span<const cplx> z) const {
        cplx s = 0.0;
        for (std::size_t j = 0; j < points.size(); ++j)
            s += weights[j] * std::exp(pairing(points[j], z));
        return s;
    }
};

namespace detail {

// e^{-w} minus its Taylor polynomial of degree q, evaluated without the
// cancellation of a direct subtraction when |w| is small: the remainder is
// summed as the tail series starting at k = q+1.
inline cplx exp_taylor_remainder(cplx w, int q) {
    if (std::abs(w) <= 30.0) {
        cplx term = 1.0;
        for (int k = 1; k <= q + 1; ++k) term *= -w / static_cast<double>(k);
        cplx sum = term;
        for (int k = q + 2; k < 500; ++k) {
            term *= -w / static_cast<double>(k);
            sum += term;
            if (std::abs(term) <= 1e-20 * (std::abs(sum) + 1e-30)) break;
        }
        return sum;
    }
    cplx taylor = 0.0, term = 1.0;
    for (int k = 0; k <= q; ++k) {
        taylor += term;
        term *= -w / static_cast<double>(k + 1);
    }
    return std::exp(-w) - taylor;
}

// Pole sum + regularized [0,1] integral: the entire-in-z part of the Mellin
// formula, equal to (E_lambda^z)^{-1} e^{<x,z>} at beta = -<x,z>. Valid for
// any beta; only the tail integral needs Re beta > 0.
inline cplx mellin_euler_part(cplx lambda, cplx beta, int q) {
    cplx sum = 0.0;
    cplx pow_term = 1.0;  // (-beta)^k / k!
    double kfac = 1.0;
    for (int k = 0; k <= q; ++k) {
        if (k > 0) {
            pow_term *= -beta;
            kfac *= k;
        }
        sum += pow_term / (kfac * (static_cast<double>(k) - lambda));
    }
    auto integrand = [&](double t) {
        return exp_taylor_remainder(t * beta, q) * principal_pow(cplx(t, 0.0), -lambda - 1.0);
    };
    return sum + integrate(integrand, 0.0, 1.0).value;
}

// Truncation point for the tail integral of e^{-t beta} t^{-lambda-1}.
inline double tail_cutoff(cplx lambda, double re_beta) {
    double T = 2.0;
    for (int i = 0; i < 500; ++i) {
        const double bound =
            std::exp(-T * re_beta) * std::pow(T, std::max(0.0, -lambda.real()));
        if (bound < 1e-13) return T;
        T *= 2.0;
    }
    throw NumericalError("mellin tail: no admissible truncation point", 0.0);
}

inline cplx mellin_tail(cplx lambda, cplx beta) {
    const double T = tail_cutoff(lambda, beta.real());
    auto integrand = [&](double t) {
        return std::exp(-t * beta) * principal_pow(cplx(t, 0.0), -lambda - 1.0);
    };
    return integrate(integrand, 1.0, T).value;
}

}  // namespace detail

// Regularized Mellin representation of Gamma(-lambda) beta^lambda:
//
//   sum_{k<=q} (-beta)^k / (k! (k-lambda))
//     + int_0^1 (e^{-t beta} - Taylor_q) t^{-lambda-1} dt
//     + int_1^inf e^{-t beta} t^{-lambda-1} dt
//
// for Re beta > 0, lambda outside N_0, and q > Re lambda - 1.
inline cplx regularized_mellin(const LambdaParam& lambda, cplx beta,
                               const RegularizationOrder& reg) {
    lambda.require_regular();
    if (beta.real() <= 0.0)
        throw std::domain_error("regularized_mellin: requires Re beta > 0");
    if (!(static_cast<double>(reg.q) > lambda.value.real() - 1.0))
        throw std::invalid_argument("regularized_mellin: q must exceed Re lambda - 1");
    return detail::mellin_euler_part(lambda.value, beta, reg.q) +
           detail::mellin_tail(lambda.value, beta);
}

// E_lambda^z on polynomials: each term c z^alpha picks up the factor
// (|alpha| - lambda).
inline Polynomial euler_apply(const LambdaParam& lambda, const Polynomial& p) {
    Polynomial r(p.dimension());
    for (const auto& [a, c] : p.terms())
        r.add_term(a, c * (static_cast<double>(a.order()) - lambda.value));
    return r;
}

// Termwise inverse of E_lambda^z; requires lambda outside N_0 so that no
// factor |alpha| - lambda vanishes.
inline Polynomial euler_inverse(const LambdaParam& lambda, const Polynomial& p) {
    lambda.require_regular();
    Polynomial r(p.dimension());
    for (const auto& [a, c] : p.terms())
        r.add_term(a, c / (static_cast<double>(a.order()) - lambda.value));
    return r;
}

// (E_lambda^z)^{-1} e^{<x,.>} evaluated at z, through the regularized
// representation with the homogeneous parts <x,z>^k / k!. Entire in z, so no
// dual-cone restriction applies here.
inline cplx euler_inverse_exp(const LambdaParam& lambda, std::span<const double> x,
                              std::span<const cplx> z, const RegularizationOrder& reg) {
    lambda.require_regular();
    if (!(static_cast<double>(reg.q) > lambda.value.real() - 1.0))
        throw std::invalid_argument("euler_inverse_exp: q must exceed Re lambda - 1");
    return detail::mellin_euler_part(lambda.value, -pairing(x, z), reg.q);
}

// Mellin-type operator on an atomic measure's Fourier-Laplace transform:
// M_lambda^z f = (E_lambda^z)^{-1} f + int_1^inf t^{-lambda-1} f(tz) dt.
// Requires z in U_K so the tail converges for every atom in K; agrees with
// Gamma(-lambda) sum_j c_j (-<x_j,z>)^lambda.
inline cplx mellin_M(const LambdaParam& lambda, const AtomicMeasure& nu,
                     std::span<const cplx> z, const RegularizationOrder& reg,
                     const CompactHull& hull) {
    lambda.require_regular();
    if (!in_UK(hull, z))
        throw std::domain_error("mellin_M: z outside U_K, tail integral would diverge");
    nu.require_supported_in(hull);
    cplx total = 0.0;
    for (std::size_t j = 0; j < nu.points.size(); ++j) {
        const cplx beta = -pairing(nu.points[j], z);
        total += nu.weights[j] *
                 (detail::mellin_euler_part(lambda.value, beta, reg.q) +
                  detail::mellin_tail(lambda.value, beta));
    }
    return total;
}

struct AnnihilationDetails {
    double residual;         // |z . grad M - lambda M|
    double cr_inconsistency; // max gap between real- and imaginary-step derivatives
    cplx value;              // M at the base point
};

// Finite-difference check of E_lambda^z M_lambda^z f = 0 on U_K. The
// directional derivative z . grad uses real-coordinate central differences
// (second order in the step); the imaginary-coordinate estimate of the same
// partial is reported as a Cauchy-Riemann consistency figure.
inline AnnihilationDetails euler_annihilation_details(const LambdaParam& lambda,
                                                      const AtomicMeasure& nu,
                                                      std::span<const cplx> z,
                                                      const RegularizationOrder& reg,
                                                      const CompactHull& hull,
                                                      double step = 0.0) {
    const int n = static_cast<int>(z.size());
    const double h = step > 0.0 ? step : 1e-5 * cnorm2(z);
    if (h <= 0.0) throw std::invalid_argument("euler_annihilation_check: bad step");

    CVec base(z.begin(), z.end());
    std::vector<CVec> stencil;
    for (int i = 0; i < n; ++i) {
        for (const cplx delta : {cplx(h, 0.0), cplx(-h, 0.0), cplx(0.0, h), cplx(0.0, -h)}) {
            CVec p = base;
            p[i] += delta;
            stencil.push_back(std::move(p));
        }
    }
    for (const auto& p : stencil)
        if (!in_UK(hull, p))
            throw std::domain_error("euler_annihilation_check: FD stencil leaves U_K");

    auto M = [&](const CVec& point) { return mellin_M(lambda, nu, point, reg, hull); };
    const cplx center = M(base);
    cplx directional = 0.0;
    double cr_gap = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx d_re = (M(stencil[4 * i]) - M(stencil[4 * i + 1])) / (2.0 * h);
        const cplx d_im = (M(stencil[4 * i + 2]) - M(stencil[4 * i + 3])) / (cplx(0.0, 2.0 * h));
        cr_gap = std::max(cr_gap, std::abs(d_re - d_im));
        directional += base[i] * d_re;
    }
    return {std::abs(directional - lambda.value * center), cr_gap, center};
}

inline double euler_annihilation_check(const LambdaParam& lambda, const AtomicMeasure& nu,
                                       std::span<const cplx> z, const RegularizationOrder& reg,
                                       const CompactHull& hull, double step = 0.0) {
    return euler_annihilation_details(lambda, nu, z, reg, hull, step).residual;
}

struct GrowthReport {
    double max_weighted = 0.0;
    CVec argmax;
};

// Paley-Wiener growth probe for (E_lambda^z)^{-1}: the inverse of an
// exponential sum supported in K should stay bounded under the weight of
// conv(K u {0}), i.e. exp(-max(0, H_K)).
inline GrowthReport growth_diagnostic(const LambdaParam& lambda, const AtomicMeasure& nu,
                                      const CompactHull& hull, int order,
                                      const std::vector<CVec>& samples) {
    lambda.require_regular();
    const RegularizationOrder reg(
        static_cast<int>(std::ceil(std::max(0.0, lambda.value.real()))));
    GrowthReport report;
    for (const auto& z : samples) {
        cplx g = 0.0;
        for (std::size_t j = 0; j < nu.points.size(); ++j)
            g += nu.weights[j] * euler_inverse_exp(lambda, nu.points[j], z, reg);
        const double hk = support_function(hull, real_part(z));
        const double weighted =
            std::abs(g) * std::exp(-static_cast<double>(order) * std::log1p(cnorm2(z)) -
                                   std::max(0.0, hk));
        if (weighted > report.max_weighted) {
            report.max_weighted = weighted;
            report.argmax = z;
        }
    }
    return report;
}

}  // namespace conekernel
