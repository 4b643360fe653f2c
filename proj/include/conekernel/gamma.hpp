#pragma once

#include <cmath>
#include <numbers>

#include "types.hpp"

namespace conekernel {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients. Good to ~1e-13 relative on
// the moderate strip used here (|Re s| <= 10).
inline cplx lanczos_gamma_half_plane(cplx s) {
    static constexpr double kCoef[9] = {
        0.99999999999980993,    676.5203681218851,      -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6,  1.5056327351493116e-7};
    s -= 1.0;
    cplx x = kCoef[0];
    for (int i = 1; i < 9; ++i) x += kCoef[i] / (s + static_cast<double>(i));
    const cplx t = s + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, s + 0.5) * std::exp(-t) * x;
}

}  // namespace detail

inline bool is_gamma_pole(cplx s, double tol = 1e-12) {
    if (std::abs(s.imag()) > tol) return false;
    const double r = std::round(s.real());
    return r <= 0.0 && std::abs(s.real() - r) <= tol;
}

// Gamma function on C minus the poles at 0, -1, -2, ...; reflection formula
// below Re s = 1/2.
inline cplx gamma(cplx s) {
    if (is_gamma_pole(s))
        throw std::domain_error("gamma: pole at s = " + std::to_string(std::lround(s.real())));
    if (s.real() < 0.5) {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        const cplx pi = std::numbers::pi;
        return pi / (std::sin(pi * s) * detail::lanczos_gamma_half_plane(1.0 - s));
    }
    return detail::lanczos_gamma_half_plane(s);
}

}  // namespace conekernel
