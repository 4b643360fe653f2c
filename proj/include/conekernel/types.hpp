#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace conekernel {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// <x, z> for real x and complex z.
inline cplx pairing(std::span<const double> x, std::span<const cplx> z) {
    if (x.size() != z.size())
        throw std::invalid_argument("pairing: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * z[i];
    return s;
}

inline double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double cnorm2(std::span<const cplx> a) {
    double s = 0.0;
    for (const cplx& v : a) s += std::norm(v);
    return std::sqrt(s);
}

inline Vec real_part(std::span<const cplx> z) {
    Vec r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
    return r;
}

inline Vec imag_part(std::span<const cplx> z) {
    Vec r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].imag();
    return r;
}

// x^k for integer k >= 0 by repeated multiplication.
inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

inline cplx ipow(cplx x, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Principal-branch power b^e = exp(e log b), arg(b) in (-pi, pi].
// The caller is responsible for keeping b off the cut (-inf, 0].
inline cplx principal_pow(cplx b, cplx e) {
    return std::exp(e * std::log(b));
}

inline bool on_negative_real_axis(cplx b) {
    return b.imag() == 0.0 && b.real() <= 0.0;
}

// Falling factorial (lambda)_m = lambda (lambda-1) ... (lambda-m+1).
inline cplx falling_factorial(cplx lambda, int m) {
    cplx r = 1.0;
    for (int j = 0; j < m; ++j) r *= (lambda - static_cast<double>(j));
    return r;
}

}  // namespace conekernel
