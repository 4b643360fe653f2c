#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace conekernel {

struct QuadOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-12;
    int max_panels = 8000;
};

struct QuadOutcome {
    cplx value;
    double error_estimate;
    int panels;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<cplx, double> gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const cplx fc = f(center);
    cplx resg = fc * kWg[3];
    cplx resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const cplx sum = f(center - dx) + f(center + dx);
        resk += kWgk[j] * sum;
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    return {resk * half, std::abs(resk - resg) * std::abs(half)};
}

struct Panel {
    double a, b, err;
    cplx value;
    bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of a complex-valued integrand
// over [a, b]; bisects the worst panel until the summed error estimate meets
// max(abs_tol, rel_tol * |integral|).
template <class F>
QuadOutcome integrate(F&& f, double a, double b, QuadOptions opt = {}) {
    auto [v0, e0] = detail::gk15(f, a, b);
    std::priority_queue<detail::Panel> queue;
    queue.push({a, b, e0, v0});
    cplx total = v0;
    double total_err = e0;
    int panels = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (panels >= opt.max_panels)
            throw NumericalError("quadrature: panel budget exhausted, achieved abs error " +
                                     std::to_string(total_err),
                                 total_err);
        detail::Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto [vl, el] = detail::gk15(f, worst.a, mid);
        auto [vr, er] = detail::gk15(f, mid, worst.b);
        total += vl + vr - worst.value;
        total_err += el + er - worst.err;
        queue.push({worst.a, mid, el, vl});
        queue.push({mid, worst.b, er, vr});
        ++panels;
    }
    return {total, total_err, panels};
}

}  // namespace conekernel
