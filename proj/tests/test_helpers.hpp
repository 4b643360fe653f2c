#pragma once

#include <random>

#include "conekernel/polynomial.hpp"
#include "conekernel/types.hpp"

namespace testing {

using conekernel::cplx;
using conekernel::CVec;
using conekernel::MultiIndex;
using conekernel::Polynomial;
using conekernel::Vec;

inline cplx random_unit_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng)};
}

inline Polynomial random_poly(std::mt19937_64& rng, int n, int max_degree, int num_terms) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    Polynomial p(n);
    for (int t = 0; t < num_terms; ++t) {
        std::vector<int> e(n, 0);
        int budget = deg(rng);
        std::uniform_int_distribution<int> axis(0, n - 1);
        while (budget-- > 0) e[axis(rng)] += 1;
        p.add_term(MultiIndex(std::move(e)), random_unit_box(rng));
    }
    return p;
}

inline CVec random_cpoint(std::mt19937_64& rng, int n, double scale = 1.0) {
    CVec z(n);
    for (auto& v : z) v = scale * random_unit_box(rng);
    return z;
}

inline Vec random_rpoint(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec x(n);
    for (auto& v : x) v = u(rng);
    return x;
}

}  // namespace testing
