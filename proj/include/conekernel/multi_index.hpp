#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

namespace conekernel {

// Exponent vector alpha in N_0^n.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {
        for (int v : exponents)
            if (v < 0) throw std::invalid_argument("MultiIndex: negative exponent");
    }
    static MultiIndex zero(int n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(int n, int i) {
        std::vector<int> e(n, 0);
        e.at(i) = 1;
        return MultiIndex(std::move(e));
    }

    int dimension() const { return static_cast<int>(exponents.size()); }

    // |alpha| = sum of exponents.
    int order() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

    bool operator==(const MultiIndex& o) const { return exponents == o.exponents; }
};

// Graded lexicographic order: first by |alpha|, ties broken lexicographically.
// Gives polynomials a deterministic term order for reproducible output.
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        return a.exponents < b.exponents;
    }
};

}  // namespace conekernel
