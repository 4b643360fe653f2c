#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "types.hpp"

namespace conekernel {

// Dense two-phase simplex for the small feasibility problems that polyhedral
// cone queries reduce to (a handful of variables and rows). Variables are
// nonnegative; rows are equalities or >= inequalities.
class SimplexSolver {
   public:
    enum class Status { kOptimal, kInfeasible, kUnbounded };

    struct Result {
        Status status;
        double objective = 0.0;
        std::vector<double> solution;
    };

    explicit SimplexSolver(int num_vars) : n_(num_vars) {}

    void add_eq(std::vector<double> row, double rhs) { add_row(std::move(row), rhs, true); }
    void add_ge(std::vector<double> row, double rhs) { add_row(std::move(row), rhs, false); }

    // Minimizes c^T x; pass empty c for pure feasibility.
    Result solve(std::vector<double> minimize = {}) const {
        if (minimize.empty()) minimize.assign(n_, 0.0);

        // Assemble the standard-form tableau: surplus columns for >= rows,
        // then one artificial per row (rows are b-normalized to b >= 0).
        const int m = static_cast<int>(rows_.size());
        int num_surplus = 0;
        for (const auto& r : rows_)
            if (!r.is_eq) ++num_surplus;
        const int total = n_ + num_surplus + m;  // artificials last
        std::vector<std::vector<double>> tab(m, std::vector<double>(total + 1, 0.0));
        std::vector<int> basis(m);
        int surplus_at = n_;
        for (int i = 0; i < m; ++i) {
            const double sgn = rows_[i].rhs < 0.0 ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) tab[i][j] = sgn * rows_[i].coeffs[j];
            if (!rows_[i].is_eq) tab[i][surplus_at++] = -sgn;
            tab[i][n_ + num_surplus + i] = 1.0;
            tab[i][total] = sgn * rows_[i].rhs;
            basis[i] = n_ + num_surplus + i;
        }

        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1(total, 0.0);
        for (int i = 0; i < m; ++i) phase1[n_ + num_surplus + i] = 1.0;
        if (!run(tab, basis, phase1, n_ + num_surplus, total)) return {Status::kUnbounded};
        double art_sum = 0.0;
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n_ + num_surplus) art_sum += tab[i][total];
        if (art_sum > kTol) return {Status::kInfeasible};

        // Drive zero-level artificials out of the basis so that phase 2 cannot
        // push them positive again. Rows with no real pivot candidate are
        // redundant and stay inert (all frozen columns are zero there).
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n_ + num_surplus) continue;
            for (int j = 0; j < n_ + num_surplus; ++j) {
                if (std::abs(tab[i][j]) > kTol) {
                    pivot(tab, basis, i, j, total);
                    break;
                }
            }
        }

        // Phase 2 on the real objective; artificial columns are frozen.
        std::vector<double> phase2(total, 0.0);
        for (int j = 0; j < n_; ++j) phase2[j] = minimize[j];
        if (!run(tab, basis, phase2, n_ + num_surplus, total)) return {Status::kUnbounded};

        Result res{Status::kOptimal, 0.0, std::vector<double>(n_, 0.0)};
        for (int i = 0; i < m; ++i)
            if (basis[i] < n_) res.solution[basis[i]] = tab[i][total];
        for (int j = 0; j < n_; ++j) res.objective += minimize[j] * res.solution[j];
        return res;
    }

    bool feasible() const { return solve().status == Status::kOptimal; }

   private:
    static constexpr double kTol = 1e-9;

    struct Row {
        std::vector<double> coeffs;
        double rhs;
        bool is_eq;
    };

    void add_row(std::vector<double> row, double rhs, bool is_eq) {
        if (static_cast<int>(row.size()) != n_)
            throw std::invalid_argument("SimplexSolver: row length mismatch");
        // Scale each row to unit max coefficient so kTol is meaningful.
        double scale = std::abs(rhs);
        for (double v : row) scale = std::max(scale, std::abs(v));
        if (scale > 0.0) {
            for (double& v : row) v /= scale;
            rhs /= scale;
        }
        rows_.push_back({std::move(row), rhs, is_eq});
    }

    // Simplex iterations with Bland's rule; `frozen_from` marks columns
    // (artificials in phase 2) that may not enter the basis.
    static bool run(std::vector<std::vector<double>>& tab, std::vector<int>& basis,
                    const std::vector<double>& cost, int frozen_from, int total) {
        const int m = static_cast<int>(tab.size());
        const bool phase2 = [&] {
            for (int j = frozen_from; j < total; ++j)
                if (cost[j] != 0.0) return false;
            return true;
        }();
        for (int iter = 0; iter < 10000; ++iter) {
            // Reduced costs r_j = c_j - c_B^T B^{-1} A_j, computed on the fly.
            std::vector<double> y(m);
            for (int i = 0; i < m; ++i) y[i] = cost[basis[i]];
            int entering = -1;
            for (int j = 0; j < total; ++j) {
                if (phase2 && j >= frozen_from) continue;
                bool in_basis = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) in_basis = true;
                if (in_basis) continue;
                double rc = cost[j];
                for (int i = 0; i < m; ++i) rc -= y[i] * tab[i][j];
                if (rc < -kTol) {
                    entering = j;
                    break;  // Bland: first improving index
                }
            }
            if (entering < 0) return true;  // optimal

            int leaving = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (tab[i][entering] > kTol) {
                    const double ratio = tab[i][total] / tab[i][entering];
                    if (ratio < best_ratio - kTol ||
                        (ratio < best_ratio + kTol && (leaving < 0 || basis[i] < basis[leaving]))) {
                        best_ratio = ratio;
                        leaving = i;
                    }
                }
            }
            if (leaving < 0) return false;  // unbounded
            pivot(tab, basis, leaving, entering, total);
        }
        return true;  // iteration cap; treat as converged for these tiny problems
    }

    static void pivot(std::vector<std::vector<double>>& tab, std::vector<int>& basis, int row,
                      int col, int total) {
        const int m = static_cast<int>(tab.size());
        const double piv = tab[row][col];
        for (double& v : tab[row]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = tab[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j <= total; ++j) tab[i][j] -= f * tab[row][j];
        }
        basis[row] = col;
    }

    int n_;
    std::vector<Row> rows_;
};

// True iff x lies in conv(points) (closed hull), up to simplex tolerance.
inline bool in_convex_hull(const std::vector<Vec>& points, std::span<const double> x) {
    if (points.empty()) return false;
    const int n = static_cast<int>(x.size());
    const int k = static_cast<int>(points.size());
    SimplexSolver lp(k);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(k);
        for (int j = 0; j < k; ++j) row[j] = points[j].at(i);
        lp.add_eq(std::move(row), x[i]);
    }
    lp.add_eq(std::vector<double>(k, 1.0), 1.0);
    return lp.feasible();
}

// Largest s with x = sum mu_i g_i, mu_i >= s >= 0. Empty if x is not in the
// closed conical hull at all; +inf when the margin is unbounded. A strictly
// positive value certifies x in the relative interior of cone(generators).
inline std::optional<double> cone_interior_margin(const std::vector<Vec>& generators,
                                                  std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    const int k = static_cast<int>(generators.size());
    SimplexSolver lp(k + 1);  // mu_1..mu_k, s
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(k + 1, 0.0);
        for (int j = 0; j < k; ++j) row[j] = generators[j].at(i);
        lp.add_eq(std::move(row), x[i]);
    }
    for (int j = 0; j < k; ++j) {
        std::vector<double> row(k + 1, 0.0);
        row[j] = 1.0;
        row[k] = -1.0;
        lp.add_ge(std::move(row), 0.0);
    }
    std::vector<double> cost(k + 1, 0.0);
    cost[k] = -1.0;  // maximize s
    auto res = lp.solve(cost);
    if (res.status == SimplexSolver::Status::kInfeasible) return std::nullopt;
    if (res.status == SimplexSolver::Status::kUnbounded)
        return std::numeric_limits<double>::infinity();
    return -res.objective;
}

}  // namespace conekernel
