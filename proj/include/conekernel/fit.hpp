#pragma once

#include <Eigen/Dense>

#include "conical.hpp"
#include "sigma_grid.hpp"

namespace conekernel {

struct FitReport {
    CVec coefficients;
    double relative_residual = 0.0;  // weighted ell2, relative to the target norm
    double condition_estimate = 1.0;
    bool rank_deficient = false;
    int visible_count = 0;  // dictionary provenance, when sampled from a variety
    int total_sampled = 0;
};

// Weighted least-squares fit of the target against the span of the dictionary
// kernels on the Sigma grid. Column-pivoted QR throughout (no normal
// equations); rank-deficient dictionaries fall back to the minimum-norm
// solution through a complete orthogonal decomposition and are flagged.
inline FitReport least_squares_fit(const std::vector<ConicalFunction>& dictionary,
                                   const std::vector<CVec>& target, const SigmaGrid& grid) {
    if (dictionary.empty()) throw std::invalid_argument("least_squares_fit: empty dictionary");
    const int L = dictionary.front().num_components();
    const cplx lambda = dictionary.front().lambda();
    for (const auto& f : dictionary) {
        if (f.num_components() != L)
            throw std::invalid_argument("least_squares_fit: mixed component counts");
        if (std::abs(f.lambda() - lambda) > 1e-13)
            throw std::invalid_argument("least_squares_fit: dictionary elements must share lambda");
    }
    if (target.size() != grid.size())
        throw std::invalid_argument("least_squares_fit: target/grid sample counts differ");
    for (const auto& t : target)
        if (static_cast<int>(t.size()) != L)
            throw std::invalid_argument("least_squares_fit: target component count mismatch");

    const int rows = static_cast<int>(grid.size()) * L;
    const int cols = static_cast<int>(dictionary.size());
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd b(rows);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double sw = std::sqrt(grid.weights[p]);
        for (int k = 0; k < cols; ++k) {
            const CVec col = eval_conical(dictionary[k], grid.points[p]);
            for (int l = 0; l < L; ++l) A(static_cast<int>(p) * L + l, k) = sw * col[l];
        }
        for (int l = 0; l < L; ++l) b(static_cast<int>(p) * L + l) = sw * target[p][l];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    const int rank = static_cast<int>(qr.rank());
    const auto& R = qr.matrixR();
    FitReport report;
    report.condition_estimate =
        rank > 0 ? std::abs(R(0, 0)) / std::abs(R(rank - 1, rank - 1)) : 0.0;
    report.rank_deficient = rank < cols;

    Eigen::VectorXcd coeffs;
    if (report.rank_deficient) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
        coeffs = cod.solve(b);  // minimum-norm tie-break
    } else {
        coeffs = qr.solve(b);
    }

    const double target_norm = b.norm();
    const double residual = (A * coeffs - b).norm();
    report.relative_residual = target_norm > 0.0 ? residual / target_norm : residual;
    report.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
    return report;
}

// Samples a ConicalFunction over a grid, component values per point.
inline std::vector<CVec> sample_on_grid(const ConicalFunction& f, const SigmaGrid& grid) {
    std::vector<CVec> samples;
    samples.reserve(grid.size());
    for (const auto& x : grid.points) samples.push_back(eval_conical(f, x));
    return samples;
}

}  // namespace conekernel
