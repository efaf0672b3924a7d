#pragma once

// Shared fixtures and independent reference computations for the test suite.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/problem.hpp"
#include "kaczmarz/rng.hpp"

namespace testsupport {

using kaczmarz::DenseMatrix;
using kaczmarz::Problem;
using kaczmarz::SplitMix64;

// The worked 3x2 inconsistent system used throughout:
// A = [[1,0],[0,1],[1,1]], b_hat = [1,1,1].
// Least squares: x_ls = [2/3,2/3], r = [1/3,1/3,-1/3], b = [2/3,2/3,4/3].
inline Problem make_p1() {
    return Problem(DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}}), {1, 1, 1});
}

inline Problem make_p1_with_meta() {
    kaczmarz::ProblemMeta meta;
    meta.x_true = {2.0 / 3.0, 2.0 / 3.0};
    meta.r_injected = {1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0};
    return Problem(DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}}), {1, 1, 1}, meta);
}

// P1 with unit columns: columns divided by sqrt(2).
inline Problem make_p1_unit_columns() {
    const double s = 1.0 / std::sqrt(2.0);
    return Problem(DenseMatrix::from_rows({{s, 0}, {0, s}, {s, s}}), {1, 1, 1});
}

inline double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

inline double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline DenseMatrix random_matrix(int m, int n, SplitMix64& rng) {
    std::vector<double> data(static_cast<std::size_t>(m) * n);
    for (auto& e : data) e = 2.0 * rng.next_double() - 1.0;
    return DenseMatrix(m, n, std::move(data));
}

inline std::vector<double> random_vector(int n, SplitMix64& rng) {
    std::vector<double> v(n);
    for (auto& e : v) e = 2.0 * rng.next_double() - 1.0;
    return v;
}

// Dense Gaussian elimination with partial pivoting; the brute-force side of
// the oracle equivalence checks. Deliberately independent of the SVD path.
inline std::vector<double> solve_linear_system(std::vector<std::vector<double>> M,
                                               std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(M[row][col]) > std::abs(M[pivot][col])) pivot = row;
        if (M[pivot][col] == 0.0) throw std::runtime_error("singular system");
        std::swap(M[col], M[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int row = col + 1; row < n; ++row) {
            const double f = M[row][col] / M[col][col];
            for (int k = col; k < n; ++k) M[row][k] -= f * M[col][k];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (int row = n - 1; row >= 0; --row) {
        double s = rhs[row];
        for (int k = row + 1; k < n; ++k) s -= M[row][k] * x[k];
        x[row] = s / M[row][row];
    }
    return x;
}

// Normal-equations least squares (A^T A) x = A^T b for full-column-rank A.
inline std::vector<double> solve_normal_equations(const DenseMatrix& A,
                                                  const std::vector<double>& b) {
    const int n = A.cols();
    std::vector<std::vector<double>> AtA(n, std::vector<double>(n, 0.0));
    std::vector<double> Atb(n, 0.0);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) AtA[j][k] += A.entry(i, j) * A.entry(i, k);
            Atb[j] += A.entry(i, j) * b[i];
        }
    return solve_linear_system(std::move(AtA), std::move(Atb));
}

}  // namespace testsupport
