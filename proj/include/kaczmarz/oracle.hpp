#pragma once

#include <span>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"

namespace kaczmarz {

// Exact reference quantities for an (A, b_hat) pair, computed from a full
// singular value decomposition: the minimum-norm least-squares solution, the
// orthogonal decomposition b_hat = b_clean + r with r in N(A^T), the positive
// singular values, and the condition numbers entering the rate bounds.
//
// Also carries orthonormal bases of R(A) and R(A^T) so callers can evaluate
// the projections behind the membership and distance checks.
struct OracleSolution {
    std::vector<double> x_ls_min_norm;  // A^+ b_hat
    std::vector<double> r;              // P_{N(A^T)} b_hat
    std::vector<double> b_clean;        // b_hat - r
    std::vector<double> sigma;          // positive singular values, descending
    int rank = 0;
    double delta = 0.0;        // sigma_rank (smallest positive singular value)
    double cond_k = 0.0;       // sigma_1 / sigma_rank
    double cond_k_hat = 0.0;   // ||A^+||_2 * ||A||_F
    double frob_norm = 0.0;

    // Orthonormal bases stored column-major: m x rank for R(A), n x rank for
    // R(A^T).
    std::vector<double> range_basis;
    std::vector<double> rowspace_basis;

    std::vector<double> project_range(std::span<const double> v) const;     // P_{R(A)} v
    std::vector<double> project_rowspace(std::span<const double> v) const;  // P_{R(A^T)} v
    // Distance of v from R(A) (norm of the null-space component of v).
    double range_defect(std::span<const double> v) const;
    // ||P_{N(A)} v||.
    double nullspace_norm(std::span<const double> v) const;
};

// Full-SVD solve with rank cutoff sigma_i > eps * sigma_1,
// eps = 1e-12 * max(m, n).
OracleSolution oracle_solve(const DenseMatrix& A, std::span<const double> b_hat);

// Distance of x from the affine set LSS(A; b_hat): the norm of the component
// of x - x_ls outside N(A).
double distance_to_lss(const OracleSolution& oracle, std::span<const double> x);

// Radius bound for plain randomized Kaczmarz on an inconsistent system:
// cond_k_hat * max_i |r_i| / ||A_i||.
double noise_radius(const OracleSolution& oracle, const DenseMatrix& A);

// Expectation bound of the randomized extended method at iteration k:
// (1 - 1/cond_k_hat^2)^floor(k/2) * (1 + 2*cond_k^2) * x_ls_norm^2.
double rek_bound(const OracleSolution& oracle, double x_ls_norm, long k);

// Geometric decay rate of the maximal-residual column sweep on a unit-column
// matrix: sqrt(1 - delta^2 * alpha * (2 - alpha) / n). The oracle must have
// been computed on the column-normalized matrix; alpha must lie in (0,2).
double mrek_rate(const OracleSolution& unit_column_oracle, double alpha, int n);

}  // namespace kaczmarz
