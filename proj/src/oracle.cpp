#include "kaczmarz/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace kaczmarz {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& A) {
    Eigen::MatrixXd M(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) M(i, j) = A.entry(i, j);
    return M;
}

// v_out = B * (B^T v) for a column-major m x rank basis block.
std::vector<double> project_with_basis(const std::vector<double>& basis, int dim, int rank,
                                       std::span<const double> v) {
    std::vector<double> coeff(rank, 0.0);
    for (int c = 0; c < rank; ++c) {
        const double* col = basis.data() + static_cast<std::size_t>(c) * dim;
        double dot = 0.0;
        for (int i = 0; i < dim; ++i) dot += col[i] * v[i];
        coeff[c] = dot;
    }
    std::vector<double> out(dim, 0.0);
    for (int c = 0; c < rank; ++c) {
        const double* col = basis.data() + static_cast<std::size_t>(c) * dim;
        for (int i = 0; i < dim; ++i) out[i] += coeff[c] * col[i];
    }
    return out;
}

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> OracleSolution::project_range(std::span<const double> v) const {
    return project_with_basis(range_basis, static_cast<int>(r.size()), rank, v);
}

std::vector<double> OracleSolution::project_rowspace(std::span<const double> v) const {
    return project_with_basis(rowspace_basis, static_cast<int>(x_ls_min_norm.size()), rank, v);
}

double OracleSolution::range_defect(std::span<const double> v) const {
    const auto p = project_range(v);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = v[i] - p[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double OracleSolution::nullspace_norm(std::span<const double> v) const {
    const auto p = project_rowspace(v);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = v[i] - p[i];
        s += d * d;
    }
    return std::sqrt(s);
}

OracleSolution oracle_solve(const DenseMatrix& A, std::span<const double> b_hat) {
    if (static_cast<int>(b_hat.size()) != A.rows())
        throw std::invalid_argument("oracle_solve: b_hat length does not match row count");

    const int m = A.rows();
    const int n = A.cols();
    const Eigen::MatrixXd M = to_eigen(A);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    const double cutoff = 1e-12 * std::max(m, n) * sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    if (rank == 0) throw std::runtime_error("oracle_solve: numerically zero matrix");

    Eigen::Map<const Eigen::VectorXd> bh(b_hat.data(), m);
    const Eigen::MatrixXd Ur = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXd Vr = svd.matrixV().leftCols(rank);

    const Eigen::VectorXd ut_b = Ur.transpose() * bh;
    const Eigen::VectorXd b_clean = Ur * ut_b;
    const Eigen::VectorXd x_ls = Vr * (ut_b.array() / sv.head(rank).array()).matrix();

    OracleSolution out;
    out.rank = rank;
    out.sigma.assign(sv.data(), sv.data() + rank);
    out.delta = sv(rank - 1);
    out.cond_k = sv(0) / sv(rank - 1);
    out.frob_norm = A.frobenius_norm();
    out.cond_k_hat = out.frob_norm / sv(rank - 1);
    out.x_ls_min_norm.assign(x_ls.data(), x_ls.data() + n);
    out.b_clean.assign(b_clean.data(), b_clean.data() + m);
    out.r.resize(m);
    for (int i = 0; i < m; ++i) out.r[i] = b_hat[i] - out.b_clean[i];
    out.range_basis.assign(Ur.data(), Ur.data() + static_cast<std::size_t>(m) * rank);
    out.rowspace_basis.assign(Vr.data(), Vr.data() + static_cast<std::size_t>(n) * rank);
    return out;
}

double distance_to_lss(const OracleSolution& oracle, std::span<const double> x) {
    if (x.size() != oracle.x_ls_min_norm.size())
        throw std::invalid_argument("distance_to_lss: dimension mismatch");
    std::vector<double> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - oracle.x_ls_min_norm[i];
    return norm_of(oracle.project_rowspace(diff));
}

double noise_radius(const OracleSolution& oracle, const DenseMatrix& A) {
    double worst = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        worst = std::max(worst, std::abs(oracle.r[i]) / A.row_norm(i));
    return oracle.cond_k_hat * worst;
}

double rek_bound(const OracleSolution& oracle, double x_ls_norm, long k) {
    if (k < 0) throw std::invalid_argument("rek_bound: negative iteration count");
    const double base = 1.0 - 1.0 / (oracle.cond_k_hat * oracle.cond_k_hat);
    const double factor = std::pow(base, static_cast<double>(k / 2));
    return factor * (1.0 + 2.0 * oracle.cond_k * oracle.cond_k) * x_ls_norm * x_ls_norm;
}

double mrek_rate(const OracleSolution& unit_column_oracle, double alpha, int n) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("mrek_rate: alpha must lie in (0,2)");
    const double d = unit_column_oracle.delta;
    const double inside = 1.0 - d * d * alpha * (2.0 - alpha) / n;
    return std::sqrt(std::max(0.0, inside));
}

}  // namespace kaczmarz
