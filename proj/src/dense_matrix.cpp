#include "kaczmarz/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kaczmarz {

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ < 1 || cols_ < 1)
        throw std::invalid_argument("DenseMatrix: dimensions must be at least 1x1");
    if (entries_.size() != static_cast<std::size_t>(rows_) * cols_)
        throw std::invalid_argument("DenseMatrix: entry count does not match dimensions");

    row_norms_.resize(rows_);
    col_norms_.assign(cols_, 0.0);
    double frob_sq = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double rs = 0.0;
        for (int j = 0; j < cols_; ++j) {
            const double e = entry(i, j);
            rs += e * e;
            col_norms_[j] += e * e;
        }
        row_norms_[i] = std::sqrt(rs);
        frob_sq += rs;
    }
    for (int j = 0; j < cols_; ++j) col_norms_[j] = std::sqrt(col_norms_[j]);
    frob_norm_ = std::sqrt(frob_sq);
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int m = static_cast<int>(rows.size());
    if (m == 0) throw std::invalid_argument("DenseMatrix::from_rows: no rows");
    const int n = static_cast<int>(rows.begin()->size());
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m) * n);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return DenseMatrix(m, n, std::move(data));
}

DenseMatrix DenseMatrix::identity(int n) {
    std::vector<double> data(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) data[static_cast<std::size_t>(i) * n + i] = 1.0;
    return DenseMatrix(n, n, std::move(data));
}

double DenseMatrix::min_row_norm() const {
    return *std::min_element(row_norms_.begin(), row_norms_.end());
}

std::pair<DenseMatrix, std::vector<double>> normalize_columns(const DenseMatrix& A) {
    std::vector<double> scale(A.cols());
    for (int j = 0; j < A.cols(); ++j) {
        const double nj = A.col_norm(j);
        if (nj == 0.0)
            throw std::invalid_argument("normalize_columns: column " + std::to_string(j + 1) +
                                        " is zero");
        scale[j] = 1.0 / nj;
    }
    std::vector<double> data(A.entries());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            data[static_cast<std::size_t>(i) * A.cols() + j] *= scale[j];
    return {DenseMatrix(A.rows(), A.cols(), std::move(data)), std::move(scale)};
}

double row_residual(const DenseMatrix& A, std::span<const double> x, std::span<const double> rhs,
                    int i) {
    if (i < 1 || i > A.rows())
        throw std::out_of_range("row_residual: row index " + std::to_string(i) + " outside [1," +
                                std::to_string(A.rows()) + "]");
    const auto row = A.row(i - 1);
    double dot = 0.0;
    for (int j = 0; j < A.cols(); ++j) dot += row[j] * x[j];
    return dot - rhs[i - 1];
}

double column_correlation(const DenseMatrix& A, std::span<const double> y, int j) {
    if (j < 1 || j > A.cols())
        throw std::out_of_range("column_correlation: column index " + std::to_string(j) +
                                " outside [1," + std::to_string(A.cols()) + "]");
    const int j0 = j - 1;
    double dot = 0.0;
    for (int i = 0; i < A.rows(); ++i) dot += y[i] * A.entry(i, j0);
    return dot;
}

}  // namespace kaczmarz
