#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace kaczmarz {

// Dense row-major m x n matrix with cached row and column Euclidean norms.
// Row/column norms are computed once at construction; the entries are
// immutable afterwards. Element access is 0-based; the 1-based convention of
// the solver-facing operations (row/column indices i, j) is handled at the
// operation layer, not here.
class DenseMatrix {
  public:
    DenseMatrix(int rows, int cols, std::vector<double> entries);

    // Convenience for tests and small literals: rows given top to bottom.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double entry(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::span<const double> row(int i) const {
        return {entries_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }
    const std::vector<double>& entries() const { return entries_; }

    double row_norm(int i) const { return row_norms_[i]; }
    double col_norm(int j) const { return col_norms_[j]; }
    const std::vector<double>& row_norms() const { return row_norms_; }
    const std::vector<double>& col_norms() const { return col_norms_; }

    double frobenius_norm() const { return frob_norm_; }

    double min_row_norm() const;

  private:
    int rows_;
    int cols_;
    std::vector<double> entries_;
    std::vector<double> row_norms_;
    std::vector<double> col_norms_;
    double frob_norm_;
};

// Scale every column to unit Euclidean norm. Returns the scaled matrix and
// the diagonal D = (1/||A^1||, ..., 1/||A^n||), so A_unit = A * diag(D) and a
// solution z of the scaled problem maps back as x = diag(D) * z.
// Throws std::invalid_argument naming the first zero column.
std::pair<DenseMatrix, std::vector<double>> normalize_columns(const DenseMatrix& A);

// <A_i, x> - rhs_i for the 1-based row index i. Throws std::out_of_range.
double row_residual(const DenseMatrix& A, std::span<const double> x,
                    std::span<const double> rhs, int i);

// <y, A^j> for the 1-based column index j. Throws std::out_of_range.
double column_correlation(const DenseMatrix& A, std::span<const double> y, int j);

}  // namespace kaczmarz
