#include "kaczmarz/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kaczmarz {

namespace {

double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

}  // namespace

Problem::Problem(DenseMatrix A, std::vector<double> b_hat, std::optional<ProblemMeta> meta)
    : A_(std::move(A)), b_hat_(std::move(b_hat)), meta_(std::move(meta)) {
    if (static_cast<int>(b_hat_.size()) != A_.rows())
        throw std::invalid_argument("Problem: b_hat length does not match row count");
    for (int i = 0; i < A_.rows(); ++i)
        if (A_.row_norm(i) == 0.0)
            throw std::invalid_argument("Problem: row " + std::to_string(i + 1) + " is zero");
    for (int j = 0; j < A_.cols(); ++j)
        if (A_.col_norm(j) == 0.0)
            throw std::invalid_argument("Problem: column " + std::to_string(j + 1) + " is zero");

    if (meta_) {
        if (static_cast<int>(meta_->x_true.size()) != A_.cols())
            throw std::invalid_argument("Problem: meta.x_true length does not match column count");
        if (static_cast<int>(meta_->r_injected.size()) != A_.rows())
            throw std::invalid_argument("Problem: meta.r_injected length does not match row count");
        // The injected noise must be orthogonal to every column of A.
        const double r_norm = norm_of(meta_->r_injected);
        for (int j = 0; j < A_.cols(); ++j) {
            double dot = 0.0;
            for (int i = 0; i < A_.rows(); ++i) dot += A_.entry(i, j) * meta_->r_injected[i];
            if (std::abs(dot) > 1e-10 * A_.col_norm(j) * r_norm)
                throw std::invalid_argument("Problem: meta.r_injected is not orthogonal to column " +
                                            std::to_string(j + 1));
        }
    }
}

RelaxationParams::RelaxationParams(double alpha_, double omega_) : alpha(alpha_), omega(omega_) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("RelaxationParams: alpha must lie in (0,2)");
    if (!(omega > 0.0 && omega < 2.0))
        throw std::invalid_argument("RelaxationParams: omega must lie in (0,2)");
}

}  // namespace kaczmarz
