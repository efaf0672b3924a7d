#include "kaczmarz/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kaczmarz {

int cyclic_next(long k, int size) {
    return static_cast<int>(k % size) + 1;
}

AlmostCyclicCheck validate_almost_cyclic(const std::vector<int>& schedule, int size, int window) {
    if (schedule.empty()) throw std::invalid_argument("validate_almost_cyclic: empty schedule");
    if (size < 1) throw std::invalid_argument("validate_almost_cyclic: size must be positive");
    if (window < 1) throw std::invalid_argument("validate_almost_cyclic: window must be positive");
    for (int e : schedule)
        if (e < 1 || e > size)
            throw std::invalid_argument("validate_almost_cyclic: entry " + std::to_string(e) +
                                        " outside [1," + std::to_string(size) + "]");

    const int len = static_cast<int>(schedule.size());
    std::vector<char> seen(static_cast<std::size_t>(size) + 1);
    for (int start = 0; start < len; ++start) {
        std::fill(seen.begin(), seen.end(), 0);
        int covered = 0;
        const int span = std::min(window, len);  // beyond one period the window repeats
        for (int t = 0; t < span; ++t) {
            const int e = schedule[(start + t) % len];
            if (!seen[e]) {
                seen[e] = 1;
                ++covered;
            }
        }
        if (covered < size) {
            AlmostCyclicCheck check;
            check.ok = false;
            check.first_failing_window = start + 1;
            for (int e = 1; e <= size; ++e)
                if (!seen[e]) {
                    check.missing_index = e;
                    break;
                }
            check.message = "window of length " + std::to_string(window) + " starting at position " +
                            std::to_string(check.first_failing_window) + " misses index " +
                            std::to_string(check.missing_index);
            return check;
        }
    }
    return {};
}

namespace {

int argmax_abs(const std::vector<double>& values) {
    int best = 0;
    double best_abs = std::abs(values[0]);
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        const double a = std::abs(values[i]);
        if (a > best_abs) {  // strict: ties keep the smallest index
            best_abs = a;
            best = i;
        }
    }
    return best + 1;
}

}  // namespace

int max_residual_row(const DenseMatrix& A, std::span<const double> x, std::span<const double> rhs,
                     bool weight_by_row_norm) {
    std::vector<double> resid(A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        double dot = 0.0;
        const auto row = A.row(i);
        for (int j = 0; j < A.cols(); ++j) dot += row[j] * x[j];
        resid[i] = dot - rhs[i];
        if (weight_by_row_norm) resid[i] /= A.row_norm(i);
    }
    return argmax_abs(resid);
}

int max_correlation_col(const DenseMatrix& A, std::span<const double> y) {
    std::vector<double> corr(A.cols(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        const auto row = A.row(i);
        const double yi = y[i];
        for (int j = 0; j < A.cols(); ++j) corr[j] += yi * row[j];
    }
    return argmax_abs(corr);
}

std::pair<IndexDistribution, IndexDistribution> build_distributions(const DenseMatrix& A) {
    IndexDistribution p, q;
    p.weights.resize(A.rows());
    q.weights.resize(A.cols());
    double total = 0.0;
    for (int i = 0; i < A.rows(); ++i) total += A.row_norm(i) * A.row_norm(i);
    for (int i = 0; i < A.rows(); ++i) p.weights[i] = A.row_norm(i) * A.row_norm(i) / total;
    for (int j = 0; j < A.cols(); ++j) q.weights[j] = A.col_norm(j) * A.col_norm(j) / total;
    return {std::move(p), std::move(q)};
}

int sample_index(const IndexDistribution& dist, SplitMix64& rng) {
    const double u = rng.next_double();
    double cum = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(dist.weights.size()); ++i) {
        if (dist.weights[i] > 0.0) last_positive = i;
        cum += dist.weights[i];
        if (u < cum) return i + 1;
    }
    return last_positive + 1;  // u landed in the rounding gap below 1
}

ControlState::ControlState(const ControlSpec& spec, const DenseMatrix& A, bool needs_columns)
    : spec_(spec), rng_(0) {
    if (const auto* ac = std::get_if<AlmostCyclicControl>(&spec_)) {
        const auto rows = validate_almost_cyclic(ac->row_schedule, A.rows(), ac->row_window);
        if (!rows.ok)
            throw std::invalid_argument("almost-cyclic row schedule invalid: " + rows.message);
        if (needs_columns) {
            if (ac->col_schedule.empty())
                throw std::invalid_argument(
                    "almost-cyclic control requires a column schedule for extended runs");
            const auto cols = validate_almost_cyclic(ac->col_schedule, A.cols(), ac->col_window);
            if (!cols.ok)
                throw std::invalid_argument("almost-cyclic column schedule invalid: " +
                                            cols.message);
        }
    } else if (const auto* wr = std::get_if<WeightedRandomControl>(&spec_)) {
        auto [p, q] = build_distributions(A);
        row_dist_ = std::move(p);
        col_dist_ = std::move(q);
        rng_ = SplitMix64(wr->seed);
    }
}

int ControlState::next_col(long k, const DenseMatrix& A, std::span<const double> y) {
    if (std::holds_alternative<CyclicControl>(spec_)) return cyclic_next(k, A.cols());
    if (const auto* ac = std::get_if<AlmostCyclicControl>(&spec_))
        return ac->col_schedule[static_cast<std::size_t>((k - 1) % ac->col_schedule.size())];
    if (std::holds_alternative<MaxResidualControl>(spec_)) return max_correlation_col(A, y);
    return sample_index(col_dist_, rng_);
}

int ControlState::next_row(long k, const DenseMatrix& A, std::span<const double> x,
                           std::span<const double> rhs) {
    if (std::holds_alternative<CyclicControl>(spec_)) return cyclic_next(k, A.rows());
    if (const auto* ac = std::get_if<AlmostCyclicControl>(&spec_))
        return ac->row_schedule[static_cast<std::size_t>((k - 1) % ac->row_schedule.size())];
    if (const auto* mr = std::get_if<MaxResidualControl>(&spec_))
        return max_residual_row(A, x, rhs, mr->weight_by_row_norm);
    return sample_index(row_dist_, rng_);
}

}  // namespace kaczmarz
