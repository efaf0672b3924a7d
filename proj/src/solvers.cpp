#include "kaczmarz/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kaczmarz {

namespace {

double diff_norm(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool is_max_residual(const ControlSpec& spec) {
    return std::holds_alternative<MaxResidualControl>(spec);
}

bool has_unit_columns(const DenseMatrix& A, double tol = 1e-10) {
    for (int j = 0; j < A.cols(); ++j)
        if (std::abs(A.col_norm(j) - 1.0) > tol) return false;
    return true;
}

// max_j |<y,A^j>| / ||A^j||, the column-side stop quantity.
double max_scaled_correlation(const DenseMatrix& A, std::span<const double> y) {
    double worst = 0.0;
    for (int j = 1; j <= A.cols(); ++j)
        worst = std::max(worst, std::abs(column_correlation(A, y, j)) / A.col_norm(j - 1));
    return worst;
}

double max_abs_residual(const DenseMatrix& A, std::span<const double> x,
                        std::span<const double> rhs) {
    double worst = 0.0;
    for (int i = 1; i <= A.rows(); ++i)
        worst = std::max(worst, std::abs(row_residual(A, x, rhs, i)));
    return worst;
}

std::vector<double> starting_point(const SolverConfig& config, int n) {
    if (config.x0.empty()) return std::vector<double>(n, 0.0);
    if (static_cast<int>(config.x0.size()) != n)
        throw std::invalid_argument("SolverConfig: x0 length does not match column count");
    return config.x0;
}

void validate_common(const SolverConfig& config) {
    if (config.k_max < 1) throw std::invalid_argument("SolverConfig: k_max must be at least 1");
    if (config.tol_residual < 0.0 || config.tol_column < 0.0)
        throw std::invalid_argument("SolverConfig: tolerances must be nonnegative");
}

}  // namespace

void row_update(const DenseMatrix& A, std::vector<double>& x, std::span<const double> rhs, int i,
                double omega) {
    const double resid = row_residual(A, x, rhs, i);
    const double rn = A.row_norm(i - 1);
    const double factor = omega * resid / (rn * rn);
    const auto row = A.row(i - 1);
    for (int j = 0; j < A.cols(); ++j) x[j] -= factor * row[j];
}

void column_update(const DenseMatrix& A, std::vector<double>& y, int j, double alpha,
                   bool normalized) {
    const double cn = A.col_norm(j - 1);
    if (normalized && std::abs(cn - 1.0) > 1e-10)
        throw std::invalid_argument("column_update: normalized update requires a unit column, "
                                    "column " + std::to_string(j) + " has norm " +
                                    std::to_string(cn));
    const double corr = column_correlation(A, y, j);
    const double factor = normalized ? alpha * corr : alpha * corr / (cn * cn);
    const int j0 = j - 1;
    for (int i = 0; i < A.rows(); ++i) y[i] -= factor * A.entry(i, j0);
}

std::vector<double> rhs_correction(std::span<const double> b_hat, std::span<const double> y) {
    if (b_hat.size() != y.size())
        throw std::invalid_argument("rhs_correction: length mismatch");
    std::vector<double> out(b_hat.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = b_hat[i] - y[i];
    return out;
}

RunResult run_kaczmarz(const Problem& problem, const SolverConfig& config, const RunHooks& hooks) {
    if (config.variant != SolverVariant::PlainKaczmarz)
        throw std::invalid_argument("run_kaczmarz: config.variant must be PlainKaczmarz");
    validate_common(config);

    const DenseMatrix& A = problem.A();
    const std::vector<double>& b_hat = problem.b_hat();
    ControlState control(config.control, A, /*needs_columns=*/false);

    SolverState state;
    state.x = starting_point(config, A.cols());

    RunResult result;
    if (config.record_history) result.history.reserve(static_cast<std::size_t>(config.k_max));
    result.stop_reason = StopReason::Budget;

    std::vector<double> x_prev;
    const bool want_prev = static_cast<bool>(hooks.on_step);

    for (long k = 1; k <= config.k_max; ++k) {
        state.k = k;
        const int i = control.next_row(k, A, state.x, b_hat);
        const double resid = row_residual(A, state.x, b_hat, i);

        if (want_prev) x_prev = state.x;

        IterationRecord rec;
        rec.k = k;
        rec.row_index = i;
        rec.row_resid_corrected = std::abs(resid);
        if (hooks.oracle) {
            rec.row_resid_clean = std::abs(row_residual(A, state.x, hooks.oracle->b_clean, i));
        }

        row_update(A, state.x, b_hat, i, config.relax.omega);

        if (hooks.oracle) {
            rec.x_err_fixed = diff_norm(state.x, hooks.oracle->x_ls_min_norm);
            rec.dist_lss = distance_to_lss(*hooks.oracle, state.x);
        }
        if (config.record_history) result.history.push_back(rec);

        if (hooks.on_step) {
            StepTrace trace{k, 0, i, A, x_prev, state.x, {}, {}, b_hat};
            hooks.on_step(trace);
        }

        result.iterations_used = k;
        if (config.tol_residual > 0.0 && max_abs_residual(A, state.x, b_hat) <= config.tol_residual) {
            result.stop_reason = StopReason::Converged;
            break;
        }
    }

    result.final_x = std::move(state.x);
    return result;
}

RunResult run_extended(const Problem& problem, const SolverConfig& config, const RunHooks& hooks) {
    if (config.variant != SolverVariant::Extended)
        throw std::invalid_argument("run_extended: config.variant must be Extended");
    validate_common(config);

    const DenseMatrix& A_orig = problem.A();
    const std::vector<double>& b_hat = problem.b_hat();

    bool normalize = false;
    switch (config.normalize) {
        case NormalizeColumns::On: normalize = true; break;
        case NormalizeColumns::Off: normalize = false; break;
        case NormalizeColumns::Auto: normalize = is_max_residual(config.control); break;
    }
    if (is_max_residual(config.control) && !normalize && !has_unit_columns(A_orig))
        throw std::invalid_argument(
            "run_extended: max-residual control requires unit columns; enable column "
            "normalization or supply a column-normalized problem");

    // Working system: possibly column-normalized, with back-map x = D z.
    std::vector<double> back_scale;  // empty when not normalized
    const DenseMatrix* A_ptr = &A_orig;
    std::optional<DenseMatrix> A_scaled;
    if (normalize) {
        auto [scaled, scale] = normalize_columns(A_orig);
        A_scaled.emplace(std::move(scaled));
        back_scale = std::move(scale);
        A_ptr = &*A_scaled;
    }
    const DenseMatrix& A = *A_ptr;
    const bool unit_columns = normalize || has_unit_columns(A);

    ControlState control(config.control, A);

    SolverState state;
    state.x = starting_point(config, A.cols());
    if (normalize)  // start given in original coordinates: z = D^{-1} x
        for (int j = 0; j < A.cols(); ++j) state.x[j] /= back_scale[j];
    state.y = b_hat;
    state.b_hat_k = rhs_correction(b_hat, state.y);

    RunResult result;
    if (config.record_history) result.history.reserve(static_cast<std::size_t>(config.k_max));
    result.stop_reason = StopReason::Budget;

    const bool want_prev = static_cast<bool>(hooks.on_step);
    std::vector<double> x_prev, y_prev;
    std::vector<double> x_orig;  // original-coordinate iterate for the oracle columns

    for (long k = 1; k <= config.k_max; ++k) {
        state.k = k;

        const int j = control.next_col(k, A, state.y);
        if (want_prev) {
            x_prev = state.x;
            y_prev = state.y;
        }
        column_update(A, state.y, j, config.relax.alpha, unit_columns);
        state.b_hat_k = rhs_correction(b_hat, state.y);

        const int i = control.next_row(k, A, state.x, state.b_hat_k);
        const double resid = row_residual(A, state.x, state.b_hat_k, i);

        IterationRecord rec;
        rec.k = k;
        rec.col_index = j;
        rec.row_index = i;
        rec.row_resid_corrected = std::abs(resid);
        if (hooks.oracle) {
            rec.y_err = diff_norm(state.y, hooks.oracle->r);
            rec.gamma_norm = std::abs(hooks.oracle->r[i - 1] - state.y[i - 1]) / A.row_norm(i - 1);
            rec.row_resid_clean = std::abs(row_residual(A, state.x, hooks.oracle->b_clean, i));
        }

        row_update(A, state.x, state.b_hat_k, i, config.relax.omega);

        if (hooks.oracle) {
            if (normalize) {
                x_orig.assign(state.x.begin(), state.x.end());
                for (int c = 0; c < A.cols(); ++c) x_orig[c] *= back_scale[c];
            } else {
                x_orig = state.x;
            }
            rec.x_err_fixed = diff_norm(x_orig, hooks.oracle->x_ls_min_norm);
            rec.dist_lss = distance_to_lss(*hooks.oracle, x_orig);
        }
        if (config.record_history) result.history.push_back(rec);

        if (hooks.on_step) {
            StepTrace trace{k, j, i, A, x_prev, state.x, y_prev, state.y, state.b_hat_k};
            hooks.on_step(trace);
        }

        result.iterations_used = k;
        if (config.tol_residual > 0.0 || config.tol_column > 0.0) {
            const bool col_ok = config.tol_column == 0.0 ||
                                max_scaled_correlation(A, state.y) <= config.tol_column;
            const bool row_ok = config.tol_residual == 0.0 ||
                                max_abs_residual(A, state.x, state.b_hat_k) <= config.tol_residual;
            if (col_ok && row_ok) {
                result.stop_reason = StopReason::Converged;
                break;
            }
        }
    }

    if (normalize)
        for (int j = 0; j < A.cols(); ++j) state.x[j] *= back_scale[j];
    result.final_x = std::move(state.x);
    result.final_y = std::move(state.y);
    return result;
}

RunResult run(const Problem& problem, const SolverConfig& config, const RunHooks& hooks) {
    return config.variant == SolverVariant::PlainKaczmarz ? run_kaczmarz(problem, config, hooks)
                                                          : run_extended(problem, config, hooks);
}

RunResult minimum_norm_mode(const Problem& problem, const SolverConfig& config,
                            const RunHooks& hooks) {
    SolverConfig zero_start = config;
    zero_start.x0.clear();
    return run(problem, zero_start, hooks);
}

}  // namespace kaczmarz
