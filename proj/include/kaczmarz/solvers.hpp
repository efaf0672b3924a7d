#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kaczmarz/control.hpp"
#include "kaczmarz/diagnostics.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problem.hpp"

namespace kaczmarz {

enum class SolverVariant { PlainKaczmarz, Extended };

enum class NormalizeColumns {
    Auto,  // on for Extended runs under max-residual control, off otherwise
    On,
    Off,
};

struct SolverConfig {
    SolverVariant variant = SolverVariant::Extended;
    ControlSpec control = CyclicControl{};
    RelaxationParams relax{1.0, 1.0};
    long k_max = 1000;
    double tol_residual = 0.0;  // 0 disables the row-residual stop test
    double tol_column = 0.0;    // 0 disables the column-correlation stop test
    NormalizeColumns normalize = NormalizeColumns::Auto;
    std::vector<double> x0;     // empty = zero start
    bool record_history = true;
};

enum class StopReason { Budget, Converged };

struct RunResult {
    std::vector<double> final_x;
    std::vector<double> final_y;  // empty for the plain loop
    long iterations_used = 0;
    StopReason stop_reason = StopReason::Budget;
    std::vector<IterationRecord> history;
};

// Loop state of one run: iteration counter, current iterate, correction
// vector and corrected right-hand side (b_hat_k = b_hat - y after every
// column step). Single-owner; the plain loop leaves y and b_hat_k empty.
struct SolverState {
    long k = 0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> b_hat_k;
};

// Per-iteration view handed to an observer, in the coordinates the loop
// actually runs in (column-normalized when normalization is internal).
// col_index is 0 when the iteration had no column step.
struct StepTrace {
    long k = 0;
    int col_index = 0;
    int row_index = 0;
    const DenseMatrix& A;
    std::span<const double> x_before;
    std::span<const double> x_after;
    std::span<const double> y_before;
    std::span<const double> y_after;
    std::span<const double> rhs;  // b_hat^k for extended runs, b_hat for plain
};

struct RunHooks {
    // Oracle of the *original* problem; enables the oracle columns of the
    // history records.
    const OracleSolution* oracle = nullptr;
    std::function<void(const StepTrace&)> on_step;
};

// x' = x - omega * (<A_i,x> - rhs_i)/||A_i||^2 * A_i for the 1-based row i.
void row_update(const DenseMatrix& A, std::vector<double>& x, std::span<const double> rhs, int i,
                double omega);

// y' = y - alpha * <y,A^j>/||A^j||^2 * A^j for the 1-based column j. With
// normalized=true the division is skipped, which is only valid for unit
// columns; a column norm off unity by more than 1e-10 throws.
void column_update(const DenseMatrix& A, std::vector<double>& y, int j, double alpha,
                   bool normalized);

// b_hat_k = b_hat - y, elementwise.
std::vector<double> rhs_correction(std::span<const double> b_hat, std::span<const double> y);

// Plain Kaczmarz: one row step per iteration against the raw b_hat.
RunResult run_kaczmarz(const Problem& problem, const SolverConfig& config,
                       const RunHooks& hooks = {});

// Extended loop: per iteration select j_k, update y, correct the right-hand
// side, select i_k, update x. y^0 = b_hat. Under max-residual control the
// columns must be unit (either already or via internal normalization).
RunResult run_extended(const Problem& problem, const SolverConfig& config,
                       const RunHooks& hooks = {});

// Dispatch on config.variant.
RunResult run(const Problem& problem, const SolverConfig& config, const RunHooks& hooks = {});

// Same as run() with the start forced to zero, which keeps every iterate in
// R(A^T) and makes the limit the minimum-norm least-squares solution when the
// updates use the problem's own rows (unit columns in the max-residual case).
RunResult minimum_norm_mode(const Problem& problem, const SolverConfig& config,
                            const RunHooks& hooks = {});

}  // namespace kaczmarz
