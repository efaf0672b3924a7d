#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problem.hpp"

namespace kaczmarz {

// One row of a run history. Oracle-dependent fields are only populated when
// the run was instrumented with an oracle; col_index is absent for the plain
// Kaczmarz loop, which performs no column step.
struct IterationRecord {
    long k = 0;
    std::optional<int> col_index;  // j_k, 1-based
    int row_index = 0;             // i_k, 1-based
    std::optional<double> y_err;               // ||y^k - r||
    std::optional<double> gamma_norm;          // |r_i - y^k_i| / ||A_i||
    std::optional<double> x_err_fixed;         // ||x^k - x*|| for fixed x* in LSS
    std::optional<double> dist_lss;            // distance of x^k from LSS(A; b_hat)
    double row_resid_corrected = 0.0;          // |<A_i, x^{k-1}> - rhs^k_i|
    std::optional<double> row_resid_clean;     // |<A_i, x^{k-1}> - b_i|
};

enum class BoundKind { GeometricDecay, Summability, FejerIdentity, Pythagoras, REKBound };

struct BoundReport {
    BoundKind kind;
    bool passed = false;
    double worst_violation = 0.0;
    long at_iteration = 0;

    // Deterministic single-line rendering, also used by the CLI report.
    std::string to_line() const;
};

std::string bound_kind_name(BoundKind kind);

// ||gamma_i|| for the shift between the clean and the corrected hyperplane
// of row i (1-based): |r_i - y_i| / ||A_i||.
double gamma_shift_norm(const DenseMatrix& A, std::span<const double> y,
                        std::span<const double> r, int i);

// Shift lemma: the corrected hyperplane {<A_i,x> = rhs_corrected_i} is the
// clean hyperplane {<A_i,x> = b_i} translated by gamma = delta * A_i with
// delta = (r_i - y_i)/||A_i||^2. Every probe must lie on the clean hyperplane
// (within 1e-12 of scale); each shifted probe is checked against the
// corrected one within 1e-10 * scale.
struct ShiftCheck {
    bool ok = true;
    double worst = 0.0;
    std::string message;
};
ShiftCheck check_shift_lemma(const DenseMatrix& A, int i, double rhs_corrected_i, double r_i,
                             double y_i, const std::vector<std::vector<double>>& probes);

// Residual of ||x^k - x||^2 = ||x^k_* - x||^2 + omega^2 ||gamma||^2 where
// x^k_* is the omega-relaxed step from x_prev toward the clean hyperplane of
// row i. x_star must lie in LSS (oracle distance <= 1e-8, else throws).
// Returns |lhs - rhs| / (1 + lhs).
double check_pythagoras(const DenseMatrix& A, const OracleSolution& oracle, int i,
                        std::span<const double> x_prev, std::span<const double> x_next,
                        std::span<const double> x_star, double gamma_norm, double omega);

struct FejerStepCheck {
    double equality_residual = 0.0;  // relative residual of the equality
    double inequality_slack = 0.0;   // slack of the per-step quasi-monotonicity bound
};

// ||x^k - x||^2 = ||x^{k-1} - x||^2
//                 - omega(2-omega) (<A_i,x^{k-1}> - b_i)^2 / ||A_i||^2
//                 + omega^2 ||gamma||^2, plus the inequality obtained by
// dropping the middle term. Same x_star precondition as check_pythagoras.
FejerStepCheck check_fejer_step(const DenseMatrix& A, const OracleSolution& oracle, int i,
                                std::span<const double> x_prev, std::span<const double> x_next,
                                std::span<const double> x_star, double gamma_norm, double omega);

// Exponent laws for the recorded gamma norms and y errors.
struct MrekDecay {};               // exponent k: value <= cap * rate^k
struct AcekDecay { int window; };  // exponent floor(k/window)

// Checks gamma_norm[k] <= gamma_cap * rate^e + abs_floor and
// y_err[k] <= y_cap * rate^e + abs_floor for every record, e as above.
// slack is relative; abs_floor covers the floating-point resolution of the
// recorded norms once the exact bound decays below it (the computed
// ||y^k - r|| cannot follow the bound under roughly eps * ||b_hat||).
BoundReport check_geometric_decay(const std::vector<IterationRecord>& history, double gamma_cap,
                                  double y_cap, double rate, const std::variant<MrekDecay, AcekDecay>& mode,
                                  double slack = 1e-12, double abs_floor = 0.0);

// Running partial sums of gamma_norm^2 never exceed M^2 / (1 - rate^2).
BoundReport check_summability(const std::vector<IterationRecord>& history, double M, double rate,
                              double slack = 1e-12);

// Monte-Carlo check of the expectation bound: `trials` randomized extended
// runs with alpha=omega=1 and x^0=0; at every checkpoint the empirical mean
// of ||x^k - x_ls||^2 must stay below 1.2x the bound.
BoundReport check_rek_expectation(const Problem& problem, int trials,
                                  const std::vector<long>& checkpoints, std::uint64_t seed);

// Summable-perturbation sequence lemma: given alpha_{k+1} = alpha_k - beta_k
// + eps_k with summable eps, the beta partial sums stay below
// alpha_0 + sum(eps) and consecutive alphas differ by at most eps_k + beta_k.
// Throws std::invalid_argument when the recurrence fails (1e-12 of scale) or
// when the eps sequence fails a summability screen (k*eps_k must decay).
struct SequenceCheck {
    bool ok = true;
    double worst = 0.0;
    std::string message;
};
SequenceCheck check_sequence_lemma(const std::vector<double>& alphas,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& epsilons);

}  // namespace kaczmarz
