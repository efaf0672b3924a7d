#include "kaczmarz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

namespace {

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

double diff_norm_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void require_in_lss(const OracleSolution& oracle, std::span<const double> x_star) {
    if (distance_to_lss(oracle, x_star) > 1e-8)
        throw std::invalid_argument("diagnostics: x_star is not a least-squares solution");
}

// The omega-relaxed step from x_prev toward the clean hyperplane of row i.
std::vector<double> relaxed_clean_step(const DenseMatrix& A, int i, double b_clean_i,
                                       std::span<const double> x_prev, double omega) {
    std::vector<double> x_star_k(x_prev.begin(), x_prev.end());
    const auto row = A.row(i - 1);
    double dot = 0.0;
    for (int j = 0; j < A.cols(); ++j) dot += row[j] * x_prev[j];
    const double rn = A.row_norm(i - 1);
    const double factor = omega * (dot - b_clean_i) / (rn * rn);
    for (int j = 0; j < A.cols(); ++j) x_star_k[j] -= factor * row[j];
    return x_star_k;
}

}  // namespace

std::string bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::GeometricDecay: return "GeometricDecay";
        case BoundKind::Summability: return "Summability";
        case BoundKind::FejerIdentity: return "FejerIdentity";
        case BoundKind::Pythagoras: return "Pythagoras";
        case BoundKind::REKBound: return "REKBound";
    }
    return "Unknown";
}

std::string BoundReport::to_line() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s passed=%d worst_violation=%.6e at_iteration=%ld",
                  bound_kind_name(kind).c_str(), passed ? 1 : 0, worst_violation, at_iteration);
    return buf;
}

double gamma_shift_norm(const DenseMatrix& A, std::span<const double> y, std::span<const double> r,
                        int i) {
    if (i < 1 || i > A.rows()) throw std::out_of_range("gamma_shift_norm: row index out of range");
    return std::abs(r[i - 1] - y[i - 1]) / A.row_norm(i - 1);
}

ShiftCheck check_shift_lemma(const DenseMatrix& A, int i, double rhs_corrected_i, double r_i,
                             double y_i, const std::vector<std::vector<double>>& probes) {
    if (i < 1 || i > A.rows()) throw std::out_of_range("check_shift_lemma: row index out of range");
    const auto row = A.row(i - 1);
    const double rn = A.row_norm(i - 1);
    // b_i recovered from rhs_corrected_i = b_i + r_i - y_i.
    const double b_i = rhs_corrected_i - r_i + y_i;
    const double delta = (r_i - y_i) / (rn * rn);

    ShiftCheck check;
    for (const auto& probe : probes) {
        if (static_cast<int>(probe.size()) != A.cols())
            throw std::invalid_argument("check_shift_lemma: probe dimension mismatch");
        double dot = 0.0;
        for (int j = 0; j < A.cols(); ++j) dot += row[j] * probe[j];
        if (std::abs(dot - b_i) > 1e-12 * std::max({1.0, std::abs(b_i), norm_of(probe) * rn}))
            throw std::invalid_argument("check_shift_lemma: probe does not lie on the clean "
                                        "hyperplane");
        // Shifted probe: x + delta * A_i, evaluated against the corrected plane.
        const double shifted = dot + delta * rn * rn;
        const double err = std::abs(shifted - rhs_corrected_i);
        const double tol = 1e-10 * std::max({1.0, std::abs(rhs_corrected_i), norm_of(probe) * rn});
        if (err > tol) {
            check.ok = false;
            check.message = "shifted probe misses the corrected hyperplane";
        }
        check.worst = std::max(check.worst, err);
    }
    return check;
}

double check_pythagoras(const DenseMatrix& A, const OracleSolution& oracle, int i,
                        std::span<const double> x_prev, std::span<const double> x_next,
                        std::span<const double> x_star, double gamma_norm, double omega) {
    require_in_lss(oracle, x_star);
    const auto x_star_k = relaxed_clean_step(A, i, oracle.b_clean[i - 1], x_prev, omega);
    const double lhs = diff_norm_sq(x_next, x_star);
    const double rhs = diff_norm_sq(x_star_k, x_star) + omega * omega * gamma_norm * gamma_norm;
    return std::abs(lhs - rhs) / (1.0 + lhs);
}

FejerStepCheck check_fejer_step(const DenseMatrix& A, const OracleSolution& oracle, int i,
                                std::span<const double> x_prev, std::span<const double> x_next,
                                std::span<const double> x_star, double gamma_norm, double omega) {
    require_in_lss(oracle, x_star);
    const double lhs = diff_norm_sq(x_next, x_star);
    const double prev = diff_norm_sq(x_prev, x_star);
    const auto row = A.row(i - 1);
    double dot = 0.0;
    for (int j = 0; j < A.cols(); ++j) dot += row[j] * x_prev[j];
    const double clean_resid = dot - oracle.b_clean[i - 1];
    const double rn = A.row_norm(i - 1);
    const double decrease = omega * (2.0 - omega) * clean_resid * clean_resid / (rn * rn);
    const double perturb = omega * omega * gamma_norm * gamma_norm;

    FejerStepCheck out;
    out.equality_residual = std::abs(lhs - (prev - decrease + perturb)) / (1.0 + lhs);
    out.inequality_slack = (prev + perturb) - lhs;
    return out;
}

BoundReport check_geometric_decay(const std::vector<IterationRecord>& history, double gamma_cap,
                                  double y_cap, double rate,
                                  const std::variant<MrekDecay, AcekDecay>& mode, double slack,
                                  double abs_floor) {
    BoundReport report;
    report.kind = BoundKind::GeometricDecay;
    report.passed = true;

    double pow_acc = 1.0;   // rate^e maintained incrementally for the MREK mode
    long last_exp = 0;
    for (const auto& rec : history) {
        long e;
        if (std::holds_alternative<MrekDecay>(mode)) {
            e = rec.k;
        } else {
            e = rec.k / std::get<AcekDecay>(mode).window;
        }
        while (last_exp < e) {
            pow_acc *= rate;
            ++last_exp;
        }
        const double gamma_bound = gamma_cap * pow_acc * (1.0 + slack) + abs_floor;
        const double y_bound = y_cap * pow_acc * (1.0 + slack) + abs_floor;
        double violation = 0.0;
        if (rec.gamma_norm) violation = std::max(violation, *rec.gamma_norm - gamma_bound);
        if (rec.y_err) violation = std::max(violation, *rec.y_err - y_bound);
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.at_iteration = rec.k;
        }
        if (violation > 0.0) report.passed = false;
    }
    return report;
}

BoundReport check_summability(const std::vector<IterationRecord>& history, double M, double rate,
                              double slack) {
    BoundReport report;
    report.kind = BoundKind::Summability;
    report.passed = true;
    if (rate >= 1.0) {
        report.passed = false;
        report.worst_violation = rate - 1.0;
        return report;
    }
    const double bound = M * M / (1.0 - rate * rate);
    double partial = 0.0;
    for (const auto& rec : history) {
        if (!rec.gamma_norm) continue;
        partial += *rec.gamma_norm * *rec.gamma_norm;
        const double violation = partial - bound * (1.0 + slack);
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.at_iteration = rec.k;
        }
        if (violation > 0.0) report.passed = false;
    }
    return report;
}

BoundReport check_rek_expectation(const Problem& problem, int trials,
                                  const std::vector<long>& checkpoints, std::uint64_t seed) {
    if (trials < 30)
        throw std::invalid_argument("check_rek_expectation: at least 30 trials required");
    if (checkpoints.empty())
        throw std::invalid_argument("check_rek_expectation: no checkpoints");

    const OracleSolution oracle = oracle_solve(problem.A(), problem.b_hat());
    long k_max = 0;
    for (long c : checkpoints) k_max = std::max(k_max, c);

    std::vector<double> mean_sq(checkpoints.size(), 0.0);
    SplitMix64 root(seed);
    for (int t = 0; t < trials; ++t) {
        SolverConfig config;
        config.variant = SolverVariant::Extended;
        config.control = WeightedRandomControl{root.split(static_cast<std::uint64_t>(t)).state()};
        config.relax = RelaxationParams(1.0, 1.0);
        config.k_max = k_max;
        config.record_history = false;

        std::vector<double> err_sq_at(checkpoints.size(), 0.0);
        RunHooks hooks;
        hooks.on_step = [&](const StepTrace& trace) {
            for (std::size_t c = 0; c < checkpoints.size(); ++c)
                if (trace.k == checkpoints[c])
                    err_sq_at[c] = diff_norm_sq(trace.x_after, oracle.x_ls_min_norm);
        };
        minimum_norm_mode(problem, config, hooks);
        for (std::size_t c = 0; c < checkpoints.size(); ++c) mean_sq[c] += err_sq_at[c];
    }
    for (double& v : mean_sq) v /= trials;

    const double x_ls_norm = norm_of(oracle.x_ls_min_norm);
    BoundReport report;
    report.kind = BoundKind::REKBound;
    report.passed = true;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        // Tiny absolute floor so an exactly-zero bound tolerates rounding dust.
        const double bound = 1.2 * rek_bound(oracle, x_ls_norm, checkpoints[c]) + 1e-18;
        const double violation = mean_sq[c] - bound;
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.at_iteration = checkpoints[c];
        }
        if (violation > 0.0) report.passed = false;
    }
    return report;
}

SequenceCheck check_sequence_lemma(const std::vector<double>& alphas,
                                   const std::vector<double>& betas,
                                   const std::vector<double>& epsilons) {
    const std::size_t K = betas.size();
    if (epsilons.size() != K || alphas.size() != K + 1)
        throw std::invalid_argument("check_sequence_lemma: need K+1 alphas for K betas/epsilons");
    for (std::size_t k = 0; k < K; ++k) {
        if (alphas[k] < 0.0 || betas[k] < 0.0 || epsilons[k] < 0.0)
            throw std::invalid_argument("check_sequence_lemma: sequences must be nonnegative");
        const double predicted = alphas[k] - betas[k] + epsilons[k];
        const double scale = std::max({1.0, std::abs(alphas[k]), betas[k], epsilons[k]});
        if (std::abs(alphas[k + 1] - predicted) > 1e-12 * scale)
            throw std::invalid_argument("check_sequence_lemma: recurrence violated at k=" +
                                        std::to_string(k));
    }

    // Summability screen: for eps in l^1 the tail terms must beat 1/k, so
    // k*eps_k has to decay. Flags blatant non-summable inputs such as the
    // harmonic sequence; a finite prefix cannot prove summability.
    if (K >= 20) {
        const std::size_t decile = K / 10;
        double head = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < decile; ++k)
            head = std::max(head, static_cast<double>(k + 1) * epsilons[k]);
        for (std::size_t k = K - decile; k < K; ++k)
            tail = std::max(tail, static_cast<double>(k + 1) * epsilons[k]);
        if (head > 0.0 && tail > 0.75 * head)
            throw std::invalid_argument(
                "check_sequence_lemma: epsilon sequence does not look summable (k*eps_k fails "
                "to decay)");
    }

    SequenceCheck check;
    double eps_sum = 0.0;
    for (double e : epsilons) eps_sum += e;
    const double beta_bound = alphas[0] + eps_sum;

    double beta_partial = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        beta_partial += betas[k];
        const double over = beta_partial - beta_bound * (1.0 + 1e-12) - 1e-12;
        if (over > check.worst) {
            check.worst = over;
            check.ok = false;
            check.message = "beta partial sum exceeds alpha_0 + sum(eps)";
        }
        const double step = std::abs(alphas[k + 1] - alphas[k]);
        const double cauchy_over = step - (epsilons[k] + betas[k]) - 1e-12;
        if (cauchy_over > check.worst) {
            check.worst = cauchy_over;
            check.ok = false;
            check.message = "alpha increment exceeds eps_k + beta_k";
        }
    }
    return check;
}

}  // namespace kaczmarz
