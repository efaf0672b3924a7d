#include <doctest.h>

#include <cmath>

#include "kaczmarz/diagnostics.hpp"
#include "kaczmarz/generator.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/solvers.hpp"
#include "support.hpp"

using namespace kaczmarz;
using namespace testsupport;

namespace {

// Instrumented run: mirrors the verify command's per-step bookkeeping.
struct TraceChecks {
    double worst_pythagoras = 0.0;
    double worst_fejer = 0.0;
    double min_slack = 0.0;
    std::vector<double> alphas, betas, epsilons;
};

TraceChecks run_with_identity_checks(const Problem& p, const SolverConfig& config,
                                     const OracleSolution& oracle, double omega) {
    TraceChecks out;
    out.alphas.push_back(config.x0.empty()
                             ? norm(oracle.x_ls_min_norm) * norm(oracle.x_ls_min_norm)
                             : diff_norm(config.x0, oracle.x_ls_min_norm) *
                                   diff_norm(config.x0, oracle.x_ls_min_norm));
    RunHooks hooks;
    hooks.oracle = &oracle;
    hooks.on_step = [&](const StepTrace& trace) {
        const int i = trace.row_index;
        const double gamma = gamma_shift_norm(trace.A, trace.y_after, oracle.r, i);
        out.worst_pythagoras =
            std::max(out.worst_pythagoras,
                     check_pythagoras(trace.A, oracle, i, trace.x_before, trace.x_after,
                                      oracle.x_ls_min_norm, gamma, omega));
        const auto fejer = check_fejer_step(trace.A, oracle, i, trace.x_before, trace.x_after,
                                            oracle.x_ls_min_norm, gamma, omega);
        out.worst_fejer = std::max(out.worst_fejer, fejer.equality_residual);
        out.min_slack = std::min(out.min_slack, fejer.inequality_slack);

        double clean = 0.0;
        const auto row = trace.A.row(i - 1);
        for (int j = 0; j < trace.A.cols(); ++j) clean += row[j] * trace.x_before[j];
        clean -= oracle.b_clean[i - 1];
        const double rn = trace.A.row_norm(i - 1);
        out.betas.push_back(omega * (2.0 - omega) * clean * clean / (rn * rn));
        out.epsilons.push_back(omega * omega * gamma * gamma);
        double s = 0.0;
        for (std::size_t j = 0; j < trace.x_after.size(); ++j) {
            const double d = trace.x_after[j] - oracle.x_ls_min_norm[j];
            s += d * d;
        }
        out.alphas.push_back(s);
    };
    run(p, config, hooks);
    return out;
}

}  // namespace

TEST_CASE("gamma_shift_norm") {
    const auto p = make_p1();
    const std::vector<double> y{0, 0, 0};
    const std::vector<double> r{1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0};
    CHECK(gamma_shift_norm(p.A(), y, r, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(gamma_shift_norm(p.A(), y, r, 3) ==
          doctest::Approx((1.0 / 3.0) / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("shift lemma: no shift when y matches r") {
    const auto p = make_p1();
    // r_i = y_i -> gamma = 0 and the corrected plane equals the clean one.
    const auto check = check_shift_lemma(p.A(), 1, /*rhs_corrected=*/2.0 / 3.0,
                                         /*r_i=*/1.0 / 3.0, /*y_i=*/1.0 / 3.0,
                                         {{2.0 / 3.0, 0.4}, {2.0 / 3.0, -3.0}});
    CHECK(check.ok);
    CHECK(check.worst <= 1e-12);
}

TEST_CASE("shift lemma: worked shift on row 1") {
    const auto p = make_p1();
    // i=1, r_1 = 1/3, y_1 = 0, b_1 = 2/3, corrected rhs = 1.
    // Probes lie on <A_1, x> = 2/3, i.e. x = (2/3, t).
    const auto check = check_shift_lemma(p.A(), 1, 1.0, 1.0 / 3.0, 0.0,
                                         {{2.0 / 3.0, -1.0}, {2.0 / 3.0, 0.0}, {2.0 / 3.0, 7.5}});
    CHECK(check.ok);
    CHECK(check.worst <= 1e-12);
}

TEST_CASE("shift lemma: random rows, random shifts, many probes") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto A = random_matrix(3, 4, rng);
        if (A.min_row_norm() < 1e-3) continue;
        const int i = 1 + static_cast<int>(rng.next_u64() % 3);
        const double b_i = 2.0 * rng.next_double() - 1.0;
        const double r_i = 2.0 * rng.next_double() - 1.0;
        const double y_i = 2.0 * rng.next_double() - 1.0;
        const double rhs_corrected = b_i + r_i - y_i;

        // Probes: x0 on the plane plus in-plane perturbations.
        const auto row = A.row(i - 1);
        const double rn = A.row_norm(i - 1);
        std::vector<std::vector<double>> probes;
        for (int t = 0; t < 10; ++t) {
            std::vector<double> v = random_vector(4, rng);
            double vd = 0.0;
            for (int j = 0; j < 4; ++j) vd += v[j] * row[j];
            for (int j = 0; j < 4; ++j) v[j] -= vd / (rn * rn) * row[j];
            for (int j = 0; j < 4; ++j) v[j] += b_i / (rn * rn) * row[j];
            probes.push_back(std::move(v));
        }
        const auto check = check_shift_lemma(A, i, rhs_corrected, r_i, y_i, probes);
        CHECK(check.ok);
    }
}

TEST_CASE("shift lemma rejects probes off the clean hyperplane") {
    const auto p = make_p1();
    CHECK_THROWS_AS(check_shift_lemma(p.A(), 1, 1.0, 1.0 / 3.0, 0.0, {{5.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("pythagoras identity on consistent steps") {
    // gamma = 0 reduces the identity to ||x^k - x|| = ||x^k_* - x||.
    const Problem p(DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 1}}),
                    {2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0});
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SplitMix64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x_prev = random_vector(2, rng);
        const int i = 1 + static_cast<int>(rng.next_u64() % 3);
        const double omega = 0.1 + 1.8 * rng.next_double();
        // Consistent: corrected rhs equals clean rhs, gamma = 0.
        std::vector<double> x_next = x_prev;
        row_update(p.A(), x_next, oracle.b_clean, i, omega);
        const double resid = check_pythagoras(p.A(), oracle, i, x_prev, x_next,
                                              oracle.x_ls_min_norm, 0.0, omega);
        CHECK(resid <= 1e-12);
    }
}

TEST_CASE("pythagoras and Fejer identities along worked maximal-residual run") {
    const auto p = make_p1_unit_columns();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;  // already unit
    config.k_max = 500;
    const auto checks = run_with_identity_checks(p, config, oracle, 1.0);
    CHECK(checks.worst_pythagoras <= 1e-12);
    CHECK(checks.worst_fejer <= 1e-10);
    CHECK(checks.min_slack >= -1e-12);
}

TEST_CASE("identities hold across random problems at omega=1") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GeneratorSpec spec;
        spec.m = 7;
        spec.n = 4;
        spec.rank = (seed % 2 == 0) ? 4 : 3;
        spec.cond = 5.0;
        spec.noise = (seed % 3 == 0) ? 0.0 : 0.8;
        spec.seed = seed;
        const auto p = generate_problem(spec);
        const auto oracle = oracle_solve(p.A(), p.b_hat());
        SolverConfig config;
        config.variant = SolverVariant::Extended;
        config.control = CyclicControl{};
        config.k_max = 150;
        const auto checks = run_with_identity_checks(p, config, oracle, 1.0);
        CHECK(checks.worst_pythagoras <= 1e-10);
        CHECK(checks.worst_fejer <= 1e-10);
        CHECK(checks.min_slack >= -1e-12);
    }
}

TEST_CASE("Fejer equality at omega=1.9 with clean-hyperplane starts") {
    // With x_prev on the clean hyperplane the cross term vanishes and the
    // identity is exact for any omega.
    const auto p = make_p1();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SplitMix64 rng(31);
    const double omega = 1.9;
    for (int trial = 0; trial < 100; ++trial) {
        const int i = 1 + static_cast<int>(rng.next_u64() % 3);
        const auto row = p.A().row(i - 1);
        const double rn = p.A().row_norm(i - 1);
        // Start on H_i.
        std::vector<double> x_prev = random_vector(2, rng);
        double d = 0.0;
        for (int j = 0; j < 2; ++j) d += x_prev[j] * row[j];
        for (int j = 0; j < 2; ++j)
            x_prev[j] += (oracle.b_clean[i - 1] - d) / (rn * rn) * row[j];

        const double y_i = rng.next_double();
        const double rhs_i = oracle.b_clean[i - 1] + oracle.r[i - 1] - y_i;
        std::vector<double> rhs(p.b_hat());
        rhs[i - 1] = rhs_i;
        std::vector<double> x_next = x_prev;
        row_update(p.A(), x_next, rhs, i, omega);

        const double gamma = std::abs(oracle.r[i - 1] - y_i) / rn;
        const auto fejer = check_fejer_step(p.A(), oracle, i, x_prev, x_next,
                                            oracle.x_ls_min_norm, gamma, omega);
        CHECK(fejer.equality_residual <= 1e-12);
    }
}

TEST_CASE("x_star outside LSS is rejected") {
    const auto p = make_p1();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    const std::vector<double> bogus{5.0, 5.0};
    const std::vector<double> x{0, 0};
    CHECK_THROWS_AS(check_pythagoras(p.A(), oracle, 1, x, x, bogus, 0.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("geometric decay bound on the worked unit-column run") {
    const auto p = make_p1_unit_columns();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 200;
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);

    const double rate = mrek_rate(oracle, 1.0, 2);
    CHECK(rate == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    const double b_norm = norm(oracle.b_clean);
    const double M = b_norm / p.A().min_row_norm();

    const auto report =
        check_geometric_decay(result.history, M, b_norm, rate, MrekDecay{});
    CHECK(report.passed);
    CHECK(report.worst_violation <= 0.0);

    const auto sum_report = check_summability(result.history, M, rate);
    CHECK(sum_report.passed);
    // Closed-form bound: M^2/(1 - 3/4) = 4 M^2.
    CHECK(M * M / (1.0 - rate * rate) == doctest::Approx(4.0 * M * M));
}

TEST_CASE("geometric decay on a consistent problem uses the same formula") {
    const Problem p(make_p1_unit_columns().A(), {2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0});
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 150;
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);

    const double rate = mrek_rate(oracle, 1.0, 2);
    const double b_norm = norm(oracle.b_clean);
    const auto report = check_geometric_decay(result.history, b_norm / p.A().min_row_norm(),
                                              b_norm, rate, MrekDecay{});
    CHECK(report.passed);
}

TEST_CASE("almost-cyclic window contraction on the worked problem") {
    const auto p = make_p1();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    AlmostCyclicControl ac;
    ac.row_schedule = {1, 2, 3};
    ac.col_schedule = {1, 2};
    ac.row_window = 3;
    ac.col_window = 2;
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = ac;
    config.k_max = 120;
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);

    const int window = 3;  // max(m0, n0)
    const double b_norm = norm(oracle.b_clean);

    // Empirical per-window contraction factor.
    double rate = 0.0, prev = b_norm;
    double m_tilde = b_norm;
    for (const auto& rec : result.history) {
        if (rec.k < window && rec.y_err) m_tilde = std::max(m_tilde, *rec.y_err);
        if (rec.k % window == 0 && rec.y_err) {
            if (prev > 1e-13) rate = std::max(rate, *rec.y_err / prev);
            prev = *rec.y_err;
        }
    }
    CHECK(rate < 1.0);

    const auto report = check_geometric_decay(result.history, m_tilde / p.A().min_row_norm(),
                                              m_tilde, rate, AcekDecay{window}, 1e-12,
                                              1e-13 * (1.0 + m_tilde));
    CHECK(report.passed);
}

TEST_CASE("cyclic column window of length n contracts y on the worked problem") {
    // Window of the column period alone: every 2 column steps cover both
    // columns, so ||y^{mu*2} - r|| <= rate_hat^mu ||y^0 - r||.
    const auto p = make_p1();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    AlmostCyclicControl ac;
    ac.row_schedule = {1, 2, 3};
    ac.col_schedule = {1, 2};
    ac.row_window = 3;
    ac.col_window = 2;
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = ac;
    config.k_max = 80;
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);

    const int window = 2;
    const double b_norm = norm(oracle.b_clean);
    double rate = 0.0, prev = b_norm, m_tilde = b_norm;
    for (const auto& rec : result.history) {
        if (rec.k < window && rec.y_err) m_tilde = std::max(m_tilde, *rec.y_err);
        if (rec.k % window == 0 && rec.y_err) {
            if (prev > 1e-13) rate = std::max(rate, *rec.y_err / prev);
            prev = *rec.y_err;
        }
    }
    CHECK(rate < 1.0);
    const auto report = check_geometric_decay(result.history, m_tilde / p.A().min_row_norm(),
                                              m_tilde, rate, AcekDecay{window}, 1e-12,
                                              1e-13 * (1.0 + m_tilde));
    CHECK(report.passed);
}

TEST_CASE("summability partial sums are monotone, truncation is safe") {
    const auto p = make_p1_unit_columns();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 10;
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);
    const double rate = mrek_rate(oracle, 1.0, 2);
    const double M = norm(oracle.b_clean) / p.A().min_row_norm();
    CHECK(check_summability(result.history, M, rate).passed);
}

TEST_CASE("rek expectation bound on the worked problem") {
    const auto p = make_p1();
    const auto report = check_rek_expectation(p, 60, {10, 50, 200}, 2023);
    CHECK(report.passed);
}

TEST_CASE("rek expectation trivial cases") {
    // Orthogonal consistent system: error collapses immediately.
    const Problem ortho(DenseMatrix::identity(2), {1, 2});
    CHECK(check_rek_expectation(ortho, 30, {4, 8}, 7).passed);

    // Degenerate 1x1 system.
    const Problem tiny(DenseMatrix::from_rows({{2}}), {4});
    CHECK(check_rek_expectation(tiny, 30, {1, 2}, 7).passed);

    CHECK_THROWS_AS(check_rek_expectation(ortho, 5, {4}, 7), std::invalid_argument);
}

TEST_CASE("sequence lemma on a constructed geometric sequence") {
    std::vector<double> alphas{1.0};
    std::vector<double> betas, epsilons;
    for (int k = 0; k < 60; ++k) {
        betas.push_back(alphas.back() / 2.0);
        epsilons.push_back(0.0);
        alphas.push_back(alphas.back() - betas.back());
    }
    const auto check = check_sequence_lemma(alphas, betas, epsilons);
    CHECK(check.ok);
}

TEST_CASE("sequence lemma on sequences extracted from a worked run") {
    const auto p = make_p1_unit_columns();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 300;
    const auto checks = run_with_identity_checks(p, config, oracle, 1.0);
    const auto seq = check_sequence_lemma(checks.alphas, checks.betas, checks.epsilons);
    CHECK(seq.ok);

    // Cauchy-step bound of the iterate increments.
    for (std::size_t k = 0; k + 1 < checks.alphas.size(); ++k) {
        const double step = std::abs(checks.alphas[k + 1] - checks.alphas[k]);
        CHECK(step <= checks.epsilons[k] + checks.betas[k] + 1e-12);
    }
}

TEST_CASE("sequence lemma rejects the harmonic epsilon sequence") {
    std::vector<double> alphas{1.0};
    std::vector<double> betas, epsilons;
    for (int k = 1; k <= 200; ++k) {
        epsilons.push_back(1.0 / k);
        betas.push_back(0.0);
        alphas.push_back(alphas.back() + epsilons.back());
    }
    CHECK_THROWS_AS(check_sequence_lemma(alphas, betas, epsilons), std::invalid_argument);
}

TEST_CASE("sequence lemma rejects recurrence violations") {
    CHECK_THROWS_AS(check_sequence_lemma({1.0, 0.9}, {0.5}, {0.0}), std::invalid_argument);
}

TEST_CASE("corrected residual decays along converging runs") {
    const auto p = make_p1_unit_columns();
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 400;
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    RunHooks hooks;
    hooks.oracle = &oracle;
    const auto result = run_extended(p, config, hooks);

    const std::size_t decile = result.history.size() / 10;
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < decile; ++k)
        first = std::max(first, result.history[k].row_resid_corrected);
    for (std::size_t k = result.history.size() - decile; k < result.history.size(); ++k)
        last = std::max(last, result.history[k].row_resid_corrected);
    CHECK(last < first);

    // y converges to r in the maximum norm.
    double worst = 0.0;
    for (std::size_t i = 0; i < result.final_y.size(); ++i)
        worst = std::max(worst, std::abs(result.final_y[i] - oracle.r[i]));
    CHECK(worst <= 1e-8);
}

TEST_CASE("xk Cauchy inequality per iteration") {
    const auto p = make_p1_unit_columns();
    const auto oracle = oracle_solve(p.A(), p.b_hat());
    const double omega = 1.3;
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.relax = RelaxationParams(1.0, omega);
    config.k_max = 200;

    RunHooks hooks;
    hooks.on_step = [&](const StepTrace& trace) {
        const int i = trace.row_index;
        double step_sq = 0.0;
        for (std::size_t j = 0; j < trace.x_after.size(); ++j) {
            const double d = trace.x_after[j] - trace.x_before[j];
            step_sq += d * d;
        }
        double clean = 0.0;
        const auto row = trace.A.row(i - 1);
        for (int j = 0; j < trace.A.cols(); ++j) clean += row[j] * trace.x_before[j];
        clean -= oracle.b_clean[i - 1];
        const double rn = trace.A.row_norm(i - 1);
        const double beta = omega * (2.0 - omega) * clean * clean / (rn * rn);
        const double gamma = gamma_shift_norm(trace.A, trace.y_after, oracle.r, i);
        const double eps = omega * omega * gamma * gamma;
        CHECK(step_sq <= 2.0 * omega / (2.0 - omega) * beta + 2.0 * eps + 1e-12);
    };
    run_extended(p, config, hooks);
}

TEST_CASE("selection optimality of the maximal-residual control") {
    const auto p = make_p1_unit_columns();
    SolverConfig config;
    config.variant = SolverVariant::Extended;
    config.control = MaxResidualControl{};
    config.normalize = NormalizeColumns::Off;
    config.k_max = 100;
    RunHooks hooks;
    hooks.on_step = [&](const StepTrace& trace) {
        CHECK(max_correlation_col(trace.A, trace.y_before) == trace.col_index);
        CHECK(max_residual_row(trace.A, trace.x_before, trace.rhs) == trace.row_index);
    };
    run_extended(p, config, hooks);
}

TEST_CASE("bound report renders one deterministic line") {
    BoundReport rep;
    rep.kind = BoundKind::GeometricDecay;
    rep.passed = true;
    rep.worst_violation = -1.5e-13;
    rep.at_iteration = 42;
    CHECK(rep.to_line() == "GeometricDecay passed=1 worst_violation=-1.500000e-13 at_iteration=42");
}
