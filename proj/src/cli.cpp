#include "kaczmarz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "kaczmarz/control.hpp"
#include "kaczmarz/diagnostics.hpp"
#include "kaczmarz/generator.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

namespace {

namespace fs = std::filesystem;

struct ProblemSource {
    std::string matrix_path;
    std::string rhs_path;
    // Inline generation, used when no matrix path is given.
    int m = 0, n = 0, rank = 0;
    double cond = 1.0, noise = 0.0;
    std::uint64_t gen_seed = 0;
};

struct SolveOptions {
    std::string variant = "mrek";
    std::string control;  // only for variant k
    double alpha = 1.0, omega = 1.0;
    long kmax = 2000;
    double tol = 0.0, tol_residual = -1.0, tol_column = -1.0;
    std::uint64_t seed = 0;
    std::string schedule_path;
    int row_window = 0, col_window = 0;
    bool mr_weighted = false;
    std::string normalize = "auto";
    std::string oracle = "on";
    std::string x0_path;
    std::string out_dir;
};

Problem load_problem(const ProblemSource& src) {
    if (!src.matrix_path.empty()) {
        if (src.rhs_path.empty())
            throw CLI::ValidationError("--rhs is required when --matrix is given");
        DenseMatrix A = read_matrix_market_file(src.matrix_path);
        std::vector<double> b = read_vector_file(src.rhs_path);
        return Problem(std::move(A), std::move(b));
    }
    if (src.m <= 0 || src.n <= 0)
        throw CLI::ValidationError("either --matrix/--rhs or generator dimensions --m/--n are "
                                   "required");
    GeneratorSpec spec;
    spec.m = src.m;
    spec.n = src.n;
    spec.rank = src.rank > 0 ? src.rank : std::min(src.m, src.n);
    spec.cond = src.cond;
    spec.noise = src.noise;
    spec.seed = src.gen_seed;
    return generate_problem(spec);
}

std::vector<int> iota_schedule(int size) {
    std::vector<int> s(size);
    std::iota(s.begin(), s.end(), 1);
    return s;
}

ControlSpec make_control(const SolveOptions& opt, const std::string& kind, int m, int n) {
    if (kind == "cyclic") return CyclicControl{};
    if (kind == "maxres") return MaxResidualControl{opt.mr_weighted};
    if (kind == "random") return WeightedRandomControl{opt.seed};
    if (kind == "almost-cyclic") {
        AlmostCyclicControl ac;
        if (opt.schedule_path.empty()) {
            // Cyclic order as the default almost-cyclic schedule.
            ac.row_schedule = iota_schedule(m);
            ac.col_schedule = iota_schedule(n);
        } else {
            auto [rows, cols] = read_schedule_file(opt.schedule_path);
            ac.row_schedule = std::move(rows);
            ac.col_schedule = std::move(cols);
        }
        ac.row_window =
            opt.row_window > 0 ? opt.row_window : static_cast<int>(ac.row_schedule.size());
        ac.col_window =
            opt.col_window > 0 ? opt.col_window : static_cast<int>(ac.col_schedule.size());
        return ac;
    }
    throw CLI::ValidationError("unknown control '" + kind + "'");
}

SolverConfig build_config(const SolveOptions& opt, const Problem& problem) {
    SolverConfig config;
    config.relax = RelaxationParams(opt.alpha, opt.omega);
    config.k_max = opt.kmax;
    config.tol_residual = opt.tol_residual >= 0.0 ? opt.tol_residual : opt.tol;
    config.tol_column = opt.tol_column >= 0.0 ? opt.tol_column : opt.tol;

    const int m = problem.A().rows();
    const int n = problem.A().cols();
    if (opt.variant == "k") {
        config.variant = SolverVariant::PlainKaczmarz;
        config.control = make_control(opt, opt.control.empty() ? "cyclic" : opt.control, m, n);
    } else {
        config.variant = SolverVariant::Extended;
        if (!opt.control.empty())
            throw CLI::ValidationError("--control applies to --variant k only; '" + opt.variant +
                                       "' implies its control");
        if (opt.variant == "ek")
            config.control = make_control(opt, "cyclic", m, n);
        else if (opt.variant == "rek")
            config.control = make_control(opt, "random", m, n);
        else if (opt.variant == "mrek")
            config.control = make_control(opt, "maxres", m, n);
        else if (opt.variant == "acek")
            config.control = make_control(opt, "almost-cyclic", m, n);
        else
            throw CLI::ValidationError("unknown variant '" + opt.variant + "'");
    }

    if (opt.normalize == "on")
        config.normalize = NormalizeColumns::On;
    else if (opt.normalize == "off")
        config.normalize = NormalizeColumns::Off;
    else
        config.normalize = NormalizeColumns::Auto;

    if (!opt.x0_path.empty()) config.x0 = read_vector_file(opt.x0_path);
    return config;
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::Converged ? "converged" : "budget";
}

double final_max_residual(const DenseMatrix& A, const RunResult& result,
                          const std::vector<double>& b_hat) {
    const std::vector<double> rhs =
        result.final_y.empty() ? b_hat : rhs_correction(b_hat, result.final_y);
    double worst = 0.0;
    for (int i = 1; i <= A.rows(); ++i)
        worst = std::max(worst, std::abs(row_residual(A, result.final_x, rhs, i)));
    return worst;
}

double vec_diff_norm(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

int cmd_generate(const GeneratorSpec& spec, const std::string& out_dir,
                 const std::string& format) {
    const Problem problem = generate_problem(spec);
    fs::create_directories(out_dir);

    const auto mm_format =
        format == "coordinate" ? MatrixMarketFormat::Coordinate : MatrixMarketFormat::Array;
    write_matrix_market_file((fs::path(out_dir) / "A.mtx").string(), problem.A(), mm_format);
    write_vector_file((fs::path(out_dir) / "b.txt").string(), problem.b_hat());

    const OracleSolution oracle = oracle_solve(problem.A(), problem.b_hat());
    std::ofstream meta((fs::path(out_dir) / "meta.txt").string());
    if (!meta) throw std::runtime_error("cannot open meta.txt for writing");
    meta << "m = " << spec.m << "\n";
    meta << "n = " << spec.n << "\n";
    meta << "rank = " << spec.rank << "\n";
    meta << "cond = " << format_double(spec.cond) << "\n";
    meta << "noise = " << format_double(spec.noise) << "\n";
    meta << "seed = " << spec.seed << "\n";
    meta << "sigma =";
    for (double s : oracle.sigma) meta << " " << format_double(s);
    meta << "\n";
    meta << "x_true =";
    for (double v : problem.meta()->x_true) meta << " " << format_double(v);
    meta << "\n";
    meta << "r =";
    for (double v : problem.meta()->r_injected) meta << " " << format_double(v);
    meta << "\n";
    return kExitOk;
}

int cmd_solve(const ProblemSource& src, const SolveOptions& opt) {
    if (opt.out_dir.empty()) throw CLI::ValidationError("--out is required");
    const Problem problem = load_problem(src);
    const SolverConfig config = build_config(opt, problem);

    std::optional<OracleSolution> oracle;
    RunHooks hooks;
    if (opt.oracle == "on") {
        oracle = oracle_solve(problem.A(), problem.b_hat());
        hooks.oracle = &*oracle;
    }

    const RunResult result = run(problem, config, hooks);

    fs::create_directories(opt.out_dir);
    write_history_csv_file((fs::path(opt.out_dir) / "history.csv").string(), result.history);

    std::ofstream summary((fs::path(opt.out_dir) / "summary.txt").string());
    if (!summary) throw std::runtime_error("cannot open summary.txt for writing");
    summary << "variant = " << opt.variant << "\n";
    summary << "stop_reason = " << stop_reason_name(result.stop_reason) << "\n";
    summary << "iterations_used = " << result.iterations_used << "\n";
    summary << "final_max_row_residual = "
            << format_double(final_max_residual(problem.A(), result, problem.b_hat())) << "\n";
    if (oracle) {
        summary << "final_dist_lss = "
                << format_double(distance_to_lss(*oracle, result.final_x)) << "\n";
        summary << "final_x_err = "
                << format_double(vec_diff_norm(result.final_x, oracle->x_ls_min_norm)) << "\n";
        if (!result.final_y.empty())
            summary << "final_y_err = " << format_double(vec_diff_norm(result.final_y, oracle->r))
                    << "\n";
        summary << "noise_radius = " << format_double(noise_radius(*oracle, problem.A())) << "\n";
    }
    return kExitOk;
}

int cmd_compare(const ProblemSource& src, const SolveOptions& base,
                const std::vector<std::string>& variants, double tol) {
    if (variants.size() < 2) throw CLI::ValidationError("compare needs at least two variants");
    if (base.out_dir.empty()) throw CLI::ValidationError("--out is required");
    const Problem problem = load_problem(src);
    const OracleSolution oracle = oracle_solve(problem.A(), problem.b_hat());

    RunHooks hooks;
    hooks.oracle = &oracle;

    std::vector<std::vector<double>> trajectories;  // dist_lss per iteration, per variant
    std::vector<long> to_tolerance(variants.size(), -1);
    std::vector<double> final_dist(variants.size(), 0.0);

    for (std::size_t v = 0; v < variants.size(); ++v) {
        SolveOptions opt = base;
        opt.variant = variants[v];
        if (opt.variant != "k") opt.control.clear();  // --control applies to the plain loop
        const SolverConfig config = build_config(opt, problem);
        const RunResult result = run(problem, config, hooks);
        std::vector<double> traj;
        traj.reserve(result.history.size());
        for (const auto& rec : result.history) {
            traj.push_back(rec.dist_lss.value_or(0.0));
            if (to_tolerance[v] < 0 && rec.dist_lss && *rec.dist_lss <= tol)
                to_tolerance[v] = rec.k;
        }
        final_dist[v] = traj.empty() ? 0.0 : traj.back();
        trajectories.push_back(std::move(traj));
    }

    fs::create_directories(base.out_dir);
    std::ofstream csv((fs::path(base.out_dir) / "compare.csv").string());
    if (!csv) throw std::runtime_error("cannot open compare.csv for writing");
    csv << "iter";
    for (const auto& v : variants) csv << "," << v;
    csv << "\n";
    std::size_t longest = 0;
    for (const auto& t : trajectories) longest = std::max(longest, t.size());
    for (std::size_t k = 0; k < longest; ++k) {
        csv << (k + 1);
        for (const auto& t : trajectories) {
            csv << ",";
            if (k < t.size()) csv << format_double(t[k]);
        }
        csv << "\n";
    }

    std::ofstream summary((fs::path(base.out_dir) / "compare_summary.txt").string());
    if (!summary) throw std::runtime_error("cannot open compare_summary.txt for writing");
    summary << "tolerance = " << format_double(tol) << "\n";
    summary << "noise_radius = " << format_double(noise_radius(oracle, problem.A())) << "\n";
    for (std::size_t v = 0; v < variants.size(); ++v) {
        summary << variants[v] << " iterations_to_tolerance = ";
        if (to_tolerance[v] < 0)
            summary << "-";
        else
            summary << to_tolerance[v];
        summary << " final_dist_lss = " << format_double(final_dist[v]) << "\n";
    }
    return kExitOk;
}

// Per-step accumulation for the identity checks of the verify command.
struct VerifyAccumulator {
    VerifyAccumulator(const DenseMatrix& A_, const OracleSolution& oracle_, double omega_)
        : A(A_), oracle(oracle_), omega(omega_) {}

    const DenseMatrix& A;
    const OracleSolution& oracle;
    double omega;

    double worst_pythagoras = 0.0;
    double worst_fejer_eq = 0.0;
    double min_fejer_slack = 0.0;
    double worst_shift = 0.0;
    bool shift_ok = true;
    long worst_pyth_at = 0, worst_fejer_at = 0;

    std::vector<double> alphas, betas, epsilons;

    void start(std::span<const double> x0) {
        double s = 0.0;
        for (std::size_t j = 0; j < x0.size(); ++j) {
            const double d = x0[j] - oracle.x_ls_min_norm[j];
            s += d * d;
        }
        alphas.push_back(s);
    }

    void on_step(const StepTrace& trace) {
        const int i = trace.row_index;
        const double gamma = gamma_shift_norm(A, trace.y_after, oracle.r, i);

        const double pyth = check_pythagoras(A, oracle, i, trace.x_before, trace.x_after,
                                             oracle.x_ls_min_norm, gamma, omega);
        if (pyth > worst_pythagoras) {
            worst_pythagoras = pyth;
            worst_pyth_at = trace.k;
        }

        const FejerStepCheck fejer = check_fejer_step(A, oracle, i, trace.x_before, trace.x_after,
                                                      oracle.x_ls_min_norm, gamma, omega);
        if (fejer.equality_residual > worst_fejer_eq) {
            worst_fejer_eq = fejer.equality_residual;
            worst_fejer_at = trace.k;
        }
        min_fejer_slack = std::min(min_fejer_slack, fejer.inequality_slack);

        const ShiftCheck shift =
            check_shift_lemma(A, i, trace.rhs[i - 1], oracle.r[i - 1], trace.y_after[i - 1],
                              {oracle.x_ls_min_norm});
        shift_ok = shift_ok && shift.ok;
        worst_shift = std::max(worst_shift, shift.worst);

        // Sequence-lemma instantiation of the per-step identity.
        double clean = 0.0;
        const auto row = A.row(i - 1);
        for (int j = 0; j < A.cols(); ++j) clean += row[j] * trace.x_before[j];
        clean -= oracle.b_clean[i - 1];
        const double rn = A.row_norm(i - 1);
        betas.push_back(omega * (2.0 - omega) * clean * clean / (rn * rn));
        epsilons.push_back(omega * omega * gamma * gamma);
        double s = 0.0;
        for (std::size_t j = 0; j < trace.x_after.size(); ++j) {
            const double d = trace.x_after[j] - oracle.x_ls_min_norm[j];
            s += d * d;
        }
        alphas.push_back(s);
    }
};

int cmd_verify(const ProblemSource& src, const SolveOptions& opt,
               std::vector<std::string> checks, int trials) {
    Problem problem = load_problem(src);
    if (problem.A().rows() > 5000 || problem.A().cols() > 5000)
        throw CLI::ValidationError("verify caps problem size at 5000x5000 (oracle cost)");
    if (opt.variant == "k")
        throw CLI::ValidationError("verify requires an extended variant (ek|rek|mrek|acek)");

    const bool is_mrek = opt.variant == "mrek";
    const bool is_acek = opt.variant == "acek";
    if (checks.empty()) {
        checks = {"pythagoras", "fejer", "shift", "sequence", "rek-bound"};
        if (is_mrek || is_acek) {
            checks.push_back("decay");
            checks.push_back("summability");
        }
    }
    for (const auto& c : checks) {
        if (c != "pythagoras" && c != "fejer" && c != "shift" && c != "sequence" &&
            c != "decay" && c != "summability" && c != "rek-bound")
            throw CLI::ValidationError("unknown check '" + c + "'");
        if ((c == "decay" || c == "summability") && !(is_mrek || is_acek))
            throw CLI::ValidationError("check '" + c + "' requires variant mrek or acek");
    }
    const auto wants = [&](const std::string& name) {
        return std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    // The max-residual loop operates on unit columns; verifying against the
    // same system the iteration runs on keeps every identity exact, so the
    // problem is normalized up front for mrek.
    if (is_mrek) {
        auto [unit, scale] = normalize_columns(problem.A());
        (void)scale;
        Problem normalized(std::move(unit), problem.b_hat());
        problem = std::move(normalized);
    }

    SolveOptions run_opt = opt;
    run_opt.normalize = "off";  // unit columns already, or variant keeps raw columns
    const SolverConfig config = build_config(run_opt, problem);
    const OracleSolution oracle = oracle_solve(problem.A(), problem.b_hat());

    // The run itself (identity checks observe every step).
    VerifyAccumulator acc{problem.A(), oracle, opt.omega};
    acc.start(config.x0.empty() ? std::vector<double>(problem.A().cols(), 0.0) : config.x0);
    RunHooks hooks;
    hooks.oracle = &oracle;
    hooks.on_step = [&acc](const StepTrace& trace) { acc.on_step(trace); };
    const RunResult result = run(problem, config, hooks);

    std::vector<BoundReport> reports;
    std::vector<std::string> extra_lines;
    bool all_passed = true;

    if (wants("pythagoras")) {
        BoundReport rep;
        rep.kind = BoundKind::Pythagoras;
        rep.worst_violation = acc.worst_pythagoras;
        rep.at_iteration = acc.worst_pyth_at;
        rep.passed = acc.worst_pythagoras <= 1e-10;
        reports.push_back(rep);
    }
    if (wants("fejer")) {
        BoundReport rep;
        rep.kind = BoundKind::FejerIdentity;
        rep.worst_violation = std::max(acc.worst_fejer_eq, -acc.min_fejer_slack);
        rep.at_iteration = acc.worst_fejer_at;
        rep.passed = acc.worst_fejer_eq <= 1e-10 && acc.min_fejer_slack >= -1e-12;
        reports.push_back(rep);
    }
    if (wants("shift")) {
        std::ostringstream line;
        line << "ShiftLemma passed=" << (acc.shift_ok ? 1 : 0) << " worst_violation=";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6e", acc.worst_shift);
        line << buf;
        extra_lines.push_back(line.str());
        all_passed = all_passed && acc.shift_ok;
    }
    if (wants("sequence")) {
        bool ok = true;
        std::string note;
        try {
            const SequenceCheck seq = check_sequence_lemma(acc.alphas, acc.betas, acc.epsilons);
            ok = seq.ok;
            if (!seq.ok) note = seq.message;
        } catch (const std::exception& e) {
            ok = false;
            note = e.what();
        }
        std::string line = "SequenceLemma passed=" + std::string(ok ? "1" : "0");
        if (!note.empty()) line += " note=\"" + note + "\"";
        extra_lines.push_back(line);
        all_passed = all_passed && ok;
    }

    if (wants("decay") || wants("summability")) {
        double b_norm = 0.0;
        for (double v : oracle.b_clean) b_norm += v * v;
        b_norm = std::sqrt(b_norm);

        double rate = 0.0, gamma_cap = 0.0, y_cap = 0.0;
        std::variant<MrekDecay, AcekDecay> mode = MrekDecay{};
        bool rate_ok = true;
        if (is_mrek) {
            rate = mrek_rate(oracle, opt.alpha, problem.A().cols());
            y_cap = b_norm;
            gamma_cap = b_norm / problem.A().min_row_norm();
        } else {
            // Empirical per-window contraction for the almost-cyclic run.
            const auto& ac = std::get<AlmostCyclicControl>(config.control);
            const int window = std::max(ac.row_window, ac.col_window);
            mode = AcekDecay{window};
            double m_tilde = b_norm;
            for (const auto& rec : result.history) {
                if (rec.k >= window) break;
                if (rec.y_err) m_tilde = std::max(m_tilde, *rec.y_err);
            }
            double rate_fit = 0.0;
            double prev = b_norm;
            for (const auto& rec : result.history) {
                if (rec.k % window != 0 || !rec.y_err) continue;
                if (prev > 1e-13) rate_fit = std::max(rate_fit, *rec.y_err / prev);
                prev = *rec.y_err;
            }
            rate = rate_fit;
            rate_ok = rate < 1.0;
            y_cap = m_tilde;
            gamma_cap = m_tilde / problem.A().min_row_norm();
        }

        if (wants("decay")) {
            // Floor at the fp resolution of the recorded norms: long runs
            // park ||y-r|| near eps * ||b_hat|| while the bound keeps falling.
            const double floor = 1e-13 * (1.0 + y_cap);
            BoundReport rep =
                check_geometric_decay(result.history, gamma_cap, y_cap, rate, mode, 1e-12, floor);
            rep.passed = rep.passed && rate_ok;
            reports.push_back(rep);
        }
        if (wants("summability")) {
            double M = gamma_cap;
            if (is_acek) M = gamma_cap * std::sqrt(std::get<AcekDecay>(mode).window);
            BoundReport rep = check_summability(result.history, M, rate);
            rep.passed = rep.passed && rate_ok;
            reports.push_back(rep);
        }
    }

    if (wants("rek-bound")) {
        reports.push_back(check_rek_expectation(problem, trials, {10, 50, 200}, opt.seed));
    }

    for (const auto& rep : reports) {
        std::cout << rep.to_line() << "\n";
        all_passed = all_passed && rep.passed;
    }
    for (const auto& line : extra_lines) std::cout << line << "\n";

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        std::ofstream csv((fs::path(opt.out_dir) / "report.csv").string());
        if (!csv) throw std::runtime_error("cannot open report.csv for writing");
        csv << "kind,passed,worst_violation,at_iteration\n";
        for (const auto& rep : reports)
            csv << bound_kind_name(rep.kind) << "," << (rep.passed ? 1 : 0) << ","
                << format_double(rep.worst_violation) << "," << rep.at_iteration << "\n";
    }

    return all_passed ? kExitOk : kExitCheckFailed;
}

// Flat key=value configuration files are expanded into --key=value tokens
// inserted ahead of the explicit command-line flags; with take-last option
// policy the flags override the file.
std::vector<std::string> config_file_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open config file: " + path);
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t[0] == '[')
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) +
                                       ": sections are not supported (flat key=value only)");
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) +
                                       ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) + ": empty key");
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;
    std::vector<std::string> expanded;
    expanded.push_back(args[0]);  // subcommand
    for (auto& token : config_file_tokens(path)) expanded.push_back(std::move(token));
    expanded.insert(expanded.end(), args.begin() + 1, args.end());
    return expanded;
}

void add_problem_source(CLI::App* cmd, ProblemSource& src) {
    cmd->add_option("--matrix", src.matrix_path, "matrix file (Matrix Market)");
    cmd->add_option("--rhs", src.rhs_path, "right-hand side vector file");
    cmd->add_option("--m", src.m, "generator: rows");
    cmd->add_option("--n", src.n, "generator: columns");
    cmd->add_option("--rank", src.rank, "generator: rank (default min(m,n))");
    cmd->add_option("--cond", src.cond, "generator: condition target");
    cmd->add_option("--noise", src.noise, "generator: ||r||/||b||");
    cmd->add_option("--gen-seed", src.gen_seed, "generator: seed");
}

void add_solver_options(CLI::App* cmd, SolveOptions& opt, bool with_variant = true) {
    if (with_variant)
        cmd->add_option("--variant", opt.variant, "solver variant")
            ->check(CLI::IsMember({"k", "ek", "rek", "mrek", "acek"}));
    cmd->add_option("--control", opt.control,
                    "row control for --variant k (cyclic|almost-cyclic|maxres|random)")
        ->check(CLI::IsMember({"cyclic", "almost-cyclic", "maxres", "random"}));
    cmd->add_option("--alpha", opt.alpha, "column relaxation in (0,2)");
    cmd->add_option("--omega", opt.omega, "row relaxation in (0,2)");
    cmd->add_option("--kmax", opt.kmax, "iteration budget")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", opt.tol, "stopping tolerance (row residual and column correlation)");
    cmd->add_option("--tol-residual", opt.tol_residual, "row-residual tolerance override");
    cmd->add_option("--tol-column", opt.tol_column, "column-correlation tolerance override");
    cmd->add_option("--seed", opt.seed, "seed for weighted-random control");
    cmd->add_option("--schedule", opt.schedule_path, "almost-cyclic schedule file");
    cmd->add_option("--row-window", opt.row_window, "almost-cyclic row window m0");
    cmd->add_option("--col-window", opt.col_window, "almost-cyclic column window n0");
    cmd->add_flag("--mr-weighted", opt.mr_weighted,
                  "weight max-residual row selection by 1/||A_i||");
    cmd->add_option("--normalize", opt.normalize, "internal column normalization")
        ->check(CLI::IsMember({"auto", "on", "off"}));
    cmd->add_option("--oracle", opt.oracle, "compute oracle columns")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--x0", opt.x0_path, "starting point vector file");
    cmd->add_option("--out", opt.out_dir, "output directory");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Row/column-action least-squares solvers for inconsistent linear systems"};
    app.require_subcommand(1);

    // generate
    GeneratorSpec gen_spec;
    std::string gen_out = ".";
    std::string gen_format = "array";
    auto* generate = app.add_subcommand("generate", "write a seeded random problem to disk");
    generate->add_option("--m", gen_spec.m, "rows")->required()->check(CLI::PositiveNumber);
    generate->add_option("--n", gen_spec.n, "columns")->required()->check(CLI::PositiveNumber);
    generate->add_option("--rank", gen_spec.rank, "rank")->required();
    generate->add_option("--cond", gen_spec.cond, "condition target");
    generate->add_option("--noise", gen_spec.noise, "||r||/||b||");
    generate->add_option("--seed", gen_spec.seed, "generator seed");
    generate->add_option("--out", gen_out, "output directory");
    generate->add_option("--format", gen_format, "matrix file format")
        ->check(CLI::IsMember({"array", "coordinate"}));

    // solve
    ProblemSource solve_src;
    SolveOptions solve_opt;
    std::string config_path;
    auto* solve = app.add_subcommand("solve", "run one solver, write history CSV and summary");
    solve->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    solve->add_option("--config", config_path, "flat key=value configuration file");
    add_problem_source(solve, solve_src);
    add_solver_options(solve, solve_opt);

    // compare
    ProblemSource cmp_src;
    SolveOptions cmp_opt;
    std::vector<std::string> cmp_variants;
    double cmp_tol = 1e-8;
    auto* compare = app.add_subcommand("compare", "run several variants on one problem");
    compare->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    compare->add_option("--config", config_path, "flat key=value configuration file");
    add_problem_source(compare, cmp_src);
    add_solver_options(compare, cmp_opt, /*with_variant=*/false);
    compare->add_option("--variants", cmp_variants, "comma-separated variant list")
        ->required()
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    compare->add_option("--dist-tol", cmp_tol, "tolerance for the iterations-to-tolerance table");

    // verify
    ProblemSource ver_src;
    SolveOptions ver_opt;
    std::vector<std::string> ver_checks;
    int ver_trials = 100;
    auto* verify = app.add_subcommand("verify", "run convergence-identity checks");
    verify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    verify->add_option("--config", config_path, "flat key=value configuration file");
    add_problem_source(verify, ver_src);
    add_solver_options(verify, ver_opt);
    verify->add_option("--checks", ver_checks,
                       "checks to run (pythagoras,fejer,shift,sequence,decay,summability,"
                       "rek-bound); default: all applicable")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    verify->add_option("--trials", ver_trials, "trials for the rek-bound check");

    std::vector<std::string> expanded;
    std::vector<const char*> argv;
    argv.push_back("kaczmarz");
    try {
        expanded = expand_config(args);
        for (const auto& a : expanded) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (generate->parsed()) return cmd_generate(gen_spec, gen_out, gen_format);
        if (solve->parsed()) return cmd_solve(solve_src, solve_opt);
        if (compare->parsed()) return cmd_compare(cmp_src, cmp_opt, cmp_variants, cmp_tol);
        if (verify->parsed()) return cmd_verify(ver_src, ver_opt, ver_checks, ver_trials);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace kaczmarz
