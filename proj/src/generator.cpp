#include "kaczmarz/generator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "kaczmarz/rng.hpp"

namespace kaczmarz {

namespace {

Eigen::MatrixXd random_orthonormal(int rows, int cols, SplitMix64& rng) {
    Eigen::MatrixXd G(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) G(i, j) = standard_normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    return Q;
}

}  // namespace

Problem generate_problem(const GeneratorSpec& spec) {
    if (spec.m < 1 || spec.n < 1)
        throw std::invalid_argument("generate_problem: dimensions must be positive");
    if (spec.rank < 1 || spec.rank > std::min(spec.m, spec.n))
        throw std::invalid_argument("generate_problem: rank must lie in [1, min(m,n)]");
    if (spec.cond < 1.0) throw std::invalid_argument("generate_problem: cond must be at least 1");
    if (spec.noise < 0.0) throw std::invalid_argument("generate_problem: noise must be nonnegative");
    if (spec.sigma_max <= 0.0)
        throw std::invalid_argument("generate_problem: sigma_max must be positive");

    SplitMix64 rng(spec.seed);
    const Eigen::MatrixXd U = random_orthonormal(spec.m, spec.rank, rng);
    const Eigen::MatrixXd V = random_orthonormal(spec.n, spec.rank, rng);

    // Singular values geometrically spaced from sigma_max down to sigma_max/cond.
    Eigen::VectorXd sigma(spec.rank);
    for (int i = 0; i < spec.rank; ++i) {
        const double t = spec.rank > 1 ? static_cast<double>(i) / (spec.rank - 1) : 0.0;
        sigma(i) = spec.sigma_max * std::pow(spec.cond, -t);
    }

    const Eigen::MatrixXd M = U * sigma.asDiagonal() * V.transpose();

    std::vector<double> entries(static_cast<std::size_t>(spec.m) * spec.n);
    for (int i = 0; i < spec.m; ++i)
        for (int j = 0; j < spec.n; ++j) entries[static_cast<std::size_t>(i) * spec.n + j] = M(i, j);
    DenseMatrix A(spec.m, spec.n, std::move(entries));

    Eigen::VectorXd x_true(spec.n);
    for (int j = 0; j < spec.n; ++j) x_true(j) = standard_normal(rng);
    const Eigen::VectorXd b = M * x_true;

    // Noise: seeded vector projected onto N(A^T), scaled to noise * ||b||.
    Eigen::VectorXd r = Eigen::VectorXd::Zero(spec.m);
    if (spec.noise > 0.0 && spec.rank < spec.m) {
        Eigen::VectorXd w(spec.m);
        for (int i = 0; i < spec.m; ++i) w(i) = standard_normal(rng);
        w -= U * (U.transpose() * w);
        const double wn = w.norm();
        if (wn > 0.0) r = w * (spec.noise * b.norm() / wn);
    }

    std::vector<double> b_hat(spec.m);
    for (int i = 0; i < spec.m; ++i) b_hat[i] = b(i) + r(i);

    ProblemMeta meta;
    meta.x_true.assign(x_true.data(), x_true.data() + spec.n);
    meta.r_injected.assign(r.data(), r.data() + spec.m);
    return Problem(std::move(A), std::move(b_hat), std::move(meta));
}

}  // namespace kaczmarz
