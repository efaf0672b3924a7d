#pragma once

#include <cstdint>

#include "kaczmarz/problem.hpp"

namespace kaczmarz {

// Constructive realization of the orthogonal decomposition b_hat = b + r:
// A = U diag(sigma) V^T with seeded random orthonormal factors and singular
// values geometrically spaced from sigma_max down to sigma_max/cond over
// `rank` values; b = A x_true for a seeded random x_true; r is a seeded
// random vector projected onto N(A^T) and scaled to noise * ||b||.
struct GeneratorSpec {
    int m = 1;
    int n = 1;
    int rank = 1;
    double cond = 1.0;       // >= 1
    double noise = 0.0;      // ||r|| / ||b||
    std::uint64_t seed = 0;
    double sigma_max = 1.0;
};

// Same seed, same problem, bit for bit. Throws std::invalid_argument for an
// unsatisfiable spec (rank > min(m,n), cond < 1, noise < 0).
Problem generate_problem(const GeneratorSpec& spec);

}  // namespace kaczmarz
