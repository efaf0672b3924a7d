#pragma once

#include <optional>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"

namespace kaczmarz {

// Ground-truth metadata carried by generated problems: the vector the clean
// right-hand side was built from and the injected range-orthogonal noise.
struct ProblemMeta {
    std::vector<double> x_true;
    std::vector<double> r_injected;
};

// An (A, b_hat) pair. Construction rejects zero rows and zero columns (the
// update rules divide by the corresponding norms) and, when metadata is
// present, verifies that the injected noise is orthogonal to every column.
class Problem {
  public:
    Problem(DenseMatrix A, std::vector<double> b_hat,
            std::optional<ProblemMeta> meta = std::nullopt);

    const DenseMatrix& A() const { return A_; }
    const std::vector<double>& b_hat() const { return b_hat_; }
    const std::optional<ProblemMeta>& meta() const { return meta_; }

  private:
    DenseMatrix A_;
    std::vector<double> b_hat_;
    std::optional<ProblemMeta> meta_;
};

// Step-length factors for the column (alpha) and row (omega) updates.
// Both must lie in (0,2); enforced here so every solver entry point can rely
// on it.
struct RelaxationParams {
    RelaxationParams(double alpha_, double omega_);

    double alpha;
    double omega;
};

}  // namespace kaczmarz
