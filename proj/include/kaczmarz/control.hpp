#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/rng.hpp"

namespace kaczmarz {

// Index-selection strategies for the row index i_k and column index j_k.
// All indices are 1-based, matching the algorithm descriptions.

struct CyclicControl {};

// Explicit finite schedules repeated cyclically. row_window/col_window are
// the window lengths m0/n0: every window of that many consecutive schedule
// entries (taken cyclically) must cover all indices. Validated, not inferred.
struct AlmostCyclicControl {
    std::vector<int> row_schedule;
    std::vector<int> col_schedule;
    int row_window = 0;
    int col_window = 0;
};

// Pick the largest |<A_i,x> - rhs_i| row and largest |<A^j,y>| column.
// The default residual is unnormalized, exactly as the selection rule is
// written; weight_by_row_norm switches to |residual|/||A_i||.
struct MaxResidualControl {
    bool weight_by_row_norm = false;
};

// i_k ~ p, j_k ~ q with p_i = ||A_i||^2/||A||_F^2, q_j = ||A^j||^2/||A||_F^2.
// The seed fully determines the index stream.
struct WeightedRandomControl {
    std::uint64_t seed = 0;
};

using ControlSpec =
    std::variant<CyclicControl, AlmostCyclicControl, MaxResidualControl, WeightedRandomControl>;

// A probability vector over row or column indices.
struct IndexDistribution {
    std::vector<double> weights;
};

// Cyclic control: (k mod size) + 1, 1-based, for iteration counter k >= 1.
int cyclic_next(long k, int size);

struct AlmostCyclicCheck {
    bool ok = true;
    int first_failing_window = 0;  // 1-based position in the schedule
    int missing_index = 0;         // an index absent from that window
    std::string message;
};

// Every cyclic window of `window` consecutive schedule entries must cover
// [1..size]. Entries outside [1..size] throw std::invalid_argument.
AlmostCyclicCheck validate_almost_cyclic(const std::vector<int>& schedule, int size, int window);

// argmax_i |<A_i,x> - rhs_i| (optionally weighted by 1/||A_i||);
// ties broken by the smallest index. Returns a 1-based index.
int max_residual_row(const DenseMatrix& A, std::span<const double> x,
                     std::span<const double> rhs, bool weight_by_row_norm = false);

// argmax_j |<A^j,y>| with smallest-index tie-break. Returns a 1-based index.
int max_correlation_col(const DenseMatrix& A, std::span<const double> y);

// Row distribution p and column distribution q of the squared-norm weights.
std::pair<IndexDistribution, IndexDistribution> build_distributions(const DenseMatrix& A);

// Inverse-CDF draw from the distribution, 1-based. Identical generator
// states yield identical indices.
int sample_index(const IndexDistribution& dist, SplitMix64& rng);

// Per-run selector state: cursors for schedules and the RNG stream for
// weighted-random control. One instance drives one run; in the extended loop
// the column is always selected before the row of the same iteration, so a
// random control consumes two draws per iteration in that order.
class ControlState {
  public:
    // needs_columns=false skips the column-side validation (plain Kaczmarz
    // never selects columns).
    ControlState(const ControlSpec& spec, const DenseMatrix& A, bool needs_columns = true);

    int next_col(long k, const DenseMatrix& A, std::span<const double> y);
    int next_row(long k, const DenseMatrix& A, std::span<const double> x,
                 std::span<const double> rhs);

    const ControlSpec& spec() const { return spec_; }

  private:
    ControlSpec spec_;
    IndexDistribution row_dist_;
    IndexDistribution col_dist_;
    SplitMix64 rng_;
};

}  // namespace kaczmarz
