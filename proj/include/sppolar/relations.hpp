// Degradation and input-permutation relations between joint distributions,
// chains of them, and explicit witness chains for the ordering facts the
// construction relies on: P below everything, S above everything, the
// combining operations preserving the order, and the S/P shortcut table.
#pragma once

#include "sppolar/channel_model.hpp"
#include "sppolar/dist_algebra.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace sppolar {

inline constexpr double kLinkTolerance = 1e-10;

/// Q(y0|y1) stored by source row: row y1 (output of the better distribution)
/// is a probability vector over the outputs y0 of the degraded one.
class StochasticMatrix {
public:
    StochasticMatrix() = default;
    StochasticMatrix(std::size_t rows, std::size_t cols);

    static StochasticMatrix identity(std::size_t size);
    /// Row r puts all of its mass on column map[r].
    static StochasticMatrix deterministic(std::size_t cols, const std::vector<std::size_t>& map);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return q_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return q_[r * cols_ + c]; }

    /// Every row is a distribution (nonnegative, sums to 1 within tol).
    bool is_stochastic(double tol = 1e-12) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> q_;
};

/// f: Y -> {0,1}, one entry per output symbol.
using InputFlip = std::vector<std::uint8_t>;

struct Degradation {
    StochasticMatrix q;
};

struct Permutation {
    InputFlip f;
};

using RelationStep = std::variant<Degradation, Permutation>;

/// Certifies lower [= upper through lower = C_0, C_1, ..., C_t = upper.
/// steps[k] relates C_k (below) to C_{k+1} (above); `intermediates` holds
/// C_1..C_{t-1}.
struct RelationWitness {
    std::vector<RelationStep> steps;
    std::vector<JointDist> intermediates;
};

/// A'(x;y) = A(x ^ f(y); y).
JointDist apply_permutation(const JointDist& a, const InputFlip& f);
/// A(x;y0) = sum_y1 B(x;y1) Q(y0|y1).
JointDist apply_degradation(const JointDist& b, const StochasticMatrix& q);
/// The distribution a step produces from the one above it.
JointDist apply_step(const JointDist& upper, const RelationStep& step);

/// Largest entrywise violation of A = B Q. Throws std::invalid_argument on a
/// dimension mismatch.
double degradation_residual(const JointDist& a, const JointDist& b, const StochasticMatrix& q);
bool verify_degradation(const JointDist& a, const JointDist& b, const StochasticMatrix& q);

/// Decides A degraded from B by linear feasibility over Q. The returned
/// matrix is always accepted by verify_degradation.
std::optional<StochasticMatrix> check_degraded(const JointDist& a, const JointDist& b);

struct ChainCheck {
    bool ok = false;
    double max_residual = 0.0;
    /// First failing link (0-based), or -1.
    int failed_link = -1;
};

ChainCheck check_chain(const JointDist& lower, const JointDist& upper, const RelationWitness& w);
bool verify_chain(const JointDist& lower, const JointDist& upper, const RelationWitness& w);

/// P [= A.
RelationWitness witness_pitiful(const JointDist& a);
/// A [= S.
RelationWitness witness_superb(const JointDist& a);

/// The eight order-preservation cases, numbered as
///   1: degrade A, minus   2: degrade A, plus   3: permute A, minus   4: permute A, plus
///   5: degrade B, minus   6: degrade B, plus   7: permute B, minus   8: permute B, plus
struct PreserveCase {
    int number;
    CombineOp op;
    bool on_left;
    bool is_degradation;
};

PreserveCase preserve_case(int number);

/// (lower, upper) of a case: `step` turns A into A' (cases 1-4) or B into B'
/// (cases 5-8), and the pair is (A' o B, A o B) or (A o B', A o B).
std::pair<JointDist, JointDist> preserve_pair(int number, const JointDist& a, const JointDist& b,
                                              const RelationStep& step);

/// Witness for preserve_pair(...).first [= preserve_pair(...).second. Throws
/// std::invalid_argument when the step kind does not match the case.
RelationWitness witness_preserve(int number, const JointDist& a, const JointDist& b, const RelationStep& step);

/// Operands of a shortcut-table cell: a generic row/column stands for the
/// supplied A/B, S and P for the special distributions.
std::pair<JointDist, JointDist> table_operands(DistTag row, DistTag col, const JointDist& a, const JointDist& b);

/// The distribution the shortcut table claims for a cell.
JointDist table_claim(CombineOp op, DistTag row, DistTag col, const JointDist& a, const JointDist& b);

/// Chains (computed [= claimed, claimed [= computed), where computed is the
/// explicit combination of the cell's operands and claimed is
/// table_claim(...). Throws std::invalid_argument for the generic/generic cell.
std::pair<RelationWitness, RelationWitness> witness_table_entry(CombineOp op, DistTag row, DistTag col,
                                                                const JointDist& a, const JointDist& b);

}  // namespace sppolar
