// The '-' and '+' combining operations on joint distributions, the superb and
// pitiful distributions, and the bookkeeping that keeps evolved alphabets
// small: canonical forms, the S/P shortcut table, and degrading merges.
#pragma once

#include "sppolar/channel_model.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sppolar {

enum class DistTag { generic, superb, pitiful };

std::string to_string(DistTag tag);

struct TaggedDist {
    JointDist dist;
    DistTag tag = DistTag::generic;
};

enum class CombineOp { minus, plus };

std::string to_string(CombineOp op);

/// S: X = 0 deterministically, single uninformative output.
JointDist special_superb();
/// P: X uniform, single uninformative output.
JointDist special_pitiful();

/// Composite output index arithmetic for the combining operations.
///
/// minus: (y0, y1)     -> y0 * |Y1| + y1
/// plus:  (u0, y0, y1) -> (u0 * |Y0| + y0) * |Y1| + y1
struct MinusIndex {
    std::size_t size0;
    std::size_t size1;
    std::size_t operator()(std::size_t y0, std::size_t y1) const { return y0 * size1 + y1; }
    std::size_t size() const { return size0 * size1; }
};

struct PlusIndex {
    std::size_t size0;
    std::size_t size1;
    std::size_t operator()(int u0, std::size_t y0, std::size_t y1) const
    {
        return (static_cast<std::size_t>(u0) * size0 + y0) * size1 + y1;
    }
    std::size_t size() const { return 2 * size0 * size1; }
};

/// (A [-] B)(u0; y0, y1) = sum_x1 A(u0 ^ x1; y0) B(x1; y1).
JointDist op_minus(const JointDist& a, const JointDist& b);
/// (A [+] B)(u1; u0, y0, y1) = A(u0 ^ u1; y0) B(u1; y1).
JointDist op_plus(const JointDist& a, const JointDist& b);
JointDist combine(CombineOp op, const JointDist& a, const JointDist& b);

inline constexpr double kPosteriorMergeTolerance = 1e-9;

/// Drops zero-mass outputs, merges outputs whose posteriors agree to a relative
/// 1e-9 (in both P(0|y) and P(1|y)), and orders outputs by increasing P(0|y).
JointDist canonicalize(const JointDist& a);

/// S or P when `a` canonicalizes exactly (1e-12) to the corresponding single
/// output form, generic otherwise.
DistTag detect_tag(const JointDist& a);

/// Entry of the S/P shortcut table. `left_operand`/`right_operand` mean the
/// result is equivalent to that operand; `compute` means no shortcut applies.
enum class TableResult { left_operand, right_operand, superb, pitiful, compute };

std::string to_string(TableResult r);

TableResult table_lookup(CombineOp op, DistTag left, DistTag right);

/// Applies the shortcut table when either operand is S or P, otherwise
/// combines explicitly and canonicalizes.
TaggedDist table_simplify(CombineOp op, const TaggedDist& a, const TaggedDist& b);

inline constexpr std::size_t kExactAlphabet = std::numeric_limits<std::size_t>::max();

struct MergeResult {
    JointDist dist;
    /// Deterministic degradation witness: input output y goes to output map[y].
    std::vector<std::size_t> map;
};

/// Greedy degrading merge down to at most `mu` outputs. Outputs are ordered by
/// posterior and the adjacent pair with the smallest conditional-entropy
/// increase is merged first. The identity when mu >= |Y|.
MergeResult degrade_merge(const JointDist& a, std::size_t mu);

}  // namespace sppolar
