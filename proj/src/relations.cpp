#include "sppolar/relations.hpp"

#include "sppolar/detail/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sppolar {

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), q_(rows * cols, 0.0) {}

StochasticMatrix StochasticMatrix::identity(std::size_t size)
{
    StochasticMatrix q(size, size);
    for (std::size_t i = 0; i < size; ++i)
        q(i, i) = 1.0;
    return q;
}

StochasticMatrix StochasticMatrix::deterministic(std::size_t cols, const std::vector<std::size_t>& map)
{
    StochasticMatrix q(map.size(), cols);
    for (std::size_t r = 0; r < map.size(); ++r) {
        if (map[r] >= cols)
            throw std::invalid_argument("deterministic map target out of range");
        q(r, map[r]) = 1.0;
    }
    return q;
}

bool StochasticMatrix::is_stochastic(double tol) const
{
    for (std::size_t r = 0; r < rows_; ++r) {
        double total = 0.0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (!((*this)(r, c) >= 0.0))
                return false;
            total += (*this)(r, c);
        }
        if (std::abs(total - 1.0) > tol)
            return false;
    }
    return true;
}

JointDist apply_permutation(const JointDist& a, const InputFlip& f)
{
    if (f.size() != a.size())
        throw std::invalid_argument("input flip must be defined on every output symbol");
    std::vector<double> m0(a.size()), m1(a.size());
    for (std::size_t y = 0; y < a.size(); ++y) {
        if (f[y] > 1)
            throw std::invalid_argument("input flip values must be bits");
        m0[y] = a.mass(f[y], y);
        m1[y] = a.mass(1 ^ f[y], y);
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

JointDist apply_degradation(const JointDist& b, const StochasticMatrix& q)
{
    if (q.rows() != b.size())
        throw std::invalid_argument("degradation kernel rows must match the source alphabet");
    std::vector<double> m0(q.cols(), 0.0), m1(q.cols(), 0.0);
    for (std::size_t y1 = 0; y1 < q.rows(); ++y1) {
        const double b0 = b.mass(0, y1);
        const double b1 = b.mass(1, y1);
        for (std::size_t y0 = 0; y0 < q.cols(); ++y0) {
            const double w = q(y1, y0);
            if (w == 0.0)
                continue;
            m0[y0] += b0 * w;
            m1[y0] += b1 * w;
        }
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

JointDist apply_step(const JointDist& upper, const RelationStep& step)
{
    if (const auto* d = std::get_if<Degradation>(&step))
        return apply_degradation(upper, d->q);
    return apply_permutation(upper, std::get<Permutation>(step).f);
}

double degradation_residual(const JointDist& a, const JointDist& b, const StochasticMatrix& q)
{
    if (q.rows() != b.size() || q.cols() != a.size())
        throw std::invalid_argument("degradation kernel dimensions do not match the distributions");
    return max_abs_diff(a, apply_degradation(b, q));
}

bool verify_degradation(const JointDist& a, const JointDist& b, const StochasticMatrix& q)
{
    return q.is_stochastic(kLinkTolerance) && degradation_residual(a, b, q) <= kLinkTolerance;
}

std::optional<StochasticMatrix> check_degraded(const JointDist& a, const JointDist& b)
{
    const std::size_t ya = a.size();
    const std::size_t yb = b.size();
    // Variable (y1, y0) sits at column y1 * ya + y0.
    detail::EqualitySystem sys;
    sys.rows = yb + 2 * ya;
    sys.cols = yb * ya;
    sys.a.assign(sys.rows * sys.cols, 0.0);
    sys.b.assign(sys.rows, 0.0);
    for (std::size_t y1 = 0; y1 < yb; ++y1) {
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            sys.at(y1, y1 * ya + y0) = 1.0;
        sys.b[y1] = 1.0;
    }
    for (int x = 0; x < 2; ++x) {
        for (std::size_t y0 = 0; y0 < ya; ++y0) {
            const std::size_t row = yb + static_cast<std::size_t>(x) * ya + y0;
            for (std::size_t y1 = 0; y1 < yb; ++y1)
                sys.at(row, y1 * ya + y0) = b.mass(x, y1);
            sys.b[row] = a.mass(x, y0);
        }
    }
    const auto solution = detail::find_feasible(std::move(sys), 1e-9);
    if (!solution)
        return std::nullopt;

    StochasticMatrix q(yb, ya);
    for (std::size_t y1 = 0; y1 < yb; ++y1) {
        double total = 0.0;
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            total += (*solution)[y1 * ya + y0];
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            q(y1, y0) = total > 0.0 ? (*solution)[y1 * ya + y0] / total : (y0 == 0 ? 1.0 : 0.0);
    }
    if (!verify_degradation(a, b, q))
        return std::nullopt;
    return q;
}

namespace {

double link_residual(const JointDist& lower, const JointDist& upper, const RelationStep& step)
{
    if (const auto* d = std::get_if<Degradation>(&step)) {
        if (d->q.rows() != upper.size() || d->q.cols() != lower.size() || !d->q.is_stochastic(kLinkTolerance))
            return std::numeric_limits<double>::infinity();
        return degradation_residual(lower, upper, d->q);
    }
    const auto& f = std::get<Permutation>(step).f;
    if (f.size() != upper.size() || lower.size() != upper.size())
        return std::numeric_limits<double>::infinity();
    return max_abs_diff(lower, apply_permutation(upper, f));
}

}  // namespace

ChainCheck check_chain(const JointDist& lower, const JointDist& upper, const RelationWitness& w)
{
    ChainCheck result;
    if (w.steps.empty()) {
        result.max_residual = max_abs_diff(lower, upper);
        result.ok = result.max_residual <= kLinkTolerance;
        result.failed_link = result.ok ? -1 : 0;
        return result;
    }
    if (w.intermediates.size() + 1 != w.steps.size())
        throw std::invalid_argument("a chain of t steps needs t - 1 intermediate distributions");

    result.ok = true;
    for (std::size_t k = 0; k < w.steps.size(); ++k) {
        const JointDist& below = k == 0 ? lower : w.intermediates[k - 1];
        const JointDist& above = k + 1 == w.steps.size() ? upper : w.intermediates[k];
        const double r = link_residual(below, above, w.steps[k]);
        result.max_residual = std::max(result.max_residual, r);
        if (!(r <= kLinkTolerance) && result.ok) {
            result.ok = false;
            result.failed_link = static_cast<int>(k);
        }
    }
    return result;
}

bool verify_chain(const JointDist& lower, const JointDist& upper, const RelationWitness& w)
{
    return check_chain(lower, upper, w).ok;
}

RelationWitness witness_pitiful(const JointDist& a)
{
    // P [=d C1 [=p C2 [=d A, with C2 over outputs (y0, x1) at index 2 y0 + x1.
    const std::size_t ya = a.size();
    StochasticMatrix split(ya, 2 * ya);
    for (std::size_t y0 = 0; y0 < ya; ++y0) {
        split(y0, 2 * y0) = 0.5;
        split(y0, 2 * y0 + 1) = 0.5;
    }
    JointDist c2 = apply_degradation(a, split);

    InputFlip f(2 * ya);
    for (std::size_t y = 0; y < 2 * ya; ++y)
        f[y] = static_cast<std::uint8_t>(y & 1);
    JointDist c1 = apply_permutation(c2, f);

    StochasticMatrix erase = StochasticMatrix::deterministic(1, std::vector<std::size_t>(2 * ya, 0));

    RelationWitness w;
    w.steps = {Degradation{std::move(erase)}, Permutation{std::move(f)}, Degradation{std::move(split)}};
    w.intermediates = {std::move(c1), std::move(c2)};
    return w;
}

RelationWitness witness_superb(const JointDist& a)
{
    // A [=d D1 [=p D2 [=d S, with D1, D2 over outputs (x0, y0) at index x0 |Y| + y0.
    const std::size_t ya = a.size();
    StochasticMatrix spread(1, 2 * ya);
    for (int x0 = 0; x0 < 2; ++x0)
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            spread(0, static_cast<std::size_t>(x0) * ya + y0) = a.mass(x0, y0);
    // Rows of a valid distribution sum to 1 only up to rounding; renormalize so
    // the kernel is exactly stochastic.
    double total = 0.0;
    for (std::size_t c = 0; c < 2 * ya; ++c)
        total += spread(0, c);
    for (std::size_t c = 0; c < 2 * ya; ++c)
        spread(0, c) /= total;
    JointDist d2 = apply_degradation(special_superb(), spread);

    InputFlip g(2 * ya);
    for (std::size_t y = 0; y < 2 * ya; ++y)
        g[y] = static_cast<std::uint8_t>(y >= ya ? 1 : 0);
    JointDist d1 = apply_permutation(d2, g);

    std::vector<std::size_t> drop_input(2 * ya);
    for (std::size_t y = 0; y < 2 * ya; ++y)
        drop_input[y] = y % ya;
    StochasticMatrix collapse = StochasticMatrix::deterministic(ya, drop_input);

    RelationWitness w;
    w.steps = {Degradation{std::move(collapse)}, Permutation{std::move(g)}, Degradation{std::move(spread)}};
    w.intermediates = {std::move(d1), std::move(d2)};
    return w;
}

PreserveCase preserve_case(int number)
{
    if (number < 1 || number > 8)
        throw std::invalid_argument("order-preservation cases are numbered 1 to 8");
    const int k = number - 1;
    return {number, (k & 1) ? CombineOp::plus : CombineOp::minus, k < 4, (k & 2) == 0};
}

namespace {

void check_step_kind(const PreserveCase& c, const RelationStep& step)
{
    const bool is_degradation = std::holds_alternative<Degradation>(step);
    if (is_degradation != c.is_degradation)
        throw std::invalid_argument("case " + std::to_string(c.number) + " expects a "
                                    + (c.is_degradation ? "degradation" : "permutation") + " step");
}

}  // namespace

std::pair<JointDist, JointDist> preserve_pair(int number, const JointDist& a, const JointDist& b,
                                              const RelationStep& step)
{
    const PreserveCase c = preserve_case(number);
    check_step_kind(c, step);
    JointDist upper = combine(c.op, a, b);
    JointDist lower = c.on_left ? combine(c.op, apply_step(a, step), b) : combine(c.op, a, apply_step(b, step));
    return {std::move(lower), std::move(upper)};
}

RelationWitness witness_preserve(int number, const JointDist& a, const JointDist& b, const RelationStep& step)
{
    const PreserveCase c = preserve_case(number);
    check_step_kind(c, step);
    const std::size_t ya = a.size();
    const std::size_t yb = b.size();
    RelationWitness w;

    if (c.is_degradation) {
        const StochasticMatrix& q = std::get<Degradation>(step).q;
        const std::size_t ya_low = c.on_left ? q.cols() : ya;
        const std::size_t yb_low = c.on_left ? yb : q.cols();
        if (c.on_left ? q.rows() != ya : q.rows() != yb)
            throw std::invalid_argument("degradation step does not act on the chosen operand");
        // Q' copies every untouched coordinate and applies Q to the degraded one.
        if (c.op == CombineOp::minus) {
            const MinusIndex hi{ya, yb}, lo{ya_low, yb_low};
            StochasticMatrix qq(hi.size(), lo.size());
            for (std::size_t y0 = 0; y0 < ya; ++y0)
                for (std::size_t y1 = 0; y1 < yb; ++y1)
                    for (std::size_t t = 0; t < q.cols(); ++t)
                        qq(hi(y0, y1), c.on_left ? lo(t, y1) : lo(y0, t)) = c.on_left ? q(y0, t) : q(y1, t);
            w.steps.push_back(Degradation{std::move(qq)});
        } else {
            const PlusIndex hi{ya, yb}, lo{ya_low, yb_low};
            StochasticMatrix qq(hi.size(), lo.size());
            for (int u0 = 0; u0 < 2; ++u0)
                for (std::size_t y0 = 0; y0 < ya; ++y0)
                    for (std::size_t y1 = 0; y1 < yb; ++y1)
                        for (std::size_t t = 0; t < q.cols(); ++t)
                            qq(hi(u0, y0, y1), c.on_left ? lo(u0, t, y1) : lo(u0, y0, t)) =
                                c.on_left ? q(y0, t) : q(y1, t);
            w.steps.push_back(Degradation{std::move(qq)});
        }
        return w;
    }

    const InputFlip& f = std::get<Permutation>(step).f;
    if (f.size() != (c.on_left ? ya : yb))
        throw std::invalid_argument("permutation step does not act on the chosen operand");

    if (c.op == CombineOp::minus) {
        // g(y0, y1) = f(y0) (case 3) or f(y1) (case 7).
        const MinusIndex idx{ya, yb};
        InputFlip g(idx.size());
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            for (std::size_t y1 = 0; y1 < yb; ++y1)
                g[idx(y0, y1)] = c.on_left ? f[y0] : f[y1];
        w.steps.push_back(Permutation{std::move(g)});
        return w;
    }

    // Plus: relabel u0 -> u0 ^ f(.), which is a deterministic degradation.
    const PlusIndex idx{ya, yb};
    std::vector<std::size_t> relabel(idx.size());
    for (int u0 = 0; u0 < 2; ++u0)
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            for (std::size_t y1 = 0; y1 < yb; ++y1) {
                const int flip = c.on_left ? f[y0] : f[y1];
                relabel[idx(u0, y0, y1)] = idx(u0 ^ flip, y0, y1);
            }
    StochasticMatrix qq = StochasticMatrix::deterministic(idx.size(), relabel);
    if (c.on_left) {
        w.steps.push_back(Degradation{std::move(qq)});
        return w;
    }

    // Case 8: A o B' [=d C [=p A o B with C = (A o B) flipped by f'(u0,y0,y1) = f(y1).
    InputFlip f_prime(idx.size());
    for (int u0 = 0; u0 < 2; ++u0)
        for (std::size_t y0 = 0; y0 < ya; ++y0)
            for (std::size_t y1 = 0; y1 < yb; ++y1)
                f_prime[idx(u0, y0, y1)] = f[y1];
    JointDist cdist = apply_permutation(op_plus(a, b), f_prime);
    w.steps.push_back(Degradation{std::move(qq)});
    w.steps.push_back(Permutation{std::move(f_prime)});
    w.intermediates.push_back(std::move(cdist));
    return w;
}

std::pair<JointDist, JointDist> table_operands(DistTag row, DistTag col, const JointDist& a, const JointDist& b)
{
    auto pick = [](DistTag tag, const JointDist& generic) {
        switch (tag) {
        case DistTag::superb: return special_superb();
        case DistTag::pitiful: return special_pitiful();
        case DistTag::generic: break;
        }
        return generic;
    };
    return {pick(row, a), pick(col, b)};
}

JointDist table_claim(CombineOp op, DistTag row, DistTag col, const JointDist& a, const JointDist& b)
{
    auto [left, right] = table_operands(row, col, a, b);
    switch (table_lookup(op, row, col)) {
    case TableResult::left_operand: return left;
    case TableResult::right_operand: return right;
    case TableResult::superb: return special_superb();
    case TableResult::pitiful: return special_pitiful();
    case TableResult::compute: break;
    }
    throw std::invalid_argument("the generic/generic cell has no shortcut");
}

namespace {

using WitnessPair = std::pair<RelationWitness, RelationWitness>;

RelationWitness single(RelationStep step)
{
    RelationWitness w;
    w.steps.push_back(std::move(step));
    return w;
}

StochasticMatrix identity_kernel(std::size_t n) { return StochasticMatrix::identity(n); }

// Row '?' spread over the outputs of a marginal: Q(y | ?) = mass(y).
StochasticMatrix marginal_kernel(const JointDist& d)
{
    StochasticMatrix q(1, d.size());
    double total = 0.0;
    for (std::size_t y = 0; y < d.size(); ++y)
        total += d.output_mass(y);
    for (std::size_t y = 0; y < d.size(); ++y)
        q(0, y) = d.output_mass(y) / total;
    return q;
}

// A [-] S ~ A and S [-] B ~ B: the composite alphabet is the operand's own
// alphabet with a constant '?' coordinate, so both directions are identities.
WitnessPair minus_absorbs_superb(const JointDist& kept)
{
    return {single(Degradation{identity_kernel(kept.size())}), single(Degradation{identity_kernel(kept.size())})};
}

// A [-] P ~ P and P [-] B ~ P: the result is the operand's output marginal
// split evenly between the inputs.
WitnessPair minus_collapses_to_pitiful(const JointDist& computed, const JointDist& other)
{
    return {single(Degradation{marginal_kernel(other)}), witness_pitiful(computed)};
}

WitnessPair plus_with_superb_right(const JointDist& computed)
{
    // A [+] S ~ S.
    StochasticMatrix erase = StochasticMatrix::deterministic(1, std::vector<std::size_t>(computed.size(), 0));
    return {witness_superb(computed), single(Degradation{std::move(erase)})};
}

WitnessPair plus_with_pitiful_right(const JointDist& a, const JointDist& computed)
{
    // A [+] P ~ A over composite outputs (u0, y0, ?) at index u0 |Y0| + y0.
    const std::size_t ya = a.size();
    InputFlip by_u0(2 * ya);
    for (std::size_t y = 0; y < 2 * ya; ++y)
        by_u0[y] = static_cast<std::uint8_t>(y >= ya ? 1 : 0);

    // computed [=p C1 [=d A with Q(u0, y0 | y1) = 1/2 [y1 = y0].
    StochasticMatrix split(ya, 2 * ya);
    for (std::size_t y = 0; y < ya; ++y) {
        split(y, y) = 0.5;
        split(y, ya + y) = 0.5;
    }
    JointDist c1 = apply_degradation(a, split);
    RelationWitness down;
    down.steps = {Permutation{by_u0}, Degradation{std::move(split)}};
    down.intermediates = {std::move(c1)};

    // A [=d C2 [=p computed with Q(y1 | u0, y0) = [y1 = y0].
    JointDist c2 = apply_permutation(computed, by_u0);
    std::vector<std::size_t> drop_u0(2 * ya);
    for (std::size_t y = 0; y < 2 * ya; ++y)
        drop_u0[y] = y % ya;
    RelationWitness up;
    up.steps = {Degradation{StochasticMatrix::deterministic(ya, drop_u0)}, Permutation{by_u0}};
    up.intermediates = {std::move(c2)};
    return {std::move(down), std::move(up)};
}

WitnessPair plus_with_superb_left(const JointDist& b, const JointDist& computed)
{
    // S [+] B ~ S over composite outputs (u0, ?, y1) at index u0 |Y1| + y1.
    const std::size_t yb = b.size();
    InputFlip by_u0(2 * yb);
    for (std::size_t y = 0; y < 2 * yb; ++y)
        by_u0[y] = static_cast<std::uint8_t>(y >= yb ? 1 : 0);
    JointDist c3 = apply_permutation(computed, by_u0);
    RelationWitness up;
    up.steps = {Degradation{StochasticMatrix::deterministic(1, std::vector<std::size_t>(2 * yb, 0))},
                Permutation{std::move(by_u0)}};
    up.intermediates = {std::move(c3)};
    return {witness_superb(computed), std::move(up)};
}

WitnessPair plus_with_pitiful_left(const JointDist& b)
{
    // P [+] B ~ B over composite outputs (u0, ?, y1) at index u0 |Y1| + y1.
    const std::size_t yb = b.size();
    StochasticMatrix split(yb, 2 * yb);
    for (std::size_t y = 0; y < yb; ++y) {
        split(y, y) = 0.5;
        split(y, yb + y) = 0.5;
    }
    std::vector<std::size_t> drop_u0(2 * yb);
    for (std::size_t y = 0; y < 2 * yb; ++y)
        drop_u0[y] = y % yb;
    return {single(Degradation{std::move(split)}), single(Degradation{StochasticMatrix::deterministic(yb, drop_u0)})};
}

}  // namespace

std::pair<RelationWitness, RelationWitness> witness_table_entry(CombineOp op, DistTag row, DistTag col,
                                                                const JointDist& a, const JointDist& b)
{
    using enum DistTag;
    if (row == generic && col == generic)
        throw std::invalid_argument("the generic/generic cell has no shortcut");
    auto [left, right] = table_operands(row, col, a, b);
    const JointDist computed = combine(op, left, right);

    if (op == CombineOp::minus) {
        if (col == pitiful)
            return minus_collapses_to_pitiful(computed, left);
        if (row == pitiful)
            return minus_collapses_to_pitiful(computed, right);
        if (col == superb)
            return minus_absorbs_superb(left);
        return minus_absorbs_superb(right);  // row == superb
    }

    if (col == superb)
        return plus_with_superb_right(computed);
    if (row == superb)
        return plus_with_superb_left(right, computed);
    if (col == pitiful)
        return plus_with_pitiful_right(left, computed);
    return plus_with_pitiful_left(right);  // row == pitiful, col generic
}

}  // namespace sppolar
