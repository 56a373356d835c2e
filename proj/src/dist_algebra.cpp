#include "sppolar/dist_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace sppolar {

std::string to_string(DistTag tag)
{
    switch (tag) {
    case DistTag::generic: return "A";
    case DistTag::superb: return "S";
    case DistTag::pitiful: return "P";
    }
    return "?";
}

std::string to_string(CombineOp op) { return op == CombineOp::minus ? "minus" : "plus"; }

std::string to_string(TableResult r)
{
    switch (r) {
    case TableResult::left_operand: return "left";
    case TableResult::right_operand: return "right";
    case TableResult::superb: return "S";
    case TableResult::pitiful: return "P";
    case TableResult::compute: return "compute";
    }
    return "?";
}

JointDist special_superb() { return JointDist::unchecked({1.0}, {0.0}); }

JointDist special_pitiful() { return JointDist::unchecked({0.5}, {0.5}); }

JointDist op_minus(const JointDist& a, const JointDist& b)
{
    const MinusIndex index{a.size(), b.size()};
    std::vector<double> m0(index.size()), m1(index.size());
    for (std::size_t y0 = 0; y0 < a.size(); ++y0) {
        const double a0 = a.mass(0, y0);
        const double a1 = a.mass(1, y0);
        for (std::size_t y1 = 0; y1 < b.size(); ++y1) {
            const double b0 = b.mass(0, y1);
            const double b1 = b.mass(1, y1);
            const std::size_t y = index(y0, y1);
            m0[y] = a0 * b0 + a1 * b1;
            m1[y] = a1 * b0 + a0 * b1;
        }
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

JointDist op_plus(const JointDist& a, const JointDist& b)
{
    const PlusIndex index{a.size(), b.size()};
    std::vector<double> m0(index.size()), m1(index.size());
    for (int u0 = 0; u0 < 2; ++u0) {
        for (std::size_t y0 = 0; y0 < a.size(); ++y0) {
            const double a_u0 = a.mass(u0, y0);
            const double a_flip = a.mass(u0 ^ 1, y0);
            for (std::size_t y1 = 0; y1 < b.size(); ++y1) {
                const std::size_t y = index(u0, y0, y1);
                m0[y] = a_u0 * b.mass(0, y1);
                m1[y] = a_flip * b.mass(1, y1);
            }
        }
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

JointDist combine(CombineOp op, const JointDist& a, const JointDist& b)
{
    return op == CombineOp::minus ? op_minus(a, b) : op_plus(a, b);
}

namespace {

// log P(0|y) - log P(1|y); zero-mass outputs get 0 so they sit mid-order.
double llr_key(double m0, double m1)
{
    if (m0 == 0.0 && m1 == 0.0)
        return 0.0;
    if (m1 == 0.0)
        return std::numeric_limits<double>::infinity();
    if (m0 == 0.0)
        return -std::numeric_limits<double>::infinity();
    return std::log(m0) - std::log(m1);
}

std::vector<std::size_t> posterior_order(const JointDist& a)
{
    std::vector<double> key(a.size());
    for (std::size_t y = 0; y < a.size(); ++y)
        key[y] = llr_key(a.mass(0, y), a.mass(1, y));
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Canonical inputs are already in order; skip the sort for them.
    if (std::is_sorted(key.begin(), key.end()))
        return order;
    // Ascending P(0|y) is descending LLR of 1 vs 0, i.e. ascending key.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return key[l] < key[r]; });
    return order;
}

bool relatively_close(double p, double q, double tol)
{
    return std::abs(p - q) <= tol * std::max(p, q);
}

bool same_posterior(double a0, double a1, double b0, double b1)
{
    const double sa = a0 + a1;
    const double sb = b0 + b1;
    return relatively_close(a0 / sa, b0 / sb, kPosteriorMergeTolerance)
        && relatively_close(a1 / sa, b1 / sb, kPosteriorMergeTolerance);
}

}  // namespace

JointDist canonicalize(const JointDist& a)
{
    std::vector<double> m0, m1;
    m0.reserve(a.size());
    m1.reserve(a.size());
    // Posteriors of the current group's first member; merging compares against
    // it so that a run of near-equal posteriors cannot drift.
    double lead0 = 0.0, lead1 = 0.0;
    for (std::size_t y : posterior_order(a)) {
        const double y0 = a.mass(0, y);
        const double y1 = a.mass(1, y);
        if (y0 + y1 <= 0.0)
            continue;
        if (!m0.empty() && same_posterior(lead0, lead1, y0, y1)) {
            m0.back() += y0;
            m1.back() += y1;
            continue;
        }
        m0.push_back(y0);
        m1.push_back(y1);
        lead0 = y0;
        lead1 = y1;
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

DistTag detect_tag(const JointDist& a)
{
    const JointDist c = canonicalize(a);
    if (c.size() != 1)
        return DistTag::generic;
    const double m0 = c.mass(0, 0);
    const double m1 = c.mass(1, 0);
    if (std::abs(m0 - 1.0) <= kMassTolerance && m1 <= kMassTolerance)
        return DistTag::superb;
    if (std::abs(m0 - 0.5) <= kMassTolerance && std::abs(m1 - 0.5) <= kMassTolerance)
        return DistTag::pitiful;
    return DistTag::generic;
}

TableResult table_lookup(CombineOp op, DistTag left, DistTag right)
{
    using enum DistTag;
    if (op == CombineOp::minus) {
        if (left == pitiful || right == pitiful)
            return TableResult::pitiful;
        if (left == superb)
            return right == superb ? TableResult::superb : TableResult::right_operand;
        if (right == superb)
            return TableResult::left_operand;
        return TableResult::compute;
    }
    if (left == superb || right == superb)
        return TableResult::superb;
    if (left == pitiful)
        return right == pitiful ? TableResult::pitiful : TableResult::right_operand;
    if (right == pitiful)
        return TableResult::left_operand;
    return TableResult::compute;
}

TaggedDist table_simplify(CombineOp op, const TaggedDist& a, const TaggedDist& b)
{
    switch (table_lookup(op, a.tag, b.tag)) {
    case TableResult::left_operand: return a;
    case TableResult::right_operand: return b;
    case TableResult::superb: return {special_superb(), DistTag::superb};
    case TableResult::pitiful: return {special_pitiful(), DistTag::pitiful};
    case TableResult::compute: break;
    }
    JointDist c = canonicalize(combine(op, a.dist, b.dist));
    const DistTag tag = detect_tag(c);
    return {std::move(c), tag};
}

namespace {

// Output mass times the binary entropy of its posterior.
double weighted_entropy(double m0, double m1)
{
    const double s = m0 + m1;
    double h = 0.0;
    if (m0 > 0.0)
        h += m0 * std::log2(s / m0);
    if (m1 > 0.0)
        h += m1 * std::log2(s / m1);
    return h;
}

}  // namespace

MergeResult degrade_merge(const JointDist& a, std::size_t mu)
{
    if (mu == 0)
        throw std::invalid_argument("merge budget must be at least 1");
    const std::size_t size = a.size();
    if (mu >= size) {
        std::vector<std::size_t> map(size);
        std::iota(map.begin(), map.end(), std::size_t{0});
        return {a, std::move(map)};
    }

    // Doubly linked list of groups in posterior order; group g is identified by
    // its position in `order`.
    const std::vector<std::size_t> order = posterior_order(a);
    std::vector<double> g0(size), g1(size);
    std::vector<std::ptrdiff_t> prev(size), next(size);
    std::vector<std::size_t> parent(size);
    std::vector<bool> alive(size, true);
    for (std::size_t g = 0; g < size; ++g) {
        g0[g] = a.mass(0, order[g]);
        g1[g] = a.mass(1, order[g]);
        prev[g] = static_cast<std::ptrdiff_t>(g) - 1;
        next[g] = g + 1 < size ? static_cast<std::ptrdiff_t>(g + 1) : -1;
        parent[g] = g;
    }

    // Cached weighted entropy per group; a merge costs h(l + r) - h(l) - h(r).
    std::vector<double> h(size);
    for (std::size_t g = 0; g < size; ++g)
        h[g] = weighted_entropy(g0[g], g1[g]);

    // Min tree over live adjacent pairs: leaf g holds the cost of merging g
    // with its successor. Ties go to the lower g.
    constexpr double kNone = std::numeric_limits<double>::infinity();
    std::size_t leaves = 1;
    while (leaves < size)
        leaves *= 2;
    std::vector<double> cost(2 * leaves, kNone);
    std::vector<std::uint32_t> best(2 * leaves, 0);
    auto pair_cost = [&](std::size_t l) {
        if (next[l] < 0)
            return kNone;
        const auto r = static_cast<std::size_t>(next[l]);
        return weighted_entropy(g0[l] + g0[r], g1[l] + g1[r]) - h[l] - h[r];
    };
    auto pull = [&](std::size_t node) {
        const std::size_t lc = 2 * node, rc = 2 * node + 1;
        const std::size_t pick = cost[lc] <= cost[rc] ? lc : rc;
        cost[node] = cost[pick];
        best[node] = best[pick];
    };
    for (std::size_t g = 0; g < leaves; ++g) {
        best[leaves + g] = static_cast<std::uint32_t>(g);
        if (g < size)
            cost[leaves + g] = pair_cost(g);
    }
    for (std::size_t node = leaves - 1; node >= 1; --node)
        pull(node);
    auto set = [&](std::size_t g, double c) {
        std::size_t node = leaves + g;
        cost[node] = c;
        for (node /= 2; node >= 1; node /= 2)
            pull(node);
    };

    std::size_t remaining = size;
    while (remaining > mu) {
        const std::size_t l = best[1];
        const auto r = static_cast<std::size_t>(next[l]);
        g0[l] += g0[r];
        g1[l] += g1[r];
        h[l] = weighted_entropy(g0[l], g1[l]);
        alive[r] = false;
        parent[r] = l;
        next[l] = next[r];
        if (next[r] >= 0)
            prev[static_cast<std::size_t>(next[r])] = static_cast<std::ptrdiff_t>(l);
        --remaining;
        set(r, kNone);
        set(l, pair_cost(l));
        if (prev[l] >= 0)
            set(static_cast<std::size_t>(prev[l]), pair_cost(static_cast<std::size_t>(prev[l])));
    }

    std::vector<std::size_t> out_index(size, 0);
    std::vector<double> m0, m1;
    m0.reserve(remaining);
    m1.reserve(remaining);
    for (std::size_t g = 0; g < size; ++g) {
        if (!alive[g])
            continue;
        out_index[g] = m0.size();
        m0.push_back(g0[g]);
        m1.push_back(g1[g]);
    }
    auto root = [&](std::size_t g) {
        while (parent[g] != g)
            g = parent[g] = parent[parent[g]];
        return g;
    };
    std::vector<std::size_t> map(size);
    for (std::size_t g = 0; g < size; ++g)
        map[order[g]] = out_index[root(g)];
    return {JointDist::unchecked(std::move(m0), std::move(m1)), std::move(map)};
}

}  // namespace sppolar
