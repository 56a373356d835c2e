#include "sppolar/construction.hpp"

#include "sppolar/detail/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace sppolar {

namespace {

const DistHandle& superb_handle()
{
    static const DistHandle h = std::make_shared<const TaggedDist>(TaggedDist{special_superb(), DistTag::superb});
    return h;
}

const DistHandle& pitiful_handle()
{
    static const DistHandle h = std::make_shared<const TaggedDist>(TaggedDist{special_pitiful(), DistTag::pitiful});
    return h;
}

DistHandle combine_handles(CombineOp op, const DistHandle& a, const DistHandle& b, std::size_t mu)
{
    switch (table_lookup(op, a->tag, b->tag)) {
    case TableResult::left_operand: return a;
    case TableResult::right_operand: return b;
    case TableResult::superb: return superb_handle();
    case TableResult::pitiful: return pitiful_handle();
    case TableResult::compute: break;
    }
    JointDist d = canonicalize(combine(op, a->dist, b->dist));
    if (d.size() > mu)
        d = degrade_merge(d, mu).dist;
    return make_handle(std::move(d));
}

struct PairHash {
    std::size_t operator()(const std::pair<const void*, const void*>& p) const
    {
        const auto h1 = std::hash<const void*>{}(p.first);
        const auto h2 = std::hash<const void*>{}(p.second);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

void check_window(const std::vector<DistHandle>& leaves, const Pattern& pattern)
{
    if (leaves.size() != pattern.mother)
        throw std::invalid_argument("leaf count does not match the pattern");
}

}  // namespace

DistHandle make_handle(JointDist dist)
{
    const DistTag tag = detect_tag(dist);
    if (tag == DistTag::superb)
        return superb_handle();
    if (tag == DistTag::pitiful)
        return pitiful_handle();
    return std::make_shared<const TaggedDist>(TaggedDist{std::move(dist), tag});
}

DistVector build_dist_vector(std::size_t m, const JointDist& w, RateMatching mode)
{
    const Pattern pattern = make_pattern(m, mode);
    const DistHandle base = make_handle(canonicalize(w));
    const DistHandle& marker = mode == RateMatching::shortened ? superb_handle() : pitiful_handle();
    DistVector v;
    v.entries.reserve(pattern.mother);
    for (std::size_t i = 0; i < pattern.mother; ++i)
        v.entries.push_back(pattern.contains(i) ? marker : base);
    return v;
}

std::vector<DistHandle> evolve(const DistVector& v, const EvolveOptions& options)
{
    if (options.mu == 0)
        throw std::invalid_argument("mu must be positive");
    std::vector<DistHandle> cur = v.entries;
    const std::size_t size = cur.size();
    log2_exact(size);
    std::vector<DistHandle> next(size);
    for (std::size_t block = size; block >= 2; block /= 2) {
        const std::size_t half = block / 2;
        // Distinct operand pairs of this stage, in first-seen order.
        std::unordered_map<std::pair<const void*, const void*>, std::size_t, PairHash> seen;
        std::vector<std::pair<DistHandle, DistHandle>> jobs;
        std::vector<std::size_t> job_of(size / 2);
        for (std::size_t base = 0, pair = 0; base < size; base += block) {
            for (std::size_t k = 0; k < half; ++k, ++pair) {
                const DistHandle& l = cur[base + 2 * k];
                const DistHandle& r = cur[base + 2 * k + 1];
                auto [it, fresh] = seen.try_emplace({l.get(), r.get()}, jobs.size());
                if (fresh)
                    jobs.emplace_back(l, r);
                job_of[pair] = it->second;
            }
        }
        std::vector<DistHandle> minus(jobs.size()), plus(jobs.size());
        detail::parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
            minus[j] = combine_handles(CombineOp::minus, jobs[j].first, jobs[j].second, options.mu);
            plus[j] = combine_handles(CombineOp::plus, jobs[j].first, jobs[j].second, options.mu);
        });
        for (std::size_t base = 0, pair = 0; base < size; base += block) {
            for (std::size_t k = 0; k < half; ++k, ++pair) {
                next[base + k] = minus[job_of[pair]];
                next[base + half + k] = plus[job_of[pair]];
            }
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<DistHandle> evolve_identical(const DistHandle& omega, unsigned depth, const EvolveOptions& options)
{
    DistVector v;
    v.entries.assign(std::size_t{1} << depth, omega);
    return evolve(v, options);
}

std::vector<Metrics> leaf_profile(const std::vector<DistHandle>& leaves, const Pattern& pattern)
{
    check_window(leaves, pattern);
    std::unordered_map<const void*, Metrics> cache;
    std::vector<Metrics> out;
    out.reserve(pattern.length);
    for (std::size_t i = 0; i < pattern.length; ++i) {
        const DistHandle& leaf = leaves[pattern.u_offset() + i];
        auto it = cache.find(leaf.get());
        if (it == cache.end())
            it = cache.emplace(leaf.get(), metrics(leaf->dist)).first;
        out.push_back(it->second);
    }
    return out;
}

std::vector<Metrics> evolve_profile(std::size_t m, const JointDist& w, RateMatching mode, const EvolveOptions& options)
{
    return leaf_profile(evolve(build_dist_vector(m, w, mode), options), make_pattern(m, mode));
}

std::vector<DistHandle> periodic_omegas(std::size_t m, unsigned t, const JointDist& w, RateMatching mode,
                                        const EvolveOptions& options)
{
    const unsigned n = mother_depth(m);
    if (t > n)
        throw std::invalid_argument("period exponent t exceeds the transform depth");
    const unsigned shift = n - t;
    const std::size_t period = std::size_t{1} << t;
    if (m % (std::size_t{1} << shift) != 0)
        throw std::invalid_argument("M is not of the form a * 2^(n-t)");
    const std::size_t a = m >> shift;
    if (a > period || 2 * a <= period)
        throw std::invalid_argument("M is not of the form a * 2^(n-t) with 2^(t-1) < a <= 2^t");

    const DistHandle base = make_handle(canonicalize(w));
    DistVector v;
    for (std::size_t j = 0; j < period; ++j) {
        const std::size_t r = bit_reverse(j, t);
        if (mode == RateMatching::shortened)
            v.entries.push_back(r >= a ? superb_handle() : base);
        else
            v.entries.push_back(r < period - a ? pitiful_handle() : base);
    }
    return evolve(v, options);
}

std::vector<std::vector<DistHandle>> identical_levels(const DistHandle& omega, unsigned depth,
                                                      const EvolveOptions& options)
{
    if (options.mu == 0)
        throw std::invalid_argument("mu must be positive");
    std::vector<std::vector<DistHandle>> levels{{omega}};
    for (unsigned k = 0; k < depth; ++k) {
        const std::vector<DistHandle>& cur = levels.back();
        // Equal handles within a level (S, P, repeated shortcuts) combine once.
        std::unordered_map<const void*, std::size_t> seen;
        std::vector<std::size_t> job_of(cur.size());
        std::vector<const DistHandle*> jobs;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            auto [it, fresh] = seen.try_emplace(cur[i].get(), jobs.size());
            if (fresh)
                jobs.push_back(&cur[i]);
            job_of[i] = it->second;
        }
        std::vector<DistHandle> minus(jobs.size()), plus(jobs.size());
        detail::parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
            minus[j] = combine_handles(CombineOp::minus, *jobs[j], *jobs[j], options.mu);
            plus[j] = combine_handles(CombineOp::plus, *jobs[j], *jobs[j], options.mu);
        });
        std::vector<DistHandle> next(2 * cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[2 * i] = minus[job_of[i]];
            next[2 * i + 1] = plus[job_of[i]];
        }
        levels.push_back(std::move(next));
    }
    return levels;
}

PeriodicForm periodic_form(std::size_t m)
{
    if (m == 0)
        throw std::invalid_argument("code length must be positive");
    PeriodicForm f;
    f.n = mother_depth(m);
    const unsigned s = static_cast<unsigned>(std::countr_zero(m));
    f.a = m >> s;
    f.t = f.n - s;
    return f;
}

namespace {

// Leaves of a length-2^n transform whose first t stages produced `omegas`.
std::vector<DistHandle> periodic_leaves(unsigned n, unsigned t,
                                        const std::vector<std::vector<std::vector<DistHandle>>>& levels)
{
    const unsigned shift = n - t;
    const std::size_t mask = (std::size_t{1} << shift) - 1;
    std::vector<DistHandle> leaves(std::size_t{1} << n);
    for (std::size_t i = 0; i < leaves.size(); ++i)
        leaves[i] = levels[i >> shift][shift][i & mask];
    return leaves;
}

std::vector<std::vector<std::vector<DistHandle>>> omega_levels(const std::vector<DistHandle>& omegas, unsigned depth,
                                                               const EvolveOptions& options)
{
    std::vector<std::vector<std::vector<DistHandle>>> levels(omegas.size());
    detail::parallel_for(omegas.size(), options.workers, [&](std::size_t b) {
        EvolveOptions inner = options;
        inner.workers = 1;
        levels[b] = identical_levels(omegas[b], depth, inner);
    });
    return levels;
}

}  // namespace

std::vector<Metrics> periodic_fast_path(std::size_t m, unsigned t, const JointDist& w, RateMatching mode,
                                        const EvolveOptions& options)
{
    const std::vector<DistHandle> omegas = periodic_omegas(m, t, w, mode, options);
    const unsigned n = mother_depth(m);
    const auto levels = omega_levels(omegas, n - t, options);
    return leaf_profile(periodic_leaves(n, t, levels), make_pattern(m, mode));
}

std::vector<std::vector<Metrics>> periodic_profiles(const std::vector<std::size_t>& lengths, const JointDist& w,
                                                    RateMatching mode, const EvolveOptions& options)
{
    std::vector<std::vector<Metrics>> out(lengths.size());
    std::map<std::size_t, std::vector<std::size_t>> groups;  // a -> positions in `lengths`
    for (std::size_t k = 0; k < lengths.size(); ++k)
        groups[periodic_form(lengths[k]).a].push_back(k);
    for (const auto& [a, members] : groups) {
        const PeriodicForm first = periodic_form(lengths[members.front()]);
        unsigned deepest = first.n;
        for (std::size_t k : members)
            deepest = std::max(deepest, periodic_form(lengths[k]).n);
        const auto omegas = periodic_omegas(lengths[members.front()], first.t, w, mode, options);
        const auto levels = omega_levels(omegas, deepest - first.t, options);
        for (std::size_t k : members) {
            const std::size_t m = lengths[k];
            out[k] = leaf_profile(periodic_leaves(periodic_form(m).n, first.t, levels), make_pattern(m, mode));
        }
    }
    return out;
}

std::vector<double> bec_closed_form(std::size_t m, double eps, RateMatching mode)
{
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("erasure probability must lie in [0, 1]");
    const Pattern pattern = make_pattern(m, mode);
    // S behaves as erasure probability 0 and P as 1 under both recursions.
    const double marker = mode == RateMatching::shortened ? 0.0 : 1.0;
    std::vector<double> v(pattern.mother);
    for (std::size_t i = 0; i < pattern.mother; ++i)
        v[i] = pattern.contains(i) ? marker : eps;
    v = butterfly(
        std::move(v), [](double a, double b) { return a + b - a * b; }, [](double a, double b) { return a * b; });
    return {v.begin() + static_cast<std::ptrdiff_t>(pattern.u_offset()),
            v.begin() + static_cast<std::ptrdiff_t>(pattern.u_offset() + m)};
}

std::vector<Metrics> brute_force_profile(std::size_t m, const JointDist& w, RateMatching mode)
{
    if (m == 0 || m > kBruteForceMaxLength)
        throw std::invalid_argument("brute force is limited to 1 <= M <= 8");
    const std::size_t ys = w.size();
    std::size_t tuples = 1;
    for (std::size_t j = 0; j < m; ++j) {
        tuples *= ys;
        if ((tuples << m) > kBruteForceMaxCells)
            throw std::invalid_argument("brute force enumeration too large");
    }

    // tables[i] holds P(u_i; u^{i-1}, y) at (prefix * tuples + y), one vector per u_i.
    std::vector<std::vector<double>> t0(m), t1(m);
    for (std::size_t i = 0; i < m; ++i) {
        t0[i].assign(tuples << i, 0.0);
        t1[i].assign(tuples << i, 0.0);
    }

    std::vector<double> prob(tuples);
    std::vector<std::uint8_t> x(m);
    for (std::size_t word = 0; word < (std::size_t{1} << m); ++word) {
        for (std::size_t j = 0; j < m; ++j)
            x[j] = static_cast<std::uint8_t>((word >> j) & 1);
        // Output tuple y has digit y_j at weight |Y|^j.
        prob.assign(1, 1.0);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> grown(prob.size() * ys);
            for (std::size_t y = 0; y < ys; ++y)
                for (std::size_t r = 0; r < prob.size(); ++r)
                    grown[y * prob.size() + r] = prob[r] * w.mass(x[j], y);
            prob.swap(grown);
        }
        const std::vector<std::uint8_t> u = rate_matched_transform(mode, x);
        std::size_t prefix = 0;
        for (std::size_t i = 0; i < m; ++i) {
            auto& table = u[i] == 0 ? t0[i] : t1[i];
            const std::size_t offset = prefix * tuples;
            for (std::size_t y = 0; y < tuples; ++y)
                table[offset + y] += prob[y];
            prefix = prefix | (std::size_t{u[i]} << i);
        }
    }

    std::vector<Metrics> out;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(metrics(JointDist::unchecked(std::move(t0[i]), std::move(t1[i]))));
    return out;
}

JointDist uninformative_joint(double p0) { return joint_from(InputDist(p0), make_uninformative()); }

bool CodeSpec::is_frozen(std::size_t i) const { return std::binary_search(frozen.begin(), frozen.end(), i); }

std::vector<std::size_t> CodeSpec::info_set() const
{
    std::vector<std::size_t> info;
    for (std::size_t i = 0; i < pattern.length; ++i)
        if (!is_frozen(i))
            info.push_back(i);
    return info;
}

std::vector<std::size_t> select_frozen(const std::vector<Metrics>& profile, std::size_t count)
{
    if (count > profile.size())
        throw std::invalid_argument("information set larger than the code length");
    std::vector<std::size_t> order(profile.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return profile[a].z > profile[b].z; });
    order.resize(profile.size() - count);
    std::sort(order.begin(), order.end());
    return order;
}

CodeSpec construct_code(std::size_t m, const std::string& channel, double p0, RateMatching mode, std::size_t mu,
                        std::size_t count, unsigned workers)
{
    if (count > m)
        throw std::invalid_argument("information set larger than the code length");
    CodeSpec spec;
    spec.pattern = make_pattern(m, mode);
    spec.channel = channel;
    spec.p0 = p0;
    spec.mu = mu;
    const JointDist w = joint_from(InputDist(p0), parse_channel(channel));
    spec.profile = evolve_profile(m, w, mode, {mu, workers});
    spec.frozen = select_frozen(spec.profile, count);
    return spec;
}

}  // namespace sppolar
