#include "sppolar/experiments.hpp"

#include "sppolar/transform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sppolar {

void SuiteResult::record(bool pass, const std::string& what)
{
    ++checks;
    if (pass)
        ++passed;
    else if (failures.size() < 10)
        failures.push_back(what);
}

namespace {

constexpr double kChainTolerance = 1e-10;
constexpr double kOrderTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-9;
constexpr double kBecTolerance = 1e-10;
constexpr double kConservationTolerance = 1e-8;

SuiteResult named(std::string name)
{
    SuiteResult r;
    r.name = std::move(name);
    return r;
}

DistTag tag_from_text(const std::string& s)
{
    if (s == "A")
        return DistTag::generic;
    if (s == "S")
        return DistTag::superb;
    if (s == "P")
        return DistTag::pitiful;
    throw std::invalid_argument("table operand must be A, S or P: '" + s + "'");
}

struct OracleConfig {
    std::string label;
    JointDist w;
};

std::vector<OracleConfig> oracle_channels()
{
    return {{"bsc:0.3", joint_from(InputDist(0.5), make_bsc(0.3))},
            {"bec:0.4", joint_from(InputDist(0.5), make_bec(0.4))},
            {"bsc:0.2,p0=0.3", joint_from(InputDist(0.3), make_bsc(0.2))}};
}

std::string describe(const std::string& channel, std::size_t m, RateMatching mode)
{
    return channel + " M=" + std::to_string(m) + " " + to_string(mode);
}

const RateMatching kModes[] = {RateMatching::shortened, RateMatching::punctured};

SuiteResult suite_extremes(const VerifyConfig& config)
{
    SuiteResult r = named("extremes");
    for (std::size_t t = 0; t < config.trials; ++t) {
        TrialStream rng(config.seed, t);
        const JointDist a = random_joint(rng, 5);
        const ChainCheck low = check_chain(special_pitiful(), a, witness_pitiful(a));
        const ChainCheck high = check_chain(a, special_superb(), witness_superb(a));
        r.worst = std::max({r.worst, low.max_residual, high.max_residual});
        r.record(low.ok && low.max_residual < kChainTolerance && figures_ordered(special_pitiful(), a, kOrderTolerance),
                 "P below A, trial " + std::to_string(t));
        r.record(high.ok && high.max_residual < kChainTolerance && figures_ordered(a, special_superb(), kOrderTolerance),
                 "A below S, trial " + std::to_string(t));
    }
    return r;
}

SuiteResult suite_preserve(const VerifyConfig& config)
{
    SuiteResult r = named("preserve");
    for (int c = 1; c <= 8; ++c) {
        const PreserveCase pc = preserve_case(c);
        for (std::size_t t = 0; t < config.trials; ++t) {
            TrialStream rng(config.seed + static_cast<std::uint64_t>(c) * 0x10000, t);
            const JointDist a = random_joint(rng, 4);
            const JointDist b = random_joint(rng, 4);
            const std::size_t size = pc.on_left ? a.size() : b.size();
            RelationStep step = pc.is_degradation ? RelationStep{Degradation{random_stochastic(rng, size, 4)}}
                                                  : RelationStep{Permutation{random_flip(rng, size)}};
            const auto [lower, upper] = preserve_pair(c, a, b, step);
            const ChainCheck check = check_chain(lower, upper, witness_preserve(c, a, b, step));
            r.worst = std::max(r.worst, check.max_residual);
            r.record(check.ok && figures_ordered(lower, upper, kOrderTolerance),
                     "case " + std::to_string(c) + " trial " + std::to_string(t));
        }
    }
    return r;
}

bool same_cell(const TableCell& x, const TableCell& y) { return x.op == y.op && x.row == y.row && x.col == y.col; }

SuiteResult suite_table(const VerifyConfig& config)
{
    SuiteResult r = named("table");
    const std::vector<TableCell> cells = special_table_cells();
    for (std::size_t t = 0; t < config.trials; ++t) {
        TrialStream rng(config.seed, t);
        const JointDist a = random_joint(rng, 4);
        const JointDist b = random_joint(rng, 4);
        for (const TableCell& cell : cells) {
            const auto [left, right] = table_operands(cell.row, cell.col, a, b);
            const JointDist computed = combine(cell.op, left, right);
            JointDist claimed = table_claim(cell.op, cell.row, cell.col, a, b);
            if (config.fault && same_cell(*config.fault, cell))
                claimed = detect_tag(claimed) == DistTag::superb ? special_pitiful() : special_superb();
            const auto [down, up] = witness_table_entry(cell.op, cell.row, cell.col, a, b);
            const ChainCheck c1 = check_chain(computed, claimed, down);
            const ChainCheck c2 = check_chain(claimed, computed, up);
            r.worst = std::max({r.worst, c1.max_residual, c2.max_residual});
            r.record(c1.ok && c2.ok, "cell " + to_string(cell) + " trial " + std::to_string(t));
        }
    }
    return r;
}

double worst_metric_gap(const std::vector<Metrics>& x, const std::vector<Metrics>& y)
{
    if (x.size() != y.size())
        return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max({worst, std::abs(x[i].z - y[i].z), std::abs(x[i].k - y[i].k), std::abs(x[i].h - y[i].h)});
    return worst;
}

SuiteResult suite_oracle(const VerifyConfig&)
{
    SuiteResult r = named("oracle");
    for (const OracleConfig& ch : oracle_channels())
        for (RateMatching mode : kModes)
            for (std::size_t m = 2; m <= 8; ++m) {
                const double gap = worst_metric_gap(evolve_profile(m, ch.w, mode, {kExactAlphabet, 1}),
                                                    brute_force_profile(m, ch.w, mode));
                r.worst = std::max(r.worst, gap);
                r.record(gap <= kOracleTolerance, describe(ch.label, m, mode));
            }
    return r;
}

SuiteResult suite_bec(const VerifyConfig&)
{
    SuiteResult r = named("bec");
    for (double eps : {0.1, 0.5, 0.9})
        for (RateMatching mode : kModes)
            for (std::size_t m = 1; m <= 64; ++m) {
                const auto profile = evolve_profile(m, joint_from(InputDist(), make_bec(eps)), mode, {kExactAlphabet, 1});
                const auto exact = bec_closed_form(m, eps, mode);
                double gap = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    gap = std::max(gap, std::abs(profile[i].z - exact[i]));
                r.worst = std::max(r.worst, gap);
                r.record(gap <= kBecTolerance, describe("bec:" + format_number(eps), m, mode));
            }
    return r;
}

SuiteResult suite_conservation(const VerifyConfig&)
{
    SuiteResult r = named("conservation");
    auto check = [&](const std::string& label, const JointDist& w, std::size_t m, RateMatching mode) {
        const auto profile = evolve_profile(m, w, mode, {kExactAlphabet, 1});
        double sum = 0.0;
        for (const Metrics& x : profile)
            sum += x.h;
        const double gap = std::abs(sum / static_cast<double>(m) - cond_entropy(w));
        r.worst = std::max(r.worst, gap);
        r.record(gap <= kConservationTolerance, describe(label, m, mode));
    };
    for (const OracleConfig& ch : oracle_channels())
        for (RateMatching mode : kModes)
            for (std::size_t m = 2; m <= 8; ++m)
                check(ch.label, ch.w, m, mode);
    for (double eps : {0.1, 0.5, 0.9})
        for (RateMatching mode : kModes)
            for (std::size_t m = 1; m <= 64; ++m)
                check("bec:" + format_number(eps), joint_from(InputDist(), make_bec(eps)), m, mode);
    return r;
}

std::vector<std::uint8_t> random_bits(TrialStream& rng, std::size_t size)
{
    std::vector<std::uint8_t> x(size);
    for (auto& b : x)
        b = rng.next_bit();
    return x;
}

std::vector<std::uint8_t> fill_pattern(const Pattern& pattern, std::span<const std::uint8_t> x,
                                       std::span<const std::uint8_t> fill)
{
    std::vector<std::uint8_t> full(pattern.mother);
    std::size_t next = 0, next_fill = 0;
    for (std::size_t i = 0; i < pattern.mother; ++i)
        full[i] = pattern.contains(i) ? fill[next_fill++] : x[next++];
    return full;
}

// Extended transform agrees with plain transforms of filled words on the kept
// window, and the shortened tail is all 's'.
bool definitional_match(const Pattern& pattern, std::span<const std::uint8_t> x,
                        const std::vector<std::vector<std::uint8_t>>& fills)
{
    const std::vector<ExtBit> ext = extended_transform(pattern, x);
    const std::size_t offset = pattern.u_offset();
    if (pattern.mode == RateMatching::shortened)
        for (std::size_t i = pattern.length; i < pattern.mother; ++i)
            if (ext[i] != ExtBit::s)
                return false;
    for (const auto& fill : fills) {
        const std::vector<std::uint8_t> u = polar_transform(fill_pattern(pattern, x, fill));
        for (std::size_t i = 0; i < pattern.length; ++i)
            if (static_cast<std::uint8_t>(ext[offset + i]) != u[offset + i])
                return false;
    }
    return true;
}

std::vector<std::vector<std::uint8_t>> all_fills(std::size_t count)
{
    std::vector<std::vector<std::uint8_t>> fills;
    for (std::size_t v = 0; v < (std::size_t{1} << count); ++v) {
        std::vector<std::uint8_t> f(count);
        for (std::size_t j = 0; j < count; ++j)
            f[j] = static_cast<std::uint8_t>((v >> j) & 1);
        fills.push_back(std::move(f));
    }
    return fills;
}

SuiteResult suite_transform(const VerifyConfig& config)
{
    SuiteResult r = named("transform");
    for (RateMatching mode : kModes) {
        for (std::size_t m = 1; m <= 8; ++m) {
            const Pattern pattern = make_pattern(m, mode);
            const std::size_t removed = pattern.mother - m;
            // Shortening is defined by the zero fill; puncturing must not care.
            const auto fills = mode == RateMatching::shortened
                                   ? std::vector<std::vector<std::uint8_t>>{std::vector<std::uint8_t>(removed, 0)}
                                   : all_fills(removed);
            bool ok = true;
            for (std::size_t word = 0; word < (std::size_t{1} << m) && ok; ++word) {
                std::vector<std::uint8_t> x(m);
                for (std::size_t j = 0; j < m; ++j)
                    x[j] = static_cast<std::uint8_t>((word >> j) & 1);
                ok = definitional_match(pattern, x, fills);
            }
            r.record(ok, "exhaustive " + to_string(mode) + " M=" + std::to_string(m));
        }
        for (std::size_t m : {96, 384, 3000}) {
            const Pattern pattern = make_pattern(m, mode);
            const std::size_t removed = pattern.mother - m;
            bool ok = true;
            for (std::size_t t = 0; t < config.trials * 10 && ok; ++t) {
                TrialStream rng(config.seed + m, t);
                const std::vector<std::uint8_t> x = random_bits(rng, m);
                std::vector<std::vector<std::uint8_t>> fills{std::vector<std::uint8_t>(removed, 0)};
                if (mode == RateMatching::punctured)
                    fills.push_back(random_bits(rng, removed));
                ok = definitional_match(pattern, x, fills);
            }
            r.record(ok, "random " + to_string(mode) + " M=" + std::to_string(m));
        }
    }

    bool round_trip = true;
    for (std::size_t size : {1, 2, 4, 8, 16})
        for (std::size_t word = 0; word < (std::size_t{1} << size); ++word) {
            std::vector<std::uint8_t> x(size);
            for (std::size_t j = 0; j < size; ++j)
                x[j] = static_cast<std::uint8_t>((word >> j) & 1);
            round_trip = round_trip && inverse_transform(polar_transform(x)) == x && polar_transform(polar_transform(x)) == x;
        }
    for (std::size_t t = 0; t < config.trials * 10; ++t) {
        TrialStream rng(config.seed + 7, t);
        const std::vector<std::uint8_t> x = random_bits(rng, 4096);
        round_trip = round_trip && inverse_transform(polar_transform(x)) == x;
    }
    r.record(round_trip, "round trip");

    bool linear = true;
    for (std::size_t p = 0; p < 256 && linear; ++p)
        for (std::size_t q = 0; q < 256 && linear; ++q) {
            std::vector<std::uint8_t> x(8), y(8), s(8);
            for (std::size_t j = 0; j < 8; ++j) {
                x[j] = (p >> j) & 1;
                y[j] = (q >> j) & 1;
                s[j] = x[j] ^ y[j];
            }
            const auto tx = polar_transform(x), ty = polar_transform(y), ts = polar_transform(s);
            for (std::size_t j = 0; j < 8; ++j)
                linear = linear && ts[j] == (tx[j] ^ ty[j]);
        }
    r.record(linear, "linearity");

    bool involution = true;
    for (unsigned n = 0; n <= 20; ++n) {
        const std::size_t limit = std::min<std::size_t>(std::size_t{1} << n, 4096);
        for (std::size_t i = 0; i < limit; ++i) {
            const std::size_t j = n <= 12 ? i : (i * 2654435761u) & ((std::size_t{1} << n) - 1);
            involution = involution && bit_reverse(bit_reverse(j, n), n) == j;
        }
    }
    r.record(involution, "bit reversal involution");
    return r;
}

SuiteResult suite_degrade(const VerifyConfig& config)
{
    SuiteResult r = named("degrade");
    for (std::size_t t = 0; t < config.trials; ++t) {
        TrialStream rng(config.seed, t);
        const JointDist a = canonicalize(random_joint(rng, 40));
        const std::size_t mu = 1 + static_cast<std::size_t>(rng.next_double() * static_cast<double>(a.size()));
        const MergeResult merged = degrade_merge(a, mu);
        const bool witnessed =
            verify_degradation(merged.dist, a, StochasticMatrix::deterministic(merged.dist.size(), merged.map));
        r.record(merged.dist.size() <= mu && witnessed && figures_ordered(merged.dist, a, kOrderTolerance),
                 "merge trial " + std::to_string(t));
    }
    // Smaller budgets give pointwise worse figures.
    const JointDist w = joint_from(InputDist(), make_bsc(0.11));
    for (RateMatching mode : kModes)
        for (std::size_t m : {24, 48, 96}) {
            const std::size_t budgets[] = {4, 16, 64};
            std::vector<std::vector<Metrics>> profiles;
            for (std::size_t mu : budgets)
                profiles.push_back(evolve_profile(m, w, mode, {mu, 1}));
            bool ok = true;
            for (std::size_t k = 0; k + 1 < profiles.size(); ++k)
                for (std::size_t i = 0; i < m; ++i) {
                    const Metrics& coarse = profiles[k][i];
                    const Metrics& fine = profiles[k + 1][i];
                    ok = ok && coarse.z >= fine.z - kOrderTolerance && coarse.h >= fine.h - kOrderTolerance &&
                         coarse.k <= fine.k + kOrderTolerance;
                }
            r.record(ok, "budget monotonicity " + describe("bsc:0.11", m, mode));
        }
    return r;
}

SuiteResult suite_tags(const VerifyConfig&)
{
    SuiteResult r = named("tags");
    const JointDist w = joint_from(InputDist(), make_bsc(0.2));
    for (RateMatching mode : kModes)
        for (std::size_t m = 1; m <= 32; ++m) {
            const Pattern pattern = make_pattern(m, mode);
            const auto leaves = evolve(build_dist_vector(m, w, mode), {kExactAlphabet, 1});
            const auto symbols = extended_transform(pattern, std::vector<std::uint8_t>(m, 0));
            bool ok = true;
            for (std::size_t i = 0; i < pattern.mother; ++i) {
                ok = ok && (leaves[i]->tag == DistTag::superb) == (symbols[i] == ExtBit::s);
                ok = ok && (leaves[i]->tag == DistTag::pitiful) == (symbols[i] == ExtBit::p);
            }
            r.record(ok, describe("bsc:0.2", m, mode));
        }
    return r;
}

using SuiteFn = std::function<SuiteResult(const VerifyConfig&)>;

const std::map<std::string, SuiteFn>& registry()
{
    static const std::map<std::string, SuiteFn> suites = {
        {"preserve", suite_preserve},     {"extremes", suite_extremes},           {"table", suite_table},
        {"oracle", suite_oracle},     {"bec", suite_bec},                 {"conservation", suite_conservation},
        {"transform", suite_transform}, {"degrade", suite_degrade},       {"tags", suite_tags},
    };
    return suites;
}

}  // namespace

TableCell parse_table_cell(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');)
        parts.push_back(part);
    if (parts.size() != 3)
        throw std::invalid_argument("table cell must look like 'minus:A:S'");
    TableCell cell{};
    if (parts[0] == "minus")
        cell.op = CombineOp::minus;
    else if (parts[0] == "plus")
        cell.op = CombineOp::plus;
    else
        throw std::invalid_argument("table operation must be 'minus' or 'plus'");
    cell.row = tag_from_text(parts[1]);
    cell.col = tag_from_text(parts[2]);
    if (cell.row == DistTag::generic && cell.col == DistTag::generic)
        throw std::invalid_argument("the A:A cell has no shortcut");
    return cell;
}

std::string to_string(const TableCell& cell)
{
    return (cell.op == CombineOp::minus ? std::string("minus") : std::string("plus")) + ":" + to_string(cell.row) +
           ":" + to_string(cell.col);
}

std::vector<TableCell> special_table_cells()
{
    std::vector<TableCell> cells;
    const DistTag tags[] = {DistTag::generic, DistTag::superb, DistTag::pitiful};
    for (CombineOp op : {CombineOp::minus, CombineOp::plus})
        for (DistTag row : tags)
            for (DistTag col : tags)
                if (row != DistTag::generic || col != DistTag::generic)
                    cells.push_back({op, row, col});
    return cells;
}

std::vector<std::string> suite_names()
{
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry())
        names.push_back(name);
    return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config)
{
    const auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown suite '" + name + "'");
    return it->second(config);
}

}  // namespace sppolar
