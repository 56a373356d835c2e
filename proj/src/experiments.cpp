#include "sppolar/experiments.hpp"

#include "sppolar/codec.hpp"
#include "sppolar/detail/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sppolar {

double theorem_threshold(std::size_t m, double beta)
{
    return std::exp2(-std::pow(static_cast<double>(m), beta));
}

namespace {

void check_beta(double beta)
{
    if (!(beta > 0.0 && beta < 0.5))
        throw std::invalid_argument("beta must lie in (0, 1/2)");
}

PolarizeRow make_row(const PolarizeConfig& config, std::size_t m, double h, const std::vector<Metrics>& with_y,
                     const std::vector<Metrics>& without_y)
{
    PolarizeRow row;
    row.m = m;
    row.n = mother_depth(m);
    row.mode = config.mode;
    row.threshold = config.threshold ? *config.threshold : theorem_threshold(m, config.beta);
    row.h = h;
    row.one_minus_h = 1.0 - h;
    std::size_t good_z = 0, good_k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        good_z += with_y[i].z < row.threshold;
        good_k += without_y[i].k < row.threshold;
    }
    row.fraction_good_z = static_cast<double>(good_z) / static_cast<double>(m);
    row.fraction_good_k = static_cast<double>(good_k) / static_cast<double>(m);
    return row;
}

}  // namespace

PolarizeRow polarize_one(const PolarizeConfig& config, std::size_t m)
{
    PolarizeConfig single = config;
    single.lengths = {m};
    return run_polarize(single).front();
}

std::vector<PolarizeRow> run_polarize(const PolarizeConfig& config)
{
    check_beta(config.beta);
    const JointDist w = joint_from(InputDist(config.p0), parse_channel(config.channel));
    const EvolveOptions options{config.mu, config.workers};
    // the K fraction ignores the outputs: same machinery over the uninformative channel
    const auto with_y = periodic_profiles(config.lengths, w, config.mode, options);
    const auto without_y = periodic_profiles(config.lengths, uninformative_joint(config.p0), config.mode, options);
    const double h = cond_entropy(w);
    std::vector<PolarizeRow> rows;
    for (std::size_t k = 0; k < config.lengths.size(); ++k)
        rows.push_back(make_row(config, config.lengths[k], h, with_y[k], without_y[k]));
    return rows;
}

namespace {

std::string mu_text(std::size_t mu) { return mu == kExactAlphabet ? "exact" : std::to_string(mu); }

}  // namespace

void write_polarize_csv(std::ostream& out, const PolarizeConfig& config, const std::vector<PolarizeRow>& rows)
{
    out << "# sppolar polarize\n";
    out << "# channel=" << config.channel << " p0=" << format_number(config.p0) << " mode=" << to_string(config.mode)
        << " mu=" << mu_text(config.mu) << " beta=" << format_number(config.beta)
        << " threshold=" << (config.threshold ? format_number(*config.threshold) : "theorem") << '\n';
    out << "M,n,mode,threshold,fraction_good_Z,fraction_good_K,one_minus_H,H\n";
    for (const PolarizeRow& r : rows) {
        out << r.m << ',' << r.n << ',' << to_string(r.mode) << ',' << format_number(r.threshold) << ','
            << format_number(r.fraction_good_z) << ',' << format_number(r.fraction_good_k) << ','
            << format_number(r.one_minus_h) << ',' << format_number(r.h) << '\n';
    }
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials)
{
    if (trials == 0)
        return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    // the bounds touch 0 and 1 exactly at the extremes; rounding would leave ~1e-19
    const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

std::size_t info_count(std::size_t m, double rate)
{
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("rate must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(rate * static_cast<double>(m)));
}

std::size_t sample_output(const BMChannel& w, int x, double uniform)
{
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t y = 0; y < w.size(); ++y) {
        if (w.w(x, y) <= 0.0)
            continue;
        acc += w.w(x, y);
        last = y;
        if (uniform < acc)
            return y;
    }
    return last;
}

SimulateResult run_simulate(const SimulateConfig& config, const CodeSpec& code)
{
    const BMChannel channel = parse_channel(code.channel);
    require_symmetric_uniform(channel, code.p0);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(detail::resolve_workers(config.workers),
                                                      std::max<std::uint64_t>(config.trials, 1)));
    const std::size_t info = code.info_size();

    std::vector<std::uint64_t> errors(workers, 0);
    detail::parallel_for(workers, workers, [&](std::size_t worker) {
        ScDecoder decoder(code, DecoderOptions{config.min_sum});
        const std::uint64_t first = config.trials * worker / workers;
        const std::uint64_t last = config.trials * (worker + 1) / workers;
        std::vector<std::uint8_t> data(info);
        std::vector<std::size_t> y(code.length());
        for (std::uint64_t t = first; t < last; ++t) {
            TrialStream rng(config.seed, t);
            for (auto& b : data)
                b = rng.next_bit();
            const std::vector<std::uint8_t> x = sc_encode(data, code);
            for (std::size_t i = 0; i < x.size(); ++i)
                y[i] = sample_output(channel, x[i], rng.next_double());
            if (decoder.decode(y).data != data)
                ++errors[worker];
        }
    });

    SimulateResult r;
    r.m = code.length();
    r.mode = code.pattern.mode;
    r.rate = config.rate;
    r.info = info;
    r.trials = config.trials;
    for (std::uint64_t e : errors)
        r.frame_errors += e;
    r.fer = config.trials ? static_cast<double>(r.frame_errors) / static_cast<double>(config.trials) : 0.0;
    const WilsonInterval ci = wilson_interval(r.frame_errors, config.trials);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.workers = workers;
    return r;
}

SimulateResult run_simulate(const SimulateConfig& config)
{
    const CodeSpec code =
        construct_code(config.m, config.channel, 0.5, config.mode, config.mu, info_count(config.m, config.rate),
                       config.workers);
    return run_simulate(config, code);
}

void write_simulate_csv(std::ostream& out, const SimulateConfig& config, const SimulateResult& r)
{
    out << "# sppolar simulate\n";
    out << "# channel=" << config.channel << " mode=" << to_string(config.mode) << " mu=" << mu_text(config.mu)
        << " decoder=" << (config.min_sum ? "min-sum" : "exact") << '\n';
    out << "# seed=" << config.seed << " workers=" << r.workers << " rng=philox4x32-10\n";
    out << "M,mode,rate,info,trials,frame_errors,fer,ci95_low,ci95_high\n";
    out << r.m << ',' << to_string(r.mode) << ',' << format_number(r.rate) << ',' << r.info << ',' << r.trials << ','
        << r.frame_errors << ',' << format_number(r.fer) << ',' << format_number(r.ci_low) << ','
        << format_number(r.ci_high) << '\n';
}

namespace {

std::size_t uniform_index(TrialStream& rng, std::size_t bound)
{
    return static_cast<std::size_t>(rng.next_double() * static_cast<double>(bound));
}

// Positive weights with occasional exact zeros, normalized to `total`.
std::vector<double> random_weights(TrialStream& rng, std::size_t count, double total)
{
    std::vector<double> w(count);
    double sum = 0.0;
    for (auto& v : w) {
        v = rng.next_double() < 0.15 ? 0.0 : rng.next_double() + 1e-3;
        sum += v;
    }
    if (sum == 0.0) {
        w[uniform_index(rng, count)] = 1.0;
        sum = 1.0;
    }
    for (auto& v : w)
        v *= total / sum;
    return w;
}

}  // namespace

JointDist random_joint(TrialStream& rng, std::size_t max_outputs)
{
    const std::size_t size = 1 + uniform_index(rng, max_outputs);
    std::vector<double> flat = random_weights(rng, 2 * size, 1.0);
    std::vector<double> m0(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(size));
    std::vector<double> m1(flat.begin() + static_cast<std::ptrdiff_t>(size), flat.end());
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

StochasticMatrix random_stochastic(TrialStream& rng, std::size_t rows, std::size_t max_cols)
{
    const std::size_t cols = 1 + uniform_index(rng, max_cols);
    StochasticMatrix q(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::vector<double> w = random_weights(rng, cols, 1.0);
        for (std::size_t c = 0; c < cols; ++c)
            q(r, c) = w[c];
    }
    return q;
}

InputFlip random_flip(TrialStream& rng, std::size_t size)
{
    InputFlip f(size);
    for (auto& b : f)
        b = rng.next_bit();
    return f;
}

bool figures_ordered(const JointDist& lower, const JointDist& upper, double tol)
{
    const Metrics lo = metrics(lower);
    const Metrics up = metrics(upper);
    return lo.z >= up.z - tol && lo.k <= up.k + tol && lo.h >= up.h - tol;
}

}  // namespace sppolar
