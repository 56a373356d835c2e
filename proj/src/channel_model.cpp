#include "sppolar/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sppolar {

namespace {

void check_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

InputDist::InputDist(double p0) : p0_(p0) { check_probability(p0, "input probability"); }

BMChannel::BMChannel(std::vector<double> w0, std::vector<double> w1, std::vector<std::string> labels)
    : w0_(std::move(w0)), w1_(std::move(w1)), labels_(std::move(labels))
{
    if (w0_.empty() || w0_.size() != w1_.size())
        throw std::invalid_argument("channel rows must be nonempty and of equal length");
    for (std::size_t y = 0; y < w0_.size(); ++y)
        if (!(w0_[y] >= 0.0) || !(w1_[y] >= 0.0))
            throw std::invalid_argument("channel transition probabilities must be nonnegative");
    if (std::abs(sum(w0_) - 1.0) > kMassTolerance || std::abs(sum(w1_) - 1.0) > kMassTolerance)
        throw std::invalid_argument("channel rows must sum to 1");
    if (labels_.empty()) {
        for (std::size_t y = 0; y < w0_.size(); ++y)
            labels_.push_back(std::to_string(y));
    } else if (labels_.size() != w0_.size()) {
        throw std::invalid_argument("one label per output symbol");
    }
}

std::size_t BMChannel::symbol(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw std::invalid_argument("unknown channel output '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

bool BMChannel::is_symmetric(double tol) const
{
    // Greedy matching is exact here: a partner must match both coordinates.
    std::vector<bool> used(size(), false);
    for (std::size_t y = 0; y < size(); ++y) {
        if (used[y])
            continue;
        bool found = false;
        for (std::size_t z = y; z < size() && !found; ++z) {
            if (used[z])
                continue;
            if (std::abs(w0_[y] - w1_[z]) <= tol && std::abs(w1_[y] - w0_[z]) <= tol) {
                used[y] = used[z] = true;
                found = true;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

JointDist::JointDist(std::vector<double> m0, std::vector<double> m1) : m0_(std::move(m0)), m1_(std::move(m1))
{
    if (m0_.size() != m1_.size())
        throw std::invalid_argument("joint distribution rows differ in length");
    for (std::size_t y = 0; y < m0_.size(); ++y)
        if (!(m0_[y] >= 0.0) || !(m1_[y] >= 0.0))
            throw std::invalid_argument("joint distribution entries must be nonnegative");
    if (std::abs(total_mass() - 1.0) > kMassTolerance)
        throw std::invalid_argument("joint distribution must have unit mass");
}

JointDist JointDist::unchecked(std::vector<double> m0, std::vector<double> m1)
{
    JointDist d;
    d.m0_ = std::move(m0);
    d.m1_ = std::move(m1);
    return d;
}

double JointDist::total_mass() const { return sum(m0_) + sum(m1_); }

double JointDist::input_p0() const { return sum(m0_); }

double max_abs_diff(const JointDist& a, const JointDist& b)
{
    if (a.size() != b.size())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (int x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < a.size(); ++y)
            worst = std::max(worst, std::abs(a.mass(x, y) - b.mass(x, y)));
    return worst;
}

BMChannel make_bsc(double p)
{
    if (!(p >= 0.0 && p <= 0.5))
        throw std::invalid_argument("BSC crossover probability must lie in [0, 1/2]");
    return BMChannel({1.0 - p, p}, {p, 1.0 - p}, {"0", "1"});
}

BMChannel make_bec(double eps)
{
    check_probability(eps, "erasure probability");
    return BMChannel({1.0 - eps, 0.0, eps}, {0.0, 1.0 - eps, eps}, {"0", "1", "?"});
}

BMChannel make_uninformative() { return BMChannel({1.0}, {1.0}, {"?"}); }

JointDist joint_from(const InputDist& p, const BMChannel& w)
{
    std::vector<double> m0(w.size()), m1(w.size());
    for (std::size_t y = 0; y < w.size(); ++y) {
        m0[y] = p.p0() * w.w(0, y);
        m1[y] = p.p1() * w.w(1, y);
    }
    return JointDist::unchecked(std::move(m0), std::move(m1));
}

double bhattacharyya(const JointDist& a)
{
    double z = 0.0;
    for (std::size_t y = 0; y < a.size(); ++y)
        z += std::sqrt(a.mass(0, y) * a.mass(1, y));
    return std::min(1.0, 2.0 * z);
}

double total_variation(const JointDist& a)
{
    double k = 0.0;
    for (std::size_t y = 0; y < a.size(); ++y)
        k += std::abs(a.mass(0, y) - a.mass(1, y));
    return std::min(1.0, k);
}

double binary_entropy(double p)
{
    if (p <= 0.0 || p >= 1.0)
        return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double cond_entropy(const JointDist& a)
{
    double h = 0.0;
    for (std::size_t y = 0; y < a.size(); ++y) {
        const double m0 = a.mass(0, y);
        const double m1 = a.mass(1, y);
        const double total = m0 + m1;
        // total * h2(m0/total), written to keep precision when one side is tiny
        if (m0 > 0.0)
            h += m0 * std::log2(total / m0);
        if (m1 > 0.0)
            h += m1 * std::log2(total / m1);
    }
    return std::clamp(h, 0.0, 1.0);
}

Metrics metrics(const JointDist& a) { return {bhattacharyya(a), total_variation(a), cond_entropy(a)}; }

}  // namespace sppolar

namespace sppolar {

namespace {

double parse_number(const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_row(const std::string& text)
{
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        row.push_back(parse_number(text.substr(start, end - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return row;
}

}  // namespace

BMChannel parse_channel(const std::string& descriptor)
{
    if (descriptor == "none")
        return make_uninformative();
    const std::size_t colon = descriptor.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("channel descriptor must look like 'bsc:0.11': '" + descriptor + "'");
    const std::string family = descriptor.substr(0, colon);
    const std::string args = descriptor.substr(colon + 1);
    if (family == "bsc")
        return make_bsc(parse_number(args));
    if (family == "bec")
        return make_bec(parse_number(args));
    if (family == "bmc") {
        const std::size_t slash = args.find('/');
        if (slash == std::string::npos)
            throw std::invalid_argument("bmc descriptor needs two rows separated by '/'");
        return BMChannel(parse_row(args.substr(0, slash)), parse_row(args.substr(slash + 1)));
    }
    throw std::invalid_argument("unknown channel family '" + family + "'");
}

}  // namespace sppolar
