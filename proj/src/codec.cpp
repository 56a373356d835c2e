#include "sppolar/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sppolar {

namespace {

constexpr std::uint8_t kInfo = 0xff;

Llr with_sign(Llr v, int s)
{
    if (s > 0)
        return v;
    if (s == 0)
        return Llr::finite(0.0);
    switch (v.kind()) {
    case Llr::Kind::plus_infinity: return Llr::minus_infinity();
    case Llr::Kind::minus_infinity: return Llr::plus_infinity();
    case Llr::Kind::finite: break;
    }
    return Llr::finite(-v.value());
}

Llr symbol_llr(const BMChannel& w, std::size_t y)
{
    const double w0 = w.w(0, y);
    const double w1 = w.w(1, y);
    if (w0 > 0.0 && w1 > 0.0)
        return Llr::finite(std::log(w0) - std::log(w1));
    if (w0 > 0.0)
        return Llr::plus_infinity();
    if (w1 > 0.0)
        return Llr::minus_infinity();
    return Llr::finite(0.0);
}

}  // namespace

Llr Llr::from_double(double v)
{
    if (std::isnan(v))
        throw std::invalid_argument("LLR must not be NaN");
    if (std::isinf(v))
        return v > 0 ? plus_infinity() : minus_infinity();
    return finite(v);
}

int Llr::sign() const
{
    switch (kind_) {
    case Kind::plus_infinity: return 1;
    case Kind::minus_infinity: return -1;
    case Kind::finite: break;
    }
    return v_ > 0.0 ? 1 : (v_ < 0.0 ? -1 : 0);
}

double Llr::value() const
{
    switch (kind_) {
    case Kind::plus_infinity: return std::numeric_limits<double>::infinity();
    case Kind::minus_infinity: return -std::numeric_limits<double>::infinity();
    case Kind::finite: break;
    }
    return v_;
}

Llr llr_f(Llr a, Llr b, bool min_sum)
{
    if (a.is_infinite())
        return with_sign(b, a.sign());
    if (b.is_infinite())
        return with_sign(a, b.sign());
    const double x = a.value();
    const double y = b.value();
    const int s = a.sign() * b.sign();
    if (s == 0)
        return Llr::finite(0.0);
    const double m = std::min(std::abs(x), std::abs(y));
    if (min_sum)
        return Llr::finite(s * m);
    // 2 atanh(tanh(x/2) tanh(y/2)) without overflow for large magnitudes
    const double exact = s * m + std::log1p(std::exp(-std::abs(x + y))) - std::log1p(std::exp(-std::abs(x - y)));
    return Llr::finite(exact);
}

Llr llr_g(Llr a, Llr b, std::uint8_t bit)
{
    const Llr signed_a = bit ? with_sign(a, -1) : a;
    if (signed_a.is_infinite() && b.is_infinite())
        return signed_a.kind() == b.kind() ? b : Llr::finite(0.0);
    if (signed_a.is_infinite())
        return signed_a;
    if (b.is_infinite())
        return b;
    return Llr::finite(b.value() + signed_a.value());
}

void require_symmetric_uniform(const BMChannel& w, double p0)
{
    if (std::abs(p0 - 0.5) > kMassTolerance)
        throw std::invalid_argument("the decoder requires a uniform input distribution");
    if (!w.is_symmetric(1e-12))
        throw std::invalid_argument("the decoder requires a symmetric channel");
}

std::vector<std::uint8_t> sc_encode(std::span<const std::uint8_t> data, const CodeSpec& code,
                                    std::span<const std::uint8_t> frozen_values)
{
    const Pattern& pattern = code.pattern;
    if (data.size() != code.info_size())
        throw std::invalid_argument("data length must equal the information set size");
    if (!frozen_values.empty() && frozen_values.size() != code.frozen.size())
        throw std::invalid_argument("one frozen value per frozen index");

    std::vector<std::uint8_t> u(pattern.mother, 0);
    const std::size_t offset = pattern.u_offset();
    std::size_t next_data = 0, next_frozen = 0;
    for (std::size_t i = 0; i < pattern.length; ++i) {
        std::uint8_t bit;
        if (code.is_frozen(i))
            bit = frozen_values.empty() ? 0 : frozen_values[next_frozen++];
        else
            bit = data[next_data++];
        if (bit > 1)
            throw std::invalid_argument("bits must be 0 or 1");
        u[offset + i] = bit;
    }
    const std::vector<std::uint8_t> x = inverse_transform(std::move(u));

    std::vector<std::uint8_t> codeword;
    codeword.reserve(pattern.length);
    for (std::size_t i = 0; i < pattern.mother; ++i) {
        if (!pattern.contains(i)) {
            codeword.push_back(x[i]);
        } else if (pattern.mode == RateMatching::shortened && x[i] != 0) {
            throw std::logic_error("shortened position carries a nonzero bit");
        }
    }
    return codeword;
}

ScDecoder::ScDecoder(CodeSpec code, const DecoderOptions& options, std::vector<std::uint8_t> frozen_values)
    : code_(std::move(code)), channel_(parse_channel(code_.channel)), options_(options)
{
    require_symmetric_uniform(channel_, code_.p0);
    if (!frozen_values.empty() && frozen_values.size() != code_.frozen.size())
        throw std::invalid_argument("one frozen value per frozen index");

    for (std::size_t y = 0; y < channel_.size(); ++y)
        symbol_llr_.push_back(symbol_llr(channel_, y));

    const Pattern& pattern = code_.pattern;
    fixed_.assign(pattern.mother, 0);
    std::size_t next_frozen = 0;
    for (std::size_t i = 0; i < pattern.length; ++i) {
        std::uint8_t& slot = fixed_[pattern.u_offset() + i];
        if (code_.is_frozen(i))
            slot = frozen_values.empty() ? 0 : frozen_values[next_frozen++];
        else
            slot = kInfo;
    }

    llr_.resize(pattern.depth + 1);
    bits_.resize(pattern.depth + 1);
    for (unsigned level = 0; level <= pattern.depth; ++level) {
        llr_[level].resize(std::size_t{1} << level);
        bits_[level].resize(std::size_t{1} << level);
    }
    u_.resize(pattern.mother);
}

void ScDecoder::descend(unsigned level, std::size_t offset)
{
    if (level == 0) {
        const std::uint8_t fixed = fixed_[offset];
        const std::uint8_t bit = fixed == kInfo ? llr_[0][0].decision() : fixed;
        u_[offset] = bit;
        bits_[0][0] = bit;
        return;
    }
    const std::vector<Llr>& in = llr_[level];
    std::vector<Llr>& child = llr_[level - 1];
    std::vector<std::uint8_t>& out = bits_[level];
    const std::vector<std::uint8_t>& child_bits = bits_[level - 1];
    const std::size_t half = in.size() / 2;

    for (std::size_t k = 0; k < half; ++k)
        child[k] = llr_f(in[2 * k], in[2 * k + 1], options_.min_sum);
    descend(level - 1, offset);
    for (std::size_t k = 0; k < half; ++k)
        out[2 * k] = child_bits[k];

    for (std::size_t k = 0; k < half; ++k)
        child[k] = llr_g(in[2 * k], in[2 * k + 1], out[2 * k]);
    descend(level - 1, offset + half);
    for (std::size_t k = 0; k < half; ++k) {
        out[2 * k] ^= child_bits[k];
        out[2 * k + 1] = child_bits[k];
    }
}

DecodeResult ScDecoder::decode_llr(std::span<const Llr> channel_llr)
{
    const Pattern& pattern = code_.pattern;
    if (channel_llr.size() != pattern.length)
        throw std::invalid_argument("received word length must equal M");
    std::vector<Llr>& root = llr_[pattern.depth];
    const Llr marker = pattern.mode == RateMatching::shortened ? Llr::plus_infinity() : Llr::finite(0.0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < pattern.mother; ++i)
        root[i] = pattern.contains(i) ? marker : channel_llr[next++];

    descend(pattern.depth, 0);

    DecodeResult r;
    r.u_hat.assign(u_.begin() + static_cast<std::ptrdiff_t>(pattern.u_offset()),
                   u_.begin() + static_cast<std::ptrdiff_t>(pattern.u_offset() + pattern.length));
    for (std::size_t i = 0; i < pattern.length; ++i)
        if (!code_.is_frozen(i))
            r.data.push_back(r.u_hat[i]);
    return r;
}

DecodeResult ScDecoder::decode(std::span<const std::size_t> y)
{
    if (y.size() != code_.pattern.length)
        throw std::invalid_argument("received word length must equal M");
    std::vector<Llr> llr(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] >= symbol_llr_.size())
            throw std::invalid_argument("channel output out of range");
        llr[i] = symbol_llr_[y[i]];
    }
    return decode_llr(llr);
}

DecodeResult sc_decode(std::span<const std::size_t> y, const CodeSpec& code, const DecoderOptions& options)
{
    ScDecoder decoder(code, options);
    return decoder.decode(y);
}

}  // namespace sppolar
