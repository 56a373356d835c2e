// Successive-cancellation encoder and decoder for shortened and punctured
// codes over symmetric channels with uniform input.
#pragma once

#include "sppolar/channel_model.hpp"
#include "sppolar/construction.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sppolar {

/// ln(P(0)/P(1)) with exact, symbolic infinities.
class Llr {
public:
    enum class Kind : std::uint8_t { finite, plus_infinity, minus_infinity };

    constexpr Llr() = default;
    static constexpr Llr finite(double v) { return Llr(Kind::finite, v); }
    static constexpr Llr plus_infinity() { return Llr(Kind::plus_infinity, 0.0); }
    static constexpr Llr minus_infinity() { return Llr(Kind::minus_infinity, 0.0); }
    /// Maps IEEE infinities onto the symbolic ones; NaN is rejected.
    static Llr from_double(double v);

    Kind kind() const { return kind_; }
    bool is_infinite() const { return kind_ != Kind::finite; }
    /// +-1 for infinities and nonzero values, 0 for an exact zero.
    int sign() const;
    /// The finite value, or an IEEE infinity.
    double value() const;
    /// Hard decision; ties go to 0.
    std::uint8_t decision() const { return sign() < 0 ? 1 : 0; }

    friend bool operator==(const Llr&, const Llr&) = default;

private:
    constexpr Llr(Kind k, double v) : kind_(k), v_(v) {}
    Kind kind_ = Kind::finite;
    double v_ = 0.0;
};

/// Check-node update. Exact form by default, min-sum on request.
Llr llr_f(Llr a, Llr b, bool min_sum = false);
/// Variable-node update b + (-1)^bit a. Opposite infinities (contradictory
/// evidence) give 0.
Llr llr_g(Llr a, Llr b, std::uint8_t bit);

/// Throws std::invalid_argument unless the channel is symmetric and p0 = 1/2.
void require_symmetric_uniform(const BMChannel& w, double p0);

/// Codeword of length M. frozen_values is indexed like code.frozen; empty
/// means all zero.
std::vector<std::uint8_t> sc_encode(std::span<const std::uint8_t> data, const CodeSpec& code,
                                    std::span<const std::uint8_t> frozen_values = {});

struct DecodeResult {
    std::vector<std::uint8_t> u_hat;  // length M
    std::vector<std::uint8_t> data;   // info positions of u_hat
};

struct DecoderOptions {
    bool min_sum = false;
};

/// Reusable but not thread-safe: holds per-level scratch buffers.
class ScDecoder {
public:
    ScDecoder(CodeSpec code, const DecoderOptions& options = {}, std::vector<std::uint8_t> frozen_values = {});

    /// y holds channel output indices.
    DecodeResult decode(std::span<const std::size_t> y);
    /// Decodes from channel LLRs, one per transmitted position.
    DecodeResult decode_llr(std::span<const Llr> channel_llr);

    const CodeSpec& code() const { return code_; }
    const BMChannel& channel() const { return channel_; }

private:
    void descend(unsigned level, std::size_t offset);

    CodeSpec code_;
    BMChannel channel_;
    DecoderOptions options_;
    std::vector<Llr> symbol_llr_;
    // Fixed value per extended index, or 0xff for an information position.
    std::vector<std::uint8_t> fixed_;
    std::vector<std::vector<Llr>> llr_;           // llr_[level] has 2^level entries
    std::vector<std::vector<std::uint8_t>> bits_; // re-encoded partial sums per level
    std::vector<std::uint8_t> u_;
};

DecodeResult sc_decode(std::span<const std::size_t> y, const CodeSpec& code, const DecoderOptions& options = {});

}  // namespace sppolar
