// Bit-reversed polar transform over the extended symbol set {0, 1, s, p},
// and the shortening and puncturing patterns and transforms built on it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sppolar {

/// 0 and 1 are bits, s marks a shortened bit and p a punctured bit.
enum class ExtBit : std::uint8_t { zero = 0, one = 1, s = 2, p = 3 };

char to_char(ExtBit b);
ExtBit ext_bit_from_char(char c);
std::string to_string(std::span<const ExtBit> v);

/// Raised when a combination the operation tables leave undefined is reached.
/// Valid shortening and puncturing placements never reach one.
class UndefinedCombination : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Extended XOR (the '-' side of the butterfly).
ExtBit ext_xor(ExtBit a, ExtBit b);
/// Extended "take the second argument" (the '+' side of the butterfly).
ExtBit ext_select(ExtBit a, ExtBit b);

/// log2 of a power of two; throws std::invalid_argument otherwise.
unsigned log2_exact(std::size_t n);

/// Smallest power of two >= m, and its exponent.
std::size_t mother_length(std::size_t m);
unsigned mother_depth(std::size_t m);

std::size_t bit_reverse(std::size_t i, unsigned n);

/// One butterfly stage pattern shared by every evaluation of the transform:
/// a vector of length 2^n is halved n times, each pair (v[2k], v[2k+1]) of a
/// block feeding the '-' output at k and the '+' output at half + k. Entry i
/// of the result is therefore the operation sequence spelled by the bits of
/// i, most significant first.
template <typename T, typename Minus, typename Plus>
std::vector<T> butterfly(std::vector<T> v, Minus&& minus, Plus&& plus)
{
    const std::size_t size = v.size();
    log2_exact(size);
    std::vector<T> next(size);
    for (std::size_t block = size; block >= 2; block /= 2) {
        const std::size_t half = block / 2;
        for (std::size_t base = 0; base < size; base += block) {
            for (std::size_t k = 0; k < half; ++k) {
                const T& left = v[base + 2 * k];
                const T& right = v[base + 2 * k + 1];
                next[base + k] = minus(left, right);
                next[base + half + k] = plus(left, right);
            }
        }
        v.swap(next);
    }
    return v;
}

std::vector<ExtBit> polar_transform_ext(std::vector<ExtBit> x);

/// Binary transform; an involution, so it also maps u back to x.
std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> x);
/// Undoes polar_transform stage by stage.
std::vector<std::uint8_t> inverse_transform(std::vector<std::uint8_t> u);

enum class RateMatching { shortened, punctured };

std::string to_string(RateMatching mode);
RateMatching rate_matching_from_string(const std::string& s);

struct Pattern {
    std::size_t length = 0;  // M
    std::size_t mother = 0;  // N
    unsigned depth = 0;      // n
    RateMatching mode = RateMatching::shortened;
    std::vector<std::size_t> indices;  // sorted

    bool contains(std::size_t i) const;
    /// Offset of the first kept transformed index: 0 when shortened, N - M when punctured.
    std::size_t u_offset() const { return mode == RateMatching::shortened ? 0 : mother - length; }
};

/// Positions rev(N-1), ..., rev(M) of the mother codeword, forced to zero.
Pattern shorten_pattern(std::size_t m);
/// Positions rev(0), ..., rev(N-M-1) of the mother codeword, never sent.
Pattern puncture_pattern(std::size_t m);
Pattern make_pattern(std::size_t m, RateMatching mode);

/// Inserts the pattern marker (s or p) at the pattern positions and copies x
/// into the remaining ones in order.
std::vector<ExtBit> extend(const Pattern& pattern, std::span<const std::uint8_t> x);

/// Full length-N transform of the extended word.
std::vector<ExtBit> extended_transform(const Pattern& pattern, std::span<const std::uint8_t> x);

/// Prefix of length M of the transformed s-extended word.
std::vector<std::uint8_t> shorten_transform(std::span<const std::uint8_t> x);
/// Suffix of length M of the transformed p-extended word.
std::vector<std::uint8_t> puncture_transform(std::span<const std::uint8_t> x);
std::vector<std::uint8_t> rate_matched_transform(RateMatching mode, std::span<const std::uint8_t> x);

}  // namespace sppolar
