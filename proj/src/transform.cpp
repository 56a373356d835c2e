#include "sppolar/transform.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace sppolar {

namespace {

constexpr ExtBit Z = ExtBit::zero;
constexpr ExtBit O = ExtBit::one;
constexpr ExtBit S = ExtBit::s;
constexpr ExtBit P = ExtBit::p;
// Marker for cells the tables leave undefined.
constexpr std::uint8_t kUndefined = 0xff;

using Table = std::array<std::array<std::uint8_t, 4>, 4>;

constexpr std::uint8_t e(ExtBit b) { return static_cast<std::uint8_t>(b); }

// Read as row (first argument) by column (second argument), order 0 1 s p.
constexpr Table kXor = {{
    {e(Z), e(O), e(Z), kUndefined},
    {e(O), e(Z), e(O), kUndefined},
    {kUndefined, kUndefined, e(S), kUndefined},
    {e(P), e(P), e(P), e(P)},
}};

constexpr Table kSelect = {{
    {e(Z), e(O), e(S), kUndefined},
    {e(Z), e(O), e(S), kUndefined},
    {kUndefined, kUndefined, e(S), kUndefined},
    {e(Z), e(O), e(S), e(P)},
}};

ExtBit lookup(const Table& table, ExtBit a, ExtBit b, const char* name)
{
    const std::uint8_t r = table[e(a)][e(b)];
    if (r == kUndefined)
        throw UndefinedCombination(std::string("undefined combination ") + to_char(a) + ' ' + name + ' ' + to_char(b));
    return static_cast<ExtBit>(r);
}

}  // namespace

char to_char(ExtBit b)
{
    switch (b) {
    case ExtBit::zero: return '0';
    case ExtBit::one: return '1';
    case ExtBit::s: return 's';
    case ExtBit::p: return 'p';
    }
    return '?';
}

ExtBit ext_bit_from_char(char c)
{
    switch (c) {
    case '0': return ExtBit::zero;
    case '1': return ExtBit::one;
    case 's': return ExtBit::s;
    case 'p': return ExtBit::p;
    default: throw std::invalid_argument(std::string("not an extended bit: ") + c);
    }
}

std::string to_string(std::span<const ExtBit> v)
{
    std::string s;
    for (ExtBit b : v)
        s.push_back(to_char(b));
    return s;
}

ExtBit ext_xor(ExtBit a, ExtBit b) { return lookup(kXor, a, b, "xor"); }

ExtBit ext_select(ExtBit a, ExtBit b) { return lookup(kSelect, a, b, "select"); }

unsigned log2_exact(std::size_t n)
{
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument("length must be a power of two");
    return static_cast<unsigned>(std::countr_zero(n));
}

std::size_t mother_length(std::size_t m)
{
    if (m == 0)
        throw std::invalid_argument("code length must be positive");
    return std::bit_ceil(m);
}

unsigned mother_depth(std::size_t m) { return log2_exact(mother_length(m)); }

std::size_t bit_reverse(std::size_t i, unsigned n)
{
    if (n < 64 && (i >> n) != 0)
        throw std::out_of_range("index does not fit in the requested bit width");
    std::size_t r = 0;
    for (unsigned j = 0; j < n; ++j) {
        r = (r << 1) | (i & 1);
        i >>= 1;
    }
    return r;
}

std::vector<ExtBit> polar_transform_ext(std::vector<ExtBit> x)
{
    return butterfly(std::move(x), ext_xor, ext_select);
}

std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> x)
{
    return butterfly(
        std::move(x), [](std::uint8_t a, std::uint8_t b) { return static_cast<std::uint8_t>(a ^ b); },
        [](std::uint8_t, std::uint8_t b) { return b; });
}

std::vector<std::uint8_t> inverse_transform(std::vector<std::uint8_t> u)
{
    // Each forward stage maps block pairs (a, b) to (a ^ b | b); undo the stages
    // in reverse order.
    const std::size_t size = u.size();
    log2_exact(size);
    std::vector<std::uint8_t> prev(size);
    for (std::size_t block = 2; block <= size; block *= 2) {
        const std::size_t half = block / 2;
        for (std::size_t base = 0; base < size; base += block) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::uint8_t minus = u[base + k];
                const std::uint8_t plus = u[base + half + k];
                prev[base + 2 * k] = minus ^ plus;
                prev[base + 2 * k + 1] = plus;
            }
        }
        u.swap(prev);
    }
    return u;
}

std::string to_string(RateMatching mode) { return mode == RateMatching::shortened ? "shortened" : "punctured"; }

RateMatching rate_matching_from_string(const std::string& s)
{
    if (s == "shortened" || s == "shorten")
        return RateMatching::shortened;
    if (s == "punctured" || s == "puncture")
        return RateMatching::punctured;
    throw std::invalid_argument("mode must be 'shortened' or 'punctured'");
}

bool Pattern::contains(std::size_t i) const { return std::binary_search(indices.begin(), indices.end(), i); }

Pattern make_pattern(std::size_t m, RateMatching mode)
{
    Pattern p;
    p.length = m;
    p.mother = mother_length(m);
    p.depth = log2_exact(p.mother);
    p.mode = mode;
    const std::size_t removed = p.mother - m;
    for (std::size_t k = 0; k < removed; ++k) {
        const std::size_t natural = mode == RateMatching::shortened ? p.mother - 1 - k : k;
        p.indices.push_back(bit_reverse(natural, p.depth));
    }
    std::sort(p.indices.begin(), p.indices.end());
    return p;
}

Pattern shorten_pattern(std::size_t m) { return make_pattern(m, RateMatching::shortened); }

Pattern puncture_pattern(std::size_t m) { return make_pattern(m, RateMatching::punctured); }

std::vector<ExtBit> extend(const Pattern& pattern, std::span<const std::uint8_t> x)
{
    if (x.size() != pattern.length)
        throw std::invalid_argument("input length does not match the pattern");
    const ExtBit marker = pattern.mode == RateMatching::shortened ? ExtBit::s : ExtBit::p;
    std::vector<ExtBit> out(pattern.mother);
    std::size_t next = 0;
    for (std::size_t i = 0; i < pattern.mother; ++i) {
        if (pattern.contains(i)) {
            out[i] = marker;
        } else {
            if (x[next] > 1)
                throw std::invalid_argument("input must be binary");
            out[i] = static_cast<ExtBit>(x[next++]);
        }
    }
    return out;
}

std::vector<ExtBit> extended_transform(const Pattern& pattern, std::span<const std::uint8_t> x)
{
    return polar_transform_ext(extend(pattern, x));
}

namespace {

std::vector<std::uint8_t> to_bits(std::span<const ExtBit> v)
{
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != ExtBit::zero && v[i] != ExtBit::one)
            throw std::logic_error("kept transformed entries must be bits");
        out[i] = static_cast<std::uint8_t>(v[i]);
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> rate_matched_transform(RateMatching mode, std::span<const std::uint8_t> x)
{
    const Pattern pattern = make_pattern(x.size(), mode);
    const std::vector<ExtBit> u = extended_transform(pattern, x);
    const auto first = u.begin() + static_cast<std::ptrdiff_t>(pattern.u_offset());
    return to_bits(std::span<const ExtBit>(&*first, pattern.length));
}

std::vector<std::uint8_t> shorten_transform(std::span<const std::uint8_t> x)
{
    return rate_matched_transform(RateMatching::shortened, x);
}

std::vector<std::uint8_t> puncture_transform(std::span<const std::uint8_t> x)
{
    return rate_matched_transform(RateMatching::punctured, x);
}

}  // namespace sppolar
