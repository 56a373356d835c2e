// Enumeration oracles for the tests. They only use the M-bit transforms and
// plain set reasoning, never the decoder or the evolution code.
#pragma once

#include "sppolar/transform.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// Successive cancellation on the erasure channel, decided by brute force.
/// `erased` marks erased positions of the transmitted word, `codeword` is
/// the sent word. At step i the candidates are all words agreeing with the
/// unerased outputs whose transform matches the decisions so far; a bit that
/// takes both values among them is a tie and resolves to 0. Frozen bits are
/// zero. Returns the decided u.
inline std::vector<std::uint8_t> sc_on_erasures(sppolar::RateMatching mode, const std::vector<std::uint8_t>& codeword,
                                                const std::vector<bool>& erased, const std::vector<bool>& frozen)
{
    const std::size_t m = codeword.size();
    std::vector<std::vector<std::uint8_t>> candidates;
    for (std::size_t word = 0; word < (std::size_t{1} << m); ++word) {
        std::vector<std::uint8_t> x(m);
        bool consistent = true;
        for (std::size_t j = 0; j < m; ++j) {
            x[j] = static_cast<std::uint8_t>((word >> j) & 1);
            consistent = consistent && (erased[j] || x[j] == codeword[j]);
        }
        if (consistent)
            candidates.push_back(sppolar::rate_matched_transform(mode, x));
    }
    std::vector<std::uint8_t> decided(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        bool seen0 = false, seen1 = false;
        for (const auto& u : candidates) {
            bool prefix = true;
            for (std::size_t j = 0; j < i && prefix; ++j)
                prefix = u[j] == decided[j];
            if (!prefix)
                continue;
            (u[i] ? seen1 : seen0) = true;
        }
        decided[i] = frozen[i] ? 0 : static_cast<std::uint8_t>(seen1 && !seen0);
    }
    return decided;
}

/// Exact frame error probability of SC decoding with uniform data and zero
/// frozen bits, over BEC(eps): sums over all erasure patterns and messages.
inline double sc_bec_fer(sppolar::RateMatching mode, std::size_t m, const std::vector<bool>& frozen, double eps)
{
    std::vector<std::size_t> info;
    for (std::size_t i = 0; i < m; ++i)
        if (!frozen[i])
            info.push_back(i);
    const std::size_t messages = std::size_t{1} << info.size();
    double fer = 0.0;
    for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
        std::vector<bool> erased(m);
        std::size_t count = 0;
        for (std::size_t j = 0; j < m; ++j) {
            erased[j] = (pattern >> j) & 1;
            count += erased[j];
        }
        std::size_t failures = 0;
        for (std::size_t msg = 0; msg < messages; ++msg) {
            std::vector<std::uint8_t> u(m, 0);
            for (std::size_t k = 0; k < info.size(); ++k)
                u[info[k]] = static_cast<std::uint8_t>((msg >> k) & 1);
            // x with transform u, by search
            std::vector<std::uint8_t> x(m);
            for (std::size_t word = 0; word < (std::size_t{1} << m); ++word) {
                for (std::size_t j = 0; j < m; ++j)
                    x[j] = static_cast<std::uint8_t>((word >> j) & 1);
                if (sppolar::rate_matched_transform(mode, x) == u)
                    break;
            }
            if (sc_on_erasures(mode, x, erased, frozen) != u)
                ++failures;
        }
        const double weight = std::pow(eps, static_cast<double>(count)) *
                              std::pow(1.0 - eps, static_cast<double>(m - count));
        fer += weight * static_cast<double>(failures) / static_cast<double>(messages);
    }
    return fer;
}

}  // namespace oracle
