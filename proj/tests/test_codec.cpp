#include "sppolar/codec.hpp"
#include "sppolar/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace sppolar;

namespace {

using Bits = std::vector<std::uint8_t>;

Bits random_bits(std::mt19937_64& gen, std::size_t n)
{
    Bits b(n);
    for (auto& v : b)
        v = static_cast<std::uint8_t>(gen() & 1);
    return b;
}

Llr random_llr(std::mt19937_64& gen)
{
    switch (gen() % 5) {
    case 0: return Llr::plus_infinity();
    case 1: return Llr::minus_infinity();
    case 2: return Llr::finite(0.0);
    default: return Llr::finite(std::uniform_real_distribution<double>(-40.0, 40.0)(gen));
    }
}

// Code over the noiseless BSC with the information set picked on a noisy one.
CodeSpec noiseless_code(std::size_t m, RateMatching mode, std::size_t info)
{
    CodeSpec code = construct_code(m, "bsc:0.11", 0.5, mode, 8, info, 1);
    code.channel = "bsc:0";
    return code;
}

}  // namespace

TEST_CASE("llr values")
{
    CHECK(Llr::from_double(std::numeric_limits<double>::infinity()) == Llr::plus_infinity());
    CHECK(Llr::from_double(-std::numeric_limits<double>::infinity()) == Llr::minus_infinity());
    CHECK_THROWS_AS(Llr::from_double(std::nan("")), std::invalid_argument);
    CHECK(Llr::finite(0.0).decision() == 0);
    CHECK(Llr::finite(-1e-300).decision() == 1);
    CHECK(Llr::plus_infinity().sign() == 1);
    CHECK(Llr::minus_infinity().value() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("check-node update")
{
    const Llr a = Llr::finite(1.3), b = Llr::finite(-0.7);
    const double exact = 2.0 * std::atanh(std::tanh(0.65) * std::tanh(-0.35));
    CHECK(llr_f(a, b).value() == doctest::Approx(exact).epsilon(1e-14));
    CHECK(llr_f(a, b, true).value() == doctest::Approx(-0.7));
    CHECK(llr_f(Llr::plus_infinity(), a) == a);
    CHECK(llr_f(a, Llr::plus_infinity()) == a);
    CHECK(llr_f(Llr::minus_infinity(), a).value() == doctest::Approx(-1.3));
    CHECK(llr_f(Llr::minus_infinity(), Llr::minus_infinity()) == Llr::plus_infinity());
    CHECK(llr_f(Llr::finite(0.0), Llr::plus_infinity()).value() == 0.0);
    // large magnitudes stay finite and accurate
    CHECK(llr_f(Llr::finite(800.0), Llr::finite(-900.0)).value() == doctest::Approx(-800.0));
}

TEST_CASE("variable-node update")
{
    const Llr a = Llr::finite(1.5), b = Llr::finite(0.25);
    CHECK(llr_g(a, b, 0).value() == doctest::Approx(1.75));
    CHECK(llr_g(a, b, 1).value() == doctest::Approx(-1.25));
    CHECK(llr_g(Llr::plus_infinity(), b, 1) == Llr::minus_infinity());
    CHECK(llr_g(Llr::plus_infinity(), Llr::plus_infinity(), 0) == Llr::plus_infinity());
    CHECK(llr_g(Llr::plus_infinity(), Llr::plus_infinity(), 1).value() == 0.0);
    CHECK(llr_g(a, Llr::minus_infinity(), 0) == Llr::minus_infinity());
}

TEST_CASE("updates never produce NaN")
{
    std::mt19937_64 gen(23);
    for (int i = 0; i < 20000; ++i) {
        const Llr a = random_llr(gen), b = random_llr(gen);
        const auto bit = static_cast<std::uint8_t>(gen() & 1);
        CHECK_FALSE(std::isnan(llr_f(a, b).value()));
        CHECK_FALSE(std::isnan(llr_f(a, b, true).value()));
        CHECK_FALSE(std::isnan(llr_g(a, b, bit).value()));
    }
}

TEST_CASE("decoder configuration checks")
{
    CodeSpec code = construct_code(6, "bsc:0.11", 0.5, RateMatching::shortened, 8, 3, 1);
    code.channel = "bmc:0.9,0.1/0.3,0.7";
    CHECK_THROWS_AS(ScDecoder{code}, std::invalid_argument);
    code.channel = "bsc:0.11";
    code.p0 = 0.4;
    CHECK_THROWS_AS(ScDecoder{code}, std::invalid_argument);
    code.p0 = 0.5;
    ScDecoder decoder(code);
    const std::vector<std::size_t> short_y(5, 0);
    CHECK_THROWS_AS(decoder.decode(short_y), std::invalid_argument);
    CHECK_THROWS_AS(sc_encode(Bits(2, 0), code), std::invalid_argument);
}

TEST_CASE("encoding")
{
    for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
        const CodeSpec code = noiseless_code(6, mode, 3);
        CHECK(sc_encode(Bits(3, 0), code) == Bits(6, 0));
    }

    // the shortened positions of the length-8 word are zero
    const CodeSpec code = noiseless_code(6, RateMatching::shortened, 3);
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Bits data = random_bits(gen, 3);
        const Bits frozen = random_bits(gen, 3);
        const Bits x = sc_encode(data, code, frozen);
        Bits u(8, 0);
        std::size_t d = 0, f = 0;
        for (std::size_t i = 0; i < 6; ++i)
            u[i] = code.is_frozen(i) ? frozen[f++] : data[d++];
        const Bits full = inverse_transform(u);
        CHECK(full[3] == 0);
        CHECK(full[7] == 0);
        CHECK(x == Bits{full[0], full[1], full[2], full[4], full[5], full[6]});
        CHECK(shorten_transform(x) == Bits(u.begin(), u.begin() + 6));
    }
}

TEST_CASE("noiseless round trip")
{
    std::mt19937_64 gen(99);
    for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
        for (std::size_t m : {6, 12, 24, 96, 384}) {
            const CodeSpec code = noiseless_code(m, mode, m / 2);
            ScDecoder decoder(code);
            std::vector<std::size_t> y(m);
            int failures = 0;
            for (int trial = 0; trial < 1000; ++trial) {
                const Bits data = random_bits(gen, code.info_size());
                const Bits x = sc_encode(data, code);
                for (std::size_t i = 0; i < m; ++i)
                    y[i] = x[i];
                const DecodeResult r = decoder.decode(y);
                failures += r.data != data;
                if (trial == 0)
                    CHECK(rate_matched_transform(mode, x) == r.u_hat);
            }
            INFO("M=" << m << " mode=" << to_string(mode));
            CHECK(failures == 0);
        }
    }
}

TEST_CASE("frozen values are honoured")
{
    const CodeSpec code = noiseless_code(12, RateMatching::punctured, 0);
    const Bits frozen{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0};
    ScDecoder decoder(code, {}, frozen);
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::size_t> y(12);
        for (auto& v : y)
            v = gen() & 1;
        const DecodeResult r = decoder.decode(y);
        CHECK(r.u_hat == frozen);
        CHECK(r.data.empty());
    }

    const CodeSpec half = noiseless_code(12, RateMatching::shortened, 6);
    const Bits fv{1, 1, 0, 1, 0, 1};
    const Bits data{0, 1, 1, 0, 1, 0};
    const Bits x = sc_encode(data, half, fv);
    std::vector<std::size_t> y(x.begin(), x.end());
    ScDecoder with(half, {}, fv);
    CHECK(with.decode(y).data == data);
}

TEST_CASE("decoding from LLRs matches decoding from outputs")
{
    const CodeSpec code = construct_code(24, "bsc:0.05", 0.5, RateMatching::punctured, 16, 12, 1);
    ScDecoder by_output(code);
    ScDecoder by_llr(code, {});
    const double l = std::log(0.95 / 0.05);
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::size_t> y(24);
        std::vector<Llr> llr(24);
        for (std::size_t i = 0; i < 24; ++i) {
            y[i] = gen() & 1;
            llr[i] = Llr::finite(y[i] ? -l : l);
        }
        CHECK(by_output.decode(y).u_hat == by_llr.decode_llr(llr).u_hat);
    }
    CHECK(sc_decode(std::vector<std::size_t>(24, 0), code).data == Bits(12, 0));
}

TEST_CASE("erasure decoding matches successive enumeration")
{
    const BMChannel bec = make_bec(0.5);
    const std::size_t erasure = bec.symbol("?");
    for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
        for (std::size_t m = 2; m <= 6; ++m) {
            const CodeSpec code = construct_code(m, "bec:0.5", 0.5, mode, kExactAlphabet, m / 2, 1);
            std::vector<bool> frozen(m);
            for (std::size_t i = 0; i < m; ++i)
                frozen[i] = code.is_frozen(i);
            ScDecoder decoder(code);
            const std::size_t info = code.info_size();
            for (std::size_t msg = 0; msg < (std::size_t{1} << info); ++msg) {
                Bits data(info);
                for (std::size_t k = 0; k < info; ++k)
                    data[k] = static_cast<std::uint8_t>((msg >> k) & 1);
                const Bits x = sc_encode(data, code);
                const Bits u = rate_matched_transform(mode, x);
                for (std::size_t pattern = 0; pattern < (std::size_t{1} << m); ++pattern) {
                    std::vector<bool> erased(m);
                    std::vector<std::size_t> y(m);
                    for (std::size_t j = 0; j < m; ++j) {
                        erased[j] = (pattern >> j) & 1;
                        y[j] = erased[j] ? erasure : x[j];
                    }
                    const bool oracle_ok = oracle::sc_on_erasures(mode, x, erased, frozen) == u;
                    const bool decoder_ok = decoder.decode(y).u_hat == u;
                    INFO("M=" << m << " mode=" << to_string(mode) << " msg=" << msg << " erasures=" << pattern);
                    CHECK(oracle_ok == decoder_ok);
                }
            }
        }
    }
}
