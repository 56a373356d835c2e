#include "sppolar/construction.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace sppolar;

namespace {

JointDist bsc_joint(double p) { return joint_from(InputDist::uniform(), make_bsc(p)); }
JointDist bec_joint(double eps) { return joint_from(InputDist::uniform(), make_bec(eps)); }

const EvolveOptions kExact{kExactAlphabet, 1};

double max_profile_gap(const std::vector<Metrics>& a, const std::vector<Metrics>& b)
{
    REQUIRE(a.size() == b.size());
    double gap = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        gap = std::max({gap, std::abs(a[i].z - b[i].z), std::abs(a[i].k - b[i].k), std::abs(a[i].h - b[i].h)});
    return gap;
}

}  // namespace

TEST_CASE("distribution vector")
{
    const JointDist w = bsc_joint(0.11);
    const DistVector s = build_dist_vector(6, w, RateMatching::shortened);
    REQUIRE(s.entries.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(s.entries[i]->tag == (i == 3 || i == 7 ? DistTag::superb : DistTag::generic));
    const DistVector p = build_dist_vector(6, w, RateMatching::punctured);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(p.entries[i]->tag == (i == 0 || i == 4 ? DistTag::pitiful : DistTag::generic));
    const DistVector full = build_dist_vector(8, w, RateMatching::punctured);
    CHECK(std::all_of(full.entries.begin(), full.entries.end(),
                      [](const DistHandle& h) { return h->tag == DistTag::generic; }));
}

TEST_CASE("single stage")
{
    const JointDist w = bec_joint(0.5);
    const auto leaves = evolve(build_dist_vector(2, w, RateMatching::shortened), kExact);
    REQUIRE(leaves.size() == 2);
    CHECK(bhattacharyya(leaves[0]->dist) == doctest::Approx(0.75));
    CHECK(bhattacharyya(leaves[1]->dist) == doctest::Approx(0.25));
    const auto bec = bec_closed_form(2, 0.5, RateMatching::shortened);
    CHECK(bec == std::vector<double>{0.75, 0.25});
}

TEST_CASE("erasure profile for N=8")
{
    const std::vector<double> expected{0.99609375, 0.87890625, 0.80859375, 0.31640625,
                                       0.68359375, 0.19140625, 0.12109375, 0.00390625};
    const auto bec = bec_closed_form(8, 0.5, RateMatching::shortened);
    CHECK(bec == expected);
    const auto profile = evolve_profile(8, bec_joint(0.5), RateMatching::shortened, kExact);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::abs(profile[i].z - expected[i]) < 1e-12);
    const CodeSpec code = construct_code(8, "bec:0.5", 0.5, RateMatching::shortened, kExactAlphabet, 4, 1);
    CHECK(code.frozen == std::vector<std::size_t>{0, 1, 2, 4});
    CHECK(code.info_set() == std::vector<std::size_t>{3, 5, 6, 7});
    CHECK(code.info_size() == 4);
    CHECK(code.is_frozen(2));
    CHECK_FALSE(code.is_frozen(3));
}

TEST_CASE("special tails")
{
    const JointDist w = bsc_joint(0.3);
    const auto s = evolve(build_dist_vector(3, w, RateMatching::shortened), kExact);
    CHECK(s[3]->tag == DistTag::superb);
    const auto p = evolve(build_dist_vector(3, w, RateMatching::punctured), kExact);
    CHECK(p[0]->tag == DistTag::pitiful);

    // eps = 0: kept shortened leaves are perfect
    for (double z : bec_closed_form(6, 0.0, RateMatching::shortened))
        CHECK(z == 0.0);
}

TEST_CASE("evolution agrees with enumeration")
{
    const std::vector<JointDist> channels{bsc_joint(0.3), bec_joint(0.4), joint_from(InputDist(0.3), make_bsc(0.2))};
    for (const JointDist& w : channels) {
        for (std::size_t m = 1; m <= 6; ++m) {
            for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
                const auto fast = evolve_profile(m, w, mode, kExact);
                const auto slow = brute_force_profile(m, w, mode);
                INFO("M=" << m << " mode=" << to_string(mode));
                CHECK(max_profile_gap(fast, slow) < 1e-9);
            }
        }
    }
    const auto one = brute_force_profile(1, bsc_joint(0.3), RateMatching::shortened);
    CHECK(one[0].z == doctest::Approx(bhattacharyya(bsc_joint(0.3))));
    CHECK_THROWS_AS(brute_force_profile(9, bec_joint(0.5), RateMatching::shortened), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_profile(8, JointDist(std::vector<double>(10, 0.05), std::vector<double>(10, 0.05)),
                                        RateMatching::shortened),
                    std::invalid_argument);
}

TEST_CASE("evolution agrees with the erasure recursion")
{
    for (std::size_t m : {3, 5, 6, 12, 24, 40, 64}) {
        for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
            const auto profile = evolve_profile(m, bec_joint(0.4), mode, kExact);
            const auto exact = bec_closed_form(m, 0.4, mode);
            for (std::size_t i = 0; i < m; ++i)
                CHECK(std::abs(profile[i].z - exact[i]) < 1e-10);
        }
    }
}

TEST_CASE("periodic form")
{
    const PeriodicForm f = periodic_form(6);
    CHECK(f.a == 3);
    CHECK(f.t == 2);
    CHECK(f.n == 3);
    const PeriodicForm g = periodic_form(768);
    CHECK(g.a == 3);
    CHECK(g.t == 2);
    CHECK(g.n == 10);
    const PeriodicForm h = periodic_form(64);
    CHECK(h.a == 1);
    CHECK(h.t == 0);
    CHECK(periodic_form(40).a == 5);
}

TEST_CASE("periodic fast path")
{
    const JointDist w = bsc_joint(0.3);
    const auto omegas = periodic_omegas(6, 2, w, RateMatching::shortened, kExact);
    REQUIRE(omegas.size() == 4);
    double mean_h = 0.0;
    for (const auto& o : omegas)
        mean_h += cond_entropy(o->dist) / 4.0;
    CHECK(std::abs(mean_h - 0.75 * cond_entropy(w)) < 1e-12);

    CHECK_THROWS_AS(periodic_omegas(6, 1, w, RateMatching::shortened, kExact), std::invalid_argument);

    for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
        for (std::size_t m : {6, 10, 12, 20, 48}) {
            const PeriodicForm f = periodic_form(m);
            const auto fast = periodic_fast_path(m, f.t, w, mode, kExact);
            const auto slow = evolve_profile(m, w, mode, kExact);
            CHECK(max_profile_gap(fast, slow) < 1e-9);
        }
        const auto seminal = periodic_fast_path(8, 0, w, mode, kExact);
        CHECK(max_profile_gap(seminal, evolve_profile(8, w, mode, kExact)) < 1e-9);
    }
}

TEST_CASE("identical levels spell the operation sequence")
{
    const DistHandle w = make_handle(bec_joint(0.5));
    const auto levels = identical_levels(w, 3, kExact);
    REQUIRE(levels.size() == 4);
    CHECK(levels[1].size() == 2);
    CHECK(bhattacharyya(levels[1][0]->dist) == doctest::Approx(0.75));
    CHECK(bhattacharyya(levels[1][1]->dist) == doctest::Approx(0.25));
    // index 2 = "+-": (0.25)^- = 0.4375
    CHECK(bhattacharyya(levels[2][2]->dist) == doctest::Approx(0.4375));
    const auto leaves = evolve_identical(w, 3, kExact);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(bhattacharyya(leaves[i]->dist) == doctest::Approx(bhattacharyya(levels[3][i]->dist)));
}

TEST_CASE("shared sweep equals per-length evolution")
{
    const JointDist w = bsc_joint(0.11);
    const std::vector<std::size_t> lengths{24, 48, 96, 40, 80, 7};
    const EvolveOptions options{16, 2};
    for (RateMatching mode : {RateMatching::shortened, RateMatching::punctured}) {
        const auto all = periodic_profiles(lengths, w, mode, options);
        REQUIRE(all.size() == lengths.size());
        for (std::size_t k = 0; k < lengths.size(); ++k) {
            const auto one = evolve_profile(lengths[k], w, mode, options);
            CHECK(max_profile_gap(all[k], one) == 0.0);
        }
    }
}

TEST_CASE("worker count does not change results")
{
    const JointDist w = bsc_joint(0.11);
    const auto a = evolve_profile(192, w, RateMatching::punctured, {32, 1});
    const auto b = evolve_profile(192, w, RateMatching::punctured, {32, 4});
    CHECK(max_profile_gap(a, b) == 0.0);
}

TEST_CASE("smaller budgets give pointwise worse figures")
{
    const JointDist w = bsc_joint(0.11);
    for (std::size_t m : {24, 48, 96}) {
        std::vector<std::vector<Metrics>> profiles;
        for (std::size_t mu : {4, 16, 64})
            profiles.push_back(evolve_profile(m, w, RateMatching::shortened, {mu, 1}));
        for (std::size_t k = 1; k < profiles.size(); ++k) {
            for (std::size_t i = 0; i < m; ++i) {
                CHECK(profiles[k - 1][i].z >= profiles[k][i].z - 1e-9);
                CHECK(profiles[k - 1][i].h >= profiles[k][i].h - 1e-9);
                CHECK(profiles[k - 1][i].k <= profiles[k][i].k + 1e-9);
            }
        }
    }
}

TEST_CASE("frozen selection")
{
    std::vector<Metrics> profile(5);
    const double z[] = {0.5, 0.9, 0.5, 0.1, 0.9};
    for (std::size_t i = 0; i < 5; ++i)
        profile[i].z = z[i];
    CHECK(select_frozen(profile, 3) == std::vector<std::size_t>{1, 4});
    CHECK(select_frozen(profile, 2) == std::vector<std::size_t>{0, 1, 4});
    CHECK(select_frozen(profile, 5).empty());
    CHECK(select_frozen(profile, 0).size() == 5);
    CHECK_THROWS_AS(select_frozen(profile, 6), std::invalid_argument);
    CHECK_THROWS_AS(construct_code(8, "bec:0.5", 0.5, RateMatching::shortened, 8, 9, 1), std::invalid_argument);
}

TEST_CASE("code specification round trip")
{
    const CodeSpec code = construct_code(12, "bsc:0.11", 0.5, RateMatching::punctured, 32, 5, 1);
    std::stringstream text;
    write_code_spec(text, code);
    const CodeSpec back = read_code_spec(text);
    CHECK(back.pattern.length == 12);
    CHECK(back.pattern.mode == RateMatching::punctured);
    CHECK(back.pattern.indices == code.pattern.indices);
    CHECK(back.channel == "bsc:0.11");
    CHECK(back.mu == 32);
    CHECK(back.frozen == code.frozen);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(std::abs(back.profile[i].z - code.profile[i].z) <= 1e-11 * std::max(1e-300, code.profile[i].z));

    std::stringstream again;
    write_code_spec(again, back);
    std::stringstream first;
    write_code_spec(first, code);
    CHECK(again.str() == first.str());

    std::stringstream exact;
    write_code_spec(exact, construct_code(4, "bec:0.5", 0.5, RateMatching::shortened, kExactAlphabet, 2, 1));
    CHECK(exact.str().find("mu exact") != std::string::npos);
    CHECK(read_code_spec(exact).mu == kExactAlphabet);

    std::istringstream broken("# sppolar code specification\nM 4\n");
    CHECK_THROWS(read_code_spec(broken));
}

TEST_CASE("number formatting keeps twelve significant digits")
{
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("rate 0.4 code at M=768 has a good information set")
{
    const CodeSpec code = construct_code(768, "bsc:0.11", 0.5, RateMatching::shortened, kDefaultMu, 307);
    CHECK(code.frozen.size() == 461);
    double worst = 0.0;
    for (std::size_t i : code.info_set())
        worst = std::max(worst, code.profile[i].z);
    CHECK(worst < 0.5);
}
