#include "sppolar/dist_algebra.hpp"
#include "sppolar/experiments.hpp"
#include "sppolar/relations.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace sppolar;

namespace {

JointDist bec_joint(double eps) { return joint_from(InputDist::uniform(), make_bec(eps)); }
JointDist bsc_joint(double p) { return joint_from(InputDist::uniform(), make_bsc(p)); }

void check_same_figures(const JointDist& a, const JointDist& b, double tol)
{
    const Metrics x = metrics(a);
    const Metrics y = metrics(b);
    CHECK(std::abs(x.z - y.z) <= tol);
    CHECK(std::abs(x.k - y.k) <= tol);
    CHECK(std::abs(x.h - y.h) <= tol);
}

}  // namespace

TEST_CASE("special distributions")
{
    const Metrics s = metrics(special_superb());
    CHECK(s.z == 0.0);
    CHECK(s.k == doctest::Approx(1.0));
    CHECK(s.h == 0.0);
    const Metrics p = metrics(special_pitiful());
    CHECK(p.z == doctest::Approx(1.0));
    CHECK(p.k == 0.0);
    CHECK(p.h == doctest::Approx(1.0));
    CHECK(detect_tag(special_superb()) == DistTag::superb);
    CHECK(detect_tag(special_pitiful()) == DistTag::pitiful);
    CHECK(detect_tag(bsc_joint(0.11)) == DistTag::generic);
}

TEST_CASE("composite output indices")
{
    const MinusIndex mi{3, 4};
    CHECK(mi.size() == 12);
    CHECK(mi(2, 3) == 11);
    CHECK(mi(1, 0) == 4);
    const PlusIndex pi{3, 4};
    CHECK(pi.size() == 24);
    CHECK(pi(1, 0, 0) == 12);
    CHECK(pi(1, 2, 3) == 23);
    CHECK(pi(0, 2, 1) == 9);
}

TEST_CASE("erasure channel combinations stay erasure channels")
{
    const JointDist a = bec_joint(0.5);
    const JointDist minus = op_minus(a, a);
    const JointDist plus = op_plus(a, a);
    CHECK(minus.size() == 9);
    CHECK(plus.size() == 18);
    CHECK(minus.total_mass() == doctest::Approx(1.0));
    CHECK(plus.total_mass() == doctest::Approx(1.0));
    CHECK(bhattacharyya(minus) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(bhattacharyya(plus) == doctest::Approx(0.25).epsilon(1e-14));
    check_same_figures(canonicalize(minus), bec_joint(0.75), 1e-12);
    check_same_figures(canonicalize(plus), bec_joint(0.25), 1e-12);
    CHECK(canonicalize(minus).size() == 3);
}

TEST_CASE("operation masses follow the defining sums")
{
    const JointDist a({0.1, 0.3, 0.05}, {0.2, 0.15, 0.2});
    const JointDist b({0.4, 0.2}, {0.25, 0.15});
    const JointDist minus = op_minus(a, b);
    const JointDist plus = op_plus(a, b);
    const MinusIndex mi{a.size(), b.size()};
    const PlusIndex pi{a.size(), b.size()};
    for (std::size_t y0 = 0; y0 < a.size(); ++y0) {
        for (std::size_t y1 = 0; y1 < b.size(); ++y1) {
            for (int u0 = 0; u0 < 2; ++u0) {
                double m = 0.0;
                for (int x1 = 0; x1 < 2; ++x1)
                    m += a.mass(u0 ^ x1, y0) * b.mass(x1, y1);
                CHECK(minus.mass(u0, mi(y0, y1)) == doctest::Approx(m));
                for (int u1 = 0; u1 < 2; ++u1)
                    CHECK(plus.mass(u1, pi(u0, y0, y1)) ==
                          doctest::Approx(a.mass(u0 ^ u1, y0) * b.mass(u1, y1)));
            }
        }
    }
}

TEST_CASE("combining with S adjoins a constant output")
{
    const JointDist a = bsc_joint(0.11);
    const JointDist m = op_minus(a, special_superb());
    CHECK(m.size() == a.size());
    for (std::size_t y = 0; y < a.size(); ++y) {
        CHECK(m.mass(0, y) == doctest::Approx(a.mass(0, y)));
        CHECK(m.mass(1, y) == doctest::Approx(a.mass(1, y)));
    }
    CHECK(canonicalize(m).size() == canonicalize(a).size());
    CHECK(bhattacharyya(op_minus(special_pitiful(), a)) == doctest::Approx(1.0));
    CHECK(detect_tag(op_plus(a, special_superb())) == DistTag::superb);
    check_same_figures(op_plus(a, special_pitiful()), a, 1e-12);
}

TEST_CASE("canonicalize")
{
    // outputs 0 and 2 share the posterior, output 3 is empty
    const JointDist a({0.1, 0.3, 0.2, 0.0}, {0.05, 0.05, 0.1, 0.2});
    const JointDist c = canonicalize(a);
    CHECK(c.size() == 3);
    check_same_figures(a, c, 1e-12);
    CHECK(canonicalize(c) == c);
    for (std::size_t y = 1; y < c.size(); ++y)
        CHECK(c.mass(0, y - 1) / c.output_mass(y - 1) <= c.mass(0, y) / c.output_mass(y));

    // within the relative tolerance, still merged; outside it, kept apart
    const JointDist near({0.25, 0.25 * (1 + 1e-12)}, {0.25, 0.25});
    CHECK(canonicalize(near).size() == 1);
    const JointDist far({0.25, 0.25 * (1 + 1e-6)}, {0.25, 0.25 - 0.25e-6});
    CHECK(canonicalize(far).size() == 2);
}

TEST_CASE("tags need exact equivalence")
{
    CHECK(detect_tag(JointDist({0.5, 0.0}, {0.0, 0.5})) == DistTag::generic);
    CHECK(detect_tag(JointDist({0.3, 0.7}, {0.0, 0.0})) == DistTag::superb);
    CHECK(detect_tag(JointDist({0.25, 0.25}, {0.25, 0.25})) == DistTag::pitiful);
    CHECK(detect_tag(JointDist({0.5 + 1e-6}, {0.5 - 1e-6})) == DistTag::generic);
    CHECK(detect_tag(JointDist({1.0 - 1e-9}, {1e-9})) == DistTag::generic);
}

TEST_CASE("shortcut table")
{
    constexpr auto A = DistTag::generic, S = DistTag::superb, P = DistTag::pitiful;
    CHECK(table_lookup(CombineOp::minus, S, A) == TableResult::right_operand);
    CHECK(table_lookup(CombineOp::plus, P, S) == TableResult::superb);
    CHECK(table_lookup(CombineOp::minus, A, P) == TableResult::pitiful);
    CHECK(table_lookup(CombineOp::plus, A, P) == TableResult::left_operand);
    CHECK(table_lookup(CombineOp::plus, A, S) == TableResult::superb);
    CHECK(table_lookup(CombineOp::minus, A, S) == TableResult::left_operand);
    CHECK(table_lookup(CombineOp::minus, A, A) == TableResult::compute);
    CHECK(table_lookup(CombineOp::plus, A, A) == TableResult::compute);
}

TEST_CASE("every shortcut agrees with the explicit combination")
{
    TrialStream rng(7, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const JointDist a = random_joint(rng, 4);
        const JointDist b = random_joint(rng, 4);
        for (const TableCell& cell : special_table_cells()) {
            const auto [x, y] = table_operands(cell.row, cell.col, a, b);
            const TaggedDist tx{x, detect_tag(x)};
            const TaggedDist ty{y, detect_tag(y)};
            const TaggedDist fast = table_simplify(cell.op, tx, ty);
            const JointDist slow = combine(cell.op, x, y);
            INFO(to_string(cell));
            // equivalent, not equal: S plus B is S only after an input flip
            check_same_figures(fast.dist, slow, 1e-9);
        }
    }
}

TEST_CASE("table_simplify without special operands combines and canonicalizes")
{
    const TaggedDist a{bec_joint(0.5), DistTag::generic};
    const TaggedDist r = table_simplify(CombineOp::minus, a, a);
    CHECK(r.tag == DistTag::generic);
    CHECK(r.dist.size() == 3);
    CHECK(bhattacharyya(r.dist) == doctest::Approx(0.75));
}

TEST_CASE("degrade_merge")
{
    const JointDist a = bsc_joint(0.11);
    SUBCASE("zero budget is rejected") { CHECK_THROWS_AS(degrade_merge(a, 0), std::invalid_argument); }
    SUBCASE("budget at least the alphabet is the identity")
    {
        const MergeResult r = degrade_merge(a, 2);
        CHECK(r.dist == a);
        CHECK(degrade_merge(a, kExactAlphabet).dist == a);
    }
    SUBCASE("merging the two BSC outputs gives P")
    {
        const MergeResult r = degrade_merge(a, 1);
        CHECK(r.dist.size() == 1);
        CHECK(detect_tag(r.dist) == DistTag::pitiful);
        CHECK(bhattacharyya(r.dist) == doctest::Approx(1.0));
    }
}

TEST_CASE("degrade_merge witnesses and orderings on random inputs")
{
    TrialStream rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        JointDist a = random_joint(rng, 6);
        a = op_plus(a, random_joint(rng, 6));
        for (std::size_t mu : {1, 2, 3, 5, 8}) {
            const MergeResult r = degrade_merge(a, mu);
            CHECK(r.dist.size() <= mu);
            CHECK(r.dist.total_mass() == doctest::Approx(1.0));
            REQUIRE(r.map.size() == a.size());
            const auto q = StochasticMatrix::deterministic(r.dist.size(), r.map);
            CHECK(verify_degradation(r.dist, a, q));
            CHECK(figures_ordered(r.dist, a, 1e-12));
        }
    }
}

TEST_CASE("names")
{
    CHECK(to_string(DistTag::superb) == "S");
    CHECK(to_string(DistTag::pitiful) == "P");
    CHECK(to_string(CombineOp::minus) == "minus");
    CHECK(to_string(CombineOp::plus) == "plus");
}
