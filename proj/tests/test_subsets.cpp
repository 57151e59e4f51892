#include <catch2/catch_amalgamated.hpp>

#include "wpb/builtins.hpp"
#include "wpb/propositions.hpp"
#include "wpb/random_gen.hpp"
#include "wpb/subsets.hpp"

using wpb::Rational;
using wpb::Space;
using wpb::SubsetMask;

namespace {

const Space<Rational>& worked_example() {
    static const Space<Rational> space = wpb::builtin_worked_example<Rational>({});
    return space;
}

// Classical excess oracle for metric tables (zero diagonal): the usual
// sup-inf Hausdorff machinery coded directly, independent of delta_directed.
Rational classical_excess(const Space<Rational>& sp, const std::vector<std::size_t>& u,
                          const std::vector<std::size_t>& v) {
    Rational worst(0);
    for (std::size_t a : u) {
        std::optional<Rational> nearest;
        for (std::size_t b : v) {
            const Rational d = sp.sigma(a, b);
            if (!nearest || d < *nearest) nearest = d;
        }
        if (worst < *nearest) worst = *nearest;
    }
    return worst;
}

}  // namespace

TEST_CASE("point-set distances in the worked example") {
    const auto& sp = worked_example();
    const SubsetMask<Rational> set0h(sp, 0b011);  // {0, 1/2}
    CHECK(wpb::point_set_distance(0, set0h).is_zero());
    CHECK(wpb::point_set_distance(2, set0h) == Rational(5, 8));
    const SubsetMask<Rational> empty(sp, 0);
    CHECK(wpb::point_set_distance(1, empty).is_zero());
}

TEST_CASE("directed excess values") {
    const auto& sp = worked_example();
    const SubsetMask<Rational> set0(sp, 0b001), set0h(sp, 0b011), set01(sp, 0b101), empty(sp, 0);
    CHECK(wpb::delta_directed(set0h, set0) == Rational(3, 8));
    CHECK(wpb::delta_directed(set01, set01) == Rational(1, 2));
    CHECK(wpb::delta_directed(empty, set0h).is_zero());
    CHECK(wpb::delta_directed(set0h, empty).is_zero());
}

TEST_CASE("hplus values including the empty-set conventions") {
    const auto& sp = worked_example();
    const SubsetMask<Rational> set0(sp, 0b001), set0h(sp, 0b011), set01(sp, 0b101), empty(sp, 0);
    CHECK(wpb::hplus(set0, set0h) == Rational(3, 16));
    CHECK(wpb::hplus(set0h, set0h) == Rational(1, 4));
    CHECK(wpb::hplus(empty, empty).is_zero());
    CHECK(wpb::hplus(empty, set0).is_zero());
    CHECK(wpb::hplus(set0, set01) == Rational(1, 2));
    CHECK(wpb::hplus(set01, set01) == Rational(1, 2));
}

TEST_CASE("closure membership matches direct evaluation") {
    const auto& sp = worked_example();
    const SubsetMask<Rational> set0(sp, 0b001);
    CHECK(wpb::closure_membership(0, set0));
    // sigma(1/2, {0}) = 3/8 while sigma(1/2,1/2) = 1/4
    CHECK_FALSE(wpb::closure_membership(1, set0));
    CHECK_THROWS_AS(wpb::closure_membership(0, SubsetMask<Rational>(sp, 0)), wpb::EmptySet);
}

TEST_CASE("members always sit in the closure of their own set") {
    wpb::Rng rng(21);
    for (int i = 0; i < 40; ++i) {
        const auto sp = wpb::random_space<Rational>(rng, 6);
        const std::uint32_t full = (std::uint32_t{1} << sp.size()) - 1;
        const std::uint32_t bits = 1 + static_cast<std::uint32_t>(rng.below(full));
        const SubsetMask<Rational> m(sp, bits);
        for (std::size_t p : m.indices()) CHECK(wpb::closure_membership(p, m));
    }
}

TEST_CASE("closedness verdicts in the worked example") {
    const auto& sp = worked_example();
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b001)));  // {0}
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b101)));  // {0,1}
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b011)));  // {0,1/2}
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b111)));  // full carrier
    // {1/2}: sigma(0,{1/2}) = 3/8 vs 0; sigma(1,{1/2}) = 5/8 vs 1/2
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b010)));
}

TEST_CASE("a set failing closedness exists once equality cases appear") {
    // two points, self-distances 0 and 1, cross distance 1: the second point
    // sits in the closure of the first one's singleton
    wpb::DistanceTable<Rational> t(2);
    t.at(0, 0) = Rational(0);
    t.at(1, 1) = Rational(1);
    t.at(0, 1) = Rational(1);
    t.at(1, 0) = Rational(1);
    const auto sp = Space<Rational>::build({"a", "b"}, t, Rational(1));
    CHECK(wpb::closure_membership(1, SubsetMask<Rational>(sp, 0b01)));
    CHECK_FALSE(wpb::is_closed(SubsetMask<Rational>(sp, 0b01)));  // {a}
    CHECK(wpb::is_closed(SubsetMask<Rational>(sp, 0b10)));        // {b}
}

TEST_CASE("closed subset enumeration") {
    const auto& sp = worked_example();
    const auto closed = wpb::enumerate_closed_subsets(sp);
    CHECK(closed.size() == 7);  // every nonempty subset of this space is closed
    for (std::size_t i = 1; i < closed.size(); ++i) CHECK(closed[i - 1].bits < closed[i].bits);

    wpb::DistanceTable<Rational> t(1);
    const auto single = Space<Rational>::build({"p"}, t, Rational(1));
    CHECK(wpb::enumerate_closed_subsets(single).size() == 1);

    CHECK_THROWS_AS(wpb::enumerate_closed_subsets(sp, 2), wpb::CarrierTooLarge);
}

TEST_CASE("monotonicity of point-set distance under inclusion") {
    wpb::Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        const auto sp = wpb::random_space<Rational>(rng, 6);
        const std::uint32_t full = (std::uint32_t{1} << sp.size()) - 1;
        const std::uint32_t small = 1 + static_cast<std::uint32_t>(rng.below(full));
        const std::uint32_t extra = static_cast<std::uint32_t>(rng.below(full + 1));
        const SubsetMask<Rational> u(sp, small), w(sp, small | extra);
        for (std::size_t x = 0; x < sp.size(); ++x) {
            CHECK(wpb::point_set_distance(x, w) <= wpb::point_set_distance(x, u));
        }
    }
}

TEST_CASE("delta and hplus propositions hold on the worked example") {
    const auto& sp = worked_example();
    const auto subsets = wpb::enumerate_closed_subsets(sp);
    for (const auto& rep : wpb::verify_delta_properties(sp, subsets)) {
        INFO(wpb::prop_name(rep.tag));
        CHECK(rep.pass);
    }
    for (const auto& rep : wpb::verify_hplus_properties(sp, subsets)) {
        INFO(wpb::prop_name(rep.tag));
        CHECK(rep.pass);
    }
}

TEST_CASE("propositions survive widening to all nonempty subsets") {
    // closedness only matters for infinite carriers; on finite ones the
    // sweeps should find nothing even without the closedness filter
    const auto& sp = worked_example();
    const auto all = wpb::enumerate_nonempty_subsets(sp);
    CHECK(all.size() == 7);
    for (const auto& rep : wpb::verify_delta_properties(sp, all)) CHECK(rep.pass);
    for (const auto& rep : wpb::verify_hplus_properties(sp, all)) CHECK(rep.pass);
}

TEST_CASE("propositions hold on the interval space") {
    wpb::BuiltinParams<Rational> params;
    params.intervals = {{Rational(0), Rational(1)}, {Rational(0), Rational(2)},
                        {Rational(1), Rational(3)}};
    const auto sp = wpb::builtin_intervals(params);
    const auto subsets = wpb::enumerate_closed_subsets(sp);
    for (const auto& rep : wpb::verify_delta_properties(sp, subsets)) {
        INFO(wpb::prop_name(rep.tag));
        CHECK(rep.pass);
    }
    for (const auto& rep : wpb::verify_hplus_properties(sp, subsets)) {
        INFO(wpb::prop_name(rep.tag));
        CHECK(rep.pass);
    }
}

TEST_CASE("hplus agrees with the classical excess mean on metric tables") {
    wpb::Rng rng(29);
    for (int round = 0; round < 30; ++round) {
        // a genuine metric: d(i,j) = |v_i - v_j| for distinct line positions
        const std::size_t n = rng.between(2, 5);
        std::vector<Rational> pos;
        for (std::size_t i = 0; i < n; ++i) {
            pos.push_back(Rational(static_cast<long long>(i * 7 + rng.below(5)), 3));
        }
        wpb::DistanceTable<Rational> t(n);
        bool degenerate = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                t.at(i, j) = pos[i] < pos[j] ? pos[j] - pos[i] : pos[i] - pos[j];
                if (i != j && t.at(i, j).is_zero()) degenerate = true;
            }
        }
        if (degenerate) continue;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
        const auto sp = Space<Rational>::build(labels, t, Rational(1));

        const std::uint32_t full = (std::uint32_t{1} << n) - 1;
        for (int pick = 0; pick < 10; ++pick) {
            const std::uint32_t ub = 1 + static_cast<std::uint32_t>(rng.below(full));
            const std::uint32_t vb = 1 + static_cast<std::uint32_t>(rng.below(full));
            const SubsetMask<Rational> u(sp, ub), v(sp, vb);
            const Rational expected =
                wpb::half(classical_excess(sp, u.indices(), v.indices()) +
                          classical_excess(sp, v.indices(), u.indices()));
            CHECK(wpb::hplus(u, v) == expected);
        }
    }
}

TEST_CASE("random spaces never produce proposition counterexamples") {
    wpb::Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const auto sp = wpb::random_space<Rational>(rng, 5);
        const auto subsets = wpb::enumerate_closed_subsets(sp);
        for (const auto& rep : wpb::verify_delta_properties(sp, subsets)) CHECK(rep.pass);
        for (const auto& rep : wpb::verify_hplus_properties(sp, subsets)) CHECK(rep.pass);
    }
}
