#include <catch2/catch_amalgamated.hpp>

#include "wpb/builtins.hpp"
#include "wpb/iteration.hpp"
#include "wpb/random_gen.hpp"

using wpb::IterationOptions;
using wpb::Rational;
using wpb::Space;
using wpb::SubsetMask;
using wpb::Termination;

namespace {

const Space<Rational>& worked_example() {
    static const Space<Rational> space = wpb::builtin_worked_example<Rational>({});
    return space;
}

wpb::MultiMap<Rational> worked_example_map() {
    const auto& sp = worked_example();
    return wpb::validate_map(sp, {SubsetMask<Rational>(sp, 0b001), SubsetMask<Rational>(sp, 0b011),
                                  SubsetMask<Rational>(sp, 0b101)});
}

// T(0)={0}, T(1/2)={0}, T(1)={0,1/2}: conforms to shrinkage (k >= 1/2) but
// not to approximate selection, so iterating it needs the conformance gate
// off; its orbit from 1 is still instructive.
wpb::MultiMap<Rational> chasing_map() {
    const auto& sp = worked_example();
    return wpb::validate_map(sp, {SubsetMask<Rational>(sp, 0b001), SubsetMask<Rational>(sp, 0b001),
                                  SubsetMask<Rational>(sp, 0b011)});
}

}  // namespace

TEST_CASE("every worked-example start point is already fixed") {
    const auto map = worked_example_map();
    for (std::size_t start : {0, 1, 2}) {
        const auto trace = wpb::iterate_fixed_point(map, start, {});
        CHECK(trace.status == Termination::FixedPoint);
        CHECK(trace.points == std::vector<std::size_t>{start});
        CHECK(trace.steps.empty());
        CHECK(wpb::verify_rate_bounds(trace, trace.k).ok);  // vacuous
    }
}

TEST_CASE("chasing map walks 1 -> 1/2 -> 0 under the greedy successor rule") {
    const auto map = chasing_map();
    IterationOptions<Rational> opts;
    opts.k = Rational(3, 4);
    opts.require_conforming = false;
    const auto trace = wpb::iterate_fixed_point(map, 2, opts);

    CHECK(trace.status == Termination::FixedPoint);
    CHECK(trace.points == std::vector<std::size_t>{2, 1, 0});
    REQUIRE(trace.steps.size() == 2);
    // sigma(1,1/2) = 5/8 beats sigma(1,0) = 1, then sigma(1/2,0) = 3/8
    CHECK(trace.steps[0].sigma == Rational(5, 8));
    CHECK(trace.steps[1].sigma == Rational(3, 8));

    // rate bound sigma_1 <= sqrt(3/4) sigma_0 holds; the selection-based
    // step bound does not (this map violates approximate selection there)
    REQUIRE(trace.steps[1].rate_bound_ok.has_value());
    CHECK(*trace.steps[1].rate_bound_ok);
    REQUIRE(trace.steps[1].step_bound_ok.has_value());
    CHECK_FALSE(*trace.steps[1].step_bound_ok);
    REQUIRE(trace.steps[1].hplus_punctured.has_value());
    CHECK(*trace.steps[1].hplus_punctured == Rational(3, 16));

    CHECK(wpb::verify_rate_bounds(trace, Rational(3, 4)).ok);

    const auto fixed = wpb::find_all_fixed_points(map);
    CHECK(std::find(fixed.begin(), fixed.end(), trace.terminal()) != fixed.end());
}

TEST_CASE("conformance gate refuses the chasing map") {
    const auto map = chasing_map();
    IterationOptions<Rational> opts;
    opts.k = Rational(3, 4);
    CHECK_THROWS_AS(wpb::iterate_fixed_point(map, 2, opts), wpb::PreconditionFailed);
}

TEST_CASE("k outside the open unit interval is rejected") {
    const auto map = worked_example_map();
    for (const char* bad : {"0", "1", "5/4"}) {
        IterationOptions<Rational> opts;
        opts.k = Rational::parse(bad);
        CHECK_THROWS_AS(wpb::iterate_fixed_point(map, 0, opts), wpb::CoefficientError);
    }
}

TEST_CASE("k below the measured minimum is refused") {
    const auto map = chasing_map();  // minimal_k = 1/2
    IterationOptions<Rational> opts;
    opts.k = Rational(1, 4);
    CHECK_THROWS_AS(wpb::iterate_fixed_point(map, 0, opts), wpb::PreconditionFailed);
}

TEST_CASE("default k comes from the measured minimum") {
    const auto map = worked_example_map();
    const auto trace = wpb::iterate_fixed_point(map, 0, {});
    CHECK(trace.k == Rational(1, 2));
}

TEST_CASE("cycle detection reports non-convergence honestly") {
    // a -> {b}, b -> {a}: no fixed point, pure two-cycle; the conditions
    // fail, so force the run and expect cycle status
    wpb::DistanceTable<Rational> t(2);
    t.at(0, 0) = Rational(1, 2);
    t.at(1, 1) = Rational(1, 3);
    t.at(0, 1) = Rational(2);
    t.at(1, 0) = Rational(2);
    const auto sp = Space<Rational>::build({"a", "b"}, t, Rational(1));
    const auto map = wpb::validate_map(sp, {SubsetMask<Rational>(sp, 0b10),
                                            SubsetMask<Rational>(sp, 0b01)});
    IterationOptions<Rational> opts;
    opts.k = Rational(1, 2);
    opts.require_conforming = false;
    const auto trace = wpb::iterate_fixed_point(map, 0, opts);
    CHECK(trace.status == Termination::Cycle);
    CHECK(trace.points == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("iteration trace doubles as a convergent sequence trace") {
    const auto map = chasing_map();
    IterationOptions<Rational> opts;
    opts.k = Rational(3, 4);
    opts.require_conforming = false;
    const auto trace = wpb::iterate_fixed_point(map, 2, opts);
    const auto seq = trace.as_sequence();
    // terminal point 0 is fixed; extending by the constant tail converges
    auto extended = seq;
    extended.points.push_back(trace.terminal());
    CHECK(wpb::converges_to(extended, trace.terminal()).converges);
}

TEST_CASE("seeded conforming maps always iterate to a fixed point") {
    wpb::Rng rng(41);
    std::size_t nontrivial_traces = 0;
    for (int round = 0; round < 25; ++round) {
        const auto pair = wpb::random_conforming_pair<Rational>(rng, 5);
        const auto map = pair.map();
        const auto fixed = wpb::find_all_fixed_points(map);
        for (std::size_t start = 0; start < pair.space.size(); ++start) {
            const auto trace = wpb::iterate_fixed_point(map, start, {});
            REQUIRE(trace.status == Termination::FixedPoint);
            CHECK(trace.all_step_bounds_hold());
            CHECK(trace.all_rate_bounds_hold());
            CHECK(wpb::verify_rate_bounds(trace, trace.k).ok);
            CHECK(std::find(fixed.begin(), fixed.end(), trace.terminal()) != fixed.end());
            if (trace.steps.size() >= 1) ++nontrivial_traces;
        }
    }
    // the sampler must produce genuine movement, not only fixed starts
    CHECK(nontrivial_traces > 0);
}
