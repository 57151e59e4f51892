#pragma once

#include <string>
#include <vector>

#include "wpb/iteration.hpp"
#include "wpb/propositions.hpp"
#include "wpb/random_gen.hpp"
#include "wpb/serialize.hpp"

namespace wpb {

inline constexpr std::size_t kFuzzCarrierCap = 8;

struct FuzzCounterexample {
    std::string property;
    Json detail;  // serialized space (and map/start when relevant)
};

struct FuzzOutcome {
    std::size_t spaces = 0;
    std::size_t maps = 0;
    std::size_t iterations = 0;
    std::size_t proposition_suites = 0;
    std::vector<Json> flagged_induced;  // spaces whose induced coefficient exceeds 2s
    std::vector<FuzzCounterexample> counterexamples;

    bool clean() const { return counterexamples.empty(); }
};

namespace detail {

// Large carriers make the exhaustive closed-subset triple sweep explode;
// keep the suites exhaustive over a deterministic prefix of the subsets.
inline constexpr std::size_t kFuzzSubsetCap = 63;

}  // namespace detail

// Seeded falsification sweep: random repaired spaces, their property suites,
// and iteration of rejection-sampled conforming maps from every start point.
// Everything checked here is a proved statement, so any counterexample is
// either an implementation bug or a genuine refutation; both must surface.
inline FuzzOutcome fuzz_run(std::uint64_t seed, std::size_t count, std::size_t carrier_max) {
    using S = Rational;
    if (count < 1) throw ShapeError("fuzz count must be at least 1");
    if (carrier_max < 1 || carrier_max > kFuzzCarrierCap) {
        throw CarrierTooLarge(carrier_max, kFuzzCarrierCap);
    }

    Rng rng(seed);
    FuzzOutcome out;

    for (std::size_t round = 0; round < count; ++round) {
        const Space<S> space = random_space<S>(rng, carrier_max);
        ++out.spaces;
        auto fail = [&](const std::string& property, Json extra = Json::object()) {
            Json detail{{"space", serialize_space(space)}};
            for (auto& [k, v] : extra.items()) detail[k] = v;
            out.counterexamples.push_back({property, std::move(detail)});
        };

        // construction and verification must agree
        if (!check_axioms(space.table(), space.coefficient()).pass()) {
            fail("axiom-report disagrees with accepted space");
        }

        const auto induced = induced_b_metric(space);
        for (std::size_t i = 0; i < space.size(); ++i) {
            if (!induced.table.at(i, i).is_zero()) fail("induced metric has nonzero diagonal");
            for (std::size_t j = i + 1; j < space.size(); ++j) {
                if (!(induced.table.at(i, j) == induced.table.at(j, i))) {
                    fail("induced metric is asymmetric");
                }
                if (induced.table.at(i, j).is_zero() || induced.table.at(i, j).is_negative()) {
                    fail("induced metric not positive off the diagonal");
                }
            }
        }
        if (induced.exceeds_two_s) {
            out.flagged_induced.push_back(serialize_space(space));
        }

        auto subsets = enumerate_closed_subsets(space);
        if (subsets.size() > detail::kFuzzSubsetCap) subsets.resize(detail::kFuzzSubsetCap);
        for (const auto& rep : verify_delta_properties(space, subsets)) {
            if (!rep.pass) fail(std::string("proposition ") + prop_name(rep.tag));
        }
        for (const auto& rep : verify_hplus_properties(space, subsets)) {
            if (!rep.pass) fail(std::string("proposition ") + prop_name(rep.tag));
        }
        ++out.proposition_suites;

        auto map = random_conforming_map(rng, space);
        if (!map) continue;
        ++out.maps;
        const Json map_json = serialize_map(*map);
        auto fail_map = [&](const std::string& property, Json extra = Json::object()) {
            extra["map"] = map_json["map"];
            fail(property, std::move(extra));
        };

        const auto c1 = check_condition_1(*map);
        for (int i = 0; i <= 20; i += 10) {
            const S eps = pow_n(S::parse("1/2"), static_cast<std::size_t>(i));
            if (!check_condition_2_epsilon(*map, eps)) {
                fail_map("epsilon-quantified selection disagrees with collapsed form",
                         Json{{"epsilon", eps.to_string()}});
            }
        }

        const auto fixed = find_all_fixed_points(*map);
        for (std::size_t start = 0; start < space.size(); ++start) {
            const auto trace = iterate_fixed_point(*map, start, {});
            ++out.iterations;
            Json where{{"start", space.label(start)}, {"k", trace.k.to_string()}};
            if (!trace.fixed_point_reached()) {
                fail_map("conforming map did not reach a fixed point", where);
                continue;
            }
            if (!trace.all_step_bounds_hold() || !trace.all_rate_bounds_hold()) {
                fail_map("per-step contraction bound violated", where);
            }
            if (!verify_rate_bounds(trace, trace.k).ok) {
                fail_map("geometric rate bound violated", where);
            }
            bool terminal_is_fixed = false;
            for (std::size_t f : fixed) terminal_is_fixed |= f == trace.terminal();
            if (!terminal_is_fixed) {
                fail_map("terminal point is not a fixed point", where);
            }
        }
        if (fixed.empty()) {
            fail_map("conforming map has no fixed point at all");
        }
    }
    return out;
}

}  // namespace wpb
