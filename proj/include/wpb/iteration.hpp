#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "wpb/contraction.hpp"

namespace wpb {

inline constexpr std::size_t kDefaultMaxIterations = 10000;

enum class Termination { FixedPoint, Cycle, MaxIter };

inline const char* termination_name(Termination t) {
    switch (t) {
        case Termination::FixedPoint: return "fixed-point";
        case Termination::Cycle: return "cycle";
        case Termination::MaxIter: return "max-iter";
    }
    return "?";
}

// Step n: the move from u_n to u_{n+1}. The H+ term and the bounds need a
// predecessor, so they are absent on step 0.
template <ScalarNumber S>
struct IterationStep {
    std::size_t from, to;
    S sigma;                            // sigma(u_n, u_{n+1})
    std::optional<S> hplus_punctured;   // H+(Tu_{n-1}\{u_{n-1}}, Tu_n\{u_n})
    std::optional<double> epsilon;      // (1/sqrt(k) - 1) * H+, as displayed
    std::optional<bool> step_bound_ok;  // sigma <= (1/sqrt k) * H+ term
    std::optional<bool> rate_bound_ok;  // sigma <= sqrt(k) * previous sigma
};

template <ScalarNumber S>
struct IterationTrace {
    const Space<S>* space = nullptr;
    std::vector<std::size_t> points;  // u_0 ... u_N
    std::vector<IterationStep<S>> steps;
    Termination status = Termination::MaxIter;
    S k;

    bool fixed_point_reached() const { return status == Termination::FixedPoint; }
    std::size_t terminal() const { return points.back(); }

    bool all_step_bounds_hold() const {
        for (const auto& st : steps) {
            if (st.step_bound_ok && !*st.step_bound_ok) return false;
        }
        return true;
    }
    bool all_rate_bounds_hold() const {
        for (const auto& st : steps) {
            if (st.rate_bound_ok && !*st.rate_bound_ok) return false;
        }
        return true;
    }

    SequenceTrace<S> as_sequence() const { return {space, points}; }
};

template <ScalarNumber S>
struct IterationOptions {
    std::optional<S> k;  // defaults to the midpoint of (minimal_k, 1)
    std::size_t max_iter = kDefaultMaxIterations;
    // The constructive theorem assumes a conforming map; tests of
    // non-conforming maps may disable the gate and read the recorded
    // bound flags instead.
    bool require_conforming = true;
};

// The constructive iteration: stop as soon as u_n in Tu_n, otherwise move to
// the sigma-nearest successor in Tu_n (lowest index on ties). The greedy
// choice satisfies the approximate-selection bound with every positive
// epsilon at once, so each recorded step is checked against the exact
// eps-free forms of the proof's step and rate inequalities.
template <ScalarNumber S>
IterationTrace<S> iterate_fixed_point(const MultiMap<S>& map, std::size_t u0,
                                      const IterationOptions<S>& opts = {}) {
    const Space<S>& sp = *map.space;
    if (u0 >= sp.size()) throw ShapeError("start point out of range");

    const auto c1 = check_condition_1(map);
    S k = S::from_int(0);
    if (opts.k) {
        k = *opts.k;
        if (!(S::from_int(0) < k) || !(k < S::from_int(1))) {
            throw CoefficientError("contraction constant k = " + k.to_string() +
                                   " is outside (0,1)");
        }
    } else {
        auto dk = default_contraction_k(c1);
        if (!dk) {
            throw PreconditionFailed("no default k exists: the shrinkage condition fails");
        }
        k = *dk;
    }
    if (opts.require_conforming) {
        if (!c1.holds_for(k)) {
            throw PreconditionFailed("map is not an H+-contraction for k = " + k.to_string());
        }
        if (!check_condition_2(map).pass) {
            throw PreconditionFailed("approximate-selection condition fails");
        }
    }

    IterationTrace<S> trace{&sp, {u0}, {}, Termination::MaxIter, k};
    const double kd = k.to_double();
    std::vector<bool> visited(sp.size(), false);
    visited[u0] = true;

    std::size_t current = u0;
    for (std::size_t n = 0; n < opts.max_iter; ++n) {
        if (map.image(current).contains(current)) {
            trace.status = Termination::FixedPoint;
            return trace;
        }
        const SubsetMask<S>& image = map.image(current);
        std::optional<S> best;
        std::size_t next = 0;
        for (std::size_t z = 0; z < sp.size(); ++z) {
            if (!image.contains(z)) continue;
            const S& d = sp.sigma(current, z);
            if (!best || d < *best) {
                best = d;
                next = z;
            }
        }

        IterationStep<S> step{current, next, *best, std::nullopt, std::nullopt,
                              std::nullopt, std::nullopt};
        if (!trace.steps.empty()) {
            const std::size_t prev = trace.steps.back().from;
            const S hterm = hplus(map.image(prev).without(prev), image.without(current));
            step.hplus_punctured = hterm;
            step.epsilon = (1.0 / std::sqrt(kd) - 1.0) * hterm.to_double();
            // sigma(u_n, u_{n+1}) <= (1/sqrt k) H+  <=>  k * sigma^2 <= H+^2
            step.step_bound_ok = k * (*best * *best) <= hterm * hterm;
            step.rate_bound_ok = le_sqrt_scaled(*best, k, trace.steps.back().sigma);
        }
        trace.steps.push_back(std::move(step));
        trace.points.push_back(next);
        current = next;

        if (visited[current]) {
            // the successor is a function of the current point alone, and a
            // previously visited point was already seen to be non-fixed, so
            // a revisit loops forever
            trace.status = Termination::Cycle;
            return trace;
        }
        visited[current] = true;
    }
    trace.status = map.image(current).contains(current) ? Termination::FixedPoint
                                                        : Termination::MaxIter;
    return trace;
}

template <ScalarNumber S>
struct RateBoundReport {
    bool ok = true;
    std::optional<std::size_t> first_violation;  // step index, or pair start for the 2x relation
};

// Post-hoc verification over a finished trace: the geometric bound
// sigma(u_n, u_{n+1}) <= sqrt(k)^n * sigma(u_0, u_1) at every step, and
// sigma^s(u_i, u_j) <= 2 sigma(u_i, u_j) across the trace.
template <ScalarNumber S>
RateBoundReport<S> verify_rate_bounds(const IterationTrace<S>& trace, const S& k) {
    RateBoundReport<S> rep;
    if (trace.steps.empty()) return rep;  // vacuously true
    const S& first = trace.steps.front().sigma;
    for (std::size_t n = 0; n < trace.steps.size(); ++n) {
        if (!le_sqrt_pow_scaled(trace.steps[n].sigma, k, n, first)) {
            rep.ok = false;
            rep.first_violation = n;
            return rep;
        }
    }
    const auto& pts = trace.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const S lhs = trace.space->induced(pts[i], pts[j]);
            const S rhs = S::from_int(2) * trace.space->sigma(pts[i], pts[j]);
            if (!(lhs <= rhs)) {
                rep.ok = false;
                rep.first_violation = i;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace wpb
