#pragma once

#include <optional>
#include <vector>

#include "wpb/subsets.hpp"

namespace wpb {

// A total assignment point -> nonempty closed subset.
template <ScalarNumber S>
struct MultiMap {
    const Space<S>* space = nullptr;
    std::vector<SubsetMask<S>> images;

    const SubsetMask<S>& image(std::size_t x) const { return images[x]; }
};

template <ScalarNumber S>
MultiMap<S> validate_map(const Space<S>& space, const std::vector<SubsetMask<S>>& images) {
    if (images.size() != space.size()) {
        throw ShapeError("map must assign an image to every carrier point");
    }
    for (std::size_t x = 0; x < images.size(); ++x) {
        if (images[x].space != &space) {
            throw ShapeError("map image belongs to a different space");
        }
        if (images[x].empty()) throw EmptyImage(x, space.label(x));
        for (std::size_t w = 0; w < space.size(); ++w) {
            if (closure_membership(w, images[x]) != images[x].contains(w)) {
                throw NotClosed(x, space.label(x), w, space.label(w));
            }
        }
    }
    return MultiMap<S>{&space, images};
}

template <ScalarNumber S>
struct ZeroDistanceViolation {
    std::size_t x, y;
    S hplus_term;  // positive H+ over the punctured images where sigma(x,y)=0
};

// Per-pair record of the shrinkage sweep.
template <ScalarNumber S>
struct RatioRow {
    std::size_t x, y;
    S hplus_term;            // H+(Tx\{x}, Ty\{y})
    std::optional<S> ratio;  // term / sigma(x,y); absent on zero-distance pairs
};

// Result of the uniform-k shrinkage check. A single k must serve all pairs:
// minimal_k is the exact ratio maximum, and the condition holds for any
// k in [minimal_k, 1) provided minimal_k < 1 and no zero-distance pair
// carries a positive H+ term (no k could absorb that, hence "unbounded").
template <ScalarNumber S>
struct ConditionOneResult {
    S minimal_k;  // max ratio over positive-distance pairs; 0 when all terms vanish
    std::vector<ZeroDistanceViolation<S>> violations;
    std::vector<RatioRow<S>> rows;  // ordered-pair sweep, lexicographic
    std::optional<std::pair<std::size_t, std::size_t>> max_pair;

    bool unbounded() const { return !violations.empty(); }
    bool holds() const { return violations.empty() && minimal_k < S::from_int(1); }
    bool holds_for(const S& k) const { return violations.empty() && minimal_k <= k; }
};

template <ScalarNumber S>
ConditionOneResult<S> check_condition_1(const MultiMap<S>& map) {
    const Space<S>& sp = *map.space;
    ConditionOneResult<S> res{S::from_int(0), {}, {}, std::nullopt};
    for (std::size_t x = 0; x < sp.size(); ++x) {
        for (std::size_t y = 0; y < sp.size(); ++y) {
            const S term = hplus(map.image(x).without(x), map.image(y).without(y));
            const S& dist = sp.sigma(x, y);
            RatioRow<S> row{x, y, term, std::nullopt};
            if (dist.is_zero()) {
                if (!term.is_zero()) res.violations.push_back({x, y, term});
            } else {
                row.ratio = term / dist;
                if (res.minimal_k < *row.ratio) {
                    res.minimal_k = *row.ratio;
                    res.max_pair = {{x, y}};
                }
            }
            res.rows.push_back(std::move(row));
        }
    }
    return res;
}

// One row of the approximate-selection check: for x and y in Tx, the nearest
// z in Ty must sit within H+(Tx, Ty). On a finite carrier the for-every-
// epsilon phrasing collapses to exactly this minimum.
template <ScalarNumber S>
struct SlackRow {
    std::size_t x, y;
    std::size_t z;     // nearest point of Ty to y, lowest index on ties
    S min_sigma;       // sigma(y, z)
    S hplus_bound;     // H+(Tx, Ty)
    S slack;           // hplus_bound - min_sigma; negative means failure
    bool pass = true;
};

template <ScalarNumber S>
struct ConditionTwoResult {
    bool pass = true;
    std::vector<SlackRow<S>> rows;  // one per (x, y in Tx), lexicographic
};

template <ScalarNumber S>
ConditionTwoResult<S> check_condition_2(const MultiMap<S>& map) {
    const Space<S>& sp = *map.space;
    ConditionTwoResult<S> res;
    for (std::size_t x = 0; x < sp.size(); ++x) {
        for (std::size_t y = 0; y < sp.size(); ++y) {
            if (!map.image(x).contains(y)) continue;
            const SubsetMask<S>& ty = map.image(y);
            std::optional<S> best;
            std::size_t best_z = 0;
            for (std::size_t z = 0; z < sp.size(); ++z) {
                if (!ty.contains(z)) continue;
                const S& d = sp.sigma(y, z);
                if (!best || d < *best) {
                    best = d;
                    best_z = z;
                }
            }
            const S bound = hplus(map.image(x), ty);
            SlackRow<S> row{x, y, best_z, *best, bound, bound - *best, *best <= bound};
            res.pass = res.pass && row.pass;
            res.rows.push_back(std::move(row));
        }
    }
    return res;
}

// The epsilon-quantified original: for every x, y in Tx there must exist
// z in Ty with sigma(y,z) <= H+(Tx,Ty) + eps. Exists to corroborate the
// collapsed form; the witnessing z is the same sigma-minimizing point.
template <ScalarNumber S>
bool check_condition_2_epsilon(const MultiMap<S>& map, const S& eps) {
    const Space<S>& sp = *map.space;
    for (std::size_t x = 0; x < sp.size(); ++x) {
        for (std::size_t y = 0; y < sp.size(); ++y) {
            if (!map.image(x).contains(y)) continue;
            const S bound = hplus(map.image(x), map.image(y)) + eps;
            bool found = false;
            for (std::size_t z = 0; z < sp.size() && !found; ++z) {
                if (map.image(y).contains(z) && sp.sigma(y, z) <= bound) found = true;
            }
            if (!found) return false;
        }
    }
    return true;
}

template <ScalarNumber S>
struct ContractionReport {
    ConditionOneResult<S> condition1;
    ConditionTwoResult<S> condition2;

    bool conforming() const { return condition1.holds() && condition2.pass; }
    bool conforming_for(const S& k) const { return condition1.holds_for(k) && condition2.pass; }
};

template <ScalarNumber S>
ContractionReport<S> check_contraction(const MultiMap<S>& map) {
    return {check_condition_1(map), check_condition_2(map)};
}

// Midpoint of (minimal_k, 1); the iteration's step tolerance needs some k
// strictly between the measured ratio and 1.
template <ScalarNumber S>
std::optional<S> default_contraction_k(const ConditionOneResult<S>& c1) {
    if (!c1.holds()) return std::nullopt;
    return c1.minimal_k + half(S::from_int(1) - c1.minimal_k);
}

// Exhaustive fixed-point scan: every x with x in Tx, ascending.
template <ScalarNumber S>
std::vector<std::size_t> find_all_fixed_points(const MultiMap<S>& map) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < map.space->size(); ++x) {
        if (map.image(x).contains(x)) out.push_back(x);
    }
    return out;
}

}  // namespace wpb
