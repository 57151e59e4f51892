#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "wpb/space.hpp"

namespace wpb {

inline constexpr std::size_t kSubsetEnumerationCap = 16;

// A subset of one space's carrier, as a bitmask. The empty mask is legal;
// distances involving it follow the zero conventions below.
template <ScalarNumber S>
struct SubsetMask {
    const Space<S>* space = nullptr;
    std::uint32_t bits = 0;

    SubsetMask() = default;
    SubsetMask(const Space<S>& sp, std::uint32_t b) : space(&sp), bits(b) {
        assert(sp.size() >= 32 || (b >> sp.size()) == 0);
    }

    static SubsetMask from_indices(const Space<S>& sp, const std::vector<std::size_t>& idx) {
        std::uint32_t b = 0;
        for (std::size_t i : idx) {
            if (i >= sp.size()) throw ShapeError("subset index out of range");
            b |= std::uint32_t{1} << i;
        }
        return SubsetMask(sp, b);
    }

    bool contains(std::size_t i) const { return (bits >> i) & 1u; }
    bool empty() const { return bits == 0; }
    std::size_t count() const { return std::popcount(bits); }
    bool subset_of(const SubsetMask& other) const { return (bits & ~other.bits) == 0; }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < space->size(); ++i) {
            if (contains(i)) out.push_back(i);
        }
        return out;
    }

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (std::size_t i : indices()) {
            if (!first) out += ",";
            out += space->label(i);
            first = false;
        }
        return out + "}";
    }

    SubsetMask without(std::size_t i) const {
        return SubsetMask(*space, bits & ~(std::uint32_t{1} << i));
    }

    friend bool operator==(const SubsetMask& a, const SubsetMask& b) {
        return a.space == b.space && a.bits == b.bits;
    }
};

namespace detail {

template <ScalarNumber S>
void require_same_space(const SubsetMask<S>& u, const SubsetMask<S>& v) {
    if (u.space == nullptr || u.space != v.space) {
        throw ShapeError("subset masks belong to different spaces");
    }
}

}  // namespace detail

// sigma(x, U) = min over u in U of sigma(x, u); 0 for the empty set. The
// empty-set convention follows the worked example, which evaluates distances
// involving punctured singletons to 0 rather than +infinity.
template <ScalarNumber S>
S point_set_distance(std::size_t x, const SubsetMask<S>& u) {
    if (u.empty()) return S::from_int(0);
    const Space<S>& sp = *u.space;
    std::optional<S> best;
    for (std::size_t i = 0; i < sp.size(); ++i) {
        if (!u.contains(i)) continue;
        const S& d = sp.sigma(x, i);
        if (!best || d < *best) best = d;
    }
    return *best;
}

// Directed excess: delta(U, V) = max over u in U of sigma(u, V); 0 when U is
// empty.
template <ScalarNumber S>
S delta_directed(const SubsetMask<S>& u, const SubsetMask<S>& v) {
    detail::require_same_space(u, v);
    S best = S::from_int(0);
    bool any = false;
    for (std::size_t i = 0; i < u.space->size(); ++i) {
        if (!u.contains(i)) continue;
        const S d = point_set_distance(i, v);
        if (!any || best < d) best = d;
        any = true;
    }
    return best;
}

// H+(U, V) = (delta(U,V) + delta(V,U)) / 2.
template <ScalarNumber S>
S hplus(const SubsetMask<S>& u, const SubsetMask<S>& v) {
    detail::require_same_space(u, v);
    return half(delta_directed(u, v) + delta_directed(v, u));
}

// u lies in the closure of U exactly when sigma(u, U) = sigma(u, u).
template <ScalarNumber S>
bool closure_membership(std::size_t u, const SubsetMask<S>& set) {
    if (set.empty()) throw EmptySet();
    return point_set_distance(u, set) == set.space->sigma(u, u);
}

template <ScalarNumber S>
bool is_closed(const SubsetMask<S>& set) {
    if (set.empty()) throw EmptySet();
    for (std::size_t x = 0; x < set.space->size(); ++x) {
        if (closure_membership(x, set) != set.contains(x)) return false;
    }
    return true;
}

// All nonempty closed subsets, in ascending bitmask order.
template <ScalarNumber S>
std::vector<SubsetMask<S>> enumerate_closed_subsets(const Space<S>& space,
                                                    std::size_t cap = kSubsetEnumerationCap) {
    if (space.size() > cap) throw CarrierTooLarge(space.size(), cap);
    std::vector<SubsetMask<S>> out;
    const std::uint32_t full = space.size() == 32 ? ~std::uint32_t{0}
                                                  : (std::uint32_t{1} << space.size()) - 1;
    for (std::uint32_t b = 1; b <= full; ++b) {
        SubsetMask<S> m(space, b);
        if (is_closed(m)) out.push_back(m);
    }
    return out;
}

// All nonempty subsets, closed or not, for widened falsification sweeps.
template <ScalarNumber S>
std::vector<SubsetMask<S>> enumerate_nonempty_subsets(const Space<S>& space,
                                                      std::size_t cap = kSubsetEnumerationCap) {
    if (space.size() > cap) throw CarrierTooLarge(space.size(), cap);
    std::vector<SubsetMask<S>> out;
    const std::uint32_t full = space.size() == 32 ? ~std::uint32_t{0}
                                                  : (std::uint32_t{1} << space.size()) - 1;
    for (std::uint32_t b = 1; b <= full; ++b) out.emplace_back(space, b);
    return out;
}

}  // namespace wpb
