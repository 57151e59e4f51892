#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wpb/contraction.hpp"
#include "wpb/space.hpp"

namespace wpb {

// Seeded generators for falsification runs. All draws go through the
// mt19937_64 output directly (modulo reduction), so a seed pins the exact
// sequence of spaces and maps on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(raw() % n); }

    std::size_t between(std::size_t lo, std::size_t hi) {  // inclusive
        return lo + below(hi - lo + 1);
    }

    bool chance(double p) { return raw() % 1024 < static_cast<std::uint64_t>(p * 1024); }

  private:
    std::mt19937_64 engine_;
};

// Small random nonnegative rational: numerator 0..max_num over denominator
// 1..max_den.
template <ScalarNumber S>
S random_scalar(Rng& rng, long long max_num = 8, long long max_den = 4) {
    const long long num = static_cast<long long>(rng.below(max_num + 1));
    const long long den = static_cast<long long>(rng.between(1, max_den));
    return S::parse(std::to_string(num) + "/" + std::to_string(den));
}

template <ScalarNumber S>
S random_positive_scalar(Rng& rng, long long max_num = 8, long long max_den = 4) {
    const long long num = static_cast<long long>(rng.between(1, max_num));
    const long long den = static_cast<long long>(rng.between(1, max_den));
    return S::parse(std::to_string(num) + "/" + std::to_string(den));
}

// Random table repaired to satisfy WPB1-WPB3: random self-distances, then
// off-diagonal entries at max(self) plus a positive bump (or exactly max(self)
// when the two self-distances differ, which keeps separation intact while
// producing points that sit in the closure of other points' sets). The
// coefficient is the measured minimum, so WPB4 holds by construction.
template <ScalarNumber S>
Space<S> random_space(Rng& rng, std::size_t max_carrier) {
    const std::size_t n = rng.between(1, max_carrier);
    DistanceTable<S> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        table.at(i, i) = random_scalar<S>(rng, 4, 4);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const S& si = table.at(i, i);
            const S& sj = table.at(j, j);
            const S base = si < sj ? sj : si;
            S value;
            if (!(si == sj) && !base.is_zero() && rng.chance(0.25)) {
                value = base;  // boundary case: closure membership across points
            } else {
                value = base + random_positive_scalar<S>(rng, 6, 4);
            }
            table.at(i, j) = value;
            table.at(j, i) = value;
        }
    }
    const S s = minimal_coefficient(table);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return Space<S>::build(std::move(labels), std::move(table), s);
}

// Random nonempty closed subset, by rejection over the carrier's subsets.
template <ScalarNumber S>
std::optional<SubsetMask<S>> random_closed_subset(Rng& rng, const Space<S>& space,
                                                  std::size_t attempts = 64) {
    const std::uint32_t full = (std::uint32_t{1} << space.size()) - 1;
    for (std::size_t a = 0; a < attempts; ++a) {
        const std::uint32_t bits = 1 + static_cast<std::uint32_t>(rng.below(full));
        SubsetMask<S> m(space, bits);
        if (is_closed(m)) return m;
    }
    return std::nullopt;
}

// Random map whose images are nonempty and closed; no contraction screening.
template <ScalarNumber S>
std::optional<MultiMap<S>> random_map(Rng& rng, const Space<S>& space) {
    std::vector<SubsetMask<S>> images;
    for (std::size_t x = 0; x < space.size(); ++x) {
        auto m = random_closed_subset(rng, space);
        if (!m) return std::nullopt;
        images.push_back(*m);
    }
    return validate_map(space, images);
}

// Rejection-sample a map conforming to both contraction conditions. The
// identity map always conforms on spaces whose singletons are closed, so a
// final identity fallback keeps the sampler total without skewing the
// accepted random maps.
template <ScalarNumber S>
std::optional<MultiMap<S>> random_conforming_map(Rng& rng, const Space<S>& space,
                                                 std::size_t attempts = 200) {
    for (std::size_t a = 0; a < attempts; ++a) {
        auto map = random_map(rng, space);
        if (!map) continue;
        const auto rep = check_contraction(*map);
        if (rep.conforming()) return map;
    }
    std::vector<SubsetMask<S>> identity;
    bool singletons_closed = true;
    for (std::size_t x = 0; x < space.size(); ++x) {
        SubsetMask<S> m(space, std::uint32_t{1} << x);
        singletons_closed = singletons_closed && is_closed(m);
        identity.push_back(m);
    }
    if (!singletons_closed) return std::nullopt;
    auto map = validate_map(space, identity);
    if (!check_contraction(map).conforming()) return std::nullopt;
    return map;
}

// A conforming (space, map) pair: draws fresh spaces until one admits a
// conforming map. Spaces with all singletons closed admit the identity map,
// so the outer loop terminates quickly.
template <ScalarNumber S>
struct SpaceMapPair {
    Space<S> space;
    std::vector<std::uint32_t> image_bits;  // one mask per carrier point

    MultiMap<S> map() const {
        std::vector<SubsetMask<S>> imgs;
        for (std::uint32_t b : image_bits) imgs.emplace_back(space, b);
        return validate_map(space, imgs);
    }
};

template <ScalarNumber S>
SpaceMapPair<S> random_conforming_pair(Rng& rng, std::size_t max_carrier) {
    for (;;) {
        Space<S> space = random_space<S>(rng, max_carrier);
        auto map = random_conforming_map(rng, space);
        if (!map) continue;
        std::vector<std::uint32_t> bits;
        for (const auto& m : map->images) bits.push_back(m.bits);
        return SpaceMapPair<S>{std::move(space), std::move(bits)};
    }
}

}  // namespace wpb
