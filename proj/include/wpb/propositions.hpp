#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wpb/subsets.hpp"

namespace wpb {

enum class Prop {
    DeltaSelf,      // delta(U,U) equals the largest self-distance over U
    DeltaDominates, // delta(U,U) <= delta(U,V)
    DeltaSeparates, // delta(U,V) = 0 forces U to be contained in V
    DeltaTriangle,  // delta(U,V) <= s * (delta(U,Y) + delta(Y,V))
    HplusSelf,      // H+(U,U) <= H+(U,V)
    HplusSymmetric, // H+(U,V) = H+(V,U)
    HplusTriangle,  // H+(U,V) <= s * (H+(U,Y) + H+(Y,V))
};

inline const char* prop_name(Prop p) {
    switch (p) {
        case Prop::DeltaSelf: return "P3.7-i";
        case Prop::DeltaDominates: return "P3.7-ii";
        case Prop::DeltaSeparates: return "P3.7-iii";
        case Prop::DeltaTriangle: return "P3.7-iv";
        case Prop::HplusSelf: return "whb1";
        case Prop::HplusSymmetric: return "whb2";
        case Prop::HplusTriangle: return "whb3";
    }
    return "?";
}

template <ScalarNumber S>
struct PropositionCounterexample {
    std::vector<SubsetMask<S>> sets;  // the pair or triple it failed on
    S lhs;
    S rhs;
};

template <ScalarNumber S>
struct PropositionReport {
    Prop tag;
    bool pass = true;
    std::size_t cases_checked = 0;
    std::optional<PropositionCounterexample<S>> counterexample;  // first, in sweep order
};

namespace detail {

// Pairwise delta matrix; the triple sweeps reuse it instead of recomputing
// point-set minima per triple.
template <ScalarNumber S>
std::vector<S> delta_matrix(const std::vector<SubsetMask<S>>& sets) {
    const std::size_t m = sets.size();
    std::vector<S> d(m * m, S::from_int(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            d[i * m + j] = delta_directed(sets[i], sets[j]);
        }
    }
    return d;
}

}  // namespace detail

// Exhaustive check of the four directed-excess properties over the given
// subsets (holds on all nonempty subsets of a finite carrier, closed ones in
// particular). Sweep order is lexicographic in subset position, so the first
// counterexample is deterministic.
template <ScalarNumber S>
std::vector<PropositionReport<S>> verify_delta_properties(const Space<S>& space,
                                                          const std::vector<SubsetMask<S>>& sets) {
    const std::size_t m = sets.size();
    const auto d = detail::delta_matrix(sets);
    auto dd = [&](std::size_t i, std::size_t j) -> const S& { return d[i * m + j]; };

    PropositionReport<S> self{Prop::DeltaSelf}, dom{Prop::DeltaDominates},
        sep{Prop::DeltaSeparates}, tri{Prop::DeltaTriangle};

    for (std::size_t i = 0; i < m; ++i) {
        S max_self = S::from_int(0);
        bool any = false;
        for (std::size_t p : sets[i].indices()) {
            const S& v = space.sigma(p, p);
            if (!any || max_self < v) max_self = v;
            any = true;
        }
        ++self.cases_checked;
        if (self.pass && !(dd(i, i) == max_self)) {
            self.pass = false;
            self.counterexample = {{sets[i]}, dd(i, i), max_self};
        }
    }

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            ++dom.cases_checked;
            if (dom.pass && !(dd(i, i) <= dd(i, j))) {
                dom.pass = false;
                dom.counterexample = {{sets[i], sets[j]}, dd(i, i), dd(i, j)};
            }
            ++sep.cases_checked;
            if (sep.pass && dd(i, j).is_zero() && !sets[i].subset_of(sets[j])) {
                sep.pass = false;
                sep.counterexample = {{sets[i], sets[j]}, dd(i, j), dd(i, j)};
            }
        }
    }

    const S& s = space.coefficient();
    for (std::size_t i = 0; i < m && tri.pass; ++i) {
        for (std::size_t j = 0; j < m && tri.pass; ++j) {
            for (std::size_t y = 0; y < m; ++y) {
                ++tri.cases_checked;
                const S rhs = s * (dd(i, y) + dd(y, j));
                if (!(dd(i, j) <= rhs)) {
                    tri.pass = false;
                    tri.counterexample = {{sets[i], sets[j], sets[y]}, dd(i, j), rhs};
                    break;
                }
            }
        }
    }
    tri.cases_checked = m * m * m;

    return {self, dom, sep, tri};
}

// Exhaustive check of the three H+ properties over the given subsets.
template <ScalarNumber S>
std::vector<PropositionReport<S>> verify_hplus_properties(const Space<S>& space,
                                                          const std::vector<SubsetMask<S>>& sets) {
    const std::size_t m = sets.size();
    const auto d = detail::delta_matrix(sets);
    std::vector<S> h(m * m, S::from_int(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            h[i * m + j] = half(d[i * m + j] + d[j * m + i]);
        }
    }
    auto hh = [&](std::size_t i, std::size_t j) -> const S& { return h[i * m + j]; };

    PropositionReport<S> self{Prop::HplusSelf}, sym{Prop::HplusSymmetric},
        tri{Prop::HplusTriangle};

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            ++self.cases_checked;
            if (self.pass && !(hh(i, i) <= hh(i, j))) {
                self.pass = false;
                self.counterexample = {{sets[i], sets[j]}, hh(i, i), hh(i, j)};
            }
            ++sym.cases_checked;
            if (sym.pass && !(hh(i, j) == hh(j, i))) {
                sym.pass = false;
                sym.counterexample = {{sets[i], sets[j]}, hh(i, j), hh(j, i)};
            }
        }
    }

    const S& s = space.coefficient();
    for (std::size_t i = 0; i < m && tri.pass; ++i) {
        for (std::size_t j = 0; j < m && tri.pass; ++j) {
            for (std::size_t y = 0; y < m; ++y) {
                ++tri.cases_checked;
                const S rhs = s * (hh(i, y) + hh(y, j));
                if (!(hh(i, j) <= rhs)) {
                    tri.pass = false;
                    tri.counterexample = {{sets[i], sets[j], sets[y]}, hh(i, j), rhs};
                    break;
                }
            }
        }
    }
    tri.cases_checked = m * m * m;

    return {self, sym, tri};
}

}  // namespace wpb
