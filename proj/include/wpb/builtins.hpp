#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wpb/space.hpp"

namespace wpb {

// Parameters for the built-in space generators. Grid-based generators take
// `grid`; the interval generator takes `intervals` (pairs a <= b). The
// optional coefficient overrides the generator's canonical choice.
template <ScalarNumber S>
struct BuiltinParams {
    std::vector<S> grid;
    std::vector<std::pair<S, S>> intervals;
    std::optional<S> s_override;
};

namespace detail {

template <ScalarNumber S>
std::vector<std::string> grid_labels(const std::vector<S>& grid) {
    std::vector<std::string> labels;
    labels.reserve(grid.size());
    for (const auto& g : grid) labels.push_back(g.to_string());
    return labels;
}

template <ScalarNumber S>
S abs_diff(const S& a, const S& b) {
    return a < b ? b - a : a - b;
}

template <ScalarNumber S>
const S& max_of(const S& a, const S& b) {
    return a < b ? b : a;
}

template <ScalarNumber S>
DistanceTable<S> tabulate(const std::vector<S>& grid, auto&& formula) {
    DistanceTable<S> t(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            t.at(i, j) = formula(grid[i], grid[j]);
        }
    }
    return t;
}

template <ScalarNumber S>
void require_nonneg_grid(const std::vector<S>& grid) {
    if (grid.empty()) throw ShapeError("grid must be nonempty");
    for (const auto& g : grid) {
        if (g.is_negative()) throw ShapeError("grid values must be nonnegative");
    }
}

}  // namespace detail

// sigma(x,y) = |x-y|^2 + 1 on a nonnegative grid; canonical s = 2.
template <ScalarNumber S>
Space<S> builtin_sq_plus_one(const BuiltinParams<S>& params) {
    detail::require_nonneg_grid(params.grid);
    auto table = detail::tabulate(params.grid, [](const S& x, const S& y) {
        const S d = detail::abs_diff(x, y);
        return d * d + S::from_int(1);
    });
    const S s = params.s_override.value_or(S::from_int(2));
    return Space<S>::build(detail::grid_labels(params.grid), std::move(table), s);
}

// sigma(x,y) = |x-y|^2/2 + max{x,y} on a nonnegative grid; canonical s is the
// measured minimal coefficient. The source writes the second term as
// max{a,b}; a and b occur nowhere else, so it is read as max{x,y}.
template <ScalarNumber S>
Space<S> builtin_half_sq_max(const BuiltinParams<S>& params) {
    detail::require_nonneg_grid(params.grid);
    auto table = detail::tabulate(params.grid, [](const S& x, const S& y) {
        const S d = detail::abs_diff(x, y);
        return half(d * d) + detail::max_of(x, y);
    });
    const S s = params.s_override ? *params.s_override : minimal_coefficient(table);
    return Space<S>::build(detail::grid_labels(params.grid), std::move(table), s);
}

// The worked three-point example: carrier {0, 1/2, 1} with
// sigma(u,v) = |u-v|^2/2 + max{u,v}/2; canonical s is the minimal
// coefficient (which is 1).
template <ScalarNumber S>
Space<S> builtin_worked_example(const BuiltinParams<S>& params) {
    if (!params.grid.empty() || !params.intervals.empty()) {
        throw ShapeError("paper-example-4 takes no grid or interval parameters");
    }
    const std::vector<S> grid = {S::from_int(0), S::parse("1/2"), S::from_int(1)};
    auto table = detail::tabulate(grid, [](const S& x, const S& y) {
        const S d = detail::abs_diff(x, y);
        return half(d * d) + half(detail::max_of(x, y));
    });
    const S s = params.s_override ? *params.s_override : minimal_coefficient(table);
    return Space<S>::build(detail::grid_labels(grid), std::move(table), s);
}

// Carrier of closed intervals [a,b] with q([a,b],[c,d]) = max(b,d) - min(a,c)
// (the length of the joint hull); canonical s = 1.
template <ScalarNumber S>
Space<S> builtin_intervals(const BuiltinParams<S>& params) {
    if (params.intervals.empty()) throw ShapeError("interval list must be nonempty");
    std::vector<std::string> labels;
    for (const auto& [a, b] : params.intervals) {
        if (b < a) throw ShapeError("interval [" + a.to_string() + "," + b.to_string() + "] is reversed");
        labels.push_back("[" + a.to_string() + "," + b.to_string() + "]");
    }
    const std::size_t n = params.intervals.size();
    DistanceTable<S> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto& [a, b] = params.intervals[i];
            const auto& [c, d] = params.intervals[j];
            table.at(i, j) = detail::max_of(b, d) - (a < c ? a : c);
        }
    }
    const S s = params.s_override.value_or(S::from_int(1));
    return Space<S>::build(std::move(labels), std::move(table), s);
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"sq-plus-one", "half-sq-max",
                                                   "paper-example-4", "intervals"};
    return names;
}

template <ScalarNumber S>
Space<S> generate_builtin(const std::string& name, const BuiltinParams<S>& params) {
    if (name == "sq-plus-one") return builtin_sq_plus_one(params);
    if (name == "half-sq-max") return builtin_half_sq_max(params);
    if (name == "paper-example-4") return builtin_worked_example(params);
    if (name == "intervals") return builtin_intervals(params);
    throw ParseError("unknown builtin space '" + name + "'");
}

}  // namespace wpb
