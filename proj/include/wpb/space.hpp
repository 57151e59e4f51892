#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpb/errors.hpp"
#include "wpb/scalar.hpp"

namespace wpb {

// Full symmetric matrix including the diagonal; diagonal entries are
// meaningful self-distances, not padding.
template <ScalarNumber S>
struct DistanceTable {
    std::size_t n = 0;
    std::vector<S> cells;  // row-major, n*n

    DistanceTable() = default;
    explicit DistanceTable(std::size_t size) : n(size), cells(size * size, S::from_int(0)) {}

    const S& at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
    S& at(std::size_t i, std::size_t j) { return cells[i * n + j]; }

    friend bool operator==(const DistanceTable& a, const DistanceTable& b) {
        if (a.n != b.n) return false;
        for (std::size_t i = 0; i < a.cells.size(); ++i) {
            if (!(a.cells[i] == b.cells[i])) return false;
        }
        return true;
    }
};

enum class Axiom {
    Wpb1,        // separation: sigma(x,x)=sigma(x,y)=sigma(y,y) forces x=y
    Wpb1Strict,  // as printed: sigma(x,x)=sigma(x,y) forces x=y (informational)
    Wpb2,        // small self-distance: sigma(x,x) <= sigma(x,y)
    Wpb3,        // symmetry
    Wpb4,        // relaxed triangle with coefficient s
    ZeroSeparation,  // derived: sigma(x,y)=0 forces x=y
};

inline const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::Wpb1: return "WPB1";
        case Axiom::Wpb1Strict: return "WPB1-strict";
        case Axiom::Wpb2: return "WPB2";
        case Axiom::Wpb3: return "WPB3";
        case Axiom::Wpb4: return "WPB4";
        case Axiom::ZeroSeparation: return "zero-separation";
    }
    return "?";
}

template <ScalarNumber S>
struct AxiomWitness {
    Axiom axiom;
    std::array<std::size_t, 3> points{};  // pair witnesses leave points[2] unused
    int arity = 2;
    S lhs;
    S rhs;
};

// Witness triple (x, z, y) attaining the triangle-ratio maximum.
struct CoefficientWitness {
    std::size_t x = 0, z = 0, y = 0;
};

// WPB1 here is the separation form. The strict iff form as printed fails on
// the interval space (nested intervals sharing an endpoint), which the same
// source presents as a valid example, so it is reported separately and never
// gates acceptance of a table.
template <ScalarNumber S>
struct AxiomReport {
    bool wpb1 = true;
    bool wpb1_strict = true;
    bool wpb2 = true;
    bool wpb3 = true;
    bool wpb4 = true;
    bool zero_separation = true;
    std::vector<AxiomWitness<S>> witnesses;  // sorted: axiom order, then index order
    std::optional<S> minimal_s;              // absent when WPB1-WPB3 fail
    std::optional<CoefficientWitness> minimal_s_witness;

    bool pass() const { return wpb1 && wpb2 && wpb3 && wpb4; }

    std::vector<AxiomWitness<S>> witnesses_for(Axiom a) const {
        std::vector<AxiomWitness<S>> out;
        for (const auto& w : witnesses) {
            if (w.axiom == a) out.push_back(w);
        }
        return out;
    }
};

namespace detail {

template <ScalarNumber S>
void require_square_nonnegative(const DistanceTable<S>& t) {
    if (t.cells.size() != t.n * t.n) {
        throw ShapeError("distance table is not square");
    }
    for (std::size_t i = 0; i < t.n; ++i) {
        for (std::size_t j = 0; j < t.n; ++j) {
            if (t.at(i, j).is_negative()) {
                throw ShapeError("distance table has a negative entry at (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
            }
        }
    }
}

}  // namespace detail

// Maximal triangle ratio sigma(x,y) / (sigma(x,z)+sigma(z,y)) over ordered
// triples, clamped below at 1. Triples with zero denominator are skipped:
// with WPB1-WPB3 in force a zero denominator entails x=z=y and a zero
// numerator. Requires WPB1-WPB3 (throws otherwise); with them the ratio set
// is never unbounded, so a value is always returned.
template <ScalarNumber S>
std::pair<S, CoefficientWitness> minimal_coefficient_with_witness(const DistanceTable<S>& table);

// Every ordered triple attaining the maximal ratio, in lexicographic order.
template <ScalarNumber S>
std::vector<CoefficientWitness> coefficient_argmax_triples(const DistanceTable<S>& table);

// Exhaustive verification of all axioms against the given s, plus the
// derived zero-separation property. Records every failing pair/triple.
template <ScalarNumber S>
AxiomReport<S> check_axioms(const DistanceTable<S>& table, const S& s) {
    detail::require_square_nonnegative(table);
    AxiomReport<S> rep;
    const std::size_t n = table.n;

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const S& xy = table.at(x, y);
            const S& xx = table.at(x, x);
            const S& yy = table.at(y, y);
            if (xx == xy && yy == xy) {
                rep.wpb1 = false;
                rep.witnesses.push_back({Axiom::Wpb1, {x, y, 0}, 2, xx, xy});
            }
            if (xx == xy) {
                rep.wpb1_strict = false;
                rep.witnesses.push_back({Axiom::Wpb1Strict, {x, y, 0}, 2, xx, xy});
            }
            if (!(xx <= xy)) {
                rep.wpb2 = false;
                rep.witnesses.push_back({Axiom::Wpb2, {x, y, 0}, 2, xx, xy});
            }
            if (x < y && !(xy == table.at(y, x))) {
                rep.wpb3 = false;
                rep.witnesses.push_back({Axiom::Wpb3, {x, y, 0}, 2, xy, table.at(y, x)});
            }
            if (xy.is_zero()) {
                rep.zero_separation = false;
                rep.witnesses.push_back({Axiom::ZeroSeparation, {x, y, 0}, 2, xy, xy});
            }
        }
    }

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z) {
            for (std::size_t y = 0; y < n; ++y) {
                const S lhs = table.at(x, y);
                const S rhs = s * (table.at(x, z) + table.at(z, y));
                if (!(lhs <= rhs)) {
                    rep.wpb4 = false;
                    rep.witnesses.push_back({Axiom::Wpb4, {x, z, y}, 3, lhs, rhs});
                }
            }
        }
    }

    if (rep.wpb1 && rep.wpb2 && rep.wpb3) {
        auto [coeff, witness] = minimal_coefficient_with_witness(table);
        rep.minimal_s = coeff;
        rep.minimal_s_witness = witness;
    }
    return rep;
}

template <ScalarNumber S>
std::pair<S, CoefficientWitness> minimal_coefficient_with_witness(const DistanceTable<S>& table) {
    detail::require_square_nonnegative(table);
    {
        AxiomReport<S> probe;
        const std::size_t n = table.n;
        for (std::size_t x = 0; x < n && probe.wpb1 && probe.wpb2 && probe.wpb3; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (x == y) continue;
                if (table.at(x, x) == table.at(x, y) && table.at(y, y) == table.at(x, y)) probe.wpb1 = false;
                if (!(table.at(x, x) <= table.at(x, y))) probe.wpb2 = false;
                if (!(table.at(x, y) == table.at(y, x))) probe.wpb3 = false;
            }
        }
        if (!(probe.wpb1 && probe.wpb2 && probe.wpb3)) {
            throw PreconditionFailed("minimal coefficient requires WPB1-WPB3");
        }
    }

    std::optional<S> max_ratio;
    CoefficientWitness witness{0, 0, 0};
    const std::size_t n = table.n;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z) {
            for (std::size_t y = 0; y < n; ++y) {
                const S den = table.at(x, z) + table.at(z, y);
                if (den.is_zero()) {
                    assert(table.at(x, y).is_zero());
                    continue;
                }
                const S ratio = table.at(x, y) / den;
                if (!max_ratio || *max_ratio < ratio) {
                    max_ratio = ratio;
                    witness = {x, z, y};
                }
            }
        }
    }
    // clamp: the definition requires s >= 1 even when all ratios fall below it
    S coeff = max_ratio.value_or(S::from_int(1));
    if (coeff < S::from_int(1)) coeff = S::from_int(1);
    return {coeff, witness};
}

template <ScalarNumber S>
std::vector<CoefficientWitness> coefficient_argmax_triples(const DistanceTable<S>& table) {
    const S best = minimal_coefficient_with_witness(table).first;
    std::vector<CoefficientWitness> out;
    const std::size_t n = table.n;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z) {
            for (std::size_t y = 0; y < n; ++y) {
                const S den = table.at(x, z) + table.at(z, y);
                if (den.is_zero()) continue;
                if (table.at(x, y) / den == best) out.push_back({x, z, y});
            }
        }
    }
    return out;
}

template <ScalarNumber S>
S minimal_coefficient(const DistanceTable<S>& table) {
    return minimal_coefficient_with_witness(table).first;
}

// A finite weak partial b-metric space: labeled carrier, symmetric distance
// table with meaningful diagonal, relaxation coefficient s >= 1. Immutable
// once built; build rejects any table that fails the axioms for the given s.
template <ScalarNumber S>
class Space {
  public:
    struct AxiomViolation : Error {
        AxiomReport<S> report;
        explicit AxiomViolation(AxiomReport<S> rep)
            : Error(describe(rep)), report(std::move(rep)) {}

        static std::string describe(const AxiomReport<S>& rep) {
            std::string msg = "axiom violation:";
            for (Axiom a : {Axiom::Wpb1, Axiom::Wpb2, Axiom::Wpb3, Axiom::Wpb4}) {
                auto ws = rep.witnesses_for(a);
                if (ws.empty()) continue;
                const auto& w = ws.front();
                msg += std::string(" ") + axiom_name(a) + " at (" + std::to_string(w.points[0]);
                for (int i = 1; i < w.arity; ++i) msg += "," + std::to_string(w.points[i]);
                msg += "): " + w.lhs.to_string() + " vs " + w.rhs.to_string() + ";";
            }
            return msg;
        }
    };

    static Space build(std::vector<std::string> labels, DistanceTable<S> table, S s) {
        if (labels.empty()) throw ShapeError("carrier must be nonempty");
        if (table.n != labels.size()) {
            throw ShapeError("carrier size does not match table size");
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) {
                    throw ShapeError("duplicate label '" + labels[i] + "'");
                }
            }
        }
        if (s < S::from_int(1)) {
            throw CoefficientError("relaxation coefficient s = " + s.to_string() + " is below 1");
        }
        AxiomReport<S> rep = check_axioms(table, s);
        if (!rep.pass()) {
            throw AxiomViolation(std::move(rep));
        }
        return Space(std::move(labels), std::move(table), std::move(s), std::move(rep));
    }

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> index_of(std::string_view label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] == label) return i;
        }
        return std::nullopt;
    }

    const S& sigma(std::size_t i, std::size_t j) const { return table_.at(i, j); }
    const DistanceTable<S>& table() const { return table_; }
    const S& coefficient() const { return s_; }
    const AxiomReport<S>& axiom_report() const { return report_; }

    // sigma^s(x,y) = sigma(x,y) - (sigma(x,x)+sigma(y,y))/2
    S induced(std::size_t i, std::size_t j) const {
        return table_.at(i, j) - half(table_.at(i, i) + table_.at(j, j));
    }

  private:
    Space(std::vector<std::string> labels, DistanceTable<S> table, S s, AxiomReport<S> rep)
        : labels_(std::move(labels)), table_(std::move(table)), s_(std::move(s)),
          report_(std::move(rep)) {}

    std::vector<std::string> labels_;
    DistanceTable<S> table_;
    S s_;
    AxiomReport<S> report_;
};

// The induced table together with its own measured coefficient. The source
// asserts sigma^s is a b-metric without naming its coefficient, so we measure
// it and raise a flag (never a failure) when it exceeds 2s.
template <ScalarNumber S>
struct InducedMetric {
    DistanceTable<S> table;
    S coefficient;
    bool exceeds_two_s = false;
};

template <ScalarNumber S>
InducedMetric<S> induced_b_metric(const Space<S>& space) {
    const std::size_t n = space.size();
    InducedMetric<S> out{DistanceTable<S>(n), S::from_int(1), false};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.table.at(i, j) = space.induced(i, j);
        }
    }
    out.coefficient = minimal_coefficient(out.table);
    out.exceeds_two_s = S::from_int(2) * space.coefficient() < out.coefficient;
    return out;
}

// A recorded point sequence in one space. Finite carriers admit no genuine
// limits of non-stabilizing sequences, so convergence questions are asked of
// the recorded tail.
template <ScalarNumber S>
struct SequenceTrace {
    const Space<S>* space = nullptr;
    std::vector<std::size_t> points;

    std::vector<S> sigma_steps() const {
        require_nonempty();
        std::vector<S> out;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            out.push_back(space->sigma(points[i], points[i + 1]));
        }
        return out;
    }

    std::vector<S> induced_steps() const {
        require_nonempty();
        std::vector<S> out;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            out.push_back(space->induced(points[i], points[i + 1]));
        }
        return out;
    }

    void require_nonempty() const {
        if (!space || points.empty()) throw wpb::EmptyTrace();
    }
};

template <ScalarNumber S>
struct CauchyReport {
    bool cauchy = false;
    S max_tail;  // largest sigma^s value over the final window
};

// True when all pairwise sigma^s values over the final `window` points stay
// within `bound`. In exact mode a zero bound demands exact zeros.
template <ScalarNumber S>
CauchyReport<S> is_cauchy(const SequenceTrace<S>& trace, std::size_t window, const S& bound) {
    trace.require_nonempty();
    if (window < 1) throw ShapeError("window must be at least 1");
    const std::size_t len = trace.points.size();
    const std::size_t start = window >= len ? 0 : len - window;
    CauchyReport<S> rep{true, S::from_int(0)};
    for (std::size_t i = start; i < len; ++i) {
        for (std::size_t j = i + 1; j < len; ++j) {
            const S v = trace.space->induced(trace.points[i], trace.points[j]);
            if (rep.max_tail < v) rep.max_tail = v;
            if (!(v <= bound)) rep.cauchy = false;
        }
    }
    return rep;
}

// Both convergence criteria, reported separately: the plain one
// (sigma(x,x) = lim sigma(x, x_n)) and the sigma^s one, which adds
// lim sigma(x_n, x_m) = sigma(x,x).
template <ScalarNumber S>
struct ConvergenceReport {
    bool converges = false;       // stabilized at exactly the queried point
    bool stabilized = false;      // constant tail of length >= 2, or constant whole trace
    std::size_t tail_point = 0;   // point the tail is constant at (when stabilized)
    S sigma_tail_x;               // sigma(tail, x)
    S sigma_xx;                   // sigma(x, x)
    S sigma_tail_tail;            // sigma(tail, tail)
    bool plain_criterion = false;    // sigma(tail,x) = sigma(x,x)
    bool induced_criterion = false;  // plus sigma(tail,tail) = sigma(x,x)
};

template <ScalarNumber S>
ConvergenceReport<S> converges_to(const SequenceTrace<S>& trace, std::size_t x) {
    trace.require_nonempty();
    const auto& pts = trace.points;
    std::size_t tail_len = 1;
    while (tail_len < pts.size() && pts[pts.size() - 1 - tail_len] == pts.back()) ++tail_len;

    ConvergenceReport<S> rep;
    rep.tail_point = pts.back();
    rep.stabilized = tail_len >= 2 || tail_len == pts.size();
    rep.sigma_tail_x = trace.space->sigma(rep.tail_point, x);
    rep.sigma_xx = trace.space->sigma(x, x);
    rep.sigma_tail_tail = trace.space->sigma(rep.tail_point, rep.tail_point);
    rep.plain_criterion = rep.sigma_tail_x == rep.sigma_xx;
    rep.induced_criterion = rep.plain_criterion && rep.sigma_tail_tail == rep.sigma_xx;
    rep.converges = rep.stabilized && rep.tail_point == x;
    return rep;
}

}  // namespace wpb
