#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wpb/builtins.hpp"
#include "wpb/contraction.hpp"
#include "wpb/space.hpp"

namespace wpb {

using Json = nlohmann::ordered_json;

enum class NumericMode { Exact, Float };

// A space document, parsed but not yet realized against a scalar type.
// Scalar payloads stay as strings/doubles so one parse serves both modes.
struct SpaceSpec {
    struct TableSource {
        std::vector<std::vector<std::string>> rows;
    };
    struct BuiltinSource {
        std::string name;
        std::vector<std::string> grid;
        std::vector<std::pair<std::string, std::string>> intervals;
    };

    std::vector<std::string> carrier;  // empty for builtin sources
    std::variant<TableSource, BuiltinSource> source;
    std::string s = "auto";  // "auto" or a rational string
    NumericMode mode = NumericMode::Exact;
    double tau = Tolerant::kDefaultTau;

    bool is_builtin() const { return std::holds_alternative<BuiltinSource>(source); }
};

struct MapSpec {
    std::vector<std::pair<std::string, std::vector<std::string>>> entries;
};

namespace detail {

inline std::string scalar_field(const Json& v, const char* what, NumericMode mode) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        if (mode == NumericMode::Exact) {
            throw ParseError(std::string(what) +
                             ": float literals require float mode; use rational strings");
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
        return buf;
    }
    throw ParseError(std::string(what) + ": expected a scalar literal");
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError(origin + ": malformed JSON");
    return doc;
}

}  // namespace detail

inline SpaceSpec parse_space_spec(const Json& doc) {
    if (!doc.is_object()) throw ParseError("space spec: expected a JSON object");
    SpaceSpec spec;

    if (doc.contains("mode")) {
        const auto& m = doc.at("mode");
        if (m == "exact") {
            spec.mode = NumericMode::Exact;
        } else if (m == "float") {
            spec.mode = NumericMode::Float;
        } else {
            throw ParseError("space spec: mode must be \"exact\" or \"float\"");
        }
    }
    if (doc.contains("tau")) {
        if (spec.mode != NumericMode::Float) {
            throw ParseError("space spec: tau is only meaningful in float mode");
        }
        if (!doc.at("tau").is_number()) throw ParseError("space spec: tau must be a number");
        spec.tau = doc.at("tau").get<double>();
        if (spec.tau <= 0) throw ParseError("space spec: tau must be positive");
    }

    if (!doc.contains("metric") || !doc.at("metric").is_object()) {
        throw ParseError("space spec: missing metric object");
    }
    const Json& metric = doc.at("metric");
    const bool has_table = metric.contains("table");
    const bool has_builtin = metric.contains("builtin");
    if (has_table == has_builtin) {
        throw ParseError("space spec: metric must hold exactly one of table/builtin");
    }

    if (has_table) {
        if (!doc.contains("carrier") || !doc.at("carrier").is_array() || doc.at("carrier").empty()) {
            throw ParseError("space spec: explicit tables need a nonempty carrier array");
        }
        for (const auto& l : doc.at("carrier")) {
            spec.carrier.push_back(detail::scalar_field(l, "carrier label", NumericMode::Float));
        }
        SpaceSpec::TableSource table;
        if (!metric.at("table").is_array()) throw ParseError("space spec: table must be an array");
        for (const auto& row : metric.at("table")) {
            if (!row.is_array()) throw ParseError("space spec: table rows must be arrays");
            std::vector<std::string> cells;
            for (const auto& cell : row) {
                cells.push_back(detail::scalar_field(cell, "table entry", spec.mode));
            }
            table.rows.push_back(std::move(cells));
        }
        spec.source = std::move(table);
    } else {
        if (doc.contains("carrier")) {
            throw ParseError("space spec: builtin sources derive their own carrier");
        }
        const Json& b = metric.at("builtin");
        if (!b.is_object() || !b.contains("name") || !b.at("name").is_string()) {
            throw ParseError("space spec: builtin needs a name");
        }
        SpaceSpec::BuiltinSource src;
        src.name = b.at("name").get<std::string>();
        if (b.contains("params")) {
            const Json& p = b.at("params");
            if (!p.is_object()) throw ParseError("space spec: builtin params must be an object");
            if (p.contains("grid")) {
                for (const auto& g : p.at("grid")) {
                    src.grid.push_back(detail::scalar_field(g, "grid value", spec.mode));
                }
            }
            if (p.contains("intervals")) {
                for (const auto& iv : p.at("intervals")) {
                    if (!iv.is_array() || iv.size() != 2) {
                        throw ParseError("space spec: intervals must be [a,b] pairs");
                    }
                    src.intervals.emplace_back(
                        detail::scalar_field(iv[0], "interval endpoint", spec.mode),
                        detail::scalar_field(iv[1], "interval endpoint", spec.mode));
                }
            }
        }
        spec.source = std::move(src);
    }

    if (doc.contains("s")) {
        spec.s = detail::scalar_field(doc.at("s"), "s", spec.mode);
        if (spec.s != "auto" && spec.mode == NumericMode::Exact &&
            !Rational::looks_like_rational(spec.s)) {
            throw ParseError("space spec: s must be \"auto\" or a rational string");
        }
    }
    return spec;
}

inline SpaceSpec parse_space_spec_text(const std::string& text, const std::string& origin) {
    return parse_space_spec(detail::parse_json(text, origin));
}

inline MapSpec parse_map_spec(const Json& doc) {
    if (!doc.is_object() || !doc.contains("map") || !doc.at("map").is_object()) {
        throw ParseError("map spec: expected {\"map\": {label: [labels]}}");
    }
    MapSpec spec;
    for (const auto& [label, images] : doc.at("map").items()) {
        if (!images.is_array()) throw ParseError("map spec: image of '" + label + "' must be an array");
        std::vector<std::string> targets;
        for (const auto& t : images) {
            targets.push_back(detail::scalar_field(t, "image label", NumericMode::Float));
        }
        spec.entries.emplace_back(label, std::move(targets));
    }
    return spec;
}

inline MapSpec parse_map_spec_text(const std::string& text, const std::string& origin) {
    return parse_map_spec(detail::parse_json(text, origin));
}

namespace detail {

template <ScalarNumber S>
S parse_scalar(const std::string& text, double tau);

template <>
inline Rational parse_scalar<Rational>(const std::string& text, double) {
    return Rational::parse(text);
}

template <>
inline Tolerant parse_scalar<Tolerant>(const std::string& text, double tau) {
    return Tolerant::parse(text).with_tau(tau);
}

}  // namespace detail

// Build the space a parsed document describes. With s = "auto", explicit
// tables take their measured minimal coefficient and builtins take their
// generator's canonical choice.
template <ScalarNumber S>
Space<S> realize_space(const SpaceSpec& spec) {
    const double tau = spec.mode == NumericMode::Float ? spec.tau : 0.0;
    std::optional<S> s_override;
    if (spec.s != "auto") {
        const S s = detail::parse_scalar<S>(spec.s, tau);
        if (s.is_negative()) throw CoefficientError("s must be nonnegative");
        s_override = s;
    }

    if (const auto* table = std::get_if<SpaceSpec::TableSource>(&spec.source)) {
        const std::size_t n = spec.carrier.size();
        if (table->rows.size() != n) throw ShapeError("table row count does not match carrier");
        DistanceTable<S> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (table->rows[i].size() != n) throw ShapeError("table is not square");
            for (std::size_t j = 0; j < n; ++j) {
                const S v = detail::parse_scalar<S>(table->rows[i][j], tau);
                if (v.is_negative()) throw ShapeError("distances must be nonnegative");
                t.at(i, j) = v;
            }
        }
        const S s = s_override ? *s_override : minimal_coefficient(t);
        return Space<S>::build(spec.carrier, std::move(t), s);
    }

    const auto& b = std::get<SpaceSpec::BuiltinSource>(spec.source);
    BuiltinParams<S> params;
    for (const auto& g : b.grid) {
        params.grid.push_back(detail::parse_scalar<S>(g, tau));
    }
    for (const auto& [lo, hi] : b.intervals) {
        params.intervals.emplace_back(detail::parse_scalar<S>(lo, tau),
                                      detail::parse_scalar<S>(hi, tau));
    }
    params.s_override = s_override;
    return generate_builtin(b.name, params);
}

template <ScalarNumber S>
MultiMap<S> realize_map(const MapSpec& spec, const Space<S>& space) {
    if (spec.entries.size() != space.size()) {
        throw ParseError("map spec: expected one entry per carrier point");
    }
    std::vector<SubsetMask<S>> images(space.size(), SubsetMask<S>(space, 0));
    std::vector<bool> seen(space.size(), false);
    for (const auto& [label, targets] : spec.entries) {
        const auto x = space.index_of(label);
        if (!x) throw ParseError("map spec: unknown label '" + label + "'");
        if (seen[*x]) throw ParseError("map spec: duplicate entry for '" + label + "'");
        seen[*x] = true;
        std::uint32_t bits = 0;
        for (const auto& t : targets) {
            const auto y = space.index_of(t);
            if (!y) throw ParseError("map spec: unknown image label '" + t + "'");
            bits |= std::uint32_t{1} << *y;
        }
        images[*x] = SubsetMask<S>(space, bits);
    }
    return validate_map(space, images);
}

// Canonical re-serialization: explicit table, resolved coefficient, mode.
// parse(serialize(space)) rebuilds an identical space.
template <ScalarNumber S>
Json serialize_space(const Space<S>& space) {
    Json doc;
    doc["carrier"] = space.labels();
    Json rows = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < space.size(); ++j) {
            row.push_back(space.sigma(i, j).to_string());
        }
        rows.push_back(std::move(row));
    }
    doc["metric"] = Json{{"table", std::move(rows)}};
    doc["s"] = space.coefficient().to_string();
    if constexpr (std::is_same_v<S, Tolerant>) {
        doc["mode"] = "float";
        doc["tau"] = space.sigma(0, 0).tau();
    } else {
        doc["mode"] = "exact";
    }
    return doc;
}

template <ScalarNumber S>
Json serialize_map(const MultiMap<S>& map) {
    Json entries = Json::object();
    for (std::size_t x = 0; x < map.space->size(); ++x) {
        Json targets = Json::array();
        for (std::size_t y : map.image(x).indices()) {
            targets.push_back(map.space->label(y));
        }
        entries[map.space->label(x)] = std::move(targets);
    }
    return Json{{"map", std::move(entries)}};
}

// FNV-1a 64, hex; pins input identity inside reports without heavyweight
// hashing.
inline std::string fnv1a_digest(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace wpb
