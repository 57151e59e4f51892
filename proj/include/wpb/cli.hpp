#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wpb/fuzz.hpp"
#include "wpb/iteration.hpp"
#include "wpb/propositions.hpp"
#include "wpb/random_gen.hpp"
#include "wpb/reproduce.hpp"
#include "wpb/serialize.hpp"

namespace wpb::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitCounterexample = 4;

struct CommandResult {
    int exit_code = kExitOk;
    Json report;
};

// Stable YAML-ish rendering of a report tree; keys keep insertion order, so
// output bytes are a pure function of the report.
inline void render_text_into(const Json& node, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            if (value.is_object() || value.is_array()) {
                out += pad + key + ":";
                if (value.empty()) {
                    out += value.is_object() ? " {}" : " []";
                    out += "\n";
                } else {
                    out += "\n";
                    render_text_into(value, out, indent + 1);
                }
            } else {
                out += pad + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
            }
        }
    } else if (node.is_array()) {
        bool scalars_only = true;
        for (const auto& v : node) {
            if (v.is_object() || v.is_array()) scalars_only = false;
        }
        if (scalars_only) {
            std::string line = pad + "[";
            bool first = true;
            for (const auto& v : node) {
                if (!first) line += ", ";
                line += v.is_string() ? v.get<std::string>() : v.dump();
                first = false;
            }
            out += line + "]\n";
        } else {
            for (const auto& v : node) {
                out += pad + "-\n";
                render_text_into(v, out, indent + 1);
            }
        }
    } else {
        out += pad + (node.is_string() ? node.get<std::string>() : node.dump()) + "\n";
    }
}

inline std::string render_report(const Json& report, const std::string& format) {
    if (format == "json") return report.dump(2) + "\n";
    std::string out;
    render_text_into(report, out, 0);
    return out;
}

namespace detail {

inline Json input_entry(const std::string& path, const std::string& bytes) {
    return Json{{"path", path}, {"digest", fnv1a_digest(bytes)}};
}

template <ScalarNumber S>
Json witness_json(const AxiomWitness<S>& w, const std::vector<std::string>& labels) {
    Json points = Json::array();
    for (int i = 0; i < w.arity; ++i) {
        const std::size_t p = w.points[static_cast<std::size_t>(i)];
        points.push_back(p < labels.size() ? labels[p] : std::to_string(p));
    }
    return Json{{"axiom", axiom_name(w.axiom)},
                {"points", std::move(points)},
                {"lhs", w.lhs.to_string()},
                {"rhs", w.rhs.to_string()}};
}

template <ScalarNumber S>
Json axioms_json(const AxiomReport<S>& rep, const std::vector<std::string>& labels) {
    Json j;
    j["WPB1"] = rep.wpb1;
    j["WPB1-strict"] = rep.wpb1_strict;
    j["WPB2"] = rep.wpb2;
    j["WPB3"] = rep.wpb3;
    j["WPB4"] = rep.wpb4;
    j["zero-separation"] = rep.zero_separation;
    j["pass"] = rep.pass();
    Json ws = Json::array();
    for (const auto& w : rep.witnesses) ws.push_back(witness_json(w, labels));
    j["witnesses"] = std::move(ws);
    if (rep.minimal_s) {
        j["minimal_s"] = rep.minimal_s->to_string();
        if (rep.minimal_s_witness) {
            const auto& w = *rep.minimal_s_witness;
            Json t = Json::array();
            for (std::size_t p : {w.x, w.z, w.y}) {
                t.push_back(p < labels.size() ? labels[p] : std::to_string(p));
            }
            j["minimal_s_witness"] = std::move(t);
        }
    } else {
        j["minimal_s"] = "none";
    }
    return j;
}

template <ScalarNumber S>
Json table_json(const DistanceTable<S>& t) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.n; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < t.n; ++j) row.push_back(t.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

// Labels a failed build would have used; explicit carriers win, builtins
// derive them from their parameters.
inline std::vector<std::string> intended_labels(const SpaceSpec& spec) {
    if (!spec.carrier.empty()) return spec.carrier;
    if (const auto* b = std::get_if<SpaceSpec::BuiltinSource>(&spec.source)) {
        if (!b->grid.empty()) return b->grid;
        std::vector<std::string> out;
        for (const auto& [lo, hi] : b->intervals) out.push_back("[" + lo + "," + hi + "]");
        return out;
    }
    return {};
}

template <ScalarNumber S>
Json space_json(const Space<S>& space) {
    Json j;
    j["points"] = space.size();
    j["labels"] = space.labels();
    j["s"] = space.coefficient().to_string();
    if constexpr (std::is_same_v<S, Tolerant>) {
        j["mode"] = "float";
        j["tau"] = space.sigma(0, 0).tau();
    } else {
        j["mode"] = "exact";
    }
    j["sigma"] = table_json(space.table());
    return j;
}

template <class Fn>
CommandResult with_mode(const SpaceSpec& spec, Fn&& fn) {
    if (spec.mode == NumericMode::Exact) {
        return fn(std::type_identity<Rational>{});
    }
    return fn(std::type_identity<Tolerant>{});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// check

template <ScalarNumber S>
CommandResult run_check(const SpaceSpec& spec, Json inputs) {
    Json report;
    report["command"] = "check";
    report["inputs"] = std::move(inputs);
    try {
        Space<S> space = realize_space<S>(spec);
        report["space"] = detail::space_json(space);
        report["axioms"] = detail::axioms_json(space.axiom_report(), space.labels());
        const auto induced = induced_b_metric(space);
        Json ij;
        ij["table"] = detail::table_json(induced.table);
        ij["coefficient"] = induced.coefficient.to_string();
        ij["exceeds_two_s"] = induced.exceeds_two_s;
        report["induced"] = std::move(ij);
        report["exit"] = kExitOk;
        return {kExitOk, std::move(report)};
    } catch (const typename Space<S>::AxiomViolation& e) {
        report["axioms"] = detail::axioms_json(e.report, detail::intended_labels(spec));
        report["error"] = e.what();
        report["exit"] = kExitPropertyFailure;
        return {kExitPropertyFailure, std::move(report)};
    }
}

inline CommandResult cmd_check(const std::string& spec_path) {
    const std::string bytes = read_file(spec_path);
    const SpaceSpec spec = parse_space_spec_text(bytes, spec_path);
    Json inputs{{"spec", detail::input_entry(spec_path, bytes)}};
    return detail::with_mode(spec, [&]<class S>(std::type_identity<S>) {
        return run_check<S>(spec, inputs);
    });
}

// ---------------------------------------------------------------------------
// hausdorff

template <ScalarNumber S>
CommandResult run_hausdorff(const SpaceSpec& spec, const std::vector<std::string>& set_args,
                            Json inputs) {
    Space<S> space = realize_space<S>(spec);
    std::vector<SubsetMask<S>> sets;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < set_args.size(); ++i) {
        std::uint32_t bits = 0;
        std::stringstream ss(set_args[i]);
        std::string token;
        while (std::getline(ss, token, ',')) {
            const auto start = token.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            const auto end = token.find_last_not_of(" \t");
            token = token.substr(start, end - start + 1);
            const auto idx = space.index_of(token);
            if (!idx) throw ParseError("unknown label '" + token + "'");
            bits |= std::uint32_t{1} << *idx;
        }
        sets.emplace_back(space, bits);
        names.push_back("U" + std::to_string(i + 1));
    }

    Json report;
    report["command"] = "hausdorff";
    report["inputs"] = std::move(inputs);
    report["space"] = detail::space_json(space);

    Json sets_json = Json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        Json sj;
        sj["name"] = names[i];
        Json labels = Json::array();
        for (std::size_t p : sets[i].indices()) labels.push_back(space.label(p));
        sj["elements"] = std::move(labels);
        if (sets[i].empty()) {
            sj["closed"] = "n/a (empty set; distances to it are 0 by convention)";
        } else {
            sj["closed"] = is_closed(sets[i]);
        }
        Json dists;
        for (std::size_t x = 0; x < space.size(); ++x) {
            dists[space.label(x)] = point_set_distance(x, sets[i]).to_string();
        }
        sj["point_distances"] = std::move(dists);
        sets_json.push_back(std::move(sj));
    }
    report["sets"] = std::move(sets_json);

    Json deltas = Json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = 0; j < sets.size(); ++j) {
            deltas.push_back(Json{{"from", names[i]},
                                  {"to", names[j]},
                                  {"delta", delta_directed(sets[i], sets[j]).to_string()}});
        }
    }
    report["delta"] = std::move(deltas);

    Json hs = Json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i; j < sets.size(); ++j) {
            hs.push_back(Json{{"pair", names[i] + "," + names[j]},
                              {"hplus", hplus(sets[i], sets[j]).to_string()}});
        }
    }
    report["hplus"] = std::move(hs);
    report["exit"] = kExitOk;
    return {kExitOk, std::move(report)};
}

inline CommandResult cmd_hausdorff(const std::string& spec_path,
                                   const std::vector<std::string>& set_args) {
    const std::string bytes = read_file(spec_path);
    const SpaceSpec spec = parse_space_spec_text(bytes, spec_path);
    Json inputs{{"spec", detail::input_entry(spec_path, bytes)}};
    return detail::with_mode(spec, [&]<class S>(std::type_identity<S>) {
        return run_hausdorff<S>(spec, set_args, inputs);
    });
}

// ---------------------------------------------------------------------------
// contraction

template <ScalarNumber S>
Json condition1_json(const ConditionOneResult<S>& c1, const Space<S>& space) {
    Json j;
    j["holds"] = c1.holds();
    j["minimal_k"] = c1.unbounded() ? Json("unbounded") : Json(c1.minimal_k.to_string());
    j["max_ratio"] = c1.minimal_k.to_string();
    if (c1.max_pair) {
        j["max_pair"] = Json::array({space.label(c1.max_pair->first), space.label(c1.max_pair->second)});
    }
    Json viols = Json::array();
    for (const auto& v : c1.violations) {
        viols.push_back(Json{{"x", space.label(v.x)},
                             {"y", space.label(v.y)},
                             {"hplus_term", v.hplus_term.to_string()}});
    }
    j["zero_distance_violations"] = std::move(viols);
    Json rows = Json::array();
    for (const auto& r : c1.rows) {
        Json row{{"x", space.label(r.x)}, {"y", space.label(r.y)}, {"hplus", r.hplus_term.to_string()}};
        row["ratio"] = r.ratio ? Json(r.ratio->to_string()) : Json("-");
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

template <ScalarNumber S>
Json condition2_json(const ConditionTwoResult<S>& c2, const Space<S>& space) {
    Json j;
    j["holds"] = c2.pass;
    Json rows = Json::array();
    for (const auto& r : c2.rows) {
        rows.push_back(Json{{"x", space.label(r.x)},
                            {"y", space.label(r.y)},
                            {"nearest_z", space.label(r.z)},
                            {"min_sigma", r.min_sigma.to_string()},
                            {"hplus_bound", r.hplus_bound.to_string()},
                            {"slack", r.slack.to_string()},
                            {"pass", r.pass}});
    }
    j["rows"] = std::move(rows);
    return j;
}

template <ScalarNumber S>
CommandResult run_contraction(const SpaceSpec& spec, const MapSpec& map_spec,
                              const std::optional<std::string>& k_arg, Json inputs) {
    Space<S> space = realize_space<S>(spec);
    Json report;
    report["command"] = "contraction";
    report["inputs"] = std::move(inputs);
    report["space"] = detail::space_json(space);
    try {
        MultiMap<S> map = realize_map(map_spec, space);
        report["map"] = serialize_map(map)["map"];
        const auto rep = check_contraction(map);
        report["condition1"] = condition1_json(rep.condition1, space);
        report["condition2"] = condition2_json(rep.condition2, space);
        bool ok = rep.conforming();
        if (k_arg) {
            const S k = wpb::detail::parse_scalar<S>(*k_arg, spec.tau);
            if (!(S::from_int(0) < k) || !(k < S::from_int(1))) {
                throw CoefficientError("k must lie strictly between 0 and 1");
            }
            report["k"] = k.to_string();
            report["conforming_for_k"] = rep.conforming_for(k);
            ok = rep.conforming_for(k);
        }
        if (auto dk = default_contraction_k(rep.condition1)) {
            report["default_k"] = dk->to_string();
        }
        report["conforming"] = rep.conforming();
        const int code = ok ? kExitOk : kExitPropertyFailure;
        report["exit"] = code;
        return {code, std::move(report)};
    } catch (const EmptyImage& e) {
        report["error"] = e.what();
        report["exit"] = kExitPropertyFailure;
        return {kExitPropertyFailure, std::move(report)};
    } catch (const NotClosed& e) {
        report["error"] = e.what();
        report["exit"] = kExitPropertyFailure;
        return {kExitPropertyFailure, std::move(report)};
    }
}

inline CommandResult cmd_contraction(const std::string& spec_path, const std::string& map_path,
                                     const std::optional<std::string>& k_arg) {
    const std::string spec_bytes = read_file(spec_path);
    const std::string map_bytes = read_file(map_path);
    const SpaceSpec spec = parse_space_spec_text(spec_bytes, spec_path);
    const MapSpec map_spec = parse_map_spec_text(map_bytes, map_path);
    Json inputs{{"spec", detail::input_entry(spec_path, spec_bytes)},
                {"map", detail::input_entry(map_path, map_bytes)}};
    return detail::with_mode(spec, [&]<class S>(std::type_identity<S>) {
        return run_contraction<S>(spec, map_spec, k_arg, inputs);
    });
}

// ---------------------------------------------------------------------------
// iterate

template <ScalarNumber S>
Json trace_json(const IterationTrace<S>& trace) {
    const Space<S>& sp = *trace.space;
    Json j;
    j["k"] = trace.k.to_string();
    Json pts = Json::array();
    for (std::size_t p : trace.points) pts.push_back(sp.label(p));
    j["points"] = std::move(pts);
    Json steps = Json::array();
    for (const auto& st : trace.steps) {
        Json sj{{"from", sp.label(st.from)}, {"to", sp.label(st.to)}, {"sigma", st.sigma.to_string()}};
        sj["hplus_punctured"] = st.hplus_punctured ? Json(st.hplus_punctured->to_string()) : Json("-");
        if (st.epsilon) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", *st.epsilon);
            sj["epsilon"] = buf;
        } else {
            sj["epsilon"] = "-";
        }
        sj["step_bound_ok"] = st.step_bound_ok ? Json(*st.step_bound_ok) : Json("-");
        sj["rate_bound_ok"] = st.rate_bound_ok ? Json(*st.rate_bound_ok) : Json("-");
        steps.push_back(std::move(sj));
    }
    j["steps"] = std::move(steps);
    j["status"] = termination_name(trace.status);
    j["terminal"] = sp.label(trace.terminal());
    return j;
}

template <ScalarNumber S>
CommandResult run_iterate(const SpaceSpec& spec, const MapSpec& map_spec, const std::string& start,
                          const std::optional<std::string>& k_arg, std::size_t max_iter, bool force,
                          const std::optional<std::string>& out_dir, Json inputs) {
    Space<S> space = realize_space<S>(spec);
    MultiMap<S> map = realize_map(map_spec, space);
    const auto u0 = space.index_of(start);
    if (!u0) throw ParseError("unknown start label '" + start + "'");

    IterationOptions<S> opts;
    opts.max_iter = max_iter;
    opts.require_conforming = !force;
    if (k_arg) opts.k = wpb::detail::parse_scalar<S>(*k_arg, spec.tau);

    Json report;
    report["command"] = "iterate";
    report["inputs"] = std::move(inputs);
    report["start"] = start;
    try {
        const IterationTrace<S> trace = iterate_fixed_point(map, *u0, opts);
        report["trace"] = trace_json(trace);
        const auto rate = verify_rate_bounds(trace, trace.k);
        report["geometric_bound_ok"] = rate.ok;
        report["rate_bounds_ok"] = trace.all_rate_bounds_hold();
        report["step_bounds_ok"] = trace.all_step_bounds_hold();
        const auto fixed = find_all_fixed_points(map);
        Json fj = Json::array();
        for (std::size_t f : fixed) fj.push_back(space.label(f));
        report["all_fixed_points"] = std::move(fj);

        int code = kExitOk;
        if (!trace.fixed_point_reached()) {
            code = kExitNonConvergence;
            // a non-converging run is worth keeping: dump a reproducible case
            const std::string dir = out_dir.value_or(".");
            const std::string path = dir + "/wpb-nonconvergence.json";
            Json cx{{"spec", serialize_space(space)},
                    {"map", serialize_map(map)},
                    {"start", start},
                    {"k", trace.k.to_string()},
                    {"status", termination_name(trace.status)}};
            std::ofstream f(path);
            f << cx.dump(2) << "\n";
            report["counterexample_file"] = path;
        } else if (!rate.ok || !trace.all_rate_bounds_hold()) {
            code = kExitPropertyFailure;
        }
        report["exit"] = code;
        return {code, std::move(report)};
    } catch (const PreconditionFailed& e) {
        report["error"] = e.what();
        report["exit"] = kExitPropertyFailure;
        return {kExitPropertyFailure, std::move(report)};
    }
}

inline CommandResult cmd_iterate(const std::string& spec_path, const std::string& map_path,
                                 const std::string& start, const std::optional<std::string>& k_arg,
                                 std::size_t max_iter, bool force,
                                 const std::optional<std::string>& out_dir) {
    const std::string spec_bytes = read_file(spec_path);
    const std::string map_bytes = read_file(map_path);
    const SpaceSpec spec = parse_space_spec_text(spec_bytes, spec_path);
    const MapSpec map_spec = parse_map_spec_text(map_bytes, map_path);
    Json inputs{{"spec", detail::input_entry(spec_path, spec_bytes)},
                {"map", detail::input_entry(map_path, map_bytes)}};
    return detail::with_mode(spec, [&]<class S>(std::type_identity<S>) {
        return run_iterate<S>(spec, map_spec, start, k_arg, max_iter, force, out_dir, inputs);
    });
}

// ---------------------------------------------------------------------------
// reproduce-paper

inline CommandResult cmd_reproduce_paper() {
    const ReproduceResult res = reproduce_worked_example();
    Json report;
    report["command"] = "reproduce-paper";
    report["inputs"] = Json::object();
    Json rows = Json::array();
    for (const auto& row : res.rows) {
        Json rj{{"quantity", row.quantity}};
        if (row.status != "note") {
            rj["computed"] = row.computed;
            rj["printed"] = row.printed;
        }
        rj["status"] = row.status;
        if (!row.note.empty()) rj["note"] = row.note;
        rows.push_back(std::move(rj));
    }
    report["rows"] = std::move(rows);
    report["flagged_discrepancies"] = res.errata;
    report["mismatches"] = res.mismatches;
    const int code = res.pass() ? kExitOk : kExitPropertyFailure;
    report["exit"] = code;
    return {code, std::move(report)};
}

// ---------------------------------------------------------------------------
// fuzz

inline CommandResult cmd_fuzz(std::uint64_t seed, std::size_t count, std::size_t carrier_max,
                              const std::string& out_dir) {
    const FuzzOutcome outcome = fuzz_run(seed, count, carrier_max);
    Json report;
    report["command"] = "fuzz";
    report["inputs"] = Json{{"seed", seed}, {"count", count}, {"carrier_max", carrier_max}};
    report["spaces_tested"] = outcome.spaces;
    report["maps_tested"] = outcome.maps;
    report["iterations_run"] = outcome.iterations;
    report["proposition_suites"] = outcome.proposition_suites;
    report["flagged_induced_spaces"] = outcome.flagged_induced;
    report["counterexamples"] = outcome.counterexamples.size();

    Json files = Json::array();
    if (!outcome.counterexamples.empty()) {
        std::filesystem::create_directories(out_dir);
        for (std::size_t i = 0; i < outcome.counterexamples.size(); ++i) {
            const auto& cx = outcome.counterexamples[i];
            const std::string path = out_dir + "/counterexample-" + std::to_string(i) + ".json";
            Json body{{"property", cx.property}, {"detail", cx.detail}};
            std::ofstream f(path);
            f << body.dump(2) << "\n";
            files.push_back(path);
        }
    }
    report["counterexample_files"] = std::move(files);
    const int code = outcome.clean() ? kExitOk : kExitCounterexample;
    report["exit"] = code;
    return {code, std::move(report)};
}

}  // namespace wpb::cli
