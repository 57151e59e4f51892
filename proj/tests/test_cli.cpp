#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "wpb/cli.hpp"

using wpb::Json;
using wpb::Rational;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wpb-test-" + std::to_string(
            std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }

    std::string write(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream f(p);
        f << content;
        return p.string();
    }
};

const char* kWorkedExampleSpec = R"({
  "metric": {"builtin": {"name": "paper-example-4"}},
  "s": "auto",
  "mode": "exact"
})";

const char* kWorkedExampleMap = R"({
  "map": {"0": ["0"], "1/2": ["0", "1/2"], "1": ["0", "1"]}
})";

}  // namespace

TEST_CASE("check accepts the bundled worked example") {
    TempDir dir;
    const auto spec = dir.write("spec.json", kWorkedExampleSpec);
    const auto result = wpb::cli::cmd_check(spec);
    CHECK(result.exit_code == 0);
    CHECK(result.report["axioms"]["pass"] == true);
    CHECK(result.report["axioms"]["minimal_s"] == "1");
    CHECK(result.report["space"]["s"] == "1");
    CHECK(result.report["induced"]["coefficient"] == "3/2");
    CHECK(result.report["induced"]["exceeds_two_s"] == false);
}

TEST_CASE("check reports the generator coefficient and the measured one") {
    TempDir dir;
    const auto spec = dir.write("spec.json", R"({
      "metric": {"builtin": {"name": "sq-plus-one", "params": {"grid": ["0", "1", "2"]}}},
      "s": "auto"
    })");
    const auto result = wpb::cli::cmd_check(spec);
    CHECK(result.exit_code == 0);
    CHECK(result.report["space"]["s"] == "2");             // canonical generator choice
    CHECK(result.report["axioms"]["minimal_s"] == "5/4");  // measured on this grid
}

TEST_CASE("check rejects an axiom-violating explicit table with witnesses") {
    TempDir dir;
    const auto spec = dir.write("spec.json", R"({
      "carrier": ["a", "b"],
      "metric": {"table": [["0", "1"], ["2", "0"]]},
      "s": "1"
    })");
    const auto result = wpb::cli::cmd_check(spec);
    CHECK(result.exit_code == 1);
    CHECK(result.report["axioms"]["WPB3"] == false);
    CHECK(result.report["axioms"]["witnesses"].size() > 0);
}

TEST_CASE("malformed rational exits 2") {
    TempDir dir;
    const auto spec = dir.write("spec.json", R"({
      "carrier": ["a"],
      "metric": {"table": [["3/0"]]},
      "s": "1"
    })");
    CHECK_THROWS_AS(wpb::cli::cmd_check(spec), wpb::ParseError);
}

TEST_CASE("spec parsing validates structure") {
    using wpb::parse_space_spec_text;
    CHECK_THROWS_AS(parse_space_spec_text("{", "t"), wpb::ParseError);
    CHECK_THROWS_AS(parse_space_spec_text(R"({"s": "1"})", "t"), wpb::ParseError);
    CHECK_THROWS_AS(parse_space_spec_text(
                        R"({"metric": {"table": [["0"]], "builtin": {"name": "x"}}})", "t"),
                    wpb::ParseError);
    CHECK_THROWS_AS(parse_space_spec_text(
                        R"({"carrier": ["a"], "metric": {"table": [[0.25]]}, "mode": "exact"})", "t"),
                    wpb::ParseError);
    // float entries are fine in float mode
    CHECK_NOTHROW(parse_space_spec_text(
        R"({"carrier": ["a"], "metric": {"table": [[0.25]]}, "mode": "float"})", "t"));
    CHECK_THROWS_AS(parse_space_spec_text(
                        R"({"carrier": ["a"], "metric": {"table": [["0"]]}, "tau": 0.1})", "t"),
                    wpb::ParseError);
}

TEST_CASE("float mode builds the worked example within tolerance") {
    TempDir dir;
    const auto spec = dir.write("spec.json", R"({
      "metric": {"builtin": {"name": "paper-example-4"}},
      "mode": "float",
      "tau": 1e-9
    })");
    const auto result = wpb::cli::cmd_check(spec);
    CHECK(result.exit_code == 0);
    CHECK(result.report["space"]["mode"] == "float");
    CHECK(result.report["axioms"]["pass"] == true);
}

TEST_CASE("spec round-trips through serialization") {
    wpb::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto space = wpb::random_space<Rational>(rng, 5);
        const Json doc = wpb::serialize_space(space);
        const auto spec = wpb::parse_space_spec(doc);
        const auto rebuilt = wpb::realize_space<Rational>(spec);
        CHECK(rebuilt.table() == space.table());
        CHECK(rebuilt.coefficient() == space.coefficient());
        CHECK(rebuilt.labels() == space.labels());

        // and once more through text
        const auto spec2 = wpb::parse_space_spec_text(doc.dump(), "roundtrip");
        const auto rebuilt2 = wpb::realize_space<Rational>(spec2);
        CHECK(rebuilt2.table() == space.table());
    }
}

TEST_CASE("map documents round-trip") {
    wpb::Rng rng(19);
    for (int i = 0; i < 10; ++i) {
        const auto pair = wpb::random_conforming_pair<Rational>(rng, 4);
        const auto map = pair.map();
        const Json doc = wpb::serialize_map(map);
        const auto spec = wpb::parse_map_spec(doc);
        const auto rebuilt = wpb::realize_map(spec, pair.space);
        for (std::size_t x = 0; x < pair.space.size(); ++x) {
            CHECK(rebuilt.image(x).bits == map.image(x).bits);
        }
    }
}

TEST_CASE("hausdorff command reproduces the worked-example values") {
    TempDir dir;
    const auto spec = dir.write("spec.json", kWorkedExampleSpec);
    const auto result = wpb::cli::cmd_hausdorff(spec, {"0", "0,1/2", ""});
    CHECK(result.exit_code == 0);
    // H+(U1,U2) = 3/16; anything against the empty U3 is 0
    bool found_pair = false, found_empty = false;
    for (const auto& h : result.report["hplus"]) {
        if (h["pair"] == "U1,U2") {
            CHECK(h["hplus"] == "3/16");
            found_pair = true;
        }
        if (h["pair"] == "U1,U3") {
            CHECK(h["hplus"] == "0");
            found_empty = true;
        }
    }
    CHECK(found_pair);
    CHECK(found_empty);
    CHECK(result.report["sets"][0]["closed"] == true);
    CHECK(result.report["sets"][2]["closed"] != true);  // convention note string

    CHECK_THROWS_AS(wpb::cli::cmd_hausdorff(spec, {"0,zzz"}), wpb::ParseError);
}

TEST_CASE("contraction command verdicts") {
    TempDir dir;
    const auto spec = dir.write("spec.json", kWorkedExampleSpec);
    const auto map = dir.write("map.json", kWorkedExampleMap);
    const auto result = wpb::cli::cmd_contraction(spec, map, std::nullopt);
    CHECK(result.exit_code == 0);
    CHECK(result.report["condition1"]["holds"] == true);
    CHECK(result.report["condition1"]["minimal_k"] == "0");
    CHECK(result.report["condition2"]["holds"] == true);
    CHECK(result.report["default_k"] == "1/2");

    const auto with_k = wpb::cli::cmd_contraction(spec, map, std::string("1/3"));
    CHECK(with_k.exit_code == 0);
    CHECK(with_k.report["conforming_for_k"] == true);

    const auto bad = dir.write("bad-map.json", R"({"map": {"0": [], "1/2": ["0"], "1": ["0"]}})");
    const auto failed = wpb::cli::cmd_contraction(spec, bad, std::nullopt);
    CHECK(failed.exit_code == 1);
}

TEST_CASE("iterate command runs the worked example") {
    TempDir dir;
    const auto spec = dir.write("spec.json", kWorkedExampleSpec);
    const auto map = dir.write("map.json", kWorkedExampleMap);
    const auto result = wpb::cli::cmd_iterate(spec, map, "1", std::nullopt,
                                              wpb::kDefaultMaxIterations, false, std::nullopt);
    CHECK(result.exit_code == 0);
    CHECK(result.report["trace"]["status"] == "fixed-point");
    CHECK(result.report["trace"]["points"].size() == 1);
    CHECK(result.report["all_fixed_points"] == Json::array({"0", "1/2", "1"}));
}

TEST_CASE("iterate with force walks the chasing map to 0") {
    TempDir dir;
    const auto spec = dir.write("spec.json", kWorkedExampleSpec);
    const auto map = dir.write("map.json", R"({
      "map": {"0": ["0"], "1/2": ["0"], "1": ["0", "1/2"]}
    })");
    const auto gated = wpb::cli::cmd_iterate(spec, map, "1", std::string("3/4"),
                                             wpb::kDefaultMaxIterations, false, std::nullopt);
    CHECK(gated.exit_code == 1);  // approximate selection fails

    const auto result = wpb::cli::cmd_iterate(spec, map, "1", std::string("3/4"),
                                              wpb::kDefaultMaxIterations, true, std::nullopt);
    CHECK(result.exit_code == 0);
    CHECK(result.report["trace"]["points"] == Json::array({"1", "1/2", "0"}));
    CHECK(result.report["trace"]["terminal"] == "0");
    CHECK(result.report["rate_bounds_ok"] == true);
    CHECK(result.report["geometric_bound_ok"] == true);
    CHECK(result.report["step_bounds_ok"] == false);
}

TEST_CASE("iterate writes a counterexample file on non-convergence") {
    TempDir dir;
    const auto spec = dir.write("spec.json", R"({
      "carrier": ["a", "b"],
      "metric": {"table": [["1/2", "2"], ["2", "1/3"]]},
      "s": "auto"
    })");
    const auto map = dir.write("map.json", R"({"map": {"a": ["b"], "b": ["a"]}})");
    const auto result = wpb::cli::cmd_iterate(spec, map, "a", std::string("1/2"),
                                              wpb::kDefaultMaxIterations, true, dir.path.string());
    CHECK(result.exit_code == 3);
    CHECK(result.report["trace"]["status"] == "cycle");
    REQUIRE(result.report.contains("counterexample_file"));
    CHECK(fs::exists(result.report["counterexample_file"].get<std::string>()));
}

TEST_CASE("reproduce-paper passes with exactly one flagged discrepancy") {
    const auto result = wpb::cli::cmd_reproduce_paper();
    CHECK(result.exit_code == 0);
    CHECK(result.report["flagged_discrepancies"] == 1);
    CHECK(result.report["mismatches"] == 0);
    bool found_erratum = false;
    for (const auto& row : result.report["rows"]) {
        if (row["status"] == "erratum") {
            found_erratum = true;
            CHECK(row["computed"] == "1/2");
            CHECK(row["printed"] == "3/4");
        }
    }
    CHECK(found_erratum);
}

TEST_CASE("fuzz is deterministic per seed and clean on healthy code") {
    TempDir dir;
    const auto a = wpb::cli::cmd_fuzz(1, 5, 5, (dir.path / "fa").string());
    const auto b = wpb::cli::cmd_fuzz(1, 5, 5, (dir.path / "fb").string());
    CHECK(a.exit_code == 0);
    CHECK(a.report["counterexamples"] == 0);
    // identical seeds give byte-identical reports
    CHECK(a.report.dump() == b.report.dump());

    const auto c = wpb::cli::cmd_fuzz(2, 5, 5, (dir.path / "fc").string());
    CHECK(c.report["spaces_tested"] == 5);
    CHECK_THROWS_AS(wpb::fuzz_run(1, 0, 5), wpb::ShapeError);
    CHECK_THROWS_AS(wpb::fuzz_run(1, 1, 9), wpb::CarrierTooLarge);
}

TEST_CASE("report rendering is stable and honors both formats") {
    const auto result = wpb::cli::cmd_reproduce_paper();
    const auto text1 = wpb::cli::render_report(result.report, "text");
    const auto text2 = wpb::cli::render_report(result.report, "text");
    CHECK(text1 == text2);
    CHECK(text1.find("reproduce-paper") != std::string::npos);
    const auto json = wpb::cli::render_report(result.report, "json");
    CHECK(Json::parse(json) == Json::parse(result.report.dump()));
}
