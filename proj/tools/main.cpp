#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wpb/cli.hpp"

namespace {

struct CommonArgs {
    std::string format = "text";
    std::optional<std::string> out;
};

int emit(const wpb::cli::CommandResult& result, const CommonArgs& common) {
    const std::string rendered = wpb::cli::render_report(result.report, common.format);
    std::cout << rendered;
    if (common.out) {
        std::ofstream f(*common.out);
        if (!f) {
            std::cerr << "error: cannot write '" << *common.out << "'\n";
            return wpb::cli::kExitInputError;
        }
        f << rendered;
    }
    return result.exit_code;
}

void add_common(CLI::App* cmd, CommonArgs& common) {
    cmd->add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", common.out, "Also write the report to this file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite weak partial b-metric spaces: axiom checking, H+ set distances,\n"
                 "multivalued contraction tests, and constructive fixed-point iteration."};
    app.require_subcommand(1);
    CommonArgs common;

    std::string spec_path, map_path, start_label;
    std::optional<std::string> k_arg;
    std::vector<std::string> set_args;
    std::size_t max_iter = wpb::kDefaultMaxIterations;
    bool force = false;
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::size_t carrier_max = 6;
    std::string fuzz_out = "wpb-fuzz";

    auto* check = app.add_subcommand("check", "Validate a space: axioms, minimal coefficient, "
                                              "induced b-metric");
    check->add_option("--spec", spec_path, "Space document (JSON)")->required();
    add_common(check, common);

    auto* hausdorff = app.add_subcommand("hausdorff", "Point-set distances, directed excesses, "
                                                      "H+ values, closedness");
    hausdorff->add_option("--spec", spec_path, "Space document (JSON)")->required();
    hausdorff
        ->add_option("--set", set_args,
                     "Subset as comma-separated labels; repeatable; \"\" is the empty set")
        ->required()
        ->allow_extra_args(false);
    add_common(hausdorff, common);

    auto* contraction = app.add_subcommand("contraction", "Test the H+-contraction conditions "
                                                          "and estimate the minimal k");
    contraction->add_option("--spec", spec_path, "Space document (JSON)")->required();
    contraction->add_option("--map", map_path, "Map document (JSON)")->required();
    contraction->add_option("--k", k_arg, "Judge the shrinkage condition against this k");
    add_common(contraction, common);

    auto* iterate = app.add_subcommand("iterate", "Run the constructive fixed-point iteration "
                                                  "with per-step bound checks");
    iterate->add_option("--spec", spec_path, "Space document (JSON)")->required();
    iterate->add_option("--map", map_path, "Map document (JSON)")->required();
    iterate->add_option("--start", start_label, "Start point label")->required();
    iterate->add_option("--k", k_arg, "Contraction constant in (0,1); defaults to the midpoint "
                                      "of (minimal k, 1)");
    iterate->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    iterate->add_flag("--force", force, "Iterate even when the contraction conditions fail "
                                        "(bound checks become data)");
    add_common(iterate, common);

    auto* reproduce = app.add_subcommand("reproduce-paper", "Recompute every value of the "
                                                            "bundled worked example and flag "
                                                            "discrepancies");
    add_common(reproduce, common);

    auto* fuzz = app.add_subcommand("fuzz", "Seeded random spaces and conforming maps; property "
                                            "suites and iteration as falsification targets");
    fuzz->add_option("--seed", seed, "RNG seed")->capture_default_str();
    fuzz->add_option("--count", count, "Number of random spaces")->capture_default_str();
    fuzz->add_option("--carrier-max", carrier_max, "Largest carrier size (at most 8)")
        ->capture_default_str();
    fuzz->add_option("--out", fuzz_out, "Directory for counterexample files")
        ->capture_default_str();
    fuzz->add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return wpb::cli::kExitInputError;
    }

    try {
        if (check->parsed()) return emit(wpb::cli::cmd_check(spec_path), common);
        if (hausdorff->parsed()) return emit(wpb::cli::cmd_hausdorff(spec_path, set_args), common);
        if (contraction->parsed()) {
            return emit(wpb::cli::cmd_contraction(spec_path, map_path, k_arg), common);
        }
        if (iterate->parsed()) {
            return emit(wpb::cli::cmd_iterate(spec_path, map_path, start_label, k_arg, max_iter,
                                              force, common.out),
                        common);
        }
        if (reproduce->parsed()) return emit(wpb::cli::cmd_reproduce_paper(), common);
        if (fuzz->parsed()) {
            if (count < 1) {
                std::cerr << "error: --count must be at least 1\n";
                return wpb::cli::kExitInputError;
            }
            if (carrier_max < 1 || carrier_max > wpb::kFuzzCarrierCap) {
                std::cerr << "error: --carrier-max must lie in [1," << wpb::kFuzzCarrierCap
                          << "]\n";
                return wpb::cli::kExitInputError;
            }
            return emit(wpb::cli::cmd_fuzz(seed, count, carrier_max, fuzz_out), common);
        }
    } catch (const wpb::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wpb::cli::kExitInputError;
    } catch (const wpb::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wpb::cli::kExitInputError;
    } catch (const wpb::CoefficientError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wpb::cli::kExitInputError;
    } catch (const wpb::CarrierTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wpb::cli::kExitInputError;
    } catch (const wpb::Error& e) {
        // remaining library errors are verified-property failures
        std::cerr << "error: " << e.what() << "\n";
        return wpb::cli::kExitPropertyFailure;
    }
    return wpb::cli::kExitInputError;
}
