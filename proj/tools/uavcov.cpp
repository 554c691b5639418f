#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "uavcov/config.hpp"
#include "uavcov/report.hpp"
#include "uavcov/svgplot.hpp"
#include "uavcov/sweep.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("UAVCOV_OUT_DIR"); env && *env) return env;
    return config_value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage analysis for UAV relay networks"};
    app.require_subcommand(1);

    std::string config_path, csv_path, out_override, engine_override;
    uint64_t seed_override = 0;
    bool seed_set = false, no_plots = false;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "evaluate a sweep described by a config file");
    run->add_option("config", config_path, "config file (JSON, // comments allowed)")
        ->required();
    run->add_option("--engine", engine_override, "analytic|mc|both");
    run->add_option("--seed", seed_override, "override the MC seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_override, "output directory");
    run->add_flag("--no-plots", no_plots, "skip SVG emission");
    run->add_option("--jobs", jobs, "worker threads (0 = hardware)");

    auto* compare = app.add_subcommand("compare", "summarise analytic-vs-MC agreement");
    compare->add_option("csv", csv_path, "results.csv from a `both` run")->required();
    compare->add_option("--out", out_override, "write the JSON summary here");

    auto* plots = app.add_subcommand("plots", "regenerate SVG views from a results CSV");
    plots->add_option("csv", csv_path, "results.csv")->required();
    plots->add_option("--out", out_override, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = uavcov::ExperimentConfig::from_file(config_path);
            if (!engine_override.empty()) cfg.engine = uavcov::engine_from_string(engine_override);
            if (seed_set) cfg.mc.seed = seed_override;
            cfg.output.dir = resolve_out_dir(out_override, cfg.output.dir);
            if (no_plots) cfg.output.plots = false;
            if (jobs > 0) cfg.jobs = jobs;

            const auto t0 = std::chrono::steady_clock::now();
            const auto outcome = uavcov::run_experiment(cfg);
            const std::chrono::duration<double> wall =
                std::chrono::steady_clock::now() - t0;
            std::cout << "wrote " << outcome.csv_path << " (" << outcome.rows.size()
                      << " rows, " << wall.count() << " s)\n";
            for (const auto& p : outcome.plot_paths) std::cout << "wrote " << p << "\n";
            if (outcome.failed_rows > 0) {
                std::cerr << outcome.failed_rows << " row(s) failed; see the error column\n";
                return 2;
            }
            return 0;
        }
        if (compare->parsed()) {
            const auto summary = uavcov::compare_report_file(csv_path);
            std::cout << summary.to_text();
            const std::string out =
                out_override.empty()
                    ? (std::filesystem::path(csv_path).parent_path() / "compare.json").string()
                    : out_override;
            std::ofstream(out, std::ios::binary) << summary.to_json();
            std::cout << "wrote " << out << "\n";
            return 0;
        }
        if (plots->parsed()) {
            const auto rows = uavcov::read_csv(csv_path);
            const std::string dir =
                out_override.empty()
                    ? std::filesystem::path(csv_path).parent_path().string()
                    : out_override;
            for (const auto& p : uavcov::emit_plots(rows, dir.empty() ? "." : dir)) {
                std::cout << "wrote " << p << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
