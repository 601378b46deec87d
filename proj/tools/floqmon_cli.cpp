// Command-line driver: simulate a monitored-circuit sweep from a config
// file, analyze the recorded outcome datasets, and export figure data.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floqmon/config.hpp"
#include "floqmon/postprocess.hpp"
#include "floqmon/runner.hpp"

namespace {
constexpr int kExitBadConfig = 2;
constexpr int kExitIoFailure = 3;
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floqmon: monitored Floquet-MBL circuit simulator and dataset analyzer"};
    app.require_subcommand(1);

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "run the sweep described by a config file");
    simulate->add_option("config", config_path, "JSON config file")->required();

    std::string analyze_dir;
    bool centered = false;
    int baseline_repeats = 16;
    std::uint64_t baseline_seed = 0;
    bool have_baseline_seed = false;
    auto* analyze = app.add_subcommand("analyze", "PCA / mutual-information analysis of a run");
    analyze->add_option("dir", analyze_dir, "run directory")->required();
    analyze->add_flag("--centered", centered, "also emit mean-subtracted PCA spectra");
    analyze->add_option("--baseline-repeats", baseline_repeats,
                        "random datasets averaged for xi_rand");
    analyze->add_option("--baseline-seed", baseline_seed, "seed for the random baseline")
        ->each([&](const std::string&) { have_baseline_seed = true; });

    std::vector<std::string> report_dirs;
    std::string report_out = "report";
    auto* report = app.add_subcommand("report", "export figure-data CSVs from run directories");
    report->add_option("dirs", report_dirs, "run directories")->required();
    report->add_option("-o,--out", report_out, "output directory (default: ./report)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            floqmon::RunConfig cfg = floqmon::load_config(config_path);
            auto dir = floqmon::simulate_run(cfg);
            std::cout << "run complete: " << dir.string() << "\n";
        } else if (analyze->parsed()) {
            floqmon::AnalyzeOptions opts;
            opts.centered = centered;
            opts.baseline_repeats = baseline_repeats;
            if (have_baseline_seed) opts.baseline_seed = baseline_seed;
            floqmon::analyze_run(analyze_dir, opts);
            std::cout << "analysis written to " << analyze_dir << "\n";
        } else if (report->parsed()) {
            std::vector<std::filesystem::path> dirs(report_dirs.begin(), report_dirs.end());
            floqmon::report_runs(dirs, report_out);
            std::cout << "report written to " << report_out << "\n";
        }
    } catch (const floqmon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const floqmon::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
