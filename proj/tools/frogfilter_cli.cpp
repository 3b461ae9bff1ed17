// frogfilter command-line driver.
//
//   frogfilter design <config.json> [--out DIR] [--seed S] [--reps K] [--quiet]
//   frogfilter report <summary.json>... [--csv-dir DIR]
//   frogfilter eval <coeffs.json> [--grid N] [--response FILE]

#include "frogfilter/baselines.hpp"
#include "frogfilter/config.hpp"
#include "frogfilter/errors.hpp"
#include "frogfilter/experiment.hpp"
#include "frogfilter/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace frogfilter;

namespace {

int design(const fs::path& config_path, const std::optional<fs::path>& out, const std::optional<std::uint64_t>& seed,
           const std::optional<std::size_t>& reps, bool quiet) {
    const auto config = load_config(config_path);
    RunOptions options;
    options.output_dir = out;
    options.seed = seed;
    options.repetitions = reps;
    options.log = quiet ? nullptr : &std::cerr;
    const auto outcome = run_experiment(config, options);
    if (!quiet) {
        const auto& stats = outcome.summary.at("statistics");
        std::cout << "mse    min " << stats["mse"]["min"] << "  median " << stats["mse"]["median"] << "  max "
                  << stats["mse"]["max"] << '\n'
                  << "fitness min " << stats["fitness"]["min"] << "  median " << stats["fitness"]["median"]
                  << "  max " << stats["fitness"]["max"] << '\n';
        if (outcome.baseline) {
            std::cout << "windowed baseline fitness " << outcome.baseline->fitness << '\n';
        }
        std::cout << "summary written to " << (out.value_or(config.run.output_dir) / "summary.json").string() << '\n';
    }
    return 0;
}

int report(const std::vector<fs::path>& summaries, const std::optional<fs::path>& csv_dir) {
    const auto rep = compare_report_files(summaries);
    std::cout << render_text(rep);
    if (csv_dir) {
        fs::create_directories(*csv_dir);
        for (std::size_t i = 0; i < rep.tables.size(); ++i) {
            const auto file = *csv_dir / ("table_" + std::to_string(i + 1) + ".csv");
            std::ofstream out(file, std::ios::binary);
            out << render_csv(rep.tables[i]);
            if (!out) {
                throw Error("cannot write '" + file.string() + "'");
            }
        }
    }
    return 0;
}

int eval(const fs::path& coeffs_path, std::size_t grid_points, const std::optional<fs::path>& response_path) {
    const auto tf = load_coefficients(coeffs_path);
    const FrequencyGrid grid(grid_points);
    const auto response = evaluate_response(tf, grid);
    if (response_path) {
        std::ofstream out(*response_path, std::ios::binary);
        write_response_csv(out, grid, response, nullptr);
        if (!out) {
            throw Error("cannot write '" + response_path->string() + "'");
        }
    }
    nlohmann::json doc{{"stable", is_stable(tf)}, {"grid_points", grid_points}};
    try {
        const auto m = measure_metrics(tf);
        doc["metrics"] = {{"passband_ripple_db", m.passband_ripple_db},
                          {"stopband_attenuation_db", m.stopband_attenuation_db},
                          {"cutoff_freq", m.cutoff_freq},
                          {"transition_bandwidth", m.transition_bandwidth}};
    } catch (const NoCutoffFound& e) {
        doc["metrics"] = nullptr;
        doc["metrics_error"] = e.what();
    }
    doc["dc_gain"] = response.values.front();
    doc["nyquist_gain"] = response.values.back();
    std::cout << doc.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shuffled frog-leaping design of FIR/IIR digital filters"};
    app.require_subcommand(1);

    auto* design_cmd = app.add_subcommand("design", "Run an experiment described by a JSON config");
    fs::path config_path;
    std::optional<fs::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    bool quiet = false;
    design_cmd->add_option("config", config_path, "Experiment configuration")->required()->check(CLI::ExistingFile);
    design_cmd->add_option("--out", out_dir, "Output directory (overrides run.output_dir)");
    design_cmd->add_option("--seed", seed, "Base seed (repetition k uses seed + k)");
    design_cmd->add_option("--reps", reps, "Number of repetitions")->check(CLI::PositiveNumber);
    design_cmd->add_flag("--quiet", quiet, "Only report errors");

    auto* report_cmd = app.add_subcommand("report", "Tabulate one or more summary.json files");
    std::vector<fs::path> summaries;
    std::optional<fs::path> csv_dir;
    report_cmd->add_option("summaries", summaries, "summary.json files")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--csv-dir", csv_dir, "Also write each table as table_<k>.csv here");

    auto* eval_cmd = app.add_subcommand("eval", "Magnitude response and metrics of a coefficients file");
    fs::path coeffs_path;
    std::size_t grid_points = kDefaultGridPoints;
    std::optional<fs::path> response_path;
    eval_cmd->add_option("coeffs", coeffs_path, "Coefficients JSON {\"b\": [...], \"a\": [...]}")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--grid", grid_points, "Response grid points")->check(CLI::Range(2, 1 << 24));
    eval_cmd->add_option("--response", response_path, "Write the response CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*design_cmd) {
            return design(config_path, out_dir, seed, reps, quiet);
        }
        if (*report_cmd) {
            return report(summaries, csv_dir);
        }
        return eval(coeffs_path, grid_points, response_path);
    } catch (const std::exception& e) {
        std::cerr << "frogfilter: error: " << e.what() << '\n';
        return 1;
    }
}
