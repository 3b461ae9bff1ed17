#pragma once

#include "frogfilter/baselines.hpp"
#include "frogfilter/config.hpp"
#include "frogfilter/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace frogfilter {

inline constexpr std::string_view kArtifactVersion = "frogfilter 1.0.0";
inline constexpr std::string_view kSummarySchema = "frogfilter-summary/1";

struct RunRecord {
    std::uint64_t seed = 0;
    RunResult result;
    TransferFunction filter;
    double mse = 0.0;
    double fitness = 0.0;
    bool stable = true;
    std::optional<FilterMetrics> metrics;
    /// Transition bandwidths of this run and the baseline at their common floor.
    std::optional<TransitionComparison> transition;
};

struct BaselineRecord {
    BaselineConfig config;
    TransferFunction filter;
    double mse = 0.0;
    double fitness = 0.0;
    std::optional<FilterMetrics> metrics;
};

struct ExperimentOutcome {
    std::vector<RunRecord> runs;
    std::optional<BaselineRecord> baseline;
    nlohmann::json summary;
};

/// Runs one engine per seed (concurrently) and assembles the summary. Writes nothing.
[[nodiscard]] ExperimentOutcome evaluate_experiment(const ExperimentConfig& config,
                                                    std::span<const std::uint64_t> seeds);

struct RunOptions {
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> repetitions;
    std::ostream* log = nullptr;
};

/**
 * Runs the configured repetitions and writes, under the output directory:
 *   run_<k>/coefficients.json, run_<k>/response.csv, run_<k>/history.csv, summary.json
 * If anything fails, files created so far are removed before the error propagates.
 */
ExperimentOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Full round-trip precision (17 significant digits, '.' decimal).
[[nodiscard]] std::string format_double(double value);

void write_response_csv(std::ostream& out, const FrequencyGrid& grid, const MagnitudeResponse& magnitude,
                        const DesiredResponse* desired);
void write_history_csv(std::ostream& out, std::span<const HistoryEntry> history);

struct Stats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

/// Throws std::invalid_argument on an empty range.
[[nodiscard]] Stats describe(std::vector<double> values);

} // namespace frogfilter
