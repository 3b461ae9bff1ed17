#pragma once

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace frogfilter {

struct Table {
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::vector<Table> tables;
};

/**
 * One row per summary (order, fitness, MSE, ripple metrics, transition bandwidth, baseline
 * columns when present, scalar quotes labelled "(quoted)"). A summary whose quotes hold
 * per-run arrays also gets a per-run table with the quoted columns next to its own MSEs.
 * Throws SchemaMismatch when summaries are not of the same schema and target mode.
 */
[[nodiscard]] Report compare_report(std::span<const nlohmann::json> summaries);
[[nodiscard]] Report compare_report_files(std::span<const std::filesystem::path> paths);

[[nodiscard]] std::string render_text(const Report& report);
[[nodiscard]] std::string render_csv(const Table& table);

} // namespace frogfilter
