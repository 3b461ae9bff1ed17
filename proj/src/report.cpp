#include "frogfilter/report.hpp"

#include "frogfilter/errors.hpp"
#include "frogfilter/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace frogfilter {

using nlohmann::json;

namespace {

constexpr const char* kQuoted = " (quoted)";
constexpr const char* kMissing = "-";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt(const json& v) {
    if (v.is_number()) {
        return fmt(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_null()) {
        return kMissing;
    }
    return v.dump();
}

// Median over runs of a numeric field reached through `path` (skipping nulls).
std::optional<double> run_median(const json& summary, const std::vector<std::string>& path) {
    std::vector<double> values;
    for (const auto& run : summary.at("runs")) {
        const json* node = &run;
        for (const auto& key : path) {
            if (!node->is_object() || !node->contains(key)) {
                node = nullptr;
                break;
            }
            node = &node->at(key);
        }
        if (node != nullptr && node->is_number()) {
            values.push_back(node->get<double>());
        }
    }
    if (values.empty()) {
        return std::nullopt;
    }
    return describe(values).median;
}

void check_schema(std::span<const json> summaries) {
    if (summaries.empty()) {
        throw SchemaMismatch("report needs at least one summary");
    }
    std::optional<std::string> mode;
    for (const auto& s : summaries) {
        if (!s.is_object() || s.value("schema", "") != kSummarySchema || !s.contains("runs") ||
            !s.at("runs").is_array() || s.at("runs").empty() || !s.contains("problem")) {
            throw SchemaMismatch("not a " + std::string(kSummarySchema) + " document");
        }
        const auto m = s.at("problem").at("target").at("mode").get<std::string>();
        if (mode && *mode != m) {
            throw SchemaMismatch("cannot compare " + *mode + " and " + m + " experiments in one table");
        }
        mode = m;
    }
}

std::string order_label(const json& problem) {
    const auto num = problem.at("numerator_order").get<std::size_t>();
    const auto den = problem.at("denominator_order").get<std::size_t>();
    if (problem.at("filter") == "FIR" || den == num) {
        return std::to_string(num);
    }
    return std::to_string(num) + "/" + std::to_string(den);
}

Table experiment_table(std::span<const json> summaries) {
    Table t;
    t.title = "Experiments";
    t.headers = {"experiment", "filter", "order", "runs", "fitness (median)", "mse (median)", "mse (min)",
                 "passband ripple dB", "stopband attenuation dB", "cutoff", "transition bw"};

    const bool any_baseline = std::any_of(summaries.begin(), summaries.end(),
                                          [](const json& s) { return s.contains("baseline") && !s["baseline"].is_null(); });
    if (any_baseline) {
        for (const char* h : {"windowed fitness", "windowed cutoff", "common floor dB", "transition bw @floor",
                              "windowed transition bw @floor"}) {
            t.headers.emplace_back(h);
        }
    }
    // Scalar quotes become extra columns, in first-seen order.
    std::vector<std::string> quoted;
    for (const auto& s : summaries) {
        const auto quotes = s.value("quoted", json::object());
        for (const auto& [key, value] : quotes.items()) {
            if (!value.is_array() && std::find(quoted.begin(), quoted.end(), key) == quoted.end()) {
                quoted.push_back(key);
            }
        }
    }
    for (const auto& q : quoted) {
        t.headers.push_back(q + kQuoted);
    }

    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(kMissing); };
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        const auto& stats = s.at("statistics");
        std::vector<std::string> row;
        const auto label = s.value("label", "");
        row.push_back(label.empty() ? "#" + std::to_string(i + 1) : label);
        row.push_back(s.at("problem").at("filter").get<std::string>());
        row.push_back(order_label(s.at("problem")));
        row.push_back(std::to_string(s.at("runs").size()));
        row.push_back(fmt(stats.at("fitness").at("median")));
        row.push_back(fmt(stats.at("mse").at("median")));
        row.push_back(fmt(stats.at("mse").at("min")));
        row.push_back(opt(run_median(s, {"metrics", "passband_ripple_db"})));
        row.push_back(opt(run_median(s, {"metrics", "stopband_attenuation_db"})));
        row.push_back(opt(run_median(s, {"metrics", "cutoff_freq"})));
        row.push_back(opt(run_median(s, {"metrics", "transition_bandwidth"})));
        if (any_baseline) {
            const json& b = s.contains("baseline") ? s["baseline"] : json();
            if (b.is_null()) {
                row.insert(row.end(), 5, kMissing);
            } else {
                row.push_back(fmt(b.at("fitness")));
                row.push_back(b.at("metrics").is_null() ? kMissing : fmt(b["metrics"].at("cutoff_freq")));
                row.push_back(opt(run_median(s, {"transition_vs_baseline", "floor_db"})));
                row.push_back(opt(run_median(s, {"transition_vs_baseline", "sfla"})));
                row.push_back(opt(run_median(s, {"transition_vs_baseline", "baseline"})));
            }
        }
        const auto quotes = s.value("quoted", json::object());
        for (const auto& q : quoted) {
            row.push_back(quotes.contains(q) && !quotes[q].is_array() ? fmt(quotes[q]) : kMissing);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::optional<Table> per_run_table(const json& summary, std::size_t index) {
    std::vector<std::pair<std::string, json>> arrays;
    const auto quotes = summary.value("quoted", json::object());
    for (const auto& [key, value] : quotes.items()) {
        if (value.is_array()) {
            arrays.emplace_back(key, value);
        }
    }
    if (arrays.empty()) {
        return std::nullopt;
    }
    Table t;
    const auto label = summary.value("label", "");
    t.title = "Per-run MSE: " + (label.empty() ? "#" + std::to_string(index + 1) : label);
    t.headers = {"execution", "SFLA mse"};
    for (const auto& [key, value] : arrays) {
        t.headers.push_back(key + kQuoted);
    }
    const auto& runs = summary.at("runs");
    std::size_t rows = runs.size();
    for (const auto& [key, value] : arrays) {
        rows = std::max(rows, value.size());
    }
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<std::string> row{std::to_string(r + 1), r < runs.size() ? fmt(runs[r].at("mse")) : kMissing};
        for (const auto& [key, value] : arrays) {
            row.push_back(r < value.size() ? fmt(value[r]) : kMissing);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace

Report compare_report(std::span<const json> summaries) {
    check_schema(summaries);
    Report report;
    try {
        report.tables.push_back(experiment_table(summaries));
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            if (auto t = per_run_table(summaries[i], i)) {
                report.tables.push_back(std::move(*t));
            }
        }
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("summary is missing expected fields: ") + e.what());
    }
    return report;
}

Report compare_report_files(std::span<const std::filesystem::path> paths) {
    std::vector<json> docs;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) {
            throw MissingFile("cannot open '" + path.string() + "'");
        }
        try {
            docs.push_back(json::parse(in));
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    return compare_report(docs);
}

std::string render_text(const Report& report) {
    std::ostringstream out;
    for (std::size_t n = 0; n < report.tables.size(); ++n) {
        const auto& t = report.tables[n];
        std::vector<std::size_t> width(t.headers.size());
        for (std::size_t c = 0; c < t.headers.size(); ++c) {
            width[c] = t.headers[c].size();
            for (const auto& row : t.rows) {
                width[c] = std::max(width[c], row[c].size());
            }
        }
        if (n > 0) {
            out << '\n';
        }
        out << t.title << '\n';
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                out << (c == 0 ? "" : "  ") << cells[c] << std::string(width[c] - cells[c].size(), ' ');
            }
            out << '\n';
        };
        line(t.headers);
        std::size_t total = 0;
        for (const auto w : width) {
            total += w + 2;
        }
        out << std::string(total - 2, '-') << '\n';
        for (const auto& row : t.rows) {
            line(row);
        }
    }
    return out.str();
}

std::string render_csv(const Table& table) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (const char c : s) {
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return q + "\"";
    };
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c == 0 ? "" : ",") << cell(cells[c]);
        }
        out << '\n';
    };
    line(table.headers);
    for (const auto& row : table.rows) {
        line(row);
    }
    return out.str();
}

} // namespace frogfilter
