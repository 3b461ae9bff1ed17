#include "frogfilter/experiment.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace frogfilter {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view band_name(Band band) {
    switch (band) {
    case Band::Pass: return "pass";
    case Band::Stop: return "stop";
    case Band::Transition: return "transition";
    }
    return "";
}

std::string_view band_kind_name(BandKind kind) {
    switch (kind) {
    case BandKind::LowPass: return "lowpass";
    case BandKind::HighPass: return "highpass";
    case BandKind::BandPass: return "bandpass";
    case BandKind::BandStop: return "bandstop";
    }
    return "";
}

bool metrics_apply(const DesignTarget& target) {
    return target.is_reference() || target.bands().kind == BandKind::LowPass;
}

std::optional<FilterMetrics> try_metrics(const TransferFunction& tf, const FrequencyGrid& dense) {
    try {
        return measure_metrics(tf, dense);
    } catch (const NoCutoffFound&) {
        return std::nullopt;
    }
}

json metrics_json(const std::optional<FilterMetrics>& m) {
    if (!m) {
        return nullptr;
    }
    return json{{"passband_ripple_db", m->passband_ripple_db},
                {"stopband_attenuation_db", m->stopband_attenuation_db},
                {"cutoff_freq", m->cutoff_freq},
                {"transition_bandwidth", m->transition_bandwidth}};
}

json stats_json(const Stats& s) { return json{{"min", s.min}, {"median", s.median}, {"max", s.max}}; }

json problem_json(const ProblemConfig& p) {
    json j{{"filter", p.kind == FilterKind::Fir ? "FIR" : "IIR"},
           {"numerator_order", p.numerator_order},
           {"denominator_order", p.kind == FilterKind::Fir ? 0 : p.denominator_order},
           {"grid_points", p.grid_points}};
    if (p.target.is_ideal()) {
        json edges = json::array();
        for (const auto& e : p.target.bands().edges) {
            edges.push_back({e.pass, e.stop});
        }
        j["target"] = json{{"mode", "ideal"}, {"band", band_kind_name(p.target.bands().kind)}, {"edges", edges}};
    } else {
        j["target"] = json{{"mode", "reference"}, {"reference", coefficients_json(p.target.reference_filter())}};
    }
    return j;
}

json engine_json(const EngineParams& e) {
    return json{{"max_iterations", e.max_iterations},
                {"leaps_per_memeplex", e.leaps_per_memeplex},
                {"num_memeplexes", e.num_memeplexes},
                {"population", e.population},
                {"c_max", e.c_max},
                {"c_min", e.c_min},
                {"coeff_bound", e.coeff_bound},
                {"stagnation_window", e.stagnation_window},
                {"mutation_sigma", e.mutation_sigma},
                {"stagnation_tolerance", e.stagnation_tolerance},
                {"per_coordinate_rand", e.per_coordinate_rand},
                {"report_diversity_leader", e.report_diversity_leader}};
}

json build_summary(const ExperimentConfig& config, const ExperimentOutcome& outcome) {
    json runs = json::array();
    std::vector<double> mses;
    std::vector<double> fits;
    std::vector<double> bws;
    for (std::size_t k = 0; k < outcome.runs.size(); ++k) {
        const auto& r = outcome.runs[k];
        json jr{{"seed", r.seed},
                {"directory", "run_" + std::to_string(k + 1)},
                {"mse", r.mse},
                {"j_pass", r.result.best.costs.j_pass},
                {"j_stop", r.result.best.costs.j_stop},
                {"fitness", r.fitness},
                {"module", r.result.best.mod_value},
                {"evaluations", r.result.evaluations},
                {"iterations", r.result.history.size()},
                {"stable", r.stable},
                {"metrics", metrics_json(r.metrics)}};
        if (r.transition) {
            jr["transition_vs_baseline"] = json{{"floor_db", r.transition->floor_db},
                                                {"sfla", r.transition->first},
                                                {"baseline", r.transition->second}};
        }
        runs.push_back(std::move(jr));
        mses.push_back(r.mse);
        fits.push_back(r.fitness);
        if (r.metrics) {
            bws.push_back(r.metrics->transition_bandwidth);
        }
    }

    json summary{{"schema", kSummarySchema},
                 {"artifact_version", kArtifactVersion},
                 {"generator", kRngName},
                 {"config_hash", config_hash(config.document)},
                 {"label", config.run.label},
                 {"problem", problem_json(config.problem)},
                 {"engine", engine_json(config.engine)},
                 {"runs", runs}};
    json stats{{"mse", stats_json(describe(mses))}, {"fitness", stats_json(describe(fits))}};
    if (!bws.empty()) {
        stats["transition_bandwidth"] = stats_json(describe(bws));
    }
    summary["statistics"] = stats;

    if (outcome.baseline) {
        const auto& b = *outcome.baseline;
        summary["baseline"] = json{{"window", to_string(b.config.window)},
                                   {"cutoff", b.config.cutoff},
                                   {"coefficients", coefficients_json(b.filter)},
                                   {"mse", b.mse},
                                   {"fitness", b.fitness},
                                   {"metrics", metrics_json(b.metrics)}};
    } else {
        summary["baseline"] = nullptr;
    }
    summary["quoted"] = config.run.quoted;
    return summary;
}

// Files and directories created by one run_experiment call, removed again on failure.
class ArtifactTracker {
public:
    void create_directories(const std::filesystem::path& dir) {
        std::vector<std::filesystem::path> missing;
        for (auto p = dir; !p.empty() && !std::filesystem::exists(p); p = p.parent_path()) {
            missing.push_back(p);
            if (p == p.parent_path()) {
                break;
            }
        }
        std::filesystem::create_directories(dir);
        for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
            created_.push_back(*it);
        }
    }

    std::ofstream open(const std::filesystem::path& file) {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + file.string() + "'");
        }
        created_.push_back(file);
        return out;
    }

    void rollback() noexcept {
        std::error_code ec;
        for (auto it = created_.rbegin(); it != created_.rend(); ++it) {
            std::filesystem::remove(*it, ec);
        }
        created_.clear();
    }

private:
    std::vector<std::filesystem::path> created_;
};

void finish(std::ofstream& out, const std::filesystem::path& file) {
    out.flush();
    if (!out) {
        throw Error("failed writing '" + file.string() + "'");
    }
}

} // namespace

Stats describe(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("describe: empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return {values.front(), median, values.back()};
}

void write_response_csv(std::ostream& out, const FrequencyGrid& grid, const MagnitudeResponse& magnitude,
                        const DesiredResponse* desired) {
    out << "omega,magnitude,desired,band\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out << format_double(grid[k]) << ',' << format_double(magnitude[k]) << ',';
        if (desired != nullptr) {
            out << format_double(desired->magnitude[k]) << ',' << band_name(desired->mask.labels[k]);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void write_history_csv(std::ostream& out, std::span<const HistoryEntry> history) {
    out << "iteration,best_module,best_fitness,mean_module\n";
    for (std::size_t t = 0; t < history.size(); ++t) {
        out << t << ',' << format_double(history[t].best_module) << ',' << format_double(history[t].best_fitness)
            << ',' << format_double(history[t].mean_module) << '\n';
    }
}

ExperimentOutcome evaluate_experiment(const ExperimentConfig& config, std::span<const std::uint64_t> seeds) {
    const Problem problem = build_problem(config.problem);
    config.engine.validate();

    std::vector<std::future<RunResult>> pending;
    pending.reserve(seeds.size());
    for (const auto seed : seeds) {
        EngineParams params = config.engine;
        params.rng_seed = seed;
        pending.push_back(std::async(std::launch::async, [&problem, params] { return run(problem, params); }));
    }

    const FrequencyGrid dense(kMeasurementGridPoints);
    const bool with_metrics = metrics_apply(config.problem.target);
    const auto& desired = problem.desired();

    ExperimentOutcome outcome;
    if (config.run.baseline) {
        BaselineRecord b;
        b.config = *config.run.baseline;
        b.filter = windowed_fir(config.problem.numerator_order, b.config.cutoff, b.config.window);
        const auto response = evaluate_response(b.filter, problem.grid());
        b.mse = pooled_mse(response.values, desired.magnitude.values, desired.mask);
        b.fitness = fitness(b.mse);
        b.metrics = try_metrics(b.filter, dense);
        outcome.baseline = std::move(b);
    }

    for (std::size_t k = 0; k < seeds.size(); ++k) {
        RunRecord r;
        r.seed = seeds[k];
        r.result = pending[k].get();
        r.filter = problem.decode(r.result.best.position);
        r.mse = r.result.best.pooled;
        r.fitness = fitness(r.mse);
        r.stable = is_stable(r.filter);
        if (with_metrics) {
            r.metrics = try_metrics(r.filter, dense);
        }
        if (r.metrics && outcome.baseline && outcome.baseline->metrics) {
            r.transition = compare_transition(r.filter, outcome.baseline->filter, dense);
        }
        outcome.runs.push_back(std::move(r));
    }
    outcome.summary = build_summary(config, outcome);
    return outcome;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    RunConfig run = config.run;
    if (options.repetitions) {
        if (*options.repetitions < 1) {
            throw ConfigError("repetitions must be at least 1");
        }
        run.repetitions = *options.repetitions;
        if (!run.seeds.empty() && run.seeds.size() != run.repetitions) {
            run.seeds.clear();
        }
    }
    const auto seeds = resolve_seeds(run, options.seed);
    const auto out_dir = options.output_dir.value_or(run.output_dir);

    if (options.log != nullptr) {
        *options.log << "running " << seeds.size() << " repetition(s)\n";
    }
    ExperimentOutcome outcome = evaluate_experiment(config, seeds);
    const Problem problem = build_problem(config.problem);

    ArtifactTracker tracker;
    try {
        tracker.create_directories(out_dir);
        for (std::size_t k = 0; k < outcome.runs.size(); ++k) {
            const auto& r = outcome.runs[k];
            const auto dir = out_dir / ("run_" + std::to_string(k + 1));
            tracker.create_directories(dir);

            auto coeffs = tracker.open(dir / "coefficients.json");
            coeffs << coefficients_json(r.filter).dump(2) << '\n';
            finish(coeffs, dir / "coefficients.json");

            auto response = tracker.open(dir / "response.csv");
            write_response_csv(response, problem.grid(), evaluate_response(r.filter, problem.grid()),
                               &problem.desired());
            finish(response, dir / "response.csv");

            auto history = tracker.open(dir / "history.csv");
            write_history_csv(history, r.result.history);
            finish(history, dir / "history.csv");

            if (options.log != nullptr) {
                *options.log << "run " << (k + 1) << " seed " << r.seed << ": mse " << format_double(r.mse)
                             << ", fitness " << format_double(r.fitness) << '\n';
            }
        }
        auto summary = tracker.open(out_dir / "summary.json");
        summary << outcome.summary.dump(2) << '\n';
        finish(summary, out_dir / "summary.json");
    } catch (...) {
        tracker.rollback();
        throw;
    }
    return outcome;
}

} // namespace frogfilter
