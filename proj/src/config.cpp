#include "frogfilter/config.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <sstream>

namespace frogfilter {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MissingFile("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(std::string_view text, const std::string& what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line/column pair.
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t line_start = 0;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                line_start = i + 1;
            }
        }
        const std::size_t line_end = std::min(text.find('\n', line_start), text.size());
        std::ostringstream msg;
        msg << what << ": line " << line << ", column " << (offset - line_start + 1) << ": " << e.what() << "\n  "
            << text.substr(line_start, line_end - line_start);
        throw ParseError(msg.str());
    }
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError("'" + where + "' must be a JSON object");
    }
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw UnknownKey(key);
        }
    }
}

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

template <typename T>
void read_optional(const json& j, const std::string& key, T& out) {
    if (j.contains(key)) {
        out = get_as<T>(j, key);
    }
}

std::size_t get_count(const json& j, const std::string& key) {
    if (!j.contains(key)) {
        throw ConfigError("missing required key '" + key + "'");
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("'" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

void read_count(const json& j, const std::string& key, std::size_t& out) {
    if (j.contains(key)) {
        out = get_count(j, key);
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

BandKind parse_band(const std::string& name) {
    const auto n = lower(name);
    if (n == "lowpass") return BandKind::LowPass;
    if (n == "highpass") return BandKind::HighPass;
    if (n == "bandpass") return BandKind::BandPass;
    if (n == "bandstop") return BandKind::BandStop;
    throw ConfigError("unknown band '" + name + "'");
}

TransferFunction coefficients_from_json(const json& j, const std::string& where) {
    require_object(j, where);
    check_keys(j, {"b", "a"});
    if (!j.contains("b")) {
        throw ConfigError(where + ": missing 'b'");
    }
    auto b = get_as<std::vector<double>>(j, "b");
    std::vector<double> a{1.0};
    read_optional(j, "a", a);
    try {
        return TransferFunction::make(std::move(b), std::move(a));
    } catch (const InvalidTransferFunction& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

DesignTarget parse_target(const json& j, const std::filesystem::path& base_dir) {
    require_object(j, "problem.target");
    if (!j.contains("mode")) {
        throw ConfigError("problem.target.mode is required");
    }
    const auto mode = lower(get_as<std::string>(j, "mode"));
    try {
        if (mode == "ideal") {
            check_keys(j, {"mode", "band", "edges"});
            const auto kind = parse_band(get_as<std::string>(j, "band"));
            std::vector<BandEdge> edges;
            for (const auto& pair : j.at("edges")) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw ConfigError("each edge must be a [pass, stop] pair");
                }
                edges.push_back({pair[0].get<double>(), pair[1].get<double>()});
            }
            return DesignTarget::ideal(kind, std::move(edges));
        }
        if (mode == "reference") {
            check_keys(j, {"mode", "coefficients_file", "b", "a"});
            if (j.contains("coefficients_file")) {
                if (j.contains("b") || j.contains("a")) {
                    throw ConfigError("give either coefficients_file or inline b/a, not both");
                }
                return DesignTarget::reference(load_coefficients(base_dir / get_as<std::string>(j, "coefficients_file")));
            }
            return DesignTarget::reference(coefficients_from_json(j, "problem.target"));
        }
    } catch (const InvalidTarget& e) {
        throw ConfigError(std::string("problem.target: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("problem.target: ") + e.what());
    }
    throw ConfigError("problem.target.mode must be 'ideal' or 'reference'");
}

ProblemConfig parse_problem(const json& j, const std::filesystem::path& base_dir) {
    require_object(j, "problem");
    check_keys(j, {"filter", "numerator_order", "denominator_order", "grid_points", "target"});
    ProblemConfig p;
    if (!j.contains("filter")) {
        throw ConfigError("problem.filter is required");
    }
    const auto kind = lower(get_as<std::string>(j, "filter"));
    if (kind == "fir") {
        p.kind = FilterKind::Fir;
    } else if (kind == "iir") {
        p.kind = FilterKind::Iir;
    } else {
        throw ConfigError("problem.filter must be FIR or IIR");
    }
    p.numerator_order = get_count(j, "numerator_order");
    read_count(j, "denominator_order", p.denominator_order);
    if (p.kind == FilterKind::Iir && !j.contains("denominator_order")) {
        p.denominator_order = p.numerator_order;
    }
    if (p.numerator_order < 1 || (p.kind == FilterKind::Iir && p.denominator_order < 1)) {
        throw ConfigError("filter orders must be at least 1");
    }
    read_count(j, "grid_points", p.grid_points);
    if (p.grid_points < 2) {
        throw ConfigError("grid_points must be at least 2");
    }
    if (!j.contains("target")) {
        throw ConfigError("problem.target is required");
    }
    p.target = parse_target(j.at("target"), base_dir);
    return p;
}

EngineParams parse_engine(const json& j) {
    require_object(j, "engine");
    check_keys(j, {"max_iterations", "leaps_per_memeplex", "num_memeplexes", "population", "c_max", "c_min",
                   "coeff_bound", "stagnation_window", "mutation_sigma", "stagnation_tolerance", "per_coordinate_rand",
                   "report_diversity_leader"});
    EngineParams e;
    read_count(j, "max_iterations", e.max_iterations);
    read_count(j, "leaps_per_memeplex", e.leaps_per_memeplex);
    read_count(j, "num_memeplexes", e.num_memeplexes);
    read_count(j, "population", e.population);
    read_optional(j, "c_max", e.c_max);
    read_optional(j, "c_min", e.c_min);
    read_optional(j, "coeff_bound", e.coeff_bound);
    read_count(j, "stagnation_window", e.stagnation_window);
    read_optional(j, "mutation_sigma", e.mutation_sigma);
    read_optional(j, "stagnation_tolerance", e.stagnation_tolerance);
    read_optional(j, "per_coordinate_rand", e.per_coordinate_rand);
    read_optional(j, "report_diversity_leader", e.report_diversity_leader);
    e.validate();
    return e;
}

RunConfig parse_run(const json& j) {
    require_object(j, "run");
    check_keys(j, {"repetitions", "base_seed", "seeds", "output_dir", "label", "baseline", "quoted"});
    RunConfig r;
    read_optional(j, "seeds", r.seeds);
    if (j.contains("repetitions")) {
        r.repetitions = get_count(j, "repetitions");
    } else if (!r.seeds.empty()) {
        r.repetitions = r.seeds.size();
    }
    if (r.repetitions < 1) {
        throw ConfigError("run.repetitions must be at least 1");
    }
    if (!r.seeds.empty() && r.seeds.size() != r.repetitions) {
        throw ConfigError("run.seeds must list exactly one seed per repetition");
    }
    if (j.contains("base_seed")) {
        r.base_seed = get_as<std::uint64_t>(j, "base_seed");
    }
    if (j.contains("output_dir")) {
        r.output_dir = get_as<std::string>(j, "output_dir");
    }
    read_optional(j, "label", r.label);
    if (j.contains("baseline")) {
        const auto& b = j.at("baseline");
        require_object(b, "run.baseline");
        check_keys(b, {"window", "cutoff"});
        BaselineConfig bc;
        if (b.contains("window")) {
            bc.window = parse_window_kind(get_as<std::string>(b, "window"));
        }
        read_optional(b, "cutoff", bc.cutoff);
        if (!(bc.cutoff > 0.0 && bc.cutoff < 1.0)) {
            throw ConfigError("run.baseline.cutoff must lie in (0, 1)");
        }
        r.baseline = bc;
    }
    if (j.contains("quoted")) {
        r.quoted = j.at("quoted");
        require_object(r.quoted, "run.quoted");
    }
    return r;
}

} // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    const json doc = parse_json(text, "configuration");
    require_object(doc, "configuration");
    check_keys(doc, {"problem", "engine", "run"});
    if (!doc.contains("problem")) {
        throw ConfigError("configuration needs a 'problem' block");
    }
    ExperimentConfig cfg;
    cfg.problem = parse_problem(doc.at("problem"), base_dir);
    cfg.engine = doc.contains("engine") ? parse_engine(doc.at("engine")) : EngineParams{};
    cfg.run = doc.contains("run") ? parse_run(doc.at("run")) : RunConfig{};
    if (cfg.run.baseline && (cfg.problem.kind != FilterKind::Fir || !cfg.problem.target.is_ideal() ||
                             cfg.problem.target.bands().kind != BandKind::LowPass)) {
        throw ConfigError("the windowed baseline applies to FIR low-pass designs only");
    }
    cfg.document = doc;
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    const auto text = read_file(path);
    return parse_config(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

TransferFunction load_coefficients(const std::filesystem::path& path) {
    const auto doc = parse_json(read_file(path), path.string());
    return coefficients_from_json(doc, path.string());
}

json coefficients_json(const TransferFunction& tf) {
    return json{{"b", tf.b}, {"a", tf.a}};
}

Problem build_problem(const ProblemConfig& config) {
    return Problem(config.kind, config.numerator_order, config.denominator_order, FrequencyGrid(config.grid_points),
                   config.target);
}

std::vector<std::uint64_t> resolve_seeds(const RunConfig& run, std::optional<std::uint64_t> override_seed) {
    std::vector<std::uint64_t> seeds;
    if (!override_seed && !run.seeds.empty()) {
        seeds = run.seeds;
        return seeds;
    }
    std::uint64_t base = 1;
    if (override_seed) {
        base = *override_seed;
    } else if (run.base_seed) {
        base = *run.base_seed;
    } else if (const char* env = std::getenv(std::string(kSeedEnvVar).c_str()); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            base = std::stoull(env, &used);
            if (used != std::string_view(env).size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ConfigError(std::string(kSeedEnvVar) + " is not an unsigned integer: " + env);
        }
    }
    seeds.reserve(run.repetitions);
    for (std::size_t k = 0; k < run.repetitions; ++k) {
        seeds.push_back(base + k);
    }
    return seeds;
}

std::string config_hash(const json& document) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : document.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

} // namespace frogfilter
