#pragma once

#include "frogfilter/baselines.hpp"
#include "frogfilter/engine.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frogfilter {

inline constexpr std::size_t kDefaultGridPoints = 128;
inline constexpr std::string_view kSeedEnvVar = "FROGFILTER_SEED";

struct ProblemConfig {
    FilterKind kind = FilterKind::Fir;
    std::size_t numerator_order = 0;
    std::size_t denominator_order = 0;
    std::size_t grid_points = kDefaultGridPoints;
    DesignTarget target = DesignTarget::reference(TransferFunction{});
};

/// Windowed FIR baseline designed alongside an ideal low-pass run.
struct BaselineConfig {
    WindowKind window = WindowKind::Blackman;
    double cutoff = 0.25;
};

struct RunConfig {
    std::size_t repetitions = 1;
    std::optional<std::uint64_t> base_seed;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir = "frogfilter-out";
    std::string label;
    std::optional<BaselineConfig> baseline;
    /// Reference numbers carried through to reports, marked as quoted.
    nlohmann::json quoted = nlohmann::json::object();
};

struct ExperimentConfig {
    ProblemConfig problem;
    EngineParams engine;
    RunConfig run;
    /// The configuration document as parsed, for hashing.
    nlohmann::json document;
};

/// Parses a configuration document. Relative file references resolve against base_dir.
/// Throws ParseError, UnknownKey, MissingFile or ConfigError.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads a coefficients file `{ "b": [...], "a": [...] }`.
[[nodiscard]] TransferFunction load_coefficients(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json coefficients_json(const TransferFunction& tf);

[[nodiscard]] Problem build_problem(const ProblemConfig& config);

/// Seeds for every repetition. Priority: explicit override, config seed list, config base
/// seed, FROGFILTER_SEED, then 1. Base seeds expand to base + k.
[[nodiscard]] std::vector<std::uint64_t> resolve_seeds(const RunConfig& run,
                                                       std::optional<std::uint64_t> override_seed = std::nullopt);

/// FNV-1a 64 of the canonical document dump, as a hex string.
[[nodiscard]] std::string config_hash(const nlohmann::json& document);

} // namespace frogfilter
