#pragma once

#include "frogfilter/filter_core.hpp"
#include "frogfilter/objective.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace frogfilter {

using Rng = std::mt19937_64;
inline constexpr std::string_view kRngName = "std::mt19937_64";

enum class FilterKind { Fir, Iir };

/**
 * What is being designed: filter structure, sampling grid and target.
 *
 * Positions are laid out as [a_1..a_n, b_0..b_m] for IIR (a_0 = 1 is implicit) and
 * [b_0..b_m] for FIR.
 */
class Problem {
public:
    /// denominator_order is ignored for FIR. Throws ConfigError on zero orders.
    Problem(FilterKind kind, std::size_t numerator_order, std::size_t denominator_order, FrequencyGrid grid,
            DesignTarget target);

    [[nodiscard]] FilterKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_iir() const noexcept { return kind_ == FilterKind::Iir; }
    [[nodiscard]] std::size_t numerator_order() const noexcept { return num_order_; }
    [[nodiscard]] std::size_t denominator_order() const noexcept { return den_order_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return den_order_ + num_order_ + 1; }

    [[nodiscard]] const FrequencyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const DesignTarget& target() const noexcept { return target_; }
    [[nodiscard]] const DesiredResponse& desired() const noexcept { return desired_; }

    [[nodiscard]] TransferFunction decode(std::span<const double> position) const;
    [[nodiscard]] std::vector<double> encode(const TransferFunction& tf) const;

    /// The denominator part of a position, with the implicit leading 1.
    [[nodiscard]] std::vector<double> denominator(std::span<const double> position) const;
    [[nodiscard]] bool is_feasible(std::span<const double> position) const;

    /// Magnitude response of a position on the problem grid.
    [[nodiscard]] MagnitudeResponse response(std::span<const double> position) const;

private:
    FilterKind kind_;
    std::size_t num_order_;
    std::size_t den_order_;
    FrequencyGrid grid_;
    DesignTarget target_;
    DesiredResponse desired_;
};

/// One candidate filter with objective values cached from its position.
struct Frog {
    std::vector<double> position;
    CostPair costs;
    FitnessPoint fit;
    double mod_value = 0.0;
    double pooled = 0.0; ///< pooled MSE, for reporting

    [[nodiscard]] double scalar_fitness() const noexcept { return fitness(pooled); }
};

using Population = std::vector<Frog>;

struct Memeplex {
    std::vector<std::size_t> members;
};

struct EngineParams {
    std::size_t max_iterations = 500;
    std::size_t leaps_per_memeplex = 8;
    std::size_t num_memeplexes = 5;
    std::size_t population = 40;
    double c_max = 5.0;
    double c_min = 0.1;
    double coeff_bound = 1.0;
    std::size_t stagnation_window = 50;
    double mutation_sigma = 0.01;
    /// Smallest rise of the best module that counts as progress for stagnation detection.
    double stagnation_tolerance = 1e-12;
    /// Draw an independent rand(0,1) for every coordinate instead of one per leap.
    bool per_coordinate_rand = false;
    /// Report the entropy-selected leader instead of the highest-module frog as the final answer.
    bool report_diversity_leader = false;
    std::uint64_t rng_seed = 1;

    /// Throws ConfigError.
    void validate() const;
};

struct HistoryEntry {
    double best_module = 0.0;
    double best_fitness = 0.0;
    double mean_module = 0.0;
};

struct RunResult {
    Frog best;
    std::vector<HistoryEntry> history;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    std::string rng_name{kRngName};
};

/// Mutable state owned by one optimization run.
class SearchContext {
public:
    SearchContext(const Problem& problem, const EngineParams& params);

    [[nodiscard]] const Problem& problem() const noexcept { return *problem_; }
    [[nodiscard]] const EngineParams& params() const noexcept { return *params_; }
    [[nodiscard]] Rng& rng() noexcept { return rng_; }
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

    /// Evaluates the objective at a feasible position; counts one evaluation.
    [[nodiscard]] Frog make_frog(std::vector<double> position);
    /// Uniform in the coefficient box, resampled then contracted until stable.
    [[nodiscard]] std::vector<double> random_position();
    [[nodiscard]] Frog random_frog() { return make_frog(random_position()); }

private:
    const Problem* problem_;
    const EngineParams* params_;
    Rng rng_;
    std::size_t evaluations_ = 0;
};

[[nodiscard]] Population init_population(SearchContext& ctx);

/// k-means on the (j_pass, j_stop) plane followed by a capacity-constrained assignment.
/// Throws ConfigError unless population.size() is a multiple of count.
[[nodiscard]] std::vector<Memeplex> cluster_memeplexes(std::span<const Frog> population, std::size_t count);

/// Linear decay from c_max at t = 0 to c_min at t = max_iterations - 1.
[[nodiscard]] double c_schedule(std::size_t t, const EngineParams& params);

/// worst + step * (leader - worst), clamped to [-bound, bound].
[[nodiscard]] std::vector<double> leap_toward(std::span<const double> worst, std::span<const double> leader,
                                              double step, double bound);
/// Same with step = C * rand(0,1) (one draw, or one per coordinate when configured).
[[nodiscard]] std::vector<double> leap(std::span<const double> worst, std::span<const double> leader, double c,
                                       SearchContext& ctx);

/// Pole-radius contraction a_k <- a_k * 0.95^k until the denominator is stable. FIR positions
/// come back unchanged.
[[nodiscard]] std::vector<double> stabilize(std::vector<double> position, const Problem& problem);

inline constexpr double kContractionRatio = 0.95;

struct LeapStats {
    std::size_t local_accepted = 0;
    std::size_t global_accepted = 0;
    std::size_t replaced = 0;
    std::size_t skipped = 0;
};

/// Index of the frog with the smallest module (ties: larger j_pass, then lower index).
[[nodiscard]] std::size_t worst_of(std::span<const std::size_t> members, std::span<const Frog> population);
/// Index of the frog with the largest module (ties: lower index).
[[nodiscard]] std::size_t best_of(std::span<const std::size_t> members, std::span<const Frog> population);
[[nodiscard]] std::size_t incumbent_of(std::span<const Frog> population);

/// Runs leaps_per_memeplex worst-frog improvement attempts: a leap toward the memeplex best,
/// then toward the leader, then replacement by a random frog. The leader and the current
/// highest-module frog are never moved.
LeapStats evolve_memeplex(const Memeplex& memeplex, Population& population, std::size_t leader, double c,
                          SearchContext& ctx);

/// -sum p log2 p over p_i = d_i / sum d; 0 for an all-zero vector.
[[nodiscard]] double shannon_entropy(std::span<const double> distances);

/// Of the two highest-module frogs, the one whose distance vector to the rest of the
/// population has the lower entropy.
[[nodiscard]] std::size_t diversity_select_best(std::span<const Frog> population);

struct StagnationState {
    double best_module = 0.0;
    std::size_t iterations_without_improvement = 0;
};

/// Updates the stagnation counter from the current population and, once it reaches the
/// window, perturbs every memeplex best except the protected frogs. Returns true if the
/// mutation fired.
bool stagnation_mutation(Population& population, std::span<const Memeplex> memeplexes, StagnationState& state,
                         std::size_t leader, SearchContext& ctx);

/// Called after every iteration with the iteration index and the current population.
using IterationObserver = std::function<void(std::size_t, std::span<const Frog>)>;

[[nodiscard]] RunResult run(const Problem& problem, const EngineParams& params,
                            const IterationObserver& observer = {});

} // namespace frogfilter
