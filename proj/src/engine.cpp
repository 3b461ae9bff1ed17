#include "frogfilter/engine.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace frogfilter {

// ---------------------------------------------------------------------------------------------
// Problem

Problem::Problem(FilterKind kind, std::size_t numerator_order, std::size_t denominator_order, FrequencyGrid grid,
                 DesignTarget target)
    : kind_(kind),
      num_order_(numerator_order),
      den_order_(kind == FilterKind::Iir ? denominator_order : 0),
      grid_(std::move(grid)),
      target_(std::move(target)),
      desired_(desired_response(target_, grid_)) {
    if (num_order_ == 0 && kind_ == FilterKind::Fir) {
        throw ConfigError("FIR order must be at least 1");
    }
    if (kind_ == FilterKind::Iir && (num_order_ == 0 || den_order_ == 0)) {
        throw ConfigError("IIR numerator and denominator orders must be at least 1");
    }
}

std::vector<double> Problem::denominator(std::span<const double> position) const {
    std::vector<double> a(den_order_ + 1);
    a[0] = 1.0;
    std::copy_n(position.begin(), den_order_, a.begin() + 1);
    return a;
}

TransferFunction Problem::decode(std::span<const double> position) const {
    if (position.size() != dimension()) {
        throw LengthMismatch("position has " + std::to_string(position.size()) + " coordinates, expected " +
                             std::to_string(dimension()));
    }
    TransferFunction tf;
    tf.a = denominator(position);
    tf.b.assign(position.begin() + static_cast<std::ptrdiff_t>(den_order_), position.end());
    return tf;
}

std::vector<double> Problem::encode(const TransferFunction& tf) const {
    tf.validate();
    if (tf.b.size() != num_order_ + 1 || tf.a.size() != den_order_ + 1) {
        throw LengthMismatch("transfer function orders do not match the problem");
    }
    std::vector<double> position(tf.a.begin() + 1, tf.a.end());
    position.insert(position.end(), tf.b.begin(), tf.b.end());
    return position;
}

bool Problem::is_feasible(std::span<const double> position) const {
    if (!is_iir()) {
        return true;
    }
    return is_stable(denominator(position));
}

MagnitudeResponse Problem::response(std::span<const double> position) const {
    const auto a = denominator(position);
    MagnitudeResponse r;
    r.values.resize(grid_.size());
    evaluate_magnitude(position.subspan(den_order_), a, grid_.phasors(), r.values);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Parameters and context

void EngineParams::validate() const {
    if (population == 0 || num_memeplexes == 0) {
        throw ConfigError("population and num_memeplexes must be positive");
    }
    if (population % num_memeplexes != 0) {
        throw ConfigError("population (" + std::to_string(population) + ") must be a multiple of num_memeplexes (" +
                          std::to_string(num_memeplexes) + ")");
    }
    if (max_iterations == 0 || leaps_per_memeplex == 0 || stagnation_window == 0) {
        throw ConfigError("max_iterations, leaps_per_memeplex and stagnation_window must be positive");
    }
    if (!(c_min > 0.0) || c_min > c_max) {
        throw ConfigError("leap scale must satisfy c_max >= c_min > 0");
    }
    if (!(coeff_bound > 0.0) || !std::isfinite(coeff_bound)) {
        throw ConfigError("coeff_bound must be positive and finite");
    }
    if (!(mutation_sigma >= 0.0) || !std::isfinite(mutation_sigma)) {
        throw ConfigError("mutation_sigma must be non-negative and finite");
    }
    if (!(stagnation_tolerance >= 0.0) || !std::isfinite(stagnation_tolerance)) {
        throw ConfigError("stagnation_tolerance must be non-negative and finite");
    }
}

SearchContext::SearchContext(const Problem& problem, const EngineParams& params)
    : problem_(&problem), params_(&params), rng_(params.rng_seed) {}

Frog SearchContext::make_frog(std::vector<double> position) {
    Frog frog;
    const auto response = problem_->response(position);
    const auto& desired = problem_->desired();
    frog.costs = band_mse(response.values, desired.magnitude.values, desired.mask);
    frog.fit = fitness_point(frog.costs);
    frog.mod_value = module(frog.fit);
    frog.pooled = pooled_mse(response.values, desired.magnitude.values, desired.mask);
    frog.position = std::move(position);
    ++evaluations_;
    return frog;
}

namespace {

// Uniform draws tried before falling back to pole contraction.
constexpr int kResampleAttempts = 32;

} // namespace

std::vector<double> SearchContext::random_position() {
    const double bound = params_->coeff_bound;
    std::uniform_real_distribution<double> coord(-bound, bound);
    std::vector<double> position(problem_->dimension());
    for (int attempt = 0; attempt < kResampleAttempts; ++attempt) {
        for (auto& x : position) {
            x = coord(rng_);
        }
        if (problem_->is_feasible(position)) {
            return position;
        }
    }
    return stabilize(std::move(position), *problem_);
}

std::vector<double> stabilize(std::vector<double> position, const Problem& problem) {
    if (!problem.is_iir() || problem.is_feasible(position)) {
        return position;
    }
    const std::size_t n = problem.denominator_order();
    while (!problem.is_feasible(position)) {
        double scale = 1.0;
        bool finite = true;
        for (std::size_t k = 0; k < n; ++k) {
            scale *= kContractionRatio;
            position[k] *= scale;
            finite = finite && std::isfinite(position[k]);
        }
        if (!finite) {
            std::fill_n(position.begin(), n, 0.0);
        }
    }
    return position;
}

Population init_population(SearchContext& ctx) {
    Population population;
    population.reserve(ctx.params().population);
    for (std::size_t i = 0; i < ctx.params().population; ++i) {
        population.push_back(ctx.random_frog());
    }
    return population;
}

// ---------------------------------------------------------------------------------------------
// Leaping

double c_schedule(std::size_t t, const EngineParams& params) {
    if (params.max_iterations <= 1) {
        return params.c_max;
    }
    const double frac = static_cast<double>(t) / static_cast<double>(params.max_iterations - 1);
    return params.c_max - (params.c_max - params.c_min) * frac;
}

std::vector<double> leap_toward(std::span<const double> worst, std::span<const double> leader, double step,
                                double bound) {
    if (worst.size() != leader.size()) {
        throw LengthMismatch("leap between positions of different length");
    }
    std::vector<double> out(worst.size());
    for (std::size_t i = 0; i < worst.size(); ++i) {
        out[i] = std::clamp(worst[i] + step * (leader[i] - worst[i]), -bound, bound);
    }
    return out;
}

std::vector<double> leap(std::span<const double> worst, std::span<const double> leader, double c,
                         SearchContext& ctx) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double bound = ctx.params().coeff_bound;
    if (!ctx.params().per_coordinate_rand) {
        return leap_toward(worst, leader, c * unit(ctx.rng()), bound);
    }
    if (worst.size() != leader.size()) {
        throw LengthMismatch("leap between positions of different length");
    }
    std::vector<double> out(worst.size());
    for (std::size_t i = 0; i < worst.size(); ++i) {
        out[i] = std::clamp(worst[i] + c * unit(ctx.rng()) * (leader[i] - worst[i]), -bound, bound);
    }
    return out;
}

std::size_t worst_of(std::span<const std::size_t> members, std::span<const Frog> population) {
    std::size_t worst = members.front();
    for (const std::size_t i : members) {
        const Frog& f = population[i];
        const Frog& w = population[worst];
        if (f.mod_value < w.mod_value ||
            (f.mod_value == w.mod_value &&
             (f.costs.j_pass > w.costs.j_pass || (f.costs.j_pass == w.costs.j_pass && i < worst)))) {
            worst = i;
        }
    }
    return worst;
}

std::size_t best_of(std::span<const std::size_t> members, std::span<const Frog> population) {
    std::size_t best = members.front();
    for (const std::size_t i : members) {
        const double m = population[i].mod_value;
        if (m > population[best].mod_value || (m == population[best].mod_value && i < best)) {
            best = i;
        }
    }
    return best;
}

std::size_t incumbent_of(std::span<const Frog> population) {
    std::vector<std::size_t> all(population.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return best_of(all, population);
}

LeapStats evolve_memeplex(const Memeplex& memeplex, Population& population, std::size_t leader, double c,
                          SearchContext& ctx) {
    LeapStats stats;
    const Problem& problem = ctx.problem();
    std::vector<std::size_t> movable;
    movable.reserve(memeplex.members.size());

    // Feasible candidate that strictly raises the module, or nothing.
    auto try_leap = [&](std::size_t w, std::size_t target) -> bool {
        auto candidate = leap(population[w].position, population[target].position, c, ctx);
        if (!problem.is_feasible(candidate)) {
            return false;
        }
        Frog moved = ctx.make_frog(std::move(candidate));
        if (moved.mod_value > population[w].mod_value) {
            population[w] = std::move(moved);
            return true;
        }
        return false;
    };

    for (std::size_t step = 0; step < ctx.params().leaps_per_memeplex; ++step) {
        const std::size_t incumbent = incumbent_of(population);
        movable.clear();
        for (const std::size_t i : memeplex.members) {
            if (i != leader && i != incumbent) {
                movable.push_back(i);
            }
        }
        if (movable.empty()) {
            ++stats.skipped;
            continue;
        }
        const std::size_t w = worst_of(movable, population);
        const std::size_t b = best_of(memeplex.members, population);

        if (try_leap(w, b)) {
            ++stats.local_accepted;
        } else if (try_leap(w, leader)) {
            ++stats.global_accepted;
        } else {
            population[w] = ctx.random_frog();
            ++stats.replaced;
        }
    }
    return stats;
}

// ---------------------------------------------------------------------------------------------
// Diversity control

double shannon_entropy(std::span<const double> distances) {
    const double total = std::accumulate(distances.begin(), distances.end(), 0.0);
    if (!(total > 0.0)) {
        return 0.0;
    }
    double h = 0.0;
    for (const double d : distances) {
        if (d > 0.0) {
            const double p = d / total;
            h -= p * std::log2(p);
        }
    }
    return std::max(h, 0.0);
}

namespace {

double distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double distance_entropy(std::size_t index, std::span<const Frog> population) {
    std::vector<double> d;
    d.reserve(population.size() - 1);
    for (std::size_t j = 0; j < population.size(); ++j) {
        if (j != index) {
            d.push_back(distance(population[index].position, population[j].position));
        }
    }
    return shannon_entropy(d);
}

} // namespace

std::size_t diversity_select_best(std::span<const Frog> population) {
    if (population.size() == 1) {
        return 0;
    }
    const std::size_t first = incumbent_of(population);
    std::size_t second = first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (i != first && population[i].mod_value > population[second].mod_value) {
            second = i;
        }
    }
    const double h_first = distance_entropy(first, population);
    const double h_second = distance_entropy(second, population);
    if (std::abs(h_first - h_second) < 1e-12) {
        // first already wins on module, or on index when modules tie
        return first;
    }
    return h_second < h_first ? second : first;
}

bool stagnation_mutation(Population& population, std::span<const Memeplex> memeplexes, StagnationState& state,
                         std::size_t leader, SearchContext& ctx) {
    const std::size_t incumbent = incumbent_of(population);
    const double best = population[incumbent].mod_value;
    if (best > state.best_module + ctx.params().stagnation_tolerance) {
        state.best_module = best;
        state.iterations_without_improvement = 0;
        return false;
    }
    if (++state.iterations_without_improvement < ctx.params().stagnation_window) {
        return false;
    }
    state.iterations_without_improvement = 0;

    const double sigma = ctx.params().mutation_sigma;
    if (sigma == 0.0) {
        return true;
    }
    std::normal_distribution<double> noise(0.0, sigma);
    const double bound = ctx.params().coeff_bound;
    for (const auto& mp : memeplexes) {
        const std::size_t b = best_of(mp.members, population);
        if (b == incumbent || b == leader) {
            continue;
        }
        auto position = population[b].position;
        for (auto& x : position) {
            x = std::clamp(x + noise(ctx.rng()), -bound, bound);
        }
        population[b] = ctx.make_frog(stabilize(std::move(position), ctx.problem()));
    }
    return true;
}

// ---------------------------------------------------------------------------------------------
// Main loop

RunResult run(const Problem& problem, const EngineParams& params, const IterationObserver& observer) {
    params.validate();
    SearchContext ctx(problem, params);
    Population population = init_population(ctx);
    std::size_t leader = diversity_select_best(population);
    StagnationState stagnation{population[incumbent_of(population)].mod_value, 0};

    RunResult result;
    result.seed = params.rng_seed;
    result.history.reserve(params.max_iterations);

    for (std::size_t t = 0; t < params.max_iterations; ++t) {
        const auto memeplexes = cluster_memeplexes(population, params.num_memeplexes);
        const double c = c_schedule(t, params);
        for (const auto& mp : memeplexes) {
            evolve_memeplex(mp, population, leader, c, ctx);
        }
        leader = diversity_select_best(population);
        stagnation_mutation(population, memeplexes, stagnation, leader, ctx);

        const Frog& best = population[incumbent_of(population)];
        double mean = 0.0;
        for (const auto& f : population) {
            mean += f.mod_value;
        }
        mean /= static_cast<double>(population.size());
        result.history.push_back({best.mod_value, best.scalar_fitness(), mean});
        if (observer) {
            observer(t, population);
        }
    }

    result.best = params.report_diversity_leader ? population[diversity_select_best(population)]
                                                 : population[incumbent_of(population)];
    result.evaluations = ctx.evaluations();
    return result;
}

} // namespace frogfilter
