// Acceptance suite. Runs the shipped experiment configurations end to end and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include "frogfilter/baselines.hpp"
#include "frogfilter/config.hpp"
#include "frogfilter/engine.hpp"
#include "frogfilter/experiment.hpp"
#include "frogfilter/objective.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace frogfilter;

namespace {

const fs::path kConfigDir = FROGFILTER_CONFIG_DIR;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << x;
    return s.str();
}

std::string join(const std::vector<double>& xs, int precision = 4) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i == 0 ? "" : " ") + fmt(xs[i], precision);
    }
    return out;
}

double median(std::vector<double> xs) { return describe(std::move(xs)).median; }

bool non_increasing(const std::vector<double>& xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::less<>()) == xs.end();
}

bool non_decreasing(const std::vector<double>& xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::greater<>()) == xs.end();
}

// Experiment outcomes are shared between criteria; each configuration runs once.
const ExperimentOutcome& outcome_of(const std::string& name) {
    static std::map<std::string, ExperimentOutcome> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const auto config = load_config(kConfigDir / (name + ".json"));
        const auto seeds = resolve_seeds(config.run);
        it = cache.emplace(name, evaluate_experiment(config, seeds)).first;
    }
    return it->second;
}

Verdict reference_match() {
    const auto config = load_config(kConfigDir / "reference_match.json");
    if (config.run.repetitions != 5 || resolve_seeds(config.run) != std::vector<std::uint64_t>{1, 2, 3, 4, 5}) {
        return {false, "reference_match.json must run seeds 1..5"};
    }
    const auto& out = outcome_of("reference_match");
    std::vector<double> mse;
    for (const auto& r : out.runs) {
        mse.push_back(r.mse);
    }
    const auto s = describe(mse);
    const bool pass = s.median <= 1.5e-3 && s.min <= 8e-4 && s.max <= 5e-3;
    return {pass, "mse per seed [" + join(mse, 3) + "], median " + fmt(s.median, 3) + " (<= 1.5e-3), best " +
                      fmt(s.min, 3) + " (<= 8e-4), worst " + fmt(s.max, 3) + " (<= 5e-3)"};
}

Verdict fir_fitness_vs_windowed() {
    bool pass = true;
    std::string detail;
    for (const int order : {10, 15, 20}) {
        const auto& out = outcome_of("fir_lowpass_" + std::to_string(order));
        if (!out.baseline) {
            return {false, "no windowed baseline at order " + std::to_string(order)};
        }
        const auto wins = std::count_if(out.runs.begin(), out.runs.end(),
                                        [&](const RunRecord& r) { return r.fitness > out.baseline->fitness; });
        pass = pass && out.runs.size() == 5 && wins >= 4;
        std::vector<double> f;
        for (const auto& r : out.runs) {
            f.push_back(r.fitness);
        }
        detail += (detail.empty() ? "" : "; ") + std::string("order ") + std::to_string(order) + ": SFLA wins " +
                  std::to_string(wins) + "/" + std::to_string(out.runs.size()) + " (median " + fmt(median(f)) +
                  " vs windowed " + fmt(out.baseline->fitness) + ")";
    }
    return {pass, detail};
}

Verdict fir_transition() {
    std::vector<double> sfla_column;
    std::vector<double> windowed_column;
    long wins20 = 0;
    for (const int order : {5, 10, 15, 20}) {
        const auto& out = outcome_of("fir_lowpass_" + std::to_string(order));
        std::vector<double> sfla;
        std::vector<double> windowed;
        for (const auto& r : out.runs) {
            if (!r.transition) {
                return {false, "missing transition comparison at order " + std::to_string(order)};
            }
            sfla.push_back(r.transition->first);
            windowed.push_back(r.transition->second);
            if (order == 20 && r.transition->first < r.transition->second) {
                ++wins20;
            }
        }
        sfla_column.push_back(median(sfla));
        windowed_column.push_back(median(windowed));
    }
    const bool pass = wins20 >= 4 && non_increasing(sfla_column) && non_increasing(windowed_column);
    return {pass, "order 20 SFLA narrower in " + std::to_string(wins20) + "/5; orders 5..20 SFLA [" +
                      join(sfla_column, 3) + "], windowed [" + join(windowed_column, 3) + "]"};
}

Verdict iir_order_trend() {
    std::vector<double> medians;
    for (const int order : {5, 10, 15, 20, 25}) {
        const auto& out = outcome_of("iir_lowpass_" + std::to_string(order));
        std::vector<double> f;
        for (const auto& r : out.runs) {
            f.push_back(r.fitness);
        }
        medians.push_back(median(f));
    }
    const bool pass = non_decreasing(medians) && medians.back() >= 0.99;
    return {pass, "median fitness at orders 5..25 [" + join(medians) + "], non-decreasing " +
                      (non_decreasing(medians) ? "yes" : "no") + ", order 25 " + fmt(medians.back()) +
                      " (>= 0.99)"};
}

// (a) stability of every emitted IIR filter and of the Schur-Cohn test against polynomial roots
// (b) best module non-decreasing over 20 seeds
// (c) fitness and entropy ranges under fuzzing
// (d) band_mse against the double-loop oracle
// (e) byte-identical artifacts for a fixed seed
Verdict invariants() {
    std::vector<std::string> failures;

    std::size_t emitted = 0;
    for (const auto* name : {"reference_match", "iir_lowpass_5", "iir_lowpass_10", "iir_lowpass_15", "iir_lowpass_20",
                             "iir_lowpass_25"}) {
        for (const auto& r : outcome_of(name).runs) {
            ++emitted;
            if (!r.stable || !is_stable(r.filter) || oracle::max_root_magnitude(r.filter.a) >= 1.0) {
                failures.push_back(std::string("unstable filter from ") + name);
            }
        }
    }
    std::mt19937_64 rng(31337);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_denominator(rng, 6, trial % 2 == 1);
        const double rmax = oracle::max_root_magnitude(a);
        if (std::abs(rmax - 1.0) < 1e-6) {
            continue;
        }
        ++checked;
        if (is_stable(a) != (rmax < 1.0)) {
            failures.push_back("stability disagrees with roots, max |root| " + fmt(rmax, 8));
        }
    }
    if (checked < 95) {
        failures.push_back("too few unambiguous denominators");
    }

    const auto fir = load_config(kConfigDir / "fir_lowpass_10.json");
    const auto problem = build_problem(fir.problem);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto params = fir.engine;
        params.rng_seed = seed;
        const auto result = run(problem, params);
        for (std::size_t t = 1; t < result.history.size(); ++t) {
            if (result.history[t].best_module < result.history[t - 1].best_module) {
                failures.push_back("best module fell at seed " + std::to_string(seed));
                break;
            }
        }
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> cost(0.01);
    for (int i = 0; i < 10000; ++i) {
        const double f = fitness(i % 100 == 0 ? 0.0 : cost(rng));
        if (!(f > 0.0 && f <= 1.0)) {
            failures.push_back("fitness out of (0,1]");
            break;
        }
    }
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> d(1 + i % 40);
        for (auto& x : d) {
            x = unit(rng) < 0.2 ? 0.0 : unit(rng);
        }
        const double h = shannon_entropy(d);
        if (!(h >= 0.0 && h <= std::log2(static_cast<double>(d.size())) + 1e-12)) {
            failures.push_back("entropy out of [0, log2 n]");
            break;
        }
    }

    std::uniform_int_distribution<int> length(2, 300);
    std::uniform_int_distribution<int> label(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(length(rng));
        std::vector<double> o(n);
        std::vector<double> d(n);
        BandMask mask{std::vector<Band>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            o[i] = 2.0 * unit(rng);
            d[i] = 2.0 * unit(rng);
            mask.labels[i] = static_cast<Band>(label(rng));
        }
        mask.labels[0] = Band::Pass;
        const auto expected = oracle::band_mse(o, d, mask);
        const auto got = band_mse(o, d, mask);
        if (std::abs(got.j_pass - expected.j_pass) > 1e-12 || std::abs(got.j_stop - expected.j_stop) > 1e-12) {
            failures.push_back("band_mse differs from oracle");
            break;
        }
    }

    const auto root = fs::temp_directory_path() / ("frogfilter-acceptance-" + std::to_string(::getpid()));
    auto reference = load_config(kConfigDir / "reference_match.json");
    reference.engine.max_iterations = 100;
    for (const char* dir : {"a", "b"}) {
        RunOptions options;
        options.output_dir = root / dir;
        options.repetitions = 2;
        (void)run_experiment(reference, options);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto twin = root / "b" / fs::relative(entry.path(), root / "a");
        std::ifstream x(entry.path(), std::ios::binary);
        std::ifstream y(twin, std::ios::binary);
        const std::string bx{std::istreambuf_iterator<char>(x), {}};
        const std::string by{std::istreambuf_iterator<char>(y), {}};
        ++compared;
        if (bx != by || !y) {
            failures.push_back("artifact differs: " + fs::relative(entry.path(), root / "a").string());
        }
    }
    fs::remove_all(root);
    if (compared != 7) {
        failures.push_back("expected 7 artifacts, found " + std::to_string(compared));
    }

    std::string detail = std::to_string(emitted) + " emitted IIR filters, " + std::to_string(checked) +
                         " denominators, 20 seeds, 50 band fixtures, " + std::to_string(compared) + " artifacts";
    for (const auto& f : failures) {
        detail += "; " + f;
    }
    return {failures.empty(), detail};
}

Verdict reference_dc_gain() {
    const auto tf = load_coefficients(kConfigDir / "reference_filter.json");
    const double gain = evaluate_response(tf, FrequencyGrid(kDefaultGridPoints))[0];
    double sb = 0.0;
    double sa = 0.0;
    for (const double x : tf.b) {
        sb += x;
    }
    for (const double x : tf.a) {
        sa += x;
    }
    const bool pass = std::abs(gain - 1.0) <= 1e-3 && std::abs(gain - sb / sa) <= 1e-12;
    return {pass, "|H(1)| = " + fmt(gain, 8) + " (1 +- 1e-3), coefficient-sum ratio " + fmt(sb / sa, 8)};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 reference match", reference_match},
        {"2 FIR fitness beats windowed design", fir_fitness_vs_windowed},
        {"3 FIR transition bandwidth", fir_transition},
        {"4 IIR fitness rises with order", iir_order_trend},
        {"5 invariant suite", invariants},
        {"6 reference DC gain", reference_dc_gain},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << fmt(elapsed.count(), 3)
                  << " s]" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
