#include "frogfilter/objective.hpp"

#include "frogfilter/errors.hpp"

#include <cmath>

namespace frogfilter {

namespace {

void check_lengths(std::size_t obtained, std::size_t desired, std::size_t mask) {
    if (obtained != desired || obtained != mask) {
        throw LengthMismatch("response lengths differ: obtained " + std::to_string(obtained) + ", desired " +
                             std::to_string(desired) + ", mask " + std::to_string(mask));
    }
}

} // namespace

CostPair band_mse(std::span<const double> obtained, std::span<const double> desired, const BandMask& mask) {
    check_lengths(obtained.size(), desired.size(), mask.size());
    double pass_sum = 0.0;
    double stop_sum = 0.0;
    std::size_t pass_n = 0;
    std::size_t stop_n = 0;
    for (std::size_t k = 0; k < obtained.size(); ++k) {
        const double e = desired[k] - obtained[k];
        switch (mask.labels[k]) {
        case Band::Pass: pass_sum += e * e; ++pass_n; break;
        case Band::Stop: stop_sum += e * e; ++stop_n; break;
        case Band::Transition: break;
        }
    }
    if (pass_n == 0) {
        throw EmptyBand("band mask has no Pass point");
    }
    CostPair c;
    c.j_pass = pass_sum / static_cast<double>(pass_n);
    c.j_stop = stop_n == 0 ? c.j_pass : stop_sum / static_cast<double>(stop_n);
    return c;
}

double pooled_mse(std::span<const double> obtained, std::span<const double> desired, const BandMask& mask) {
    check_lengths(obtained.size(), desired.size(), mask.size());
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < obtained.size(); ++k) {
        if (mask.labels[k] == Band::Transition) {
            continue;
        }
        const double e = desired[k] - obtained[k];
        sum += e * e;
        ++n;
    }
    if (n == 0) {
        throw EmptyBand("band mask has no Pass or Stop point");
    }
    return sum / static_cast<double>(n);
}

double fitness(double j) noexcept { return 1.0 / (1.0 + j); }

FitnessPoint fitness_point(const CostPair& costs) noexcept {
    return {fitness(costs.j_stop), fitness(costs.j_pass)};
}

double module(const FitnessPoint& p) noexcept { return std::hypot(p.f_stop, p.f_pass); }

double scalar_report_fitness(const MagnitudeResponse& obtained, const MagnitudeResponse& desired,
                             const BandMask& mask) {
    return fitness(pooled_mse(obtained.values, desired.values, mask));
}

} // namespace frogfilter
