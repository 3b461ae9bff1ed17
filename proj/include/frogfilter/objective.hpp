#pragma once

#include "frogfilter/filter_core.hpp"

namespace frogfilter {

/// Mean squared magnitude error, split per band.
struct CostPair {
    double j_pass = 0.0;
    double j_stop = 0.0;
};

/// A frog's location on the fitness plane: x is stopband fitness, y is passband fitness.
struct FitnessPoint {
    double f_stop = 1.0;
    double f_pass = 1.0;
};

/// j_pass and j_stop average over their own band only; Transition points are ignored.
/// Without Stop points (reference matching) j_stop mirrors j_pass.
[[nodiscard]] CostPair band_mse(std::span<const double> obtained, std::span<const double> desired,
                                const BandMask& mask);
[[nodiscard]] inline CostPair band_mse(const MagnitudeResponse& obtained, const MagnitudeResponse& desired,
                                       const BandMask& mask) {
    return band_mse(obtained.values, desired.values, mask);
}

/// MSE over Pass and Stop points pooled together.
[[nodiscard]] double pooled_mse(std::span<const double> obtained, std::span<const double> desired,
                                const BandMask& mask);

/// 1 / (1 + j)
[[nodiscard]] double fitness(double j) noexcept;

[[nodiscard]] FitnessPoint fitness_point(const CostPair& costs) noexcept;

/// Euclidean distance of the fitness point from the origin; larger is fitter.
[[nodiscard]] double module(const FitnessPoint& p) noexcept;

/// Single-number fitness used in reports: fitness of the pooled MSE.
[[nodiscard]] double scalar_report_fitness(const MagnitudeResponse& obtained, const MagnitudeResponse& desired,
                                           const BandMask& mask);

} // namespace frogfilter
