#pragma once

#include "frogfilter/filter_core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace frogfilter {

enum class WindowKind { Blackman, Rectangular };

/// Parses "blackman" / "rectangular". Throws ConfigError.
[[nodiscard]] WindowKind parse_window_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(WindowKind kind) noexcept;

/// Window of `length` taps. Blackman is 0.42 - 0.5 cos + 0.08 cos evaluated at the interior
/// points of a (length + 2)-point frame, so the outermost taps are never zero.
[[nodiscard]] std::vector<double> make_window(WindowKind kind, std::size_t length);

/**
 * Windowed-sinc low-pass design: the ideal impulse response
 *   h[k] = cutoff * sinc(cutoff * (k - order/2)),  k = 0..order
 * (cutoff as a fraction of Nyquist) multiplied by the window, then scaled to unit DC gain
 * (sum of taps = 1). Throws InvalidCutoff unless
 * cutoff is in (0,1), ConfigError for order 0.
 */
[[nodiscard]] TransferFunction windowed_fir(std::size_t order, double cutoff, WindowKind window);

inline constexpr std::size_t kMeasurementGridPoints = 1024;

struct FilterMetrics {
    double passband_ripple_db = 0.0;
    double stopband_attenuation_db = 0.0;
    double cutoff_freq = 0.0;
    double transition_bandwidth = 0.0;
};

/// Lowest level reported by the dB metrics, in dB below unity.
inline constexpr double kDbFloor = 300.0;

[[nodiscard]] std::vector<double> magnitude_db(const TransferFunction& tf, const FrequencyGrid& grid);

/**
 * Low-pass metrics on a dense grid (at least kMeasurementGridPoints points):
 *   cutoff        first -1 dB crossing, linearly interpolated in dB
 *   ripple        largest |dB| deviation from 0 dB up to the cutoff
 *   attenuation   -(peak dB level after the first local minimum past the cutoff)
 *   transition    distance from the cutoff to the first point at or below -attenuation
 * Throws NoCutoffFound when the response never crosses -1 dB.
 */
[[nodiscard]] FilterMetrics measure_metrics(const TransferFunction& tf, const FrequencyGrid& grid);
[[nodiscard]] FilterMetrics measure_metrics(const TransferFunction& tf);

/// Width from the -1 dB point to the first frequency at or below -floor_db, or nothing if the
/// floor is never reached. Throws NoCutoffFound.
[[nodiscard]] std::optional<double> transition_bandwidth_at(const TransferFunction& tf, double floor_db,
                                                            const FrequencyGrid& grid);

/// Transition bandwidths of two filters measured against the shallower of their two
/// stopband attenuations.
struct TransitionComparison {
    double floor_db = 0.0;
    double first = 0.0;
    double second = 0.0;
};

[[nodiscard]] TransitionComparison compare_transition(const TransferFunction& first, const TransferFunction& second,
                                                      const FrequencyGrid& grid);

} // namespace frogfilter
